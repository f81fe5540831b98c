#include "vector_math.hpp"

#include <cmath>

namespace blowup::detail {

void exp_into(std::span<const double> in, std::span<double> out) {
  const double* x = in.data();
  double* y = out.data();
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

}  // namespace blowup::detail
