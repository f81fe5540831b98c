#include "blowup/tridiagonal.hpp"

#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

TridiagonalSystem::TridiagonalSystem(std::vector<double> lower, std::vector<double> diag,
                                     std::vector<double> upper)
    : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
  if (diag_.empty() || lower_.size() != diag_.size() || upper_.size() != diag_.size())
    throw Error(Errc::Config, "tridiagonal bands must have equal nonzero length");
}

std::vector<double> TridiagonalSystem::solve(std::span<const double> rhs) const {
  const std::size_t n = diag_.size();
  if (rhs.size() != n) throw Error(Errc::Config, "right-hand side length mismatch");

  std::vector<double> c_prime(n);
  std::vector<double> x(n);

  // Forward sweep
  double pivot = diag_[0];
  if (std::abs(pivot) < 1e-300) throw Error(Errc::SingularSystem, "zero pivot in row 0");
  c_prime[0] = upper_[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag_[i] - lower_[i] * c_prime[i - 1];
    if (std::abs(pivot) < 1e-300 || !std::isfinite(pivot))
      throw Error(Errc::SingularSystem, "zero pivot in row " + std::to_string(i));
    c_prime[i] = upper_[i] / pivot;
    x[i] = (rhs[i] - lower_[i] * x[i - 1]) / pivot;
  }

  // Back substitution
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
  return x;
}

}  // namespace blowup
