#pragma once

#include <span>

namespace blowup::detail {

/// out[i] = exp(in[i]). Built with vectorized libm; inputs must be finite.
void exp_into(std::span<const double> in, std::span<double> out);

}  // namespace blowup::detail
