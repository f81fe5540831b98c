#pragma once

#include <span>
#include <vector>

namespace blowup {

/// Tridiagonal system solved by the Thomas algorithm. Row i reads
/// lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]; lower[0] and
/// upper[size-1] are ignored.
class TridiagonalSystem {
 public:
  TridiagonalSystem(std::vector<double> lower, std::vector<double> diag,
                    std::vector<double> upper);

  std::size_t size() const noexcept { return diag_.size(); }

  /// Throws Errc::SingularSystem on a vanishing pivot.
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> lower_;
  std::vector<double> diag_;
  std::vector<double> upper_;
};

}  // namespace blowup
