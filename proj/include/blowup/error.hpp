#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blowup {

enum class Errc {
  NonpositiveRadius,
  BadDimension,
  NegativeInitialData,
  BoundaryNonzero,
  NotNonincreasing,
  GridTooCoarse,
  NonFiniteState,
  StepUnderflow,
  AtBlowup,
  SingularSystem,
  Inconclusive,
  NotModelCase,
  BadAlpha,
  NonpositiveArgument,
  AlphaOutOfValidity,
  RadiusOutOfRange,
  TimeAtOrPastT,
  NoBlowup,
  PoorFit,
  WindowEmpty,
  NoAdmissibleEpsilon,
  Config,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace blowup
