#include "blowup/error.hpp"

namespace blowup {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonpositiveRadius: return "NonpositiveRadius";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NegativeInitialData: return "NegativeInitialData";
    case Errc::BoundaryNonzero: return "BoundaryNonzero";
    case Errc::NotNonincreasing: return "NotNonincreasing";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::AtBlowup: return "AtBlowup";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::Inconclusive: return "Inconclusive";
    case Errc::NotModelCase: return "NotModelCase";
    case Errc::BadAlpha: return "BadAlpha";
    case Errc::NonpositiveArgument: return "NonpositiveArgument";
    case Errc::AlphaOutOfValidity: return "AlphaOutOfValidity";
    case Errc::RadiusOutOfRange: return "RadiusOutOfRange";
    case Errc::TimeAtOrPastT: return "TimeAtOrPastT";
    case Errc::NoBlowup: return "NoBlowup";
    case Errc::PoorFit: return "PoorFit";
    case Errc::WindowEmpty: return "WindowEmpty";
    case Errc::NoAdmissibleEpsilon: return "NoAdmissibleEpsilon";
    case Errc::Config: return "Config";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace blowup
