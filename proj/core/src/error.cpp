#include "levyspde/error.hpp"

namespace levyspde {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::degenerate_symbol: return "degenerate-symbol";
    case ErrorCode::divergence_detected: return "divergence-detected";
    case ErrorCode::tolerance_not_met: return "tolerance-not-met";
    case ErrorCode::inconclusive: return "inconclusive";
    case ErrorCode::symmetry_required: return "symmetry-required";
    case ErrorCode::existence_required: return "existence-required";
    case ErrorCode::insufficient_separations: return "insufficient-separations";
    case ErrorCode::step_too_coarse: return "step-too-coarse";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::ringing_excess: return "ringing-excess";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace levyspde
