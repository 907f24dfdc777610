#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levyspde {

/// Failure labels shared by every module. The CLI prints the label so
/// scripts can tell a configuration mistake from a numerical failure.
enum class ErrorCode {
  precondition,
  out_of_range,
  degenerate_symbol,
  divergence_detected,
  tolerance_not_met,
  inconclusive,
  symmetry_required,
  existence_required,
  insufficient_separations,
  step_too_coarse,
  numerical_failure,
  ringing_excess,
  no_convergence,
  config_invalid,
  io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace levyspde
