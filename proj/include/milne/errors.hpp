#ifndef MILNE_ERRORS_HPP
#define MILNE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace milne {

enum class ErrorCode {
  config_invalid = 1,
  energy_out_of_range,
  no_minimum,
  degenerate_turning_points,
  non_finite_input,
  overflow,
  inconsistent_wronskian,
  eigenvalue_degenerate,
  negative_quadratic_form,
  phase_unwrap_mismatch,
  reconstruction_mismatch,
  inverted_mismatch,
  band_undefined,
  arccos_domain,
  derivative_vanishes,
  bracket_not_found,
  out_of_range,
  reality_violated,
  internal
};

const char* to_string(ErrorCode code);

/// Exception carrying a stable error code for the C boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace milne

#endif
