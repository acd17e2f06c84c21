#pragma once

#include <stdexcept>
#include <string>

namespace cylspec {

// Failure classes surfaced by the library. The CLI maps these to exit codes:
// parameter/precondition problems -> 2, iterative failures -> 3,
// hypothesis-check failure -> 4.
enum class ErrorKind {
  invalid_parameter,
  no_periodic_orbit,
  bracket_failure,
  grid_too_small,
  grid_too_short,
  convergence_failure,
  weight_overflow,
  not_hyperbolic,
  not_right_of_essential,
  invalid_window,
  hypothesis_failure,
  config_error,
  io_error,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cylspec
