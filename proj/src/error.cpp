#include "cylspec/error.hpp"

namespace cylspec {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::no_periodic_orbit: return "no-periodic-orbit";
    case ErrorKind::bracket_failure: return "bracket-failure";
    case ErrorKind::grid_too_small: return "grid-too-small";
    case ErrorKind::grid_too_short: return "grid-too-short";
    case ErrorKind::convergence_failure: return "convergence-failure";
    case ErrorKind::weight_overflow: return "weight-overflow";
    case ErrorKind::not_hyperbolic: return "not-hyperbolic";
    case ErrorKind::not_right_of_essential: return "not-right-of-essential";
    case ErrorKind::invalid_window: return "invalid-window";
    case ErrorKind::hypothesis_failure: return "hypothesis-failure";
    case ErrorKind::config_error: return "config-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace cylspec
