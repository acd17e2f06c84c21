#include "cylspec/nonlinearity.hpp"

#include "cylspec/error.hpp"

namespace cylspec {

Nonlinearity::Nonlinearity(double a) : a_(a) {
  if (!(a > 0.0 && a < 1.0))
    throw Error(ErrorKind::invalid_parameter, "cubic needs 0 < a < 1");
  // f'(0) = -a, f'(1) = a-1, f'(a) = a(1-a); the parameter range above makes
  // all three sign conditions strict.
}

Nonlinearity Nonlinearity::cubic(double a) { return Nonlinearity(a); }

double Nonlinearity::operator()(double u) const {
  return u * (1.0 - u) * (u - a_);
}

double Nonlinearity::deriv(double u) const {
  return -3.0 * u * u + 2.0 * (1.0 + a_) * u - a_;
}

double Nonlinearity::deriv2(double u) const {
  return -6.0 * u + 2.0 * (1.0 + a_);
}

double Nonlinearity::potential(double u) const {
  return u * u * (-0.25 * u * u + (1.0 + a_) * u / 3.0 - 0.5 * a_);
}

Nonlinearity make_cubic(double a) { return Nonlinearity::cubic(a); }

}  // namespace cylspec
