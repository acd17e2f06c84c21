#pragma once

#include <array>

namespace cylspec {

// Bistable cubic reaction term f(u) = u(1-u)(u-a), 0 < a < 1, together with
// its derivatives and antiderivative F(u) = int_0^u f. The constructor
// enforces the bistability signs f'(0) < 0, f'(1) < 0, f'(a) > 0.
class Nonlinearity {
 public:
  static Nonlinearity cubic(double a);

  double operator()(double u) const;
  double deriv(double u) const;        // f'
  double deriv2(double u) const;       // f''
  double potential(double u) const;    // F
  double a() const { return a_; }
  // Rest states in increasing order: 0, a, 1.
  std::array<double, 3> roots() const { return {0.0, a_, 1.0}; }

 private:
  explicit Nonlinearity(double a);
  double a_ = 0.5;
};

Nonlinearity make_cubic(double a);

}  // namespace cylspec
