#pragma once

#include <vector>

#include "cylspec/nonlinearity.hpp"

namespace cylspec {

// Periodic orbit of w'' + f(w) = 0 with prescribed period L, sampled over one
// period. Built from the energy level E solving T(E) = L, where
// T(E) = sqrt(2) * int_{w-}^{w+} dw / sqrt(E - F(w)).
struct StandingWaveProfile {
  double period = 0.0;
  double energy = 0.0;
  double w_minus = 0.0;  // turning points, F(w±) = E
  double w_plus = 0.0;
  std::vector<double> x;       // sample abscissae, 0..period inclusive
  std::vector<double> w;       // profile values
  std::vector<double> dw;      // profile derivative values

  // Periodic cubic-Hermite evaluation at arbitrary x.
  double value(double xq) const;
  double deriv_value(double xq) const;
};

// Monotone traveling front of u'' + c u' + f(u) = 0 connecting the stable
// rest states of the cubic. Closed form: u(z) = (1 + exp(z/sqrt(2)))^{-1},
// c = sqrt(2) (1/2 - a); u decreases from u_- = 1 to u_+ = 0 and u(0) = 1/2.
struct FrontProfile {
  double a = 0.25;
  double speed = 0.0;
  double u_minus = 1.0;  // limit as z -> -inf
  double u_plus = 0.0;   // limit as z -> +inf
  std::vector<double> z;
  std::vector<double> u;
  std::vector<double> du;

  double value(double zq) const;        // closed form, any z
  double deriv_value(double zq) const;  // u' = -u(1-u)/sqrt(2)
};

// Smallest admissible period: T(E) -> 2*pi/sqrt(f'(a)) as the orbit shrinks
// onto the center.
double min_period(const Nonlinearity& f);

// Period function T(E); E must lie strictly between F(a) and min(F(0), F(1)).
double period_of_energy(const Nonlinearity& f, double energy);

// Solve T(E) = L by bisection (|T - L| <= tol), then integrate the orbit with
// fixed-step RK4 at step L/2048 starting from the left turning point.
StandingWaveProfile periodic_wave(const Nonlinearity& f, double L,
                                  double tol = 1e-10);

FrontProfile exact_front(double a, double z_min = -20.0, double z_max = 20.0,
                         double step = 0.05);

// Max-norm of w'' + f(w) over the sample grid, with w'' obtained by 6th-order
// differentiation of the stored derivative samples (periodic wrap).
double wave_ode_residual(const StandingWaveProfile& wave,
                         const Nonlinearity& f);

// Max-norm of u'' + c u' + f(u) over the sample grid using the closed-form
// derivative identities of the logistic front.
double front_ode_residual(const FrontProfile& front, const Nonlinearity& f);

}  // namespace cylspec
