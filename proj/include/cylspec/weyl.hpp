#pragma once

#include <span>
#include <vector>

#include "cylspec/numerics.hpp"
#include "cylspec/potential.hpp"
#include "cylspec/sturm.hpp"

namespace cylspec {

// Smooth bump psi(t) = exp(1 - 1/(1-(2t-1)^2)) supported on [0,1], with
// derivatives. Peak value 1 at t = 1/2.
double bump(double t);
double bump_d1(double t);
double bump_d2(double t);

struct BumpNorms {
  double psi = 0.0;    // L2 norm of the bump
  double dpsi = 0.0;   // of its first derivative
  double ddpsi = 0.0;  // of its second derivative
};
BumpNorms bump_norms();

// Quasi-mode phi_n(x,z) = phi(x) u_n(z), u_n(z) = n^{-1/2} e^{iaz}
// psi(z/n - n), supported on z in [n^2, n^2+n]. phi is a transverse
// eigenvector with eigenvalue mu, so phi_n is an approximate eigenfunction
// for lambda = mu - a^2 + i c a, with residual O(1/n).
struct WeylSequence {
  int index = 0;
  double a = 0.0;
  Complex lambda;
  std::vector<double> phi;  // transverse profile, unit norm
  std::vector<Complex> u;   // axial samples u_n(z) on the potential's grid
  double norm_u = 0.0;      // sqrt(hz)-weighted l2 norm; targets |psi|
  double residual = 0.0;    // ||(L - lambda) phi_n|| / ||phi_n||
  double bound = 0.0;       // sup|V-v+| + (|c+2ia| |psi'|/n + |psi''|/n^2)/|psi|
};

// Measures the quasi-mode against the assembled 2D operator on the glued
// potential. The z-grid must contain [n^2, n^2+n] with one-step margin.
WeylSequence weyl_sequence(int n, const SturmSpectrum& sp, int branch,
                           double a, const CylinderPotential& glued,
                           double speed);

struct WeylDecay {
  std::vector<int> index;
  std::vector<double> residual;
  std::vector<double> bound;
  LineFit fit;  // log residual vs log n; slope targets -1
};

// Residual decay study for limits v± (constant in z). Builds, per n, the
// glued potential on z in [0, n^2+n+1] with step hz and measures the
// quasi-mode of the chosen transverse branch.
WeylDecay weyl_residual_decay(std::span<const double> v_plus,
                              std::span<const double> v_minus, double x_length,
                              Bc bc_x, double speed, int branch, double a,
                              std::span<const int> ns, double hz);

}  // namespace cylspec
