#pragma once

#include <array>
#include <span>
#include <vector>

#include "cylspec/nonlinearity.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/sturm.hpp"

namespace cylspec {

// First-order limit system Y' = A Y obtained from the transverse Galerkin
// modes: A = [[0, I], [T, 0]] with T = diag(lambda0 + c^2/4 - mu_j),
// stored dense row-major with dimension 2n.
struct LimitSystem {
  int n = 0;
  double speed = 0.0;
  Complex lambda0;
  std::vector<double> mu;
  std::vector<Complex> a;  // (2n)x(2n) row-major

  int dim() const { return 2 * n; }
};

LimitSystem limit_matrices(std::span<const double> mu, Complex lambda0,
                           double speed);
// Convenience overload: keep the n largest transverse eigenvalues.
LimitSystem limit_matrices(const SturmSpectrum& sp, Complex lambda0,
                           double speed, int n);

// Principal square roots +/- sqrt(gamma_j^2 + i beta) for each mode.
std::vector<std::array<Complex, 2>> sqrt_spectrum(Complex lambda0,
                                                  double speed,
                                                  std::span<const double> mu);

// Diagonalized realization of the limit system: A = W^{-1} diag(-S, S) W
// with S = diag(sqrt(gamma_j^2 + i beta)), W = (1/sqrt(2)) [[S, -I], [S, I]],
// spectral projections P_s = W^{-1} diag(I, 0) W, P_u = I - P_s, and decaying
// semigroups e^{-S z} on both invariant ranges.
struct BiSemigroupRealization {
  int n = 0;
  double speed = 0.0;
  Complex lambda0;
  std::vector<double> gamma_sq;  // Re(lambda0) + c^2/4 - mu_j
  double beta = 0.0;             // Im(lambda0)
  std::vector<Complex> s;        // diagonal of S
  std::vector<Complex> w;        // (2n)x(2n) row-major
  std::vector<Complex> w_inv;
  std::vector<Complex> p_s;
  std::vector<Complex> p_u;
  double nu = 0.0;     // min_j Re s_j, exponential rate
  double alpha = 0.0;  // min_j gamma_j^2

  int dim() const { return 2 * n; }
};

BiSemigroupRealization build_bisemigroup(std::span<const double> mu,
                                         Complex lambda0, double speed);

// e^{A z} restricted to the stable (z >= 0) or unstable (z <= 0) range,
// applied to y in the original coordinates.
std::vector<Complex> semigroup_apply(const BiSemigroupRealization& bs,
                                     double z, bool stable,
                                     std::span<const Complex> y);

// max-norm defects of the realization against its defining identities.
double reconstruction_error(const LimitSystem& sys,
                            const BiSemigroupRealization& bs);
double projector_defect(const BiSemigroupRealization& bs);
double invariance_defect(const LimitSystem& sys,
                         const BiSemigroupRealization& bs);

// Decay rate available to eigenfunctions at lambda0: alpha_star =
// Re(lambda0) - sup_re_ess + c^2/4 and bound = sqrt(alpha_star) > |c|/2.
struct DecayBound {
  double alpha_star = 0.0;
  double bound = 0.0;
};

DecayBound decay_bound(Complex lambda0, double speed, double sup_re_ess);

// Scalar limit systems of a traveling front connecting the stable zeros of f:
// 2x2 matrices [[0, 1], [lambda0 + c^2/4 - f'(u_pm), 0]] with u_plus = 0,
// u_minus = 1 for the decreasing cubic front.
struct FrontLimitPair {
  double speed = 0.0;
  Complex lambda0;
  double fp_plus = 0.0;   // f'(u_plus)
  double fp_minus = 0.0;  // f'(u_minus)
  std::array<Complex, 4> a_plus;
  std::array<Complex, 4> a_minus;
  Complex root_plus;   // principal sqrt of a_plus lower-left entry
  Complex root_minus;  // principal sqrt of a_minus lower-left entry
  double gap = 0.0;    // min of the two real parts
};

FrontLimitPair allen_cahn_matrices(const Nonlinearity& f, Complex lambda0,
                                   double speed);

}  // namespace cylspec
