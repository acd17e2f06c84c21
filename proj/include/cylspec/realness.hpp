#pragma once

#include <span>
#include <vector>

#include "cylspec/eigensolve.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/operator2d.hpp"
#include "cylspec/potential.hpp"

namespace cylspec {

struct RightEigenvalue {
  Complex lambda;
  double residual = 0.0;
  double sym_partner = 0.0;  // nearest eigenvalue of the symmetrized operator
  double gap = 0.0;          // |lambda - partner|
};

// Outcome of checking that point spectrum right of the essential spectrum is
// real: eigenvalues with Re > sup_re_ess, their largest |Im|, and the match
// against the (exactly similar) symmetric operator's spectrum.
struct RealnessReport {
  double sup_re_ess = 0.0;
  double tol = 0.0;
  std::vector<RightEigenvalue> right;
  double max_imag = 0.0;
  bool all_real = true;     // every right eigenvalue has |Im| <= tol
  bool all_matched = true;  // every right eigenvalue has gap <= tol
  bool empty() const { return right.empty(); }
};

RealnessReport verify_realness(const EigenResult& res,
                               std::span<const double> sym_eigs,
                               double sup_re_ess, double tol);

// Exact eigenvalue set of the z-periodic constant-in-z discretization:
// mu_j^h - (4/hz^2) sin^2(s hz / 2) + i (c/hz) sin(s hz), s = 2 pi k / P.
std::vector<Complex> discrete_dispersion_set(std::span<const double> mu,
                                             double speed, double hz, int nz);

struct DispersionCheckResult {
  double max_distance = 0.0;
  std::vector<Complex> computed;
  std::vector<Complex> nearest;
  EigenResult eigs;
};

// Computes k Ritz pairs of the periodic-in-z operator near `shift` and
// measures the worst-case distance to the discrete dispersion set. Requires
// V constant in z.
DispersionCheckResult dispersion_check(const CylinderPotential& V,
                                       double speed, int k, Complex shift,
                                       unsigned long long seed = kEigSeed);

}  // namespace cylspec
