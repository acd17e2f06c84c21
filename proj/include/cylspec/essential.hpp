#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cylspec/numerics.hpp"
#include "cylspec/operator2d.hpp"
#include "cylspec/potential.hpp"
#include "cylspec/sturm.hpp"

namespace cylspec {

// One branch lambda(s) = mu - s^2 + i c s of the limit-operator spectrum.
// Branches far below the real-part supremum keep their mu for membership
// queries but are not sampled (bounded plot output).
struct DispersionBranch {
  double mu = 0.0;
  char side = '+';
  bool sampled = false;
  std::vector<double> s;
  std::vector<Complex> lambda;
};

struct EssentialSpectrumDescriptor {
  double speed = 0.0;
  double sup_re = 0.0;  // max over both sides; attained at s = 0
  double sup_re_plus = 0.0;
  double sup_re_minus = 0.0;
  double s_max = 0.0;
  std::vector<DispersionBranch> branches;
};

// Sampling cutoff: branches with mu < sup_re - kBranchWindow are kept
// unsampled.
inline constexpr double kBranchWindow = 25.0;

double default_s_max(const SturmSpectrum& plus, const SturmSpectrum& minus);

EssentialSpectrumDescriptor dispersion_curves(const SturmSpectrum& plus,
                                              const SturmSpectrum& minus,
                                              double speed, double s_max,
                                              int n_samples);

// Membership test: for c != 0 the axial frequency is pinned by
// s = Im(lambda)/c and the reported distance is min over branches of
// |Re lambda - (mu - s^2)|; for c = 0 the branch is the real ray
// (-inf, mu] and the distance is the Euclidean gap to the nearest ray.
std::pair<bool, double> membership(Complex lambda,
                                   const EssentialSpectrumDescriptor& d,
                                   double tol);

// Euclidean distance from lambda to the single parabola with vertex mu
// (stationarity cubic in s); used for refinement-gap studies.
double curve_distance(double mu, double speed, Complex lambda);
double essential_distance(const EssentialSpectrumDescriptor& d,
                          Complex lambda);

// Real roots of 2 s^3 + (2 a + c^2) s - c b = 0, the stationarity condition
// of the squared distance along one curve. Exposed for testing.
std::vector<double> curve_stationary_points(double a, double b, double speed);

// Smallest singular value of (lambda0 - L) for the assembled operator,
// estimated by inverse power iteration on the normal equations through one
// banded factorization. Contract: >= 0.9 * (Re lambda0 - sup_re) when
// Re lambda0 > sup_re and the grid resolves the cross section.
double coercivity_estimate(const DiscreteOperator& op, Complex lambda0,
                           double tol = 1e-10, int max_iter = 200);

}  // namespace cylspec
