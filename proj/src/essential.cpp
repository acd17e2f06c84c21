#include "cylspec/essential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cylspec/error.hpp"

namespace cylspec {

double default_s_max(const SturmSpectrum& plus, const SturmSpectrum& minus) {
  const double hi = std::max(plus.sup(), minus.sup());
  double lo = hi;
  for (double mu : plus.eigenvalues)
    if (mu >= hi - kBranchWindow) lo = std::min(lo, mu);
  for (double mu : minus.eigenvalues)
    if (mu >= hi - kBranchWindow) lo = std::min(lo, mu);
  return 3.0 * std::sqrt(hi - lo + 1.0);
}

EssentialSpectrumDescriptor dispersion_curves(const SturmSpectrum& plus,
                                              const SturmSpectrum& minus,
                                              double speed, double s_max,
                                              int n_samples) {
  if (n_samples < 2)
    throw Error(ErrorKind::invalid_parameter, "need at least two s-samples");
  if (!(s_max > 0.0))
    throw Error(ErrorKind::invalid_parameter, "s_max must be positive");
  EssentialSpectrumDescriptor d;
  d.speed = speed;
  d.s_max = s_max;
  d.sup_re_plus = plus.sup();
  d.sup_re_minus = minus.sup();
  d.sup_re = std::max(d.sup_re_plus, d.sup_re_minus);

  auto emit = [&](const SturmSpectrum& sp, char side) {
    for (double mu : sp.eigenvalues) {
      DispersionBranch br;
      br.mu = mu;
      br.side = side;
      br.sampled = mu >= d.sup_re - kBranchWindow;
      if (br.sampled) {
        br.s = linspace(-s_max, s_max, n_samples);
        br.lambda.reserve(br.s.size());
        for (double sk : br.s)
          br.lambda.emplace_back(mu - sk * sk, speed * sk);
      }
      d.branches.push_back(std::move(br));
    }
  };
  emit(plus, '+');
  emit(minus, '-');
  return d;
}

std::pair<bool, double> membership(Complex lambda,
                                   const EssentialSpectrumDescriptor& d,
                                   double tol) {
  double best = std::numeric_limits<double>::infinity();
  if (d.speed != 0.0) {
    const double s = lambda.imag() / d.speed;
    for (const DispersionBranch& br : d.branches)
      best = std::min(best, std::abs(lambda.real() - (br.mu - s * s)));
  } else {
    for (const DispersionBranch& br : d.branches)
      best = std::min(best, std::hypot(std::max(0.0, lambda.real() - br.mu),
                                       lambda.imag()));
  }
  return {best <= tol, best};
}

std::vector<double> curve_stationary_points(double a, double b, double speed) {
  // 2 s^3 + (2a + c^2) s - c b = 0  ->  s^3 + p s + q = 0.
  const double p = (2.0 * a + speed * speed) / 2.0;
  const double q = -speed * b / 2.0;
  std::vector<double> roots;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (p == 0.0 && q == 0.0) {
    roots.push_back(0.0);
  } else if (disc > 0.0) {
    const double r = std::sqrt(disc);
    roots.push_back(std::cbrt(-q / 2.0 + r) + std::cbrt(-q / 2.0 - r));
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0));
  }
  // One or two Newton steps wash out cancellation in the closed forms.
  for (double& s : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f =
          2.0 * s * s * s + (2.0 * a + speed * speed) * s - speed * b;
      const double df = 6.0 * s * s + 2.0 * a + speed * speed;
      if (df != 0.0) s -= f / df;
    }
  }
  return roots;
}

double curve_distance(double mu, double speed, Complex lambda) {
  const double a = lambda.real() - mu;
  const double b = lambda.imag();
  double best = std::numeric_limits<double>::infinity();
  for (double s : curve_stationary_points(a, b, speed)) {
    const double dx = lambda.real() - (mu - s * s);
    const double dy = b - speed * s;
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

double essential_distance(const EssentialSpectrumDescriptor& d,
                          Complex lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (const DispersionBranch& br : d.branches)
    best = std::min(best, curve_distance(br.mu, d.speed, lambda));
  return best;
}

double coercivity_estimate(const DiscreteOperator& op, Complex lambda0,
                           double tol, int max_iter) {
  const int n = op.size();
  // Iterating v <- (M^H M)^{-1} v with M = L - lambda0 drives v to the
  // smallest singular direction; sigma_min(lambda0 - L) = sigma_min(M).
  // Without z-wrap one factorization serves the solve and the conjugate
  // solve; with periodic z the wrap entries enter through rank-r corner
  // corrections, one per direction.
  const BandedMatrix<Complex> band = op.shifted_band(lambda0);
  const auto corners = op.corner_entries_complex();
  const bool wrapped = !corners.empty();
  BandedLU<Complex> lu;
  CornerCorrectedLU<Complex> fwd;
  CornerCorrectedLU<Complex> bwd;
  if (!wrapped) {
    lu = BandedLU<Complex>(band);
  } else {
    fwd = CornerCorrectedLU<Complex>(BandedLU<Complex>(band), corners);
    // Conjugate transpose: (B + sum v e_r e_c^T)^H = B^H + mirrored entries.
    BandedMatrix<Complex> bandH(n, band.ku(), band.kl());
    for (int i = 0; i < n; ++i) {
      const int jlo = std::max(0, i - band.kl());
      const int jhi = std::min(n - 1, i + band.ku());
      for (int j = jlo; j <= jhi; ++j) {
        const Complex x = band.get(i, j);
        if (x != Complex(0.0, 0.0)) bandH.set(j, i, std::conj(x));
      }
    }
    std::vector<CornerEntry<Complex>> conj_corners;
    conj_corners.reserve(corners.size());
    for (const auto& e : corners)
      conj_corners.push_back({e.col, e.row, std::conj(e.value)});
    bwd = CornerCorrectedLU<Complex>(BandedLU<Complex>(bandH), conj_corners);
  }

  // Hermitian Lanczos on (M^H M)^{-1} with full reorthogonalization. The
  // discretized band edge packs nearly coincident singular values, where a
  // plain power iteration stalls; a Krylov subspace resolves the cluster top
  // (= sigma_min of M) in a modest number of solves.
  auto apply_inv = [&](std::vector<Complex>& x) {
    if (wrapped) {
      bwd.solve(x);
      fwd.solve(x);
    } else {
      lu.solve_conj(x);
      lu.solve(x);
    }
  };
  auto nrm2 = [&](const std::vector<Complex>& x) {
    double s = 0.0;
    for (const Complex& c : x) s += std::norm(c);
    return std::sqrt(s);
  };

  Rng rng(0x5eed5eedULL + static_cast<unsigned long long>(n));
  std::vector<std::vector<Complex>> q;
  q.emplace_back(n);
  for (Complex& c : q[0])
    c = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  {
    const double s = nrm2(q[0]);
    for (Complex& c : q[0]) c /= s;
  }
  std::vector<double> alpha, beta;
  // Ritz-residual cut: theta error is quadratic in the residual, so sqrt of
  // the requested sigma tolerance (damped) is enough for tol on sigma.
  const double rtol = 0.1 * std::sqrt(std::max(tol, 1e-14));
  const int mmax = std::min(n, max_iter);

  for (int j = 0; j < mmax; ++j) {
    std::vector<Complex> w = q[j];
    apply_inv(w);
    double aj = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        Complex d(0.0, 0.0);
        for (int r = 0; r < n; ++r) d += std::conj(q[i][r]) * w[r];
        for (int r = 0; r < n; ++r) w[r] -= d * q[i][r];
        if (i == j) aj += d.real();
      }
    }
    alpha.push_back(aj);
    const double bj = nrm2(w);
    beta.push_back(bj);

    std::vector<double> d = alpha;
    std::vector<double> e(beta.begin(), beta.end() - 1);
    std::vector<std::vector<double>> svec;
    tridiag_ql(d, e, &svec);
    const double theta = d.back();  // largest eigenvalue of the inverse
    const bool breakdown = bj <= 1e-14 * std::max(std::abs(theta), 1e-300);
    const double ritz_res = std::abs(bj * svec.back()[j]);
    if (theta > 0.0 && (breakdown || ritz_res <= rtol * theta))
      return 1.0 / std::sqrt(theta);
    if (breakdown) break;
    for (Complex& c : w) c /= bj;
    q.push_back(std::move(w));
  }
  throw Error(ErrorKind::convergence_failure,
              "singular-value iteration stagnated");
}

}  // namespace cylspec
