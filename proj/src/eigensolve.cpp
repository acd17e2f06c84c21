#include "cylspec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cylspec/error.hpp"
#include "cylspec/sturm.hpp"

namespace cylspec {
namespace {

constexpr double kInvResidualTol = 1e-12;  // per-pair, in inverted coordinates
constexpr int kMaxSubspace = 300;
constexpr int kMaxRestarts = 3;

// Direct solver for (op - sigma I): plain banded LU, or banded LU plus a
// rank-r corner correction when the z-direction wraps around.
template <typename T>
class ShiftedSolver {
 public:
  ShiftedSolver(const DiscreteOperator& op, T sigma) {
    const BandedMatrix<T> band = op.shifted_band(sigma);
    std::vector<CornerEntry<T>> corners;
    if constexpr (std::is_same_v<T, Complex>) {
      corners = op.corner_entries_complex();
    } else {
      corners = op.corner_entries();
    }
    wrapped_ = !corners.empty();
    if (wrapped_)
      cc_ = CornerCorrectedLU<T>(BandedLU<T>(band), corners);
    else
      lu_ = BandedLU<T>(band);
  }

  void solve(std::span<T> b) const {
    if (wrapped_)
      cc_.solve(b);
    else
      lu_.solve(b);
  }

 private:
  bool wrapped_ = false;
  BandedLU<T> lu_;
  CornerCorrectedLU<T> cc_;
};

// Factor (op - sigma I), nudging sigma off an exactly singular point.
template <typename T>
ShiftedSolver<T> factor_with_retry(const DiscreteOperator& op, T& sigma) {
  double delta = (1.0 + std::abs(sigma)) * 1e-10;
  for (int attempt = 0;; ++attempt) {
    try {
      return ShiftedSolver<T>(op, sigma);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::convergence_failure || attempt >= 3) throw;
      sigma += T(delta);
      delta *= 100.0;
    }
  }
}

double vec_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double vec_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void fill_random(Rng& rng, std::span<double> v) {
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
}

void fill_random(Rng& rng, std::span<Complex> v) {
  for (Complex& x : v) x = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
}

double direct_residual(const DiscreteOperator& op, Complex lambda,
                       std::span<const Complex> u, std::span<Complex> work) {
  op.apply(u, work);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += std::norm(work[i] - lambda * u[i]);
    den += std::norm(u[i]);
  }
  return std::sqrt(num / den);
}

// ---------------------------------------------------------------- Hessenberg

void apply_givens_rows(std::vector<Complex>& h, int m, int r1, int r2,
                       double cs, Complex sn, int col_lo) {
  for (int j = col_lo; j < m; ++j) {
    const Complex a = h[r1 * m + j];
    const Complex b = h[r2 * m + j];
    h[r1 * m + j] = cs * a + sn * b;
    h[r2 * m + j] = -std::conj(sn) * a + cs * b;
  }
}

void apply_givens_cols(std::vector<Complex>& h, int m, int c1, int c2,
                       double cs, Complex sn, int row_hi) {
  for (int i = 0; i <= row_hi && i < m; ++i) {
    const Complex a = h[i * m + c1];
    const Complex b = h[i * m + c2];
    h[i * m + c1] = cs * a + std::conj(sn) * b;
    h[i * m + c2] = -sn * a + cs * b;
  }
}

void make_givens(Complex f, Complex g, double& cs, Complex& sn) {
  const double af = std::abs(f);
  const double ag = std::abs(g);
  const double r = std::hypot(af, ag);
  if (r == 0.0 || ag == 0.0) {
    cs = 1.0;
    sn = Complex(0.0, 0.0);
    return;
  }
  if (af == 0.0) {
    cs = 0.0;
    sn = std::conj(g) / ag;
    return;
  }
  cs = af / r;
  sn = (f / af) * std::conj(g) / r;
}

Complex wilkinson_shift(const std::vector<Complex>& h, int m, int hi) {
  const Complex a = h[(hi - 1) * m + (hi - 1)];
  const Complex b = h[(hi - 1) * m + hi];
  const Complex c = h[hi * m + (hi - 1)];
  const Complex d = h[hi * m + hi];
  const Complex tr = a + d;
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex l1 = (tr + disc) / 2.0;
  const Complex l2 = (tr - disc) / 2.0;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<Complex> hessenberg_eigenvalues(std::vector<Complex> h, int m) {
  if (static_cast<int>(h.size()) != m * m)
    throw Error(ErrorKind::invalid_parameter, "hessenberg size mismatch");
  std::vector<Complex> eigs;
  eigs.reserve(m);
  const double eps = std::numeric_limits<double>::epsilon();
  int hi = m - 1;
  int stagnation = 0;
  while (hi >= 0) {
    if (hi == 0) {
      eigs.push_back(h[0]);
      break;
    }
    // Deflate converged subdiagonals from the bottom.
    int lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h[lo * m + (lo - 1)]);
      const double scale =
          std::abs(h[(lo - 1) * m + (lo - 1)]) + std::abs(h[lo * m + lo]);
      if (sub <= eps * std::max(scale, 1e-300)) {
        h[lo * m + (lo - 1)] = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eigs.push_back(h[hi * m + hi]);
      --hi;
      stagnation = 0;
      continue;
    }
    if (++stagnation > 40 * m)
      throw Error(ErrorKind::convergence_failure,
                  "Hessenberg QR iteration stalled");
    Complex mu = wilkinson_shift(h, m, hi);
    if (stagnation % 15 == 0) {
      // Exceptional shift to break symmetric stalls.
      mu = h[hi * m + hi] +
           Complex(std::abs(h[hi * m + (hi - 1)]), std::abs(h[hi * m + hi]));
    }
    // Explicit single-shift QR sweep on the active window [lo, hi].
    for (int i = lo; i <= hi; ++i) h[i * m + i] -= mu;
    std::vector<double> css(hi - lo, 0.0);
    std::vector<Complex> sns(hi - lo);
    for (int i = lo; i < hi; ++i) {
      double cs;
      Complex sn;
      make_givens(h[i * m + i], h[(i + 1) * m + i], cs, sn);
      css[i - lo] = cs;
      sns[i - lo] = sn;
      apply_givens_rows(h, m, i, i + 1, cs, sn, i);
    }
    for (int i = lo; i < hi; ++i)
      apply_givens_cols(h, m, i, i + 1, css[i - lo], sns[i - lo],
                        std::min(i + 2, hi));
    for (int i = lo; i <= hi; ++i) h[i * m + i] += mu;
  }
  return eigs;
}

namespace {

// Eigenvector of an upper-Hessenberg matrix for an approximate eigenvalue,
// by two steps of inverse iteration on a dense LU of (H - theta I).
std::vector<Complex> hessenberg_eigvec(const std::vector<Complex>& h, int m,
                                       Complex theta, Rng& rng) {
  double scale = 0.0;
  for (const Complex& x : h) scale = std::max(scale, std::abs(x));
  double pert = scale * 1e-14;
  for (int attempt = 0;; ++attempt) {
    std::vector<Complex> a = h;
    const Complex t = theta + Complex(pert, pert);
    for (int i = 0; i < m; ++i) a[i * m + i] -= t;
    try {
      DenseLU<Complex> lu(std::move(a), m);
      std::vector<Complex> y(m);
      fill_random(rng, y);
      for (int step = 0; step < 2; ++step) {
        lu.solve(y);
        const double n = vec_norm(y);
        for (Complex& x : y) x /= n;
      }
      return y;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::convergence_failure || attempt >= 3) throw;
      pert = (pert == 0.0 ? scale * 1e-14 : pert * 100.0) + 1e-300;
    }
  }
}

struct RitzSelection {
  std::vector<Complex> theta;  // inverted-coordinate values, wanted ones
  std::vector<int> order;      // indices into the full theta list
  bool converged = false;
};

}  // namespace

EigenResult eig_general(const DiscreteOperator& op, int k, Complex shift,
                        double residual_tol, unsigned long long seed) {
  const int n = op.size();
  if (k < 1 || k > n)
    throw Error(ErrorKind::invalid_parameter, "bad eigenpair count");
  Complex sigma = shift;
  const ShiftedSolver<Complex> solver = factor_with_retry(op, sigma);

  EigenResult result;
  result.solver.shift = sigma;

  const int mmax = std::min(n, kMaxSubspace);
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    Rng rng(seed + 0x9E3779B9ULL * static_cast<unsigned long long>(restart));
    std::vector<std::vector<Complex>> q;       // orthonormal Krylov basis
    std::vector<std::vector<Complex>> hcols;   // Hessenberg columns
    q.emplace_back(n);
    fill_random(rng, q[0]);
    {
      const double nrm = vec_norm(q[0]);
      for (Complex& x : q[0]) x /= nrm;
    }

    int m = std::max(2 * k + 10, 30);
    m = std::min(m, mmax);
    bool breakdown = false;
    int built = 0;

    auto extend_to = [&](int target_m) {
      for (int j = built; j < target_m; ++j) {
        std::vector<Complex> w = q[j];
        solver.solve(w);
        ++result.solver.iterations;
        const double wscale = vec_norm(w);
        std::vector<Complex> col(target_m + 1, Complex(0.0, 0.0));
        // Modified Gram-Schmidt, two passes (full reorthogonalization).
        for (int pass = 0; pass < 2; ++pass) {
          for (int i = 0; i <= j; ++i) {
            Complex d(0.0, 0.0);
            for (int r = 0; r < n; ++r) d += std::conj(q[i][r]) * w[r];
            for (int r = 0; r < n; ++r) w[r] -= d * q[i][r];
            col[i] += d;
          }
        }
        const double beta = vec_norm(w);
        col[j + 1] = beta;
        hcols.push_back(std::move(col));
        built = j + 1;
        if (beta <= 1e-12 * std::max(wscale, 1e-300)) {
          breakdown = true;
          return;
        }
        for (Complex& x : w) x /= beta;
        q.push_back(std::move(w));
      }
    };

    while (true) {
      extend_to(m);
      const int mm = built;
      // Dense Hessenberg from the stored columns.
      std::vector<Complex> H(static_cast<std::size_t>(mm) * mm,
                             Complex(0.0, 0.0));
      for (int j = 0; j < mm; ++j)
        for (int i = 0; i <= std::min(j + 1, mm - 1); ++i)
          H[i * mm + j] = hcols[j][i];
      std::vector<Complex> theta = hessenberg_eigenvalues(H, mm);
      std::vector<int> order(theta.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(theta[a]) > std::abs(theta[b]);
      });
      const int want = std::min<int>(k, mm);
      double thetamax = std::abs(theta[order[0]]);

      // Residuals in inverted coordinates: |beta_m * y[mm-1]|.
      const double beta_last = std::abs(hcols[mm - 1][mm]);
      bool all_ok = true;
      std::vector<std::vector<Complex>> yvecs(want);
      for (int t = 0; t < want; ++t) {
        Rng vr(seed + 17 * t + 3);
        yvecs[t] = hessenberg_eigvec(H, mm, theta[order[t]], vr);
        const double res_inv = beta_last * std::abs(yvecs[t][mm - 1]);
        const double tol_t =
            std::max(kInvResidualTol * std::abs(theta[order[t]]),
                     5.0 * std::numeric_limits<double>::epsilon() * thetamax);
        if (res_inv > tol_t) all_ok = false;
      }

      if ((all_ok || breakdown || mm >= mmax) && mm >= want) {
        result.solver.subspace = mm;
        result.solver.restarts = restart;
        result.pairs.clear();
        std::vector<Complex> work(n);
        for (int t = 0; t < want; ++t) {
          EigenPair pair;
          pair.lambda = sigma + 1.0 / theta[order[t]];
          pair.vec.assign(n, Complex(0.0, 0.0));
          for (int j = 0; j < mm; ++j) {
            const Complex c = yvecs[t][j];
            const std::vector<Complex>& qj = q[j];
            for (int r = 0; r < n; ++r) pair.vec[r] += c * qj[r];
          }
          const double nrm = vec_norm(pair.vec);
          for (Complex& x : pair.vec) x /= nrm;
          pair.residual = direct_residual(op, pair.lambda, pair.vec, work);
          if (pair.residual > residual_tol) polish_pair(op, pair, residual_tol);
          result.pairs.push_back(std::move(pair));
        }
        std::sort(result.pairs.begin(), result.pairs.end(),
                  [&](const EigenPair& a, const EigenPair& b) {
                    return std::abs(a.lambda - sigma) <
                           std::abs(b.lambda - sigma);
                  });
        return result;
      }
      if (breakdown || mm >= mmax) break;  // restart with a new seed
      m = std::min(mmax, (3 * m) / 2 + 1);
    }
  }
  throw Error(ErrorKind::convergence_failure,
              "Arnoldi iteration did not converge");
}

EigenResult eig_symmetric(const DiscreteOperator& op, int k, double target,
                          double residual_tol, unsigned long long seed) {
  if (op.speed != 0.0 && !op.symmetrized)
    throw Error(ErrorKind::invalid_parameter,
                "operator is not symmetric; symmetrize it first");
  const int n = op.size();
  if (k < 1 || k > n)
    throw Error(ErrorKind::invalid_parameter, "bad eigenpair count");
  double sigma = target;
  const ShiftedSolver<double> solver = factor_with_retry(op, sigma);

  EigenResult result;
  result.solver.shift = sigma;

  const int mmax = std::min(n, kMaxSubspace);
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    Rng rng(seed + 0x9E3779B9ULL * static_cast<unsigned long long>(restart));
    std::vector<std::vector<double>> q;
    std::vector<double> alpha, beta;  // Lanczos recurrence coefficients
    q.emplace_back(n);
    fill_random(rng, q[0]);
    {
      const double nrm = vec_norm(q[0]);
      for (double& x : q[0]) x /= nrm;
    }

    int m = std::max(2 * k + 10, 30);
    m = std::min(m, mmax);
    bool breakdown = false;
    int built = 0;

    auto extend_to = [&](int target_m) {
      for (int j = built; j < target_m; ++j) {
        std::vector<double> w = q[j];
        solver.solve(w);
        ++result.solver.iterations;
        const double wscale = vec_norm(w);
        // Full reorthogonalization: two MGS passes over all basis vectors.
        double aj = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
          for (int i = 0; i <= j; ++i) {
            double d = 0.0;
            for (int r = 0; r < n; ++r) d += q[i][r] * w[r];
            for (int r = 0; r < n; ++r) w[r] -= d * q[i][r];
            if (i == j) aj += d;
          }
        }
        alpha.push_back(aj);
        const double bj = vec_norm(w);
        beta.push_back(bj);
        built = j + 1;
        if (bj <= 1e-12 * std::max(wscale, 1e-300)) {
          breakdown = true;
          return;
        }
        for (double& x : w) x /= bj;
        q.push_back(std::move(w));
      }
    };

    while (true) {
      extend_to(m);
      const int mm = built;
      std::vector<double> d = alpha;
      std::vector<double> e(beta.begin(), beta.end() - 1);
      std::vector<std::vector<double>> svec;
      tridiag_ql(d, e, &svec);
      std::vector<int> order(mm);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return std::abs(d[a]) > std::abs(d[b]); });
      const int want = std::min<int>(k, mm);
      const double thetamax = std::abs(d[order[0]]);
      const double beta_last = beta[mm - 1];
      bool all_ok = true;
      for (int t = 0; t < want; ++t) {
        const double res_inv =
            std::abs(beta_last * svec[order[t]][mm - 1]);
        const double tol_t =
            std::max(kInvResidualTol * std::abs(d[order[t]]),
                     5.0 * std::numeric_limits<double>::epsilon() * thetamax);
        if (res_inv > tol_t) all_ok = false;
      }

      if ((all_ok || breakdown || mm >= mmax) && mm >= want) {
        result.solver.subspace = mm;
        result.solver.restarts = restart;
        result.pairs.clear();
        std::vector<Complex> work(n);
        for (int t = 0; t < want; ++t) {
          EigenPair pair;
          pair.lambda = sigma + 1.0 / d[order[t]];
          pair.vec.assign(n, Complex(0.0, 0.0));
          for (int j = 0; j < mm; ++j) {
            const double c = svec[order[t]][j];
            const std::vector<double>& qj = q[j];
            for (int r = 0; r < n; ++r) pair.vec[r] += c * qj[r];
          }
          const double nrm = vec_norm(pair.vec);
          for (Complex& x : pair.vec) x /= nrm;
          pair.residual = direct_residual(op, pair.lambda, pair.vec, work);
          if (pair.residual > residual_tol) polish_pair(op, pair, residual_tol);
          result.pairs.push_back(std::move(pair));
        }
        std::sort(result.pairs.begin(), result.pairs.end(),
                  [&](const EigenPair& a, const EigenPair& b) {
                    return std::abs(a.lambda - sigma) <
                           std::abs(b.lambda - sigma);
                  });
        return result;
      }
      if (breakdown || mm >= mmax) break;
      m = std::min(mmax, (3 * m) / 2 + 1);
    }
  }
  throw Error(ErrorKind::convergence_failure,
              "Lanczos iteration did not converge");
}

void polish_pair(const DiscreteOperator& op, EigenPair& pair,
                 double target_residual, int max_steps) {
  const int n = op.size();
  Complex sigma = pair.lambda;
  const ShiftedSolver<Complex> solver = factor_with_retry(op, sigma);
  std::vector<Complex> v = pair.vec;
  std::vector<Complex> work(n);
  EigenPair best = pair;
  for (int step = 0; step < max_steps; ++step) {
    solver.solve(v);
    const double nrm = vec_norm(v);
    for (Complex& x : v) x /= nrm;
    // Rayleigh quotient (||v|| = 1).
    op.apply(v, work);
    Complex rq(0.0, 0.0);
    for (int r = 0; r < n; ++r) rq += std::conj(v[r]) * work[r];
    double res = 0.0;
    for (int r = 0; r < n; ++r) res += std::norm(work[r] - rq * v[r]);
    res = std::sqrt(res);
    if (res < best.residual) {
      best.lambda = rq;
      best.vec = v;
      best.residual = res;
    }
    if (res <= target_residual) break;
  }
  pair = std::move(best);
}

}  // namespace cylspec
