#include "cylspec/bisemigroup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "cylspec/error.hpp"

namespace cylspec {

namespace {

// Dense row-major helpers for the small (2n)x(2n) blocks used here.
std::vector<Complex> matmul(const std::vector<Complex>& a,
                            const std::vector<Complex>& b, int d) {
  std::vector<Complex> c(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Complex aik = a[static_cast<std::size_t>(i) * d + k];
      if (aik == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < d; ++j)
        c[static_cast<std::size_t>(i) * d + j] +=
            aik * b[static_cast<std::size_t>(k) * d + j];
    }
  return c;
}

std::vector<Complex> matvec(const std::vector<Complex>& a,
                            std::span<const Complex> x, int d) {
  std::vector<Complex> y(static_cast<std::size_t>(d), Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < d; ++j)
      acc += a[static_cast<std::size_t>(i) * d + j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<Complex> identity(int d) {
  std::vector<Complex> id(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i) id[static_cast<std::size_t>(i) * d + i] = Complex(1.0, 0.0);
  return id;
}

std::vector<Complex> selector(int n, bool first_block) {
  const int d = 2 * n;
  std::vector<Complex> sel(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  const int off = first_block ? 0 : n;
  for (int i = 0; i < n; ++i)
    sel[static_cast<std::size_t>(off + i) * d + (off + i)] = Complex(1.0, 0.0);
  return sel;
}

}  // namespace

LimitSystem limit_matrices(std::span<const double> mu, Complex lambda0,
                           double speed) {
  if (mu.empty()) throw Error(ErrorKind::invalid_parameter, "limit_matrices: need at least one transverse mode");
  LimitSystem sys;
  sys.n = static_cast<int>(mu.size());
  sys.speed = speed;
  sys.lambda0 = lambda0;
  sys.mu.assign(mu.begin(), mu.end());
  const int d = sys.dim();
  sys.a.assign(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int j = 0; j < sys.n; ++j) {
    sys.a[static_cast<std::size_t>(j) * d + (sys.n + j)] = Complex(1.0, 0.0);
    Complex t = lambda0 + Complex(0.25 * speed * speed - mu[static_cast<std::size_t>(j)], 0.0);
    sys.a[static_cast<std::size_t>(sys.n + j) * d + j] = t;
  }
  return sys;
}

LimitSystem limit_matrices(const SturmSpectrum& sp, Complex lambda0,
                           double speed, int n) {
  if (n < 1 || n > static_cast<int>(sp.eigenvalues.size()))
    throw Error(ErrorKind::invalid_parameter,
                "limit_matrices: mode count exceeds available transverse eigenvalues");
  std::span<const double> mu(sp.eigenvalues.data(), static_cast<std::size_t>(n));
  return limit_matrices(mu, lambda0, speed);
}

std::vector<std::array<Complex, 2>> sqrt_spectrum(Complex lambda0,
                                                  double speed,
                                                  std::span<const double> mu) {
  std::vector<std::array<Complex, 2>> roots;
  roots.reserve(mu.size());
  for (double m : mu) {
    Complex w = lambda0 + Complex(0.25 * speed * speed - m, 0.0);
    Complex r = std::sqrt(w);  // principal branch, Re >= 0
    roots.push_back({r, -r});
  }
  return roots;
}

BiSemigroupRealization build_bisemigroup(std::span<const double> mu,
                                         Complex lambda0, double speed) {
  if (mu.empty()) throw Error(ErrorKind::invalid_parameter, "build_bisemigroup: need at least one transverse mode");
  BiSemigroupRealization bs;
  bs.n = static_cast<int>(mu.size());
  bs.speed = speed;
  bs.lambda0 = lambda0;
  bs.beta = lambda0.imag();
  bs.alpha = std::numeric_limits<double>::infinity();
  bs.gamma_sq.reserve(mu.size());
  for (double m : mu) {
    double g2 = lambda0.real() + 0.25 * speed * speed - m;
    bs.gamma_sq.push_back(g2);
    bs.alpha = std::min(bs.alpha, g2);
  }
  if (!(bs.alpha > 0.0))
    throw Error(ErrorKind::not_hyperbolic,
                "build_bisemigroup: a transverse mode reaches the imaginary axis");

  bs.nu = std::numeric_limits<double>::infinity();
  bs.s.reserve(mu.size());
  for (double g2 : bs.gamma_sq) {
    Complex r = std::sqrt(Complex(g2, bs.beta));
    bs.s.push_back(r);
    bs.nu = std::min(bs.nu, r.real());
  }

  const int n = bs.n;
  const int d = bs.dim();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  bs.w.assign(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  bs.w_inv.assign(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int j = 0; j < n; ++j) {
    Complex sj = bs.s[static_cast<std::size_t>(j)];
    bs.w[static_cast<std::size_t>(j) * d + j] = inv_sqrt2 * sj;
    bs.w[static_cast<std::size_t>(j) * d + (n + j)] = Complex(-inv_sqrt2, 0.0);
    bs.w[static_cast<std::size_t>(n + j) * d + j] = inv_sqrt2 * sj;
    bs.w[static_cast<std::size_t>(n + j) * d + (n + j)] = Complex(inv_sqrt2, 0.0);
    Complex inv_sj = inv_sqrt2 / sj;
    bs.w_inv[static_cast<std::size_t>(j) * d + j] = inv_sj;
    bs.w_inv[static_cast<std::size_t>(j) * d + (n + j)] = inv_sj;
    bs.w_inv[static_cast<std::size_t>(n + j) * d + j] = Complex(-inv_sqrt2, 0.0);
    bs.w_inv[static_cast<std::size_t>(n + j) * d + (n + j)] = Complex(inv_sqrt2, 0.0);
  }

  bs.p_s = matmul(matmul(bs.w_inv, selector(n, true), d), bs.w, d);
  bs.p_u = matmul(matmul(bs.w_inv, selector(n, false), d), bs.w, d);
  return bs;
}

std::vector<Complex> semigroup_apply(const BiSemigroupRealization& bs,
                                     double z, bool stable,
                                     std::span<const Complex> y) {
  const int n = bs.n;
  const int d = bs.dim();
  if (static_cast<int>(y.size()) != d)
    throw Error(ErrorKind::invalid_parameter, "semigroup_apply: vector dimension mismatch");
  if (stable && z < 0.0)
    throw Error(ErrorKind::invalid_parameter, "semigroup_apply: stable range needs z >= 0");
  if (!stable && z > 0.0)
    throw Error(ErrorKind::invalid_parameter, "semigroup_apply: unstable range needs z <= 0");
  std::vector<Complex> xi = matvec(bs.w, y, d);
  for (int j = 0; j < n; ++j) {
    Complex sj = bs.s[static_cast<std::size_t>(j)];
    if (stable) {
      xi[static_cast<std::size_t>(j)] *= std::exp(-sj * z);
      xi[static_cast<std::size_t>(n + j)] = Complex(0.0, 0.0);
    } else {
      xi[static_cast<std::size_t>(j)] = Complex(0.0, 0.0);
      xi[static_cast<std::size_t>(n + j)] *= std::exp(sj * z);
    }
  }
  return matvec(bs.w_inv, xi, d);
}

double reconstruction_error(const LimitSystem& sys,
                            const BiSemigroupRealization& bs) {
  const int n = bs.n;
  const int d = bs.dim();
  std::vector<Complex> diag(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int j = 0; j < n; ++j) {
    diag[static_cast<std::size_t>(j) * d + j] = -bs.s[static_cast<std::size_t>(j)];
    diag[static_cast<std::size_t>(n + j) * d + (n + j)] = bs.s[static_cast<std::size_t>(j)];
  }
  std::vector<Complex> g = matmul(matmul(bs.w_inv, diag, d), bs.w, d);
  return max_abs_diff(g, sys.a);
}

double projector_defect(const BiSemigroupRealization& bs) {
  const int d = bs.dim();
  std::vector<Complex> sum(bs.p_s);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += bs.p_u[i];
  double worst = max_abs_diff(sum, identity(d));
  worst = std::max(worst, max_abs_diff(matmul(bs.p_s, bs.p_s, d), bs.p_s));
  worst = std::max(worst, max_abs_diff(matmul(bs.p_u, bs.p_u, d), bs.p_u));
  std::vector<Complex> zero(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  worst = std::max(worst, max_abs_diff(matmul(bs.p_s, bs.p_u, d), zero));
  return worst;
}

double invariance_defect(const LimitSystem& sys,
                         const BiSemigroupRealization& bs) {
  const int d = bs.dim();
  return max_abs_diff(matmul(sys.a, bs.p_s, d), matmul(bs.p_s, sys.a, d));
}

DecayBound decay_bound(Complex lambda0, double speed, double sup_re_ess) {
  DecayBound db;
  db.alpha_star = lambda0.real() - sup_re_ess + 0.25 * speed * speed;
  if (!(lambda0.real() > sup_re_ess))
    throw Error(ErrorKind::not_right_of_essential,
                "decay_bound: Re(lambda0) must exceed the essential supremum");
  db.bound = std::sqrt(db.alpha_star);
  return db;
}

FrontLimitPair allen_cahn_matrices(const Nonlinearity& f, Complex lambda0,
                                   double speed) {
  FrontLimitPair pair;
  pair.speed = speed;
  pair.lambda0 = lambda0;
  pair.fp_plus = f.deriv(0.0);
  pair.fp_minus = f.deriv(1.0);
  double ess = std::max(pair.fp_plus, pair.fp_minus);
  if (!(lambda0.real() > ess))
    throw Error(ErrorKind::not_right_of_essential,
                "allen_cahn_matrices: Re(lambda0) must exceed both rest-state rates");
  Complex tp = lambda0 + Complex(0.25 * speed * speed - pair.fp_plus, 0.0);
  Complex tm = lambda0 + Complex(0.25 * speed * speed - pair.fp_minus, 0.0);
  pair.a_plus = {Complex(0.0, 0.0), Complex(1.0, 0.0), tp, Complex(0.0, 0.0)};
  pair.a_minus = {Complex(0.0, 0.0), Complex(1.0, 0.0), tm, Complex(0.0, 0.0)};
  pair.root_plus = std::sqrt(tp);
  pair.root_minus = std::sqrt(tm);
  pair.gap = std::min(pair.root_plus.real(), pair.root_minus.real());
  return pair;
}

}  // namespace cylspec
