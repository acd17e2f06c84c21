#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "cylspec/bisemigroup.hpp"
#include "cylspec/error.hpp"
#include "cylspec/nonlinearity.hpp"
#include "cylspec/numerics.hpp"

using namespace cylspec;

namespace {

std::vector<Complex> apply_dense(const std::vector<Complex>& m,
                                 const std::vector<Complex>& x, int d) {
  std::vector<Complex> y(d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) y[i] += m[i * d + j] * x[j];
  return y;
}

Eigen::MatrixXcd to_eigen(const std::vector<Complex>& m, int d) {
  Eigen::MatrixXcd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = m[i * d + j];
  return out;
}

}  // namespace

TEST_CASE("first-order companion block: exact entries and mode selection") {
  std::vector<double> mu = {-1.0};
  LimitSystem sys = limit_matrices(mu, Complex(1.0, 0.0), 2.0);
  REQUIRE(sys.dim() == 2);
  CHECK(sys.a[0] == Complex(0.0, 0.0));
  CHECK(sys.a[1] == Complex(1.0, 0.0));
  CHECK(sys.a[2] == Complex(3.0, 0.0));  // 1 + 2^2/4 - (-1)
  CHECK(sys.a[3] == Complex(0.0, 0.0));
  CHECK(sys.a[0] + sys.a[3] == Complex(0.0, 0.0));

  SturmSpectrum sp;
  sp.eigenvalues = {-1.0, -2.0, -3.0};
  LimitSystem top = limit_matrices(sp, Complex(1.0, 0.5), 2.0, 2);
  REQUIRE(top.n == 2);
  CHECK(top.mu[0] == -1.0);
  CHECK(top.mu[1] == -2.0);
  // Lower-left block is diagonal with lambda0 + c^2/4 - mu_j.
  CHECK(top.a[2 * 4 + 0] == Complex(3.0, 0.5));
  CHECK(top.a[3 * 4 + 1] == Complex(4.0, 0.5));
  CHECK(top.a[2 * 4 + 1] == Complex(0.0, 0.0));
  CHECK(top.a[0 * 4 + 2] == Complex(1.0, 0.0));

  CHECK_THROWS_AS(limit_matrices(sp, Complex(1.0, 0.0), 2.0, 0), Error);
  CHECK_THROWS_AS(limit_matrices(sp, Complex(1.0, 0.0), 2.0, 4), Error);
  std::vector<double> none;
  CHECK_THROWS_AS(limit_matrices(none, Complex(1.0, 0.0), 2.0), Error);
}

TEST_CASE("characteristic square roots: principal branch on worked values") {
  std::vector<double> mu0 = {0.0};
  auto r1 = sqrt_spectrum(Complex(3.0, 0.0), 0.0, mu0);
  REQUIRE(r1.size() == 1);
  CHECK(std::abs(r1[0][0] - Complex(std::sqrt(3.0), 0.0)) <= 1e-15);
  CHECK(std::abs(r1[0][1] + r1[0][0]) == 0.0);

  // 3 + 4i has principal square root 2 + i; reachable two ways.
  auto r2 = sqrt_spectrum(Complex(3.0, 4.0), 0.0, mu0);
  CHECK(std::abs(r2[0][0] - Complex(2.0, 1.0)) <= 1e-14);
  std::vector<double> mu1 = {-1.0};
  auto r3 = sqrt_spectrum(Complex(1.0, 4.0), 2.0, mu1);
  CHECK(std::abs(r3[0][0] - Complex(2.0, 1.0)) <= 1e-14);
  CHECK(r2[0][0].real() >= 0.0);
}

TEST_CASE("realization identities hold and rates are certified on random draws") {
  Rng rng(20240811);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> mu(n);
    for (double& m : mu) m = rng.uniform(-10.0, -0.5);
    const Complex lambda0(rng.uniform(0.1, 5.0), rng.uniform(-3.0, 3.0));
    const double speed = rng.uniform(-3.0, 3.0);

    LimitSystem sys = limit_matrices(mu, lambda0, speed);
    BiSemigroupRealization bs = build_bisemigroup(mu, lambda0, speed);
    const int d = bs.dim();
    REQUIRE(d == 2 * n);

    CHECK(reconstruction_error(sys, bs) <= 1e-10);
    CHECK(projector_defect(bs) <= 1e-10);
    CHECK(invariance_defect(sys, bs) <= 1e-10);

    // alpha and nu agree with their definitions, and nu >= sqrt(alpha).
    double alpha = 1e300, nu = 1e300;
    for (int j = 0; j < n; ++j) {
      const double g2 = lambda0.real() + 0.25 * speed * speed - mu[j];
      alpha = std::min(alpha, g2);
      CHECK(bs.gamma_sq[j] == doctest::Approx(g2).epsilon(1e-14));
      nu = std::min(nu, bs.s[j].real());
    }
    CHECK(bs.alpha == doctest::Approx(alpha).epsilon(1e-14));
    CHECK(bs.nu == doctest::Approx(nu).epsilon(1e-14));
    CHECK(bs.nu >= std::sqrt(bs.alpha) * (1.0 - 1e-12));

    // Dense eigenvalues of the companion block are exactly +/- s_j.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(to_eigen(sys.a, d));
    REQUIRE(eig.info() == Eigen::Success);
    std::vector<Complex> expected;
    for (int j = 0; j < n; ++j) {
      expected.push_back(bs.s[j]);
      expected.push_back(-bs.s[j]);
    }
    std::vector<bool> used(expected.size(), false);
    for (int i = 0; i < d; ++i) {
      const Complex ev = eig.eigenvalues()(i);
      double best = 1e300;
      int arg = -1;
      for (std::size_t k = 0; k < expected.size(); ++k) {
        if (used[k]) continue;
        const double dist = std::abs(ev - expected[k]);
        if (dist < best) {
          best = dist;
          arg = static_cast<int>(k);
        }
      }
      REQUIRE(arg >= 0);
      used[arg] = true;
      CHECK(best <= 1e-10);
    }

    // At z = 0 the two half-line actions reduce to the spectral projections.
    std::vector<Complex> y(d);
    for (Complex& v : y)
      v = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    std::vector<Complex> ps_y = apply_dense(bs.p_s, y, d);
    std::vector<Complex> pu_y = apply_dense(bs.p_u, y, d);
    std::vector<Complex> s0 = semigroup_apply(bs, 0.0, true, y);
    std::vector<Complex> u0 = semigroup_apply(bs, 0.0, false, y);
    for (int i = 0; i < d; ++i) {
      CHECK(std::abs(s0[i] - ps_y[i]) <= 1e-12);
      CHECK(std::abs(u0[i] - pu_y[i]) <= 1e-12);
    }

    // Semigroup property on the stable range.
    std::vector<Complex> one_two = semigroup_apply(bs, 1.2, true, y);
    std::vector<Complex> chained =
        semigroup_apply(bs, 0.5, true, semigroup_apply(bs, 0.7, true, y));
    for (int i = 0; i < d; ++i)
      CHECK(std::abs(one_two[i] - chained[i]) <= 1e-12);
  }
}

TEST_CASE("scalar closed form: both half-line actions are explicit") {
  std::vector<double> mu = {-2.0};
  BiSemigroupRealization bs = build_bisemigroup(mu, Complex(1.0, 0.0), 0.0);
  const double s = std::sqrt(3.0);
  CHECK(std::abs(bs.s[0] - Complex(s, 0.0)) <= 1e-15);
  std::vector<Complex> y = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  // P_s y = (1/2, -s/2); e^{Az} scales it by e^{-sz}.
  const double z = 0.7;
  std::vector<Complex> got = semigroup_apply(bs, z, true, y);
  CHECK(std::abs(got[0] - 0.5 * std::exp(-s * z)) <= 1e-14);
  CHECK(std::abs(got[1] + 0.5 * s * std::exp(-s * z)) <= 1e-14);
  std::vector<Complex> gotu = semigroup_apply(bs, -z, false, y);
  CHECK(std::abs(gotu[0] - 0.5 * std::exp(-s * z)) <= 1e-14);
  CHECK(std::abs(gotu[1] - 0.5 * s * std::exp(-s * z)) <= 1e-14);

  CHECK_THROWS_AS(semigroup_apply(bs, -0.1, true, y), Error);
  CHECK_THROWS_AS(semigroup_apply(bs, 0.1, false, y), Error);
  std::vector<Complex> bad = {Complex(1.0, 0.0)};
  CHECK_THROWS_AS(semigroup_apply(bs, 0.5, true, bad), Error);
}

TEST_CASE("square-root real part dominates |gamma|, with equality only on axis") {
  Rng rng(7);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double g2 = rng.uniform(1e-6, 25.0);
    const double beta = rng.uniform(-50.0, 50.0);
    const Complex r = std::sqrt(Complex(g2, beta));
    if (r.real() < std::sqrt(g2) * (1.0 - 1e-13)) ++violations;
    if (beta != 0.0 && r.real() <= std::sqrt(g2)) ++violations;
  }
  CHECK(violations == 0);
  CHECK(std::sqrt(Complex(4.0, 0.0)).real() == 2.0);
}

TEST_CASE("hyperbolicity guard: a grazing transverse mode is rejected") {
  std::vector<double> mu = {1.0};
  CHECK_THROWS_AS(build_bisemigroup(mu, Complex(0.5, 0.0), 0.0), Error);
  try {
    build_bisemigroup(mu, Complex(0.5, 0.0), 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_hyperbolic);
  }
  // Exactly zero gap also fails.
  std::vector<double> mu0 = {0.25};
  CHECK_THROWS_AS(build_bisemigroup(mu0, Complex(0.25, 0.0), 0.0), Error);
  std::vector<double> none;
  CHECK_THROWS_AS(build_bisemigroup(none, Complex(1.0, 0.0), 0.0), Error);
}

TEST_CASE("decay rate: worked value and the drift floor") {
  DecayBound db = decay_bound(Complex(1.0, 0.0), std::sqrt(2.0) / 4.0, -0.25);
  CHECK(db.alpha_star == doctest::Approx(1.28125).epsilon(1e-14));
  CHECK(db.bound == doctest::Approx(std::sqrt(1.28125)).epsilon(1e-14));
  CHECK(db.bound > 0.5 * std::sqrt(2.0) / 4.0);

  CHECK_THROWS_AS(decay_bound(Complex(-0.3, 0.0), 1.0, -0.25), Error);
  CHECK_THROWS_AS(decay_bound(Complex(-0.25, 0.0), 1.0, -0.25), Error);
  try {
    decay_bound(Complex(-0.3, 0.0), 1.0, -0.25);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_right_of_essential);
  }
}

TEST_CASE("cubic front rest states: worked 2x2 pair") {
  Nonlinearity f = Nonlinearity::cubic(0.25);
  const double c = std::sqrt(2.0) / 4.0;
  FrontLimitPair pair = allen_cahn_matrices(f, Complex(0.0, 0.0), c);
  CHECK(pair.fp_plus == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(pair.fp_minus == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(std::abs(pair.a_plus[2] - Complex(0.28125, 0.0)) <= 1e-14);
  CHECK(std::abs(pair.a_minus[2] - Complex(0.78125, 0.0)) <= 1e-14);
  CHECK(pair.a_plus[0] == Complex(0.0, 0.0));
  CHECK(pair.a_plus[1] == Complex(1.0, 0.0));
  CHECK(pair.a_plus[3] == Complex(0.0, 0.0));
  CHECK(std::abs(pair.root_plus - Complex(0.75 / std::sqrt(2.0), 0.0)) <= 1e-14);
  CHECK(std::abs(pair.root_minus - Complex(1.25 / std::sqrt(2.0), 0.0)) <= 1e-14);
  CHECK(pair.gap == doctest::Approx(0.75 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(pair.gap > 0.5 * c);

  // Balanced case: both rest states give the same block.
  Nonlinearity g = Nonlinearity::cubic(0.5);
  FrontLimitPair sym = allen_cahn_matrices(g, Complex(0.25, 0.0), 0.0);
  CHECK(std::abs(sym.a_plus[2] - Complex(0.75, 0.0)) <= 1e-14);
  CHECK(std::abs(sym.a_minus[2] - Complex(0.75, 0.0)) <= 1e-14);
  CHECK(sym.root_plus == sym.root_minus);

  CHECK_THROWS_AS(allen_cahn_matrices(f, Complex(-0.5, 0.0), c), Error);
  try {
    allen_cahn_matrices(f, Complex(-0.25, 0.0), c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_right_of_essential);
  }
}
