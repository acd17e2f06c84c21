#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cylspec/error.hpp"
#include "cylspec/nonlinearity.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/potential.hpp"
#include "cylspec/profiles.hpp"
#include "cylspec/sturm.hpp"

using namespace cylspec;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd dense_of(const SturmOperator& op) {
  const int n = op.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = op.diag[i];
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = op.off[i];
  if (op.bc == Bc::periodic && n > 2) {
    a(0, n - 1) += op.corner;
    a(n - 1, 0) += op.corner;
  }
  return a;
}

std::vector<double> random_potential(int n, Rng& rng, double amp) {
  std::vector<double> v(n);
  for (double& vi : v) vi = amp * rng.uniform(-1.0, 1.0);
  return v;
}
}  // namespace

TEST_CASE("Dirichlet Laplacian eigenvalues match the sine closed form") {
  const int n = 24;
  const double length = 2.5;
  std::vector<double> zero(n, 0.0);
  SturmOperator op = assemble_sturm(zero, length, Bc::dirichlet);
  SturmSpectrum sp = solve_sturm(op);
  REQUIRE(static_cast<int>(sp.eigenvalues.size()) == n);
  const double h = length / (n + 1);
  // Descending order: j = 1 gives the top of the spectrum.
  for (int j = 1; j <= n; ++j) {
    const double s = std::sin(0.5 * j * kPi / (n + 1));
    const double expected = -4.0 / (h * h) * s * s;
    CHECK(sp.eigenvalues[j - 1] == doctest::Approx(expected).epsilon(1e-11));
  }
  CHECK(sup_spectrum(sp) == sp.eigenvalues.front());
}

TEST_CASE("periodic ring eigenvalues match the Fourier closed form") {
  const int n = 16;
  const double length = 3.0;
  std::vector<double> zero(n, 0.0);
  SturmOperator op = assemble_sturm(zero, length, Bc::periodic);
  SturmSpectrum sp = solve_sturm(op);
  const double h = length / n;
  std::vector<double> expected(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(kPi * k / n);
    expected[k] = -4.0 / (h * h) * s * s;
  }
  std::sort(expected.rbegin(), expected.rend());
  for (int j = 0; j < n; ++j)
    CHECK(sp.eigenvalues[j] == doctest::Approx(expected[j]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("random potentials agree with a dense symmetric eigensolver") {
  Rng rng(91);
  for (Bc bc : {Bc::dirichlet, Bc::periodic}) {
    for (int trial = 0; trial < 4; ++trial) {
      const int n = 10 + 7 * trial;
      std::vector<double> v = random_potential(n, rng, 5.0);
      SturmOperator op = assemble_sturm(v, 1.7, bc);
      SturmSpectrum sp = solve_sturm(op);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(op));
      REQUIRE(es.info() == Eigen::Success);
      for (int j = 0; j < n; ++j) {
        // Descending vs Eigen's ascending order.
        CHECK(sp.eigenvalues[j] ==
              doctest::Approx(es.eigenvalues()(n - 1 - j)).epsilon(1e-10).scale(100.0));
      }
      // Residuals and orthonormality of the returned basis.
      std::vector<double> out(n);
      for (int j = 0; j < n; ++j) {
        op.apply(sp.vectors[j], out);
        for (int i = 0; i < n; ++i) out[i] -= sp.eigenvalues[j] * sp.vectors[j][i];
        CHECK(norm2(out) <= 1e-8 * (std::abs(sp.eigenvalues[j]) + 1.0));
        for (int l = 0; l <= j; ++l) {
          const double ip = dot(sp.vectors[j], sp.vectors[l]);
          CHECK(ip == doctest::Approx(l == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("constant shifts move the spectrum rigidly") {
  Rng rng(7);
  const int n = 21;
  std::vector<double> v = random_potential(n, rng, 3.0);
  std::vector<double> vs = v;
  const double shift = 4.25;
  for (double& x : vs) x += shift;
  SturmSpectrum a = solve_sturm(assemble_sturm(v, 2.0, Bc::dirichlet));
  SturmSpectrum b = solve_sturm(assemble_sturm(vs, 2.0, Bc::dirichlet));
  for (int j = 0; j < n; ++j)
    CHECK(b.eigenvalues[j] == doctest::Approx(a.eigenvalues[j] + shift).epsilon(1e-10));
}

TEST_CASE("partial solve returns the leading block of the full solve") {
  Rng rng(13);
  const int n = 30;
  std::vector<double> v = random_potential(n, rng, 2.0);
  SturmOperator op = assemble_sturm(v, 1.0, Bc::dirichlet);
  SturmSpectrum full = solve_sturm(op);
  SturmSpectrum part = solve_sturm(op, 5);
  REQUIRE(part.eigenvalues.size() == 5);
  REQUIRE(part.vectors.size() == 5);
  for (int j = 0; j < 5; ++j)
    CHECK(part.eigenvalues[j] == doctest::Approx(full.eigenvalues[j]).epsilon(1e-12));
}

TEST_CASE("assembly rejects degenerate inputs") {
  std::vector<double> v2(2, 0.0);
  CHECK_THROWS_AS(assemble_sturm(v2, 1.0, Bc::dirichlet), Error);
  std::vector<double> v5(5, 0.0);
  CHECK_THROWS_AS(assemble_sturm(v5, -1.0, Bc::dirichlet), Error);
  try {
    assemble_sturm(v2, 1.0, Bc::dirichlet);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid_too_small);
  }
}

TEST_CASE("tridiagonal QL agrees with Eigen and orders ascending") {
  Rng rng(29);
  const int n = 17;
  std::vector<double> d(n), e(n - 1);
  for (double& x : d) x = 3.0 * rng.uniform(-1.0, 1.0);
  for (double& x : e) x = 2.0 * rng.uniform(-1.0, 1.0);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = d[i];
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = e[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);

  std::vector<std::vector<double>> vecs;
  std::vector<double> dq = d;
  tridiag_ql(dq, e, &vecs);
  REQUIRE(std::is_sorted(dq.begin(), dq.end()));
  for (int j = 0; j < n; ++j) {
    CHECK(dq[j] == doctest::Approx(es.eigenvalues()(j)).epsilon(1e-11).scale(10.0));
    // Eigenvector check: A v = lambda v.
    Eigen::VectorXd vj(n);
    for (int i = 0; i < n; ++i) vj(i) = vecs[j][i];
    CHECK((a * vj - dq[j] * vj).norm() <= 1e-9 * (std::abs(dq[j]) + 1.0));
    CHECK(vj.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("limit spectra: scalar fiber singleton and cross-section block") {
  Nonlinearity f = Nonlinearity::cubic(0.25);
  FrontProfile front = exact_front(0.25);
  auto z = linspace(-10.0, 10.0, 41);
  CylinderPotential fiber = front_fiber_potential(f, front, z);
  SturmSpectrum plus = limit_spectrum(fiber, '+');
  REQUIRE(plus.eigenvalues.size() == 1);
  CHECK(plus.eigenvalues[0] == doctest::Approx(-0.25).epsilon(1e-14));
  REQUIRE(plus.vectors.size() == 1);
  CHECK(plus.vectors[0][0] == doctest::Approx(1.0));
  SturmSpectrum minus = limit_spectrum(fiber, '-');
  CHECK(minus.eigenvalues[0] == doctest::Approx(-0.75).epsilon(1e-14));

  // 2D: the limit spectrum is the Sturm solve of the limit slice.
  StandingWaveProfile wave = periodic_wave(Nonlinearity::cubic(0.5), 4.5 * kPi);
  CylinderPotential V = synth_example_potential(Nonlinearity::cubic(0.5), wave, 1.0,
                                                19, Bc::dirichlet, z);
  SturmSpectrum lm = limit_spectrum(V, '-');
  SturmSpectrum direct =
      solve_sturm(assemble_sturm(V.v_minus, V.x_length, V.bc_x));
  REQUIRE(lm.eigenvalues.size() == direct.eigenvalues.size());
  for (std::size_t j = 0; j < lm.eigenvalues.size(); ++j)
    CHECK(lm.eigenvalues[j] == doctest::Approx(direct.eigenvalues[j]).epsilon(1e-13));
}
