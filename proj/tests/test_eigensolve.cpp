#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cylspec/eigensolve.hpp"
#include "cylspec/error.hpp"
#include "cylspec/nonlinearity.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/operator2d.hpp"
#include "cylspec/potential.hpp"
#include "cylspec/profiles.hpp"
#include "cylspec/sturm.hpp"

using namespace cylspec;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXcd dense_complex(const DiscreteOperator& op) {
  const int n = op.size();
  Eigen::MatrixXcd a(n, n);
  std::vector<Complex> e(n, 0.0), col(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(std::span<const Complex>(e), std::span<Complex>(col));
    for (int i = 0; i < n; ++i) a(i, j) = col[i];
    e[j] = 0.0;
  }
  return a;
}

std::vector<Complex> sorted_by_shift_distance(std::vector<Complex> v, Complex shift) {
  std::sort(v.begin(), v.end(), [&](Complex a, Complex b) {
    return std::abs(a - shift) < std::abs(b - shift);
  });
  return v;
}

DiscreteOperator fiber_operator(double a, double speed, int nz, double extent,
                                Bc bcz) {
  Nonlinearity f = Nonlinearity::cubic(a);
  FrontProfile front = exact_front(a, -extent, extent, 2.0 * extent / (nz - 1));
  auto z = linspace(-extent, extent, nz);
  return assemble_cylinder(front_fiber_potential(f, front, z), speed, bcz);
}
}  // namespace

TEST_CASE("Hessenberg QR eigenvalues match a dense eigensolver") {
  Rng rng(53);
  for (int m : {4, 9, 16}) {
    std::vector<Complex> h(m * m, Complex(0.0, 0.0));
    Eigen::MatrixXcd he = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = std::max(0, i - 1); j < m; ++j) {
        const Complex v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        h[i * m + j] = v;
        he(i, j) = v;
      }
    auto got = hessenberg_eigenvalues(h, m);
    REQUIRE(static_cast<int>(got.size()) == m);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(he);
    std::vector<Complex> expect(m);
    for (int i = 0; i < m; ++i) expect[i] = es.eigenvalues()(i);
    // Greedy nearest matching.
    for (const Complex g : got) {
      auto it = std::min_element(expect.begin(), expect.end(), [&](Complex a, Complex b) {
        return std::abs(a - g) < std::abs(b - g);
      });
      CHECK(std::abs(*it - g) <= 1e-9);
      expect.erase(it);
    }
  }
  CHECK_THROWS_AS(hessenberg_eigenvalues(std::vector<Complex>(5), 2), Error);
}

TEST_CASE("symmetric solver: standing fiber matches the dense spectrum") {
  DiscreteOperator op = fiber_operator(0.5, 0.0, 151, 15.0, Bc::dirichlet);
  Eigen::MatrixXcd a = dense_complex(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.real());
  const double target = 0.1;
  const int k = 6;
  EigenResult r = eig_symmetric(op, k, target);
  REQUIRE(static_cast<int>(r.pairs.size()) == k);

  std::vector<Complex> all(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) all[i] = es.eigenvalues()(i);
  auto nearest = sorted_by_shift_distance(all, target);
  for (int t = 0; t < k; ++t) {
    CHECK(std::abs(r.pairs[t].lambda.imag()) == 0.0);
    CHECK(r.pairs[t].lambda.real() ==
          doctest::Approx(nearest[t].real()).epsilon(1e-9).scale(1.0));
    CHECK(r.pairs[t].residual <= 1e-8);
    // Residual field is honest: recompute through the operator.
    CHECK(residual(op, r.pairs[t].lambda, r.pairs[t].vec) ==
          doctest::Approx(r.pairs[t].residual).epsilon(1e-6).scale(1e-12));
  }
  // Sorted by distance to the shift.
  for (int t = 1; t < k; ++t)
    CHECK(std::abs(r.pairs[t - 1].lambda - Complex(target)) <=
          std::abs(r.pairs[t].lambda - Complex(target)) + 1e-14);
}

TEST_CASE("symmetric solver on a symmetrized drifting fiber") {
  DiscreteOperator op = fiber_operator(0.25, 0.35, 121, 12.0, Bc::dirichlet);
  DiscreteOperator sym = symmetrize(op);
  Eigen::MatrixXcd a = dense_complex(sym);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.real());
  const double target = -0.05;
  EigenResult r = eig_symmetric(sym, 4, target);
  std::vector<Complex> all(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) all[i] = es.eigenvalues()(i);
  auto nearest = sorted_by_shift_distance(all, target);
  for (int t = 0; t < 4; ++t)
    CHECK(r.pairs[t].lambda.real() ==
          doctest::Approx(nearest[t].real()).epsilon(1e-9).scale(1.0));
}

TEST_CASE("symmetric solver refuses a non-symmetric operator") {
  DiscreteOperator op = fiber_operator(0.25, 0.35, 41, 4.0, Bc::dirichlet);
  CHECK_THROWS_AS(eig_symmetric(op, 3, 0.0), Error);
  try {
    eig_symmetric(op, 3, 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_parameter);
  }
  DiscreteOperator sym = symmetrize(op);
  CHECK_THROWS_AS(eig_symmetric(sym, 0, 0.0), Error);
  CHECK_THROWS_AS(eig_symmetric(sym, sym.size() + 1, 0.0), Error);
}

TEST_CASE("general solver: Ritz values sit on the periodic-ring lattice") {
  // Constant-in-z potential with periodic wrap: exact eigenvalues are
  // mu_j + (2 cos(2 pi k / nz) - 2)/hz^2 + i c sin(2 pi k / nz)/hz.
  auto p = [](double x) { return std::sin(x); };
  const int nx = 6, nz = 14;
  const double period = 6.0, c = 0.9;
  std::vector<double> z(nz);
  for (int k = 0; k < nz; ++k) z[k] = k * (period / nz);
  CylinderPotential V =
      separable_potential(kPi, nx, Bc::dirichlet, z, p, [](double) { return 0.0; }, 0.0);
  DiscreteOperator op = assemble_cylinder(V, c, Bc::periodic);

  SturmSpectrum sx = solve_sturm(assemble_sturm(V.v_plus, kPi, Bc::dirichlet));
  std::vector<Complex> lattice;
  const double hz = period / nz;
  for (double mu : sx.eigenvalues)
    for (int k = 0; k < nz; ++k) {
      const double shz = 2.0 * kPi * k / nz;
      lattice.emplace_back(mu + (2.0 * std::cos(shz) - 2.0) / (hz * hz),
                           c * std::sin(shz) / hz);
    }

  const Complex shift{0.5, 0.2};
  EigenResult r = eig_general(op, 8, shift);
  REQUIRE(r.pairs.size() == 8);
  for (const EigenPair& pr : r.pairs) {
    double dist = 1e300;
    for (const Complex l : lattice) dist = std::min(dist, std::abs(pr.lambda - l));
    CHECK(dist <= 1e-8);
    CHECK(pr.residual <= 1e-8);
  }
}

TEST_CASE("general solver matches the dense nearest set on a drifting fiber") {
  DiscreteOperator op = fiber_operator(0.25, 0.5, 101, 10.0, Bc::dirichlet);
  Eigen::MatrixXcd a = dense_complex(op);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a);
  std::vector<Complex> all(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) all[i] = es.eigenvalues()(i);

  const Complex shift{0.05, 0.0};
  const int k = 5;
  EigenResult r = eig_general(op, k, shift);
  auto nearest = sorted_by_shift_distance(all, shift);
  for (int t = 0; t < k; ++t)
    CHECK(std::abs(r.pairs[t].lambda - nearest[t]) <= 2e-8 * (1.0 + std::abs(nearest[t])));
}

TEST_CASE("same seed gives bitwise-identical results") {
  DiscreteOperator op = fiber_operator(0.3, 0.2, 81, 8.0, Bc::dirichlet);
  EigenResult r1 = eig_general(op, 4, Complex{0.1, 0.0}, 1e-8, kEigSeed);
  EigenResult r2 = eig_general(op, 4, Complex{0.1, 0.0}, 1e-8, kEigSeed);
  REQUIRE(r1.pairs.size() == r2.pairs.size());
  for (std::size_t t = 0; t < r1.pairs.size(); ++t) {
    CHECK(r1.pairs[t].lambda.real() == r2.pairs[t].lambda.real());
    CHECK(r1.pairs[t].lambda.imag() == r2.pairs[t].lambda.imag());
    CHECK(r1.pairs[t].residual == r2.pairs[t].residual);
    for (std::size_t i = 0; i < r1.pairs[t].vec.size(); ++i)
      CHECK(r1.pairs[t].vec[i] == r2.pairs[t].vec[i]);
  }
  CHECK(r1.solver.iterations == r2.solver.iterations);
  CHECK(r1.solver.subspace == r2.solver.subspace);
}

TEST_CASE("polish drives a perturbed pair back below tolerance") {
  DiscreteOperator op = fiber_operator(0.5, 0.0, 101, 10.0, Bc::dirichlet);
  EigenResult r = eig_symmetric(op, 1, 0.05, 1e-10);
  EigenPair pair = r.pairs[0];

  Rng rng(67);
  for (Complex& x : pair.vec) x += 1e-4 * rng.uniform(-1.0, 1.0);
  pair.residual = residual(op, pair.lambda, pair.vec);
  CHECK(pair.residual > 1e-7);

  polish_pair(op, pair, 1e-10);
  CHECK(pair.residual <= 1e-10);
  CHECK(residual(op, pair.lambda, pair.vec) ==
        doctest::Approx(pair.residual).epsilon(1e-4).scale(1e-13));
}
