#include "cylspec/realness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cylspec/error.hpp"
#include "cylspec/sturm.hpp"

namespace cylspec {

RealnessReport verify_realness(const EigenResult& res,
                               std::span<const double> sym_eigs,
                               double sup_re_ess, double tol) {
  if (tol <= 0.0) throw Error(ErrorKind::invalid_parameter, "verify_realness: tol must be positive");
  RealnessReport report;
  report.sup_re_ess = sup_re_ess;
  report.tol = tol;
  for (const EigenPair& p : res.pairs) {
    if (p.lambda.real() <= sup_re_ess) continue;
    RightEigenvalue re;
    re.lambda = p.lambda;
    re.residual = p.residual;
    re.gap = std::numeric_limits<double>::infinity();
    for (double s : sym_eigs) {
      double g = std::abs(p.lambda - Complex(s, 0.0));
      if (g < re.gap) {
        re.gap = g;
        re.sym_partner = s;
      }
    }
    if (sym_eigs.empty()) re.gap = std::numeric_limits<double>::quiet_NaN();
    report.max_imag = std::max(report.max_imag, std::abs(p.lambda.imag()));
    if (std::abs(p.lambda.imag()) > tol) report.all_real = false;
    if (!(re.gap <= tol)) report.all_matched = false;
    report.right.push_back(re);
  }
  return report;
}

std::vector<Complex> discrete_dispersion_set(std::span<const double> mu,
                                             double speed, double hz, int nz) {
  if (hz <= 0.0 || nz < 3) throw Error(ErrorKind::grid_too_small, "discrete_dispersion_set: need hz > 0 and nz >= 3");
  std::vector<Complex> set;
  set.reserve(mu.size() * static_cast<std::size_t>(nz));
  const double pi = 3.14159265358979323846;
  for (double m : mu) {
    for (int k = 0; k < nz; ++k) {
      double shz = 2.0 * pi * k / nz;  // s * hz with s = 2 pi k / (nz hz)
      double half = std::sin(0.5 * shz);
      double re = m - (4.0 / (hz * hz)) * half * half;
      double im = (speed / hz) * std::sin(shz);
      set.emplace_back(re, im);
    }
  }
  return set;
}

DispersionCheckResult dispersion_check(const CylinderPotential& V,
                                       double speed, int k, Complex shift,
                                       unsigned long long seed) {
  const int nz = V.nz();
  const int nx = V.nx();
  if (nz < 3) throw Error(ErrorKind::grid_too_small, "dispersion_check: need at least 3 axial points");
  double dev = 0.0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iz = 0; iz < nz; ++iz)
      dev = std::max(dev, std::abs(V.at(ix, iz) - V.at(ix, 0)));
  if (dev > 1e-12)
    throw Error(ErrorKind::invalid_parameter, "dispersion_check: potential must be constant along the axis");

  std::vector<double> mu;
  if (V.omega_dim == 0) {
    mu.push_back(V.at(0, 0));
  } else {
    std::vector<double> fiber(static_cast<std::size_t>(nx));
    for (int ix = 0; ix < nx; ++ix) fiber[static_cast<std::size_t>(ix)] = V.at(ix, 0);
    SturmOperator sop = assemble_sturm(fiber, V.x_length, V.bc_x);
    mu = solve_sturm(sop).eigenvalues;
  }

  DiscreteOperator op = assemble_cylinder(V, speed, Bc::periodic);
  DispersionCheckResult out;
  out.eigs = eig_general(op, k, shift, 1e-10, seed);
  std::vector<Complex> set = discrete_dispersion_set(mu, speed, op.hz, nz);
  for (const EigenPair& p : out.eigs.pairs) {
    double best = std::numeric_limits<double>::infinity();
    Complex who = set.front();
    for (const Complex& s : set) {
      double d = std::abs(p.lambda - s);
      if (d < best) {
        best = d;
        who = s;
      }
    }
    out.computed.push_back(p.lambda);
    out.nearest.push_back(who);
    out.max_distance = std::max(out.max_distance, best);
  }
  return out;
}

}  // namespace cylspec
