#include "cylspec/weyl.hpp"

#include <cmath>

#include "cylspec/error.hpp"
#include "cylspec/operator2d.hpp"

namespace cylspec {
namespace {

// Base bump on (-1,1); the public bump is its rescaling to [0,1] times e.
double base(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double base_d1(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  return base(s) * (-2.0 * s / (d * d));
}

double base_d2(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  const double g1 = -2.0 * s / (d * d);
  const double g2 = -2.0 / (d * d) - 8.0 * s * s / (d * d * d);
  return base(s) * (g1 * g1 + g2);
}

constexpr double kE = 2.718281828459045235;

}  // namespace

double bump(double t) { return kE * base(2.0 * t - 1.0); }
double bump_d1(double t) { return 2.0 * kE * base_d1(2.0 * t - 1.0); }
double bump_d2(double t) { return 4.0 * kE * base_d2(2.0 * t - 1.0); }

BumpNorms bump_norms() {
  auto l2 = [](double (*f)(double)) {
    const double sq =
        integrate_gl64([&](double t) { return f(t) * f(t); }, 0.0, 1.0, 8);
    return std::sqrt(sq);
  };
  BumpNorms n;
  n.psi = l2(&bump);
  n.dpsi = l2(&bump_d1);
  n.ddpsi = l2(&bump_d2);
  return n;
}

WeylSequence weyl_sequence(int n, const SturmSpectrum& sp, int branch,
                           double a, const CylinderPotential& glued,
                           double speed) {
  if (n < 1)
    throw Error(ErrorKind::invalid_parameter, "mode index must be >= 1");
  if (branch < 0 || branch >= static_cast<int>(sp.eigenvalues.size()))
    throw Error(ErrorKind::invalid_parameter, "branch index out of range");
  const double lo = static_cast<double>(n) * n;
  const double hi = lo + n;
  const double hz = glued.hz();
  if (glued.z.front() > lo - hz || glued.z.back() < hi + hz)
    throw Error(ErrorKind::grid_too_short,
                "z-grid does not contain the quasi-mode support");

  WeylSequence ws;
  ws.index = n;
  ws.a = a;
  const double mu = sp.eigenvalues[branch];
  ws.lambda = Complex(mu - a * a, speed * a);
  ws.phi = sp.vectors[branch];

  const int nx = glued.nx();
  const int nz = glued.nz();
  if (static_cast<int>(ws.phi.size()) != nx)
    throw Error(ErrorKind::invalid_parameter,
                "transverse profile does not match the grid");

  // Axial samples and their discrete norm against |psi|.
  ws.u.assign(nz, Complex(0.0, 0.0));
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  double nu2 = 0.0;
  for (int iz = 0; iz < nz; ++iz) {
    const double z = glued.z[iz];
    const double t = z / n - n;
    if (t <= 0.0 || t >= 1.0) continue;
    const double phase = a * z;
    ws.u[iz] = amp * bump(t) * Complex(std::cos(phase), std::sin(phase));
    nu2 += std::norm(ws.u[iz]);
  }
  ws.norm_u = std::sqrt(nu2 * hz);
  if (!(nu2 > 0.0))
    throw Error(ErrorKind::grid_too_short, "quasi-mode support unresolved");

  // Residual against the assembled operator.
  const DiscreteOperator op = assemble_cylinder(glued, speed, Bc::dirichlet);
  std::vector<Complex> phin(static_cast<std::size_t>(nx) * nz);
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix)
      phin[op.index(ix, iz)] = ws.phi[ix] * ws.u[iz];
  ws.residual = residual(op, ws.lambda, phin);

  // Three-term bound: sup of the potential gap on the support plus the two
  // envelope-derivative terms.
  double sup_f = 0.0;
  for (int iz = 0; iz < nz; ++iz) {
    if (glued.z[iz] < lo || glued.z[iz] > hi) continue;
    for (int ix = 0; ix < nx; ++ix)
      sup_f = std::max(sup_f,
                       std::abs(glued.at(ix, iz) - glued.v_plus[ix]));
  }
  static const BumpNorms nrm = bump_norms();
  const double w = std::abs(Complex(speed, 2.0 * a));
  ws.bound = sup_f + (w * nrm.dpsi / n + nrm.ddpsi / (static_cast<double>(n) * n)) /
                         nrm.psi;
  return ws;
}

WeylDecay weyl_residual_decay(std::span<const double> v_plus,
                              std::span<const double> v_minus, double x_length,
                              Bc bc_x, double speed, int branch, double a,
                              std::span<const int> ns, double hz) {
  if (ns.size() < 2)
    throw Error(ErrorKind::invalid_parameter, "need at least two mode indices");
  if (v_plus.size() != v_minus.size())
    throw Error(ErrorKind::invalid_parameter, "limit profiles differ in size");

  WeylDecay out;
  std::vector<double> logn, logr;
  for (int n : ns) {
    // Glued potential on [0, n^2+n+1]: only the +z limit is visible there.
    const double zmax = static_cast<double>(n) * n + n + 1.0;
    const int count = static_cast<int>(std::ceil(zmax / hz)) + 1;
    CylinderPotential pot;
    pot.omega_dim = v_plus.size() == 1 ? 0 : 1;
    pot.bc_x = bc_x;
    pot.x_length = x_length;
    if (pot.omega_dim == 1)
      pot.x = make_x_grid(x_length, static_cast<int>(v_plus.size()), bc_x);
    pot.z.resize(count);
    for (int k = 0; k < count; ++k) pot.z[k] = k * hz;
    pot.v_plus.assign(v_plus.begin(), v_plus.end());
    pot.v_minus.assign(v_minus.begin(), v_minus.end());
    const int nx = pot.nx();
    pot.values.resize(static_cast<std::size_t>(nx) * count);
    for (int ix = 0; ix < nx; ++ix)
      for (int iz = 0; iz < count; ++iz)
        pot.values[static_cast<std::size_t>(ix) * count + iz] =
            pot.z[iz] < 0.0 ? v_minus[ix] : v_plus[ix];

    const SturmSpectrum sp = limit_spectrum(pot, '+');
    const WeylSequence ws = weyl_sequence(n, sp, branch, a, pot, speed);
    out.index.push_back(n);
    out.residual.push_back(ws.residual);
    out.bound.push_back(ws.bound);
    logn.push_back(std::log(static_cast<double>(n)));
    logr.push_back(std::log(ws.residual));
  }
  out.fit = fit_line(logn, logr);
  return out;
}

}  // namespace cylspec
