#include "cylspec/potential.hpp"

#include <algorithm>
#include <cmath>

#include "cylspec/error.hpp"
#include "cylspec/numerics.hpp"

namespace cylspec {

const char* bc_name(Bc bc) {
  return bc == Bc::dirichlet ? "dirichlet" : "periodic";
}

std::vector<double> make_x_grid(double length, int n, Bc bc) {
  if (!(length > 0.0))
    throw Error(ErrorKind::invalid_parameter, "cross section needs length > 0");
  if (n < 3) throw Error(ErrorKind::grid_too_small, "need at least 3 x points");
  std::vector<double> x(n);
  if (bc == Bc::dirichlet) {
    const double h = length / (n + 1);
    for (int i = 0; i < n; ++i) x[i] = (i + 1) * h;
  } else {
    const double h = length / n;
    for (int i = 0; i < n; ++i) x[i] = i * h;
  }
  return x;
}

namespace {

void check_z_grid(const std::vector<double>& z) {
  if (z.size() < 8)
    throw Error(ErrorKind::grid_too_short, "need at least 8 z samples");
  const double h = z[1] - z[0];
  for (std::size_t i = 1; i + 1 < z.size(); ++i)
    if (std::abs((z[i + 1] - z[i]) - h) > 1e-9 * std::abs(h))
      throw Error(ErrorKind::invalid_parameter, "z grid must be uniform");
}

}  // namespace

CylinderPotential synth_example_potential(const Nonlinearity& f,
                                          const StandingWaveProfile& wave,
                                          double alpha, int nx, Bc bc_x,
                                          const std::vector<double>& z_grid) {
  if (!(alpha > 0.0))
    throw Error(ErrorKind::invalid_parameter, "switch rate alpha must be > 0");
  check_z_grid(z_grid);
  CylinderPotential V;
  V.bc_x = bc_x;
  V.x_length = wave.period;
  V.x = make_x_grid(V.x_length, nx, bc_x);
  V.z = z_grid;
  const int nz = V.nz();
  V.values.resize(nx * nz);
  V.v_plus.assign(nx, f.deriv(1.0));
  V.v_minus.resize(nx);
  for (int i = 0; i < nx; ++i) V.v_minus[i] = f.deriv(wave.value(V.x[i]));
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      const double theta = 1.0 / (1.0 + std::exp(-alpha * V.z[k]));
      V.values[i * nz + k] =
          theta * V.v_plus[i] + (1.0 - theta) * V.v_minus[i];
    }
  }
  return V;
}

CylinderPotential separable_potential(double x_length, int nx, Bc bc_x,
                                      const std::vector<double>& z_grid,
                                      const std::function<double(double)>& p,
                                      const std::function<double(double)>& q,
                                      double q_tail) {
  check_z_grid(z_grid);
  CylinderPotential V;
  V.bc_x = bc_x;
  V.x_length = x_length;
  V.x = make_x_grid(x_length, nx, bc_x);
  V.z = z_grid;
  const int nz = V.nz();
  V.values.resize(nx * nz);
  V.v_plus.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const double pi_ = p(V.x[i]);
    V.v_plus[i] = pi_ + q_tail;
    for (int k = 0; k < nz; ++k) V.values[i * nz + k] = pi_ + q(V.z[k]);
  }
  V.v_minus = V.v_plus;
  return V;
}

CylinderPotential potential_from_function(
    double x_length, int nx, Bc bc_x, const std::vector<double>& z_grid,
    const std::function<double(double, double)>& V,
    const std::function<double(double)>& v_plus,
    const std::function<double(double)>& v_minus) {
  check_z_grid(z_grid);
  CylinderPotential P;
  P.bc_x = bc_x;
  P.x_length = x_length;
  P.x = make_x_grid(x_length, nx, bc_x);
  P.z = z_grid;
  const int nz = P.nz();
  P.values.resize(nx * nz);
  P.v_plus.resize(nx);
  P.v_minus.resize(nx);
  for (int i = 0; i < nx; ++i) {
    P.v_plus[i] = v_plus(P.x[i]);
    P.v_minus[i] = v_minus(P.x[i]);
    for (int k = 0; k < nz; ++k) P.values[i * nz + k] = V(P.x[i], P.z[k]);
  }
  return P;
}

CylinderPotential front_fiber_potential(const Nonlinearity& f,
                                        const FrontProfile& front,
                                        const std::vector<double>& z_grid) {
  check_z_grid(z_grid);
  CylinderPotential V;
  V.omega_dim = 0;
  V.x_length = 0.0;
  V.z = z_grid;
  const int nz = V.nz();
  V.values.resize(nz);
  for (int k = 0; k < nz; ++k) V.values[k] = f.deriv(front.value(z_grid[k]));
  V.v_minus = {f.deriv(front.u_minus)};
  V.v_plus = {f.deriv(front.u_plus)};
  return V;
}

CylinderPotential glued_potential(const CylinderPotential& V) {
  CylinderPotential G = V;
  const int nx = V.nx(), nz = V.nz();
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nz; ++k)
      G.values[i * nz + k] = V.z[k] < 0.0 ? V.v_minus[i] : V.v_plus[i];
  return G;
}

BNormCurves bnorm_curve(const CylinderPotential& V) {
  const int nx = V.nx(), nz = V.nz();
  BNormCurves c;
  c.g_plus.assign(nz, 0.0);
  c.g_minus.assign(nz, 0.0);
  for (int k = 0; k < nz; ++k) {
    double gp = 0.0, gm = 0.0;
    for (int i = 0; i < nx; ++i) {
      gp = std::max(gp, std::abs(V.at(i, k) - V.v_plus[i]));
      gm = std::max(gm, std::abs(V.at(i, k) - V.v_minus[i]));
    }
    c.g_plus[k] = gp;
    c.g_minus[k] = gm;
  }
  return c;
}

HypothesisReport check_hypotheses(const CylinderPotential& V, double tol_sup,
                                  double window) {
  if (!(window > 0.0 && window < 0.5))
    throw Error(ErrorKind::invalid_window, "tail window must be in (0, 0.5)");
  const int nz = V.nz();
  const int m = std::max(2, static_cast<int>(std::ceil(window * nz)));
  if (2 * m >= nz)
    throw Error(ErrorKind::grid_too_short,
                "z grid too short for the doubled tail window");
  const double h = V.hz();

  HypothesisReport rep;
  BNormCurves c = bnorm_curve(V);
  rep.g_plus = std::move(c.g_plus);
  rep.g_minus = std::move(c.g_minus);

  rep.tail_sup_plus = *std::max_element(rep.g_plus.end() - m, rep.g_plus.end());
  rep.tail_sup_minus =
      *std::max_element(rep.g_minus.begin(), rep.g_minus.begin() + m);
  rep.h1_pass = rep.tail_sup_plus <= tol_sup && rep.tail_sup_minus <= tol_sup;

  auto trap_range = [&](const std::vector<double>& g, int lo, int hi) {
    return trapezoid(std::span<const double>(g.data() + lo, hi - lo), h);
  };
  const double ip1 = trap_range(rep.g_plus, nz - m, nz);
  const double ip2 = trap_range(rep.g_plus, nz - 2 * m, nz);
  const double im1 = trap_range(rep.g_minus, 0, m);
  const double im2 = trap_range(rep.g_minus, 0, 2 * m);
  rep.h2_diff_plus = std::abs(ip2 - ip1);
  rep.h2_diff_minus = std::abs(im2 - im1);
  rep.h2_pass =
      rep.h2_diff_plus < tol_sup && rep.h2_diff_minus < tol_sup;

  int k0 = 0;
  while (k0 < nz && V.z[k0] < 0.0) ++k0;
  rep.h2_l1_plus = trap_range(rep.g_plus, std::min(k0, nz - 2), nz);
  rep.h2_l1_minus = trap_range(rep.g_minus, 0, std::max(k0 + 1, 2));
  return rep;
}

}  // namespace cylspec
