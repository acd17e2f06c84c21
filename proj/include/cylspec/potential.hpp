#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cylspec/nonlinearity.hpp"
#include "cylspec/profiles.hpp"

namespace cylspec {

enum class Bc { dirichlet, periodic };

const char* bc_name(Bc bc);

// Potential V(x,z) sampled on a tensor grid over the truncated cylinder
// (0, x_length) x [z.front(), z.back()], together with its z -> ±inf limits
// v_plus(x), v_minus(x). omega_dim == 0 marks the scalar-fiber mode (no cross
// section; values has one row and the limits are single numbers).
struct CylinderPotential {
  int omega_dim = 1;
  Bc bc_x = Bc::dirichlet;
  double x_length = 0.0;
  std::vector<double> x;       // cross-section grid (empty when omega_dim==0)
  std::vector<double> z;       // uniform z grid
  std::vector<double> values;  // row-major by x: values[ix*nz + iz]
  std::vector<double> v_plus;
  std::vector<double> v_minus;

  int nx() const { return omega_dim == 0 ? 1 : static_cast<int>(x.size()); }
  int nz() const { return static_cast<int>(z.size()); }
  double hz() const { return z[1] - z[0]; }
  double at(int ix, int iz) const { return values[ix * nz() + iz]; }
};

// Cross-section grid: interior points for Dirichlet walls, the half-open
// fundamental cell for periodic wrap.
std::vector<double> make_x_grid(double length, int n, Bc bc);

// V(x,z) = theta_a(z) f'(1) + (1-theta_a(z)) f'(w(x)) with the logistic
// switch theta_a(z) = (1+e^{-alpha z})^{-1}; limits are f'(1) and f'(w(x)).
CylinderPotential synth_example_potential(const Nonlinearity& f,
                                          const StandingWaveProfile& wave,
                                          double alpha, int nx, Bc bc_x,
                                          const std::vector<double>& z_grid);

// V(x,z) = p(x) + q(z); both limits equal p(x) + q_tail.
CylinderPotential separable_potential(double x_length, int nx, Bc bc_x,
                                      const std::vector<double>& z_grid,
                                      const std::function<double(double)>& p,
                                      const std::function<double(double)>& q,
                                      double q_tail = 0.0);

// Fully general sampled potential with caller-supplied limits.
CylinderPotential potential_from_function(
    double x_length, int nx, Bc bc_x, const std::vector<double>& z_grid,
    const std::function<double(double, double)>& V,
    const std::function<double(double)>& v_plus,
    const std::function<double(double)>& v_minus);

// Scalar-fiber potential V(z) = f'(front(z)) for the moving-frame
// linearization about a traveling front; limits are f'(u±).
CylinderPotential front_fiber_potential(const Nonlinearity& f,
                                        const FrontProfile& front,
                                        const std::vector<double>& z_grid);

// Piecewise limit field: v_minus for z < 0, v_plus for z >= 0.
CylinderPotential glued_potential(const CylinderPotential& V);

struct BNormCurves {
  std::vector<double> g_plus;   // max_x |V(x,z) - v_plus(x)| per z sample
  std::vector<double> g_minus;  // max_x |V(x,z) - v_minus(x)| per z sample
};
BNormCurves bnorm_curve(const CylinderPotential& V);

struct HypothesisReport {
  std::vector<double> g_plus;
  std::vector<double> g_minus;
  double tail_sup_plus = 0.0;   // sup of g_plus over the outer +z window
  double tail_sup_minus = 0.0;
  bool h1_pass = false;
  double h2_l1_plus = 0.0;      // trapezoid of g_plus over z >= 0
  double h2_l1_minus = 0.0;     // trapezoid of g_minus over z <= 0
  double h2_diff_plus = 0.0;    // window-doubling change of the tail integral
  double h2_diff_minus = 0.0;
  bool h2_pass = false;
  std::string h3_status = "not-applicable";
  bool pass() const { return h1_pass && h2_pass; }
};

// H1: tail suprema of g± over the outer `window` fraction of the grid are
// below tol_sup. H2: doubling that tail window changes the trapezoid tail
// integral by less than tol_sup. H3 does not apply to bounded cross sections.
HypothesisReport check_hypotheses(const CylinderPotential& V, double tol_sup,
                                  double window = 0.05);

}  // namespace cylspec
