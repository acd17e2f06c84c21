#pragma once

#include <span>
#include <vector>

#include "cylspec/bisemigroup.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/potential.hpp"
#include "cylspec/sturm.hpp"

namespace cylspec {

// A first-order trajectory Y(z) = (y(z), y'(z)) sampled on a uniform axial
// grid, stored row-major: y[i*dim + j] is component j at z[i].
struct Trajectory {
  std::vector<double> z;
  int dim = 0;  // 2 * (number of Galerkin modes)
  std::vector<Complex> y;
  std::vector<double> norms;  // Euclidean norm of Y(z_i)

  int steps() const { return static_cast<int>(z.size()); }
  std::span<const Complex> at(int i) const {
    return {y.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

// Projects a 2D grid eigenvector u onto the leading transverse modes after
// removing the convective weight: v = e^{cz/2} u, y_j(z) = <phi_j, v(.,z)>,
// y' by central differences (one-sided at the ends).
Trajectory project_trajectory(std::span<const Complex> u,
                              const CylinderPotential& V,
                              const SturmSpectrum& basis, double speed,
                              int n_modes);

// Sub-trajectory on the index range [begin, end).
Trajectory slice_trajectory(const Trajectory& t, int begin, int end);

// Samples the perturbation block action (B(z) Y)(z_i): zero first block,
// second block D(z) y^(1) with D_jk(z) = <phi_j, (V_side - V(.,z)) phi_k>.
// side = '+' or '-'.
std::vector<Complex> perturbation_action(const Trajectory& y,
                                         const CylinderPotential& V,
                                         const SturmSpectrum& basis,
                                         char side);

// Sup-norm defect of the variation-of-constants identity
//   Y(z) = T_s(z-a) P_s Y(a) + T_u(z-b) P_u Y(b)
//          + int_a^z T_s(z-w) P_s (BY)(w) dw - int_z^b T_u(z-w) P_u (BY)(w) dw
// over interior grid points, with trapezoid quadrature on every stride-th
// grid point. b_action empty means B == 0.
double mild_residual(const Trajectory& y, const BiSemigroupRealization& bs,
                     std::span<const Complex> b_action, int stride = 1);

struct DecayEstimate {
  double delta_hat = 0.0;   // minus the fitted slope of log norms
  double m_hat = 0.0;       // exp(intercept at z = 0)
  double fit_quality = 0.0; // R^2 of the least-squares line
};

// Least-squares exponential fit of norms on z in [window_lo, window_hi].
DecayEstimate fit_decay(std::span<const double> z,
                        std::span<const double> norms, double window_lo,
                        double window_hi);

// Default fit window: outer 40% of [a, b] minus the last 5%.
std::pair<double, double> default_fit_window(double a, double b);

struct GronwallReport {
  bool pass = false;
  double delta_hat = 0.0;  // fitted decay rate of the norms
  double max_slack = 0.0;  // worst violation of the integral inequality
};

// Pointwise check of u(z) <= M e^{-nu (z-a)} u(a) + M int e^{-nu|z-w|} F(w)
// u(w) dw on the grid (trapezoid quadrature, tolerance 10 h^2 after
// normalizing u(a) = 1).
GronwallReport gronwall_verify(std::span<const double> z,
                               std::span<const double> norms, double nu,
                               double big_m, std::span<const double> f_curve);

}  // namespace cylspec
