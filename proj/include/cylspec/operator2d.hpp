#pragma once

#include <span>
#include <vector>

#include "cylspec/banded.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/potential.hpp"

namespace cylspec {

// Finite-difference realization of d^2/dx^2 + d^2/dz^2 + c d/dz + V on the
// truncated cylinder. Rows are ordered x-fastest (index = iz*nx + ix), which
// keeps the bandwidth at nx. Stored compressed-row; the band/corner split is
// materialized on demand for direct factorizations.
struct DiscreteOperator {
  int nx = 1;
  int nz = 0;
  Bc bc_x = Bc::dirichlet;
  Bc bc_z = Bc::dirichlet;
  double hx = 0.0;
  double hz = 0.0;
  double speed = 0.0;
  bool symmetrized = false;
  double layer_ratio = 1.0;  // d_{k+1}/d_k of the similarity weights, 1 if none

  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  int size() const { return nx * nz; }
  int index(int ix, int iz) const { return iz * nx + ix; }
  int bandwidth() const { return nx > 1 ? nx : 1; }
  bool has_corners() const { return bc_z == Bc::periodic; }

  void apply(std::span<const double> x, std::span<double> y) const;
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  double inf_norm() const;

  // A - sigma*I split into the in-band part and the z-wraparound corners.
  BandedMatrix<double> shifted_band(double sigma) const;
  BandedMatrix<Complex> shifted_band(Complex sigma) const;
  std::vector<CornerEntry<double>> corner_entries() const;
  std::vector<CornerEntry<Complex>> corner_entries_complex() const;
};

DiscreteOperator assemble_cylinder(const CylinderPotential& V, double speed,
                                   Bc bc_z);

// Diagonal similarity over z-layers that makes the z-coupling symmetric
// (off-diagonals become sqrt of the product of the one-sided couplings).
// Eigenvalues are preserved exactly. Requires |c| hz < 2 and Dirichlet ends.
DiscreteOperator symmetrize(const DiscreteOperator& op);

double residual(const DiscreteOperator& op, Complex lambda,
                std::span<const Complex> u);

}  // namespace cylspec
