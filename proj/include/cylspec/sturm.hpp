#pragma once

#include <span>
#include <vector>

#include "cylspec/potential.hpp"

namespace cylspec {

// Three-point discretization of d^2/dx^2 + V on (0, length): tridiagonal for
// Dirichlet walls, tridiagonal plus a wrap entry for the periodic cell.
struct SturmOperator {
  Bc bc = Bc::dirichlet;
  double h = 0.0;
  std::vector<double> diag;  // -2/h^2 + V(x_i)
  std::vector<double> off;   // 1/h^2, size n-1
  double corner = 0.0;       // wrap coupling (periodic only)
  int n() const { return static_cast<int>(diag.size()); }

  void apply(std::span<const double> in, std::span<double> out) const;
};

struct SturmSpectrum {
  std::vector<double> eigenvalues;           // descending
  std::vector<std::vector<double>> vectors;  // orthonormal, same order
  double sup() const { return eigenvalues.front(); }
};

SturmOperator assemble_sturm(std::span<const double> v, double length, Bc bc);

// k largest eigenpairs (k <= 0 means all). Dirichlet uses QL with implicit
// shifts on the tridiagonal; the periodic wrap is handled by cyclic Jacobi on
// the dense matrix (kept deterministic and dependency-free; n < 512 enforced).
SturmSpectrum solve_sturm(const SturmOperator& op, int k = 0);

double sup_spectrum(const SturmSpectrum& sp);

// Limit spectrum of the chosen side ('+' or '-'). Scalar fibers produce the
// singleton {v±} with eigenvector [1].
SturmSpectrum limit_spectrum(const CylinderPotential& V, char side);

// Symmetric tridiagonal eigensolve (QL with implicit shifts), exposed for the
// projected problems inside the Lanczos driver. d: diagonal, e: subdiagonal
// (size n-1). Returns eigenvalues ascending; vectors[j] is the j-th
// eigenvector when accumulate is true.
void tridiag_ql(std::vector<double>& d, std::vector<double> e,
                std::vector<std::vector<double>>* vectors);

}  // namespace cylspec
