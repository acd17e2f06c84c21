#include "cylspec/operator2d.hpp"

#include <algorithm>
#include <cmath>

#include "cylspec/error.hpp"

namespace cylspec {
namespace {

struct Entry {
  int col;
  double val;
};

}  // namespace

DiscreteOperator assemble_cylinder(const CylinderPotential& V, double speed,
                                   Bc bc_z) {
  DiscreteOperator op;
  op.nx = V.nx();
  op.nz = V.nz();
  op.bc_x = V.bc_x;
  op.bc_z = bc_z;
  op.hx = (V.omega_dim == 0) ? 0.0 : V.x[1] - V.x[0];
  op.hz = V.hz();
  op.speed = speed;
  if (op.nz < 3)
    throw Error(ErrorKind::grid_too_small, "need at least 3 z-samples");
  if (V.omega_dim == 1 && op.nx < 3)
    throw Error(ErrorKind::grid_too_small, "need at least 3 x-samples");

  const double ax = (op.nx > 1) ? 1.0 / (op.hx * op.hx) : 0.0;
  const double az = 1.0 / (op.hz * op.hz);
  const double p = az + speed / (2.0 * op.hz);  // z-coupling toward +z
  const double m = az - speed / (2.0 * op.hz);  // z-coupling toward -z
  const int n = op.size();

  op.row_ptr.reserve(n + 1);
  op.row_ptr.push_back(0);
  op.col.reserve(static_cast<std::size_t>(n) * 5);
  op.val.reserve(static_cast<std::size_t>(n) * 5);

  std::vector<Entry> row;
  for (int iz = 0; iz < op.nz; ++iz) {
    for (int ix = 0; ix < op.nx; ++ix) {
      row.clear();
      const double d =
          -2.0 * ax - 2.0 * az + V.at(op.nx > 1 ? ix : 0, iz);
      row.push_back({op.index(ix, iz), d});
      if (op.nx > 1) {
        if (ix > 0)
          row.push_back({op.index(ix - 1, iz), ax});
        else if (op.bc_x == Bc::periodic)
          row.push_back({op.index(op.nx - 1, iz), ax});
        if (ix + 1 < op.nx)
          row.push_back({op.index(ix + 1, iz), ax});
        else if (op.bc_x == Bc::periodic)
          row.push_back({op.index(0, iz), ax});
      }
      if (iz > 0)
        row.push_back({op.index(ix, iz - 1), m});
      else if (bc_z == Bc::periodic)
        row.push_back({op.index(ix, op.nz - 1), m});
      if (iz + 1 < op.nz)
        row.push_back({op.index(ix, iz + 1), p});
      else if (bc_z == Bc::periodic)
        row.push_back({op.index(ix, 0), p});

      std::sort(row.begin(), row.end(),
                [](const Entry& a, const Entry& b) { return a.col < b.col; });
      for (const Entry& e : row) {
        op.col.push_back(e.col);
        op.val.push_back(e.val);
      }
      op.row_ptr.push_back(static_cast<int>(op.col.size()));
    }
  }
  return op;
}

DiscreteOperator symmetrize(const DiscreteOperator& op) {
  if (op.bc_z == Bc::periodic)
    throw Error(ErrorKind::invalid_parameter,
                "similarity symmetrization needs Dirichlet z-ends");
  if (std::abs(op.speed) * op.hz >= 2.0)
    throw Error(ErrorKind::weight_overflow,
                "|c| hz >= 2: one-sided z-coupling changes sign");
  DiscreteOperator out = op;
  const double az = 1.0 / (op.hz * op.hz);
  const double b = op.speed / (2.0 * op.hz);
  const double p = az + b;
  const double m = az - b;
  const double g = std::sqrt(p * m);
  out.symmetrized = true;
  out.layer_ratio = std::sqrt(p / m);
  // z-couplings are exactly the entries at column distance nx (distance 1
  // when the cross section is a single point); they become the geometric mean.
  const int stride = op.nx;
  for (int i = 0; i < op.size(); ++i) {
    for (int k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k) {
      if (std::abs(op.col[k] - i) == stride) out.val[k] = g;
    }
  }
  return out;
}

void DiscreteOperator::apply(std::span<const double> x,
                             std::span<double> y) const {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

void DiscreteOperator::apply(std::span<const Complex> x,
                             std::span<Complex> y) const {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

double DiscreteOperator::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < size(); ++i) {
    double row = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) row += std::abs(val[k]);
    best = std::max(best, row);
  }
  return best;
}

namespace {

template <typename T>
BandedMatrix<T> make_shifted_band(const DiscreteOperator& op, T sigma) {
  const int n = op.size();
  const int kw = op.bandwidth();
  BandedMatrix<T> a(n, kw, kw);
  for (int i = 0; i < n; ++i) {
    for (int k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k) {
      const int j = op.col[k];
      if (std::abs(j - i) <= kw) a.add(i, j, T(op.val[k]));
    }
    a.add(i, i, -sigma);
  }
  return a;
}

template <typename T>
std::vector<CornerEntry<T>> make_corners(const DiscreteOperator& op) {
  std::vector<CornerEntry<T>> corners;
  const int kw = op.bandwidth();
  for (int i = 0; i < op.size(); ++i) {
    for (int k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k) {
      const int j = op.col[k];
      if (std::abs(j - i) > kw) corners.push_back({i, j, T(op.val[k])});
    }
  }
  return corners;
}

}  // namespace

BandedMatrix<double> DiscreteOperator::shifted_band(double sigma) const {
  return make_shifted_band<double>(*this, sigma);
}

BandedMatrix<Complex> DiscreteOperator::shifted_band(Complex sigma) const {
  return make_shifted_band<Complex>(*this, sigma);
}

std::vector<CornerEntry<double>> DiscreteOperator::corner_entries() const {
  return make_corners<double>(*this);
}

std::vector<CornerEntry<Complex>> DiscreteOperator::corner_entries_complex()
    const {
  return make_corners<Complex>(*this);
}

double residual(const DiscreteOperator& op, Complex lambda,
                std::span<const Complex> u) {
  const int n = op.size();
  if (static_cast<int>(u.size()) != n)
    throw Error(ErrorKind::invalid_parameter, "vector length mismatch");
  double nu = 0.0;
  for (const Complex& v : u) nu += std::norm(v);
  if (!(nu > 0.0))
    throw Error(ErrorKind::invalid_parameter, "residual of a zero vector");
  std::vector<Complex> y(n);
  op.apply(u, y);
  double nr = 0.0;
  for (int i = 0; i < n; ++i) nr += std::norm(y[i] - lambda * u[i]);
  return std::sqrt(nr / nu);
}

}  // namespace cylspec
