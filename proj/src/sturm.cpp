#include "cylspec/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cylspec/error.hpp"
#include "cylspec/numerics.hpp"

namespace cylspec {
namespace {

constexpr int kQlMaxIter = 50;
constexpr int kJacobiMaxSweeps = 40;
constexpr int kJacobiMaxDim = 512;

// Rotate the eigenvector pair (i, i+1): v_i <- c v_i - s v_{i+1}, etc.
void rotate_pair(std::vector<double>& a, std::vector<double>& b, double c,
                 double s) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double ak = a[k];
    const double bk = b[k];
    a[k] = c * ak - s * bk;
    b[k] = s * ak + c * bk;
  }
}

}  // namespace

void SturmOperator::apply(std::span<const double> in,
                          std::span<double> out) const {
  const int m = n();
  for (int i = 0; i < m; ++i) {
    double acc = diag[i] * in[i];
    if (i > 0) acc += off[i - 1] * in[i - 1];
    if (i + 1 < m) acc += off[i] * in[i + 1];
    out[i] = acc;
  }
  if (bc == Bc::periodic && m > 2) {
    out[0] += corner * in[m - 1];
    out[m - 1] += corner * in[0];
  }
}

SturmOperator assemble_sturm(std::span<const double> v, double length,
                             Bc bc) {
  const int n = static_cast<int>(v.size());
  if (n < 3) throw Error(ErrorKind::grid_too_small, "cross section needs n >= 3");
  if (!(length > 0.0))
    throw Error(ErrorKind::invalid_parameter, "cross section length must be positive");
  SturmOperator op;
  op.bc = bc;
  op.h = (bc == Bc::dirichlet) ? length / (n + 1) : length / n;
  const double w = 1.0 / (op.h * op.h);
  op.diag.resize(n);
  op.off.assign(n - 1, w);
  for (int i = 0; i < n; ++i) op.diag[i] = -2.0 * w + v[i];
  op.corner = (bc == Bc::periodic) ? w : 0.0;
  return op;
}

void tridiag_ql(std::vector<double>& d, std::vector<double> e,
                std::vector<std::vector<double>>* vectors) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e.resize(n, 0.0);  // e[n-1] is workspace
  if (vectors) {
    vectors->assign(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) (*vectors)[j][j] = 1.0;
  }
  if (n == 1) return;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        if (iter++ == kQlMaxIter)
          throw Error(ErrorKind::convergence_failure,
                      "tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (vectors) rotate_pair((*vectors)[i], (*vectors)[i + 1], c, s);
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  // Order ascending, carrying the eigenvectors along.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return d[i] < d[j]; });
  std::vector<double> ds(n);
  for (int j = 0; j < n; ++j) ds[j] = d[order[j]];
  d = std::move(ds);
  if (vectors) {
    std::vector<std::vector<double>> vs(n);
    for (int j = 0; j < n; ++j) vs[j] = std::move((*vectors)[order[j]]);
    *vectors = std::move(vs);
  }
}

namespace {

SturmSpectrum jacobi_dense(std::vector<double> a, int n) {
  // Row-major symmetric n x n; cyclic Jacobi with a decreasing threshold.
  if (n > kJacobiMaxDim)
    throw Error(ErrorKind::invalid_parameter,
                "periodic cross sections are limited to n < 512");
  std::vector<std::vector<double>> vecs(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) vecs[j][j] = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (int i = 0; i < n * n; ++i) scale = std::max(scale, std::abs(a[i]));
  if (scale == 0.0) scale = 1.0;

  int sweep = 0;
  while (off_norm() > 1e-13 * scale * n) {
    if (++sweep > kJacobiMaxSweeps)
      throw Error(ErrorKind::convergence_failure, "Jacobi sweeps exhausted");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        // A <- J^T A J on rows/columns p, q.
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        rotate_pair(vecs[p], vecs[q], c, s);
      }
    }
  }

  SturmSpectrum sp;
  sp.eigenvalues.resize(n);
  for (int j = 0; j < n; ++j) sp.eigenvalues[j] = a[j * n + j];
  sp.vectors = std::move(vecs);
  return sp;
}

void sort_descending(SturmSpectrum& sp) {
  const int n = static_cast<int>(sp.eigenvalues.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return sp.eigenvalues[i] > sp.eigenvalues[j];
  });
  SturmSpectrum out;
  out.eigenvalues.reserve(n);
  out.vectors.reserve(n);
  for (int j : order) {
    out.eigenvalues.push_back(sp.eigenvalues[j]);
    out.vectors.push_back(std::move(sp.vectors[j]));
  }
  sp = std::move(out);
}

}  // namespace

SturmSpectrum solve_sturm(const SturmOperator& op, int k) {
  const int n = op.n();
  SturmSpectrum sp;
  if (op.bc == Bc::periodic) {
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) a[i * n + i] = op.diag[i];
    for (int i = 0; i + 1 < n; ++i) {
      a[i * n + i + 1] = op.off[i];
      a[(i + 1) * n + i] = op.off[i];
    }
    a[0 * n + (n - 1)] += op.corner;
    a[(n - 1) * n + 0] += op.corner;
    sp = jacobi_dense(std::move(a), n);
  } else {
    std::vector<double> d = op.diag;
    tridiag_ql(d, op.off, &sp.vectors);
    sp.eigenvalues = std::move(d);
  }
  sort_descending(sp);
  if (k > 0 && k < n) {
    sp.eigenvalues.resize(k);
    sp.vectors.resize(k);
  }
  // Normalize (QL/Jacobi keep orthogonality; lengths may drift in the last ulps).
  for (auto& v : sp.vectors) {
    const double nv = norm2(v);
    if (nv > 0.0) scale(v, 1.0 / nv);
  }
  return sp;
}

double sup_spectrum(const SturmSpectrum& sp) {
  if (sp.eigenvalues.empty())
    throw Error(ErrorKind::invalid_parameter, "empty spectrum");
  return sp.eigenvalues.front();
}

SturmSpectrum limit_spectrum(const CylinderPotential& V, char side) {
  const std::vector<double>& v = (side == '+') ? V.v_plus : V.v_minus;
  if (side != '+' && side != '-')
    throw Error(ErrorKind::invalid_parameter, "side must be '+' or '-'");
  if (V.omega_dim == 0) {
    SturmSpectrum sp;
    sp.eigenvalues = {v.at(0)};
    sp.vectors = {{1.0}};
    return sp;
  }
  return solve_sturm(assemble_sturm(v, V.x_length, V.bc_x));
}

}  // namespace cylspec
