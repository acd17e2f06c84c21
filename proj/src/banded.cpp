#include "cylspec/banded.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "cylspec/error.hpp"

namespace cylspec {
namespace {

template <typename T>
T conj_if(T x) {
  if constexpr (std::is_same_v<T, Complex>)
    return std::conj(x);
  else
    return x;
}

}  // namespace

template <typename T>
BandedMatrix<T>::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku) {
  if (n < 1 || kl < 0 || ku < 0 || kl >= n || ku >= n)
    throw Error(ErrorKind::invalid_parameter, "bad band shape");
  data_.assign(static_cast<std::size_t>(kl + ku + 1) * n, T{});
}

template <typename T>
T BandedMatrix<T>::get(int i, int j) const {
  if (!inside(i, j)) return T{};
  return data_[(ku_ + i - j) + static_cast<std::size_t>(j) * (kl_ + ku_ + 1)];
}

template <typename T>
void BandedMatrix<T>::set(int i, int j, T v) {
  if (!inside(i, j))
    throw Error(ErrorKind::invalid_parameter, "entry outside band");
  data_[(ku_ + i - j) + static_cast<std::size_t>(j) * (kl_ + ku_ + 1)] = v;
}

template <typename T>
void BandedMatrix<T>::add(int i, int j, T v) {
  if (!inside(i, j))
    throw Error(ErrorKind::invalid_parameter, "entry outside band");
  data_[(ku_ + i - j) + static_cast<std::size_t>(j) * (kl_ + ku_ + 1)] += v;
}

template <typename T>
void BandedMatrix<T>::apply(std::span<const T> x, std::span<T> y) const {
  for (int i = 0; i < n_; ++i) {
    T acc{};
    const int jlo = std::max(0, i - kl_);
    const int jhi = std::min(n_ - 1, i + ku_);
    for (int j = jlo; j <= jhi; ++j)
      acc += data_[(ku_ + i - j) + static_cast<std::size_t>(j) * (kl_ + ku_ + 1)] *
             x[j];
    y[i] = acc;
  }
}

template <typename T>
double BandedMatrix<T>::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    const int jlo = std::max(0, i - kl_);
    const int jhi = std::min(n_ - 1, i + ku_);
    for (int j = jlo; j <= jhi; ++j) row += std::abs(get(i, j));
    best = std::max(best, row);
  }
  return best;
}

template <typename T>
BandedLU<T>::BandedLU(const BandedMatrix<T>& a)
    : n_(a.n()), kl_(a.kl()), ku_(a.ku()) {
  const int ld = 2 * kl_ + ku_ + 1;
  const int kv = kl_ + ku_;  // row index of the diagonal in ab_
  ab_.assign(static_cast<std::size_t>(ld) * n_, T{});
  piv_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i)
      ab_[(kv + i - j) + static_cast<std::size_t>(j) * ld] = a.get(i, j);
  }

  auto ab = [&](int r, int c) -> T& {
    return ab_[r + static_cast<std::size_t>(c) * ld];
  };

  int ju = 0;  // last column touched by eliminations so far
  for (int j = 0; j < n_; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);  // subdiagonal entries
    int jp = 0;
    double best = std::abs(ab(kv, j));
    for (int i = 1; i <= km; ++i) {
      const double m = std::abs(ab(kv + i, j));
      if (m > best) {
        best = m;
        jp = i;
      }
    }
    piv_[j] = jp + j;
    if (!(best > 0.0))
      throw Error(ErrorKind::convergence_failure,
                  "banded factorization hit a zero pivot");
    ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
    if (jp != 0) {
      for (int c = j; c <= ju; ++c)
        std::swap(ab(kv + j - c, c), ab(kv + j + jp - c, c));
    }
    if (km > 0) {
      const T inv = T(1.0) / ab(kv, j);
      for (int i = 1; i <= km; ++i) ab(kv + i, j) *= inv;
      for (int c = j + 1; c <= ju; ++c) {
        const T mult = ab(kv + j - c, c);
        if (mult != T{}) {
          for (int i = 1; i <= km; ++i)
            ab(kv + j + i - c, c) -= ab(kv + i, j) * mult;
        }
      }
    }
  }
}

template <typename T>
void BandedLU<T>::solve(std::span<T> b) const {
  const int ld = 2 * kl_ + ku_ + 1;
  const int kv = kl_ + ku_;
  auto ab = [&](int r, int c) -> const T& {
    return ab_[r + static_cast<std::size_t>(c) * ld];
  };
  // L (with pivoting), unit lower triangular.
  for (int j = 0; j < n_ - 1; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);
    const int jp = piv_[j];
    if (jp != j) std::swap(b[jp], b[j]);
    for (int i = 1; i <= km; ++i) b[j + i] -= ab(kv + i, j) * b[j];
  }
  // U, bandwidth kl + ku above the diagonal.
  for (int j = n_ - 1; j >= 0; --j) {
    b[j] /= ab(kv, j);
    const int kb = std::min(kl_ + ku_, j);
    for (int i = 1; i <= kb; ++i) b[j - i] -= ab(kv - i, j) * b[j];
  }
}

template <typename T>
void BandedLU<T>::solve_conj(std::span<T> b) const {
  const int ld = 2 * kl_ + ku_ + 1;
  const int kv = kl_ + ku_;
  auto ab = [&](int r, int c) -> const T& {
    return ab_[r + static_cast<std::size_t>(c) * ld];
  };
  // U^H y = b (forward substitution).
  for (int j = 0; j < n_; ++j) {
    T acc = b[j];
    const int kb = std::min(kl_ + ku_, j);
    for (int i = 1; i <= kb; ++i) acc -= conj_if(ab(kv - i, j)) * b[j - i];
    b[j] = acc / conj_if(ab(kv, j));
  }
  // L^H x = y (backward), then undo pivots.
  for (int j = n_ - 1; j >= 0; --j) {
    const int km = std::min(kl_, n_ - 1 - j);
    for (int i = 1; i <= km; ++i) b[j] -= conj_if(ab(kv + i, j)) * b[j + i];
    const int jp = piv_[j];
    if (jp != j) std::swap(b[jp], b[j]);
  }
}

template <typename T>
DenseLU<T>::DenseLU(std::vector<T> a, int n) : n_(n), a_(std::move(a)) {
  if (static_cast<int>(a_.size()) != n * n)
    throw Error(ErrorKind::invalid_parameter, "dense LU needs an n x n array");
  piv_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    int jp = j;
    double best = std::abs(a_[j * n_ + j]);
    for (int i = j + 1; i < n_; ++i) {
      const double m = std::abs(a_[i * n_ + j]);
      if (m > best) {
        best = m;
        jp = i;
      }
    }
    piv_[j] = jp;
    if (!(best > 0.0))
      throw Error(ErrorKind::convergence_failure,
                  "dense factorization hit a zero pivot");
    if (jp != j)
      for (int c = 0; c < n_; ++c) std::swap(a_[j * n_ + c], a_[jp * n_ + c]);
    const T inv = T(1.0) / a_[j * n_ + j];
    for (int i = j + 1; i < n_; ++i) {
      const T mult = a_[i * n_ + j] * inv;
      a_[i * n_ + j] = mult;
      if (mult != T{})
        for (int c = j + 1; c < n_; ++c)
          a_[i * n_ + c] -= mult * a_[j * n_ + c];
    }
  }
}

template <typename T>
void DenseLU<T>::solve(std::span<T> b) const {
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[piv_[j]], b[j]);
    for (int i = j + 1; i < n_; ++i) b[i] -= a_[i * n_ + j] * b[j];
  }
  for (int j = n_ - 1; j >= 0; --j) {
    b[j] /= a_[j * n_ + j];
    for (int i = 0; i < j; ++i) b[i] -= a_[i * n_ + j] * b[j];
  }
}

template <typename T>
CornerCorrectedLU<T>::CornerCorrectedLU(BandedLU<T> lu,
                                        std::span<const CornerEntry<T>> entries)
    : lu_(std::move(lu)) {
  const int n = lu_.n();
  const int r = static_cast<int>(entries.size());
  cols_.reserve(r);
  y_.reserve(r);
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw Error(ErrorKind::invalid_parameter, "corner entry out of range");
    cols_.push_back(e.col);
    std::vector<T> y(n, T{});
    y[e.row] = e.value;
    lu_.solve(y);
    y_.push_back(std::move(y));
  }
  // Capacitance C = I + V^T Y with V columns e_{col_k}.
  std::vector<T> cap(static_cast<std::size_t>(r) * r, T{});
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < r; ++k) cap[i * r + k] = y_[k][cols_[i]];
    cap[i * r + i] += T(1.0);
  }
  cap_ = DenseLU<T>(std::move(cap), r);
}

template <typename T>
void CornerCorrectedLU<T>::solve(std::span<T> b) const {
  lu_.solve(b);
  const int r = static_cast<int>(cols_.size());
  if (r == 0) return;
  std::vector<T> rhs(r);
  for (int i = 0; i < r; ++i) rhs[i] = b[cols_[i]];
  cap_.solve(rhs);
  for (int k = 0; k < r; ++k) {
    const T w = rhs[k];
    if (w == T{}) continue;
    const auto& y = y_[k];
    for (int i = 0; i < lu_.n(); ++i) b[i] -= y[i] * w;
  }
}

template class BandedMatrix<double>;
template class BandedMatrix<Complex>;
template class BandedLU<double>;
template class BandedLU<Complex>;
template class DenseLU<double>;
template class DenseLU<Complex>;
template class CornerCorrectedLU<double>;
template class CornerCorrectedLU<Complex>;

}  // namespace cylspec
