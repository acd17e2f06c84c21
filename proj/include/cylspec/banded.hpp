#pragma once

#include <span>
#include <vector>

#include "cylspec/numerics.hpp"

namespace cylspec {

// Band matrix with kl subdiagonals and ku superdiagonals, compact column
// storage. Entries outside the band read as zero and may not be written.
template <typename T>
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku);

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ &&
           j - i <= ku_;
  }
  T get(int i, int j) const;
  void set(int i, int j, T v);
  void add(int i, int j, T v);

  void apply(std::span<const T> x, std::span<T> y) const;  // y = A x
  double inf_norm() const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  // data_[(ku_ + i - j) + j * ld] with ld = kl_ + ku_ + 1.
  std::vector<T> data_;
};

// LU factorization with partial pivoting of a banded matrix (fill-in kl
// extra superdiagonals). Solves with A and with its conjugate transpose.
template <typename T>
class BandedLU {
 public:
  BandedLU() = default;
  explicit BandedLU(const BandedMatrix<T>& a);

  int n() const { return n_; }
  void solve(std::span<T> b) const;       // A x = b, in place
  void solve_conj(std::span<T> b) const;  // A^H x = b, in place

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<T> ab_;    // padded band, ld = 2 kl + ku + 1
  std::vector<int> piv_;
};

// Dense LU with partial pivoting; used for small capacitance systems and the
// projected eigenproblems.
template <typename T>
class DenseLU {
 public:
  DenseLU() = default;
  DenseLU(std::vector<T> a, int n);  // row-major

  int n() const { return n_; }
  void solve(std::span<T> b) const;

 private:
  int n_ = 0;
  std::vector<T> a_;
  std::vector<int> piv_;
};

// A single matrix entry added outside the band.
template <typename T>
struct CornerEntry {
  int row = 0;
  int col = 0;
  T value{};
};

// Solves (B + sum_k value_k e_{row_k} e_{col_k}^T) x = b through the
// factorization of B and a dense capacitance system of size = #entries.
template <typename T>
class CornerCorrectedLU {
 public:
  CornerCorrectedLU() = default;
  CornerCorrectedLU(BandedLU<T> lu, std::span<const CornerEntry<T>> entries);

  int n() const { return lu_.n(); }
  void solve(std::span<T> b) const;

 private:
  BandedLU<T> lu_;
  std::vector<int> cols_;
  std::vector<std::vector<T>> y_;  // B^{-1} (value_k e_{row_k})
  DenseLU<T> cap_;
};

}  // namespace cylspec
