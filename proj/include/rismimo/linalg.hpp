// SPDX-License-Identifier: Apache-2.0
//
// rismimo: joint RIS phase optimization and Type-I precoder selection
// Copyright (C) 2026 The rismimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rismimo/error.hpp"

namespace rismimo {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Dense row-major complex matrix. Vectors are represented as n x 1 columns.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(rows_) + "x" +
                           std::to_string(cols_));
    }
    if (!all_finite()) throw DomainError("ComplexMatrix: non-finite entry");
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
    if (!all_finite()) throw DomainError("ComplexMatrix: non-finite entry");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix column_vector(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
  }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  std::vector<Complex> column(std::size_t j) const {
    std::vector<Complex> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const Complex> c) {
    if (c.size() != rows_) throw DimensionError("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Complex z) { return is_finite(z); });
  }

  // Conjugate transpose.
  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  double frobenius_norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
  }

  double frobenius_norm() const noexcept { return std::sqrt(frobenius_norm_squared()); }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    require_same_shape(rhs, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    require_same_shape(rhs, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionError("matrix product: " + a.shape() + " * " + b.shape());
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const ComplexMatrix& rhs, const char* what) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
      throw DimensionError(std::string(what) + ": " + shape() + " vs " + rhs.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// a^H b for equal-length vectors.
inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("inner_product: length mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm_squared(std::span<const Complex> a) noexcept {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

/// Kronecker product. Entry ((i*b.rows + k), (j*b.cols + n)) is a(i,j) * b(k,n).
inline ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t n = 0; n < b.cols(); ++n)
          out(i * b.rows() + k, j * b.cols() + n) = a(i, j) * b(k, n);
  return out;
}

inline std::vector<Complex> kronecker(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

/// Full singular value decomposition a = u * diag(singular_values) * v^H.
///
/// u is rows x rows, v is cols x cols, both unitary. singular_values has
/// min(rows, cols) entries sorted non-increasing, and the columns of u and v
/// follow the same ordering so column 0 of v is the dominant right singular
/// vector.
struct SvdResult {
  ComplexMatrix u;
  std::vector<double> singular_values;
  ComplexMatrix v;

  std::vector<Complex> right_vector(std::size_t k) const { return v.column(k); }
  std::vector<Complex> left_vector(std::size_t k) const { return u.column(k); }

  // u * Sigma * v^H, for reconstruction checks.
  ComplexMatrix reconstruct() const {
    ComplexMatrix us(u.rows(), v.rows());
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t k = 0; k < singular_values.size(); ++k)
        us(i, k) = u(i, k) * singular_values[k];
    return us * v.adjoint();
  }
};

namespace detail {

// Extends the orthonormal columns [0, filled) of q to a full unitary basis
// using Gram-Schmidt over the canonical basis vectors.
inline void complete_unitary_basis(ComplexMatrix& q, std::size_t filled) {
  const std::size_t n = q.rows();
  std::vector<Complex> candidate(n);
  for (std::size_t col = filled; col < q.cols(); ++col) {
    double best_norm = -1.0;
    std::vector<Complex> best;
    for (std::size_t e = 0; e < n; ++e) {
      std::fill(candidate.begin(), candidate.end(), Complex{});
      candidate[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < col; ++k) {
          Complex proj{};
          for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * candidate[i];
          for (std::size_t i = 0; i < n; ++i) candidate[i] -= proj * q(i, k);
        }
      }
      const double nrm = std::sqrt(norm_squared(candidate));
      if (nrm > best_norm) {
        best_norm = nrm;
        best = candidate;
      }
    }
    for (std::size_t i = 0; i < n; ++i) q(i, col) = best[i] / best_norm;
  }
}

// One-sided Jacobi for rows >= cols.
inline SvdResult jacobi_svd_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  constexpr int kMaxSweeps = 100;
  constexpr double kTol = 1e-15;

  // Work column-major: w[j] is column j.
  std::vector<std::vector<Complex>> w(n), vcols(n, std::vector<Complex>(n));
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = a.column(j);
    vcols[j][j] = 1.0;
  }

  // Columns below this squared norm are numerically zero and stay put.
  const double eps = std::numeric_limits<double>::epsilon();
  const double negligible = a.frobenius_norm_squared() * eps * eps;

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = norm_squared(w[i]);
        const double beta = norm_squared(w[j]);
        const Complex gamma = inner_product(w[i], w[j]);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kTol * std::sqrt(alpha * beta)) continue;
        if (std::min(alpha, beta) <= negligible) continue;
        converged = false;

        // Rotate column j so that w_i^H w_j is real, then apply a real
        // Jacobi rotation to the pair.
        const Complex phase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < m; ++r) {
          const Complex xi = w[i][r];
          const Complex xj = w[j][r] * phase;
          w[i][r] = c * xi - s * xj;
          w[j][r] = s * xi + c * xj;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const Complex xi = vcols[i][r];
          const Complex xj = vcols[j][r] * phase;
          vcols[i][r] = c * xi - s * xj;
          vcols[j][r] = s * xi + c * xj;
        }
      }
    }
  }
  if (!converged) throw NumericalError("svd: one-sided Jacobi did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(norm_squared(w[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out{ComplexMatrix(m, m), std::vector<double>(n), ComplexMatrix(n, n)};
  const double cutoff = std::max(sigma[order.front()], 1.0) * 1e-300;
  const double rank_tol =
      sigma[order.front()] * static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    for (std::size_t r = 0; r < n; ++r) out.v(r, k) = vcols[j][r];
    if (sigma[j] > rank_tol && sigma[j] > cutoff && rank == k) {
      for (std::size_t r = 0; r < m; ++r) out.u(r, k) = w[j][r] / sigma[j];
      ++rank;
    }
  }
  complete_unitary_basis(out.u, rank);
  return out;
}

}  // namespace detail

/// Singular value decomposition by one-sided Jacobi rotations applied to the
/// smaller dimension. Throws NumericalError if the sweep limit is reached.
inline SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("svd: empty matrix");
  if (!a.all_finite()) throw DomainError("svd: non-finite entry");
  if (a.rows() >= a.cols()) return detail::jacobi_svd_tall(a);
  SvdResult t = detail::jacobi_svd_tall(a.adjoint());
  return SvdResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

/// Singular values only, sorted non-increasing.
inline std::vector<double> singular_values(const ComplexMatrix& a) {
  return svd(a).singular_values;
}

/// Solves a x = b for Hermitian positive definite a via Cholesky.
///
/// Throws NumericalError when a is not positive definite or its condition
/// estimate (squared ratio of extreme Cholesky pivots) exceeds 1e12.
inline ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("hermitian_solve: matrix is " + a.shape());
  if (b.rows() != n) throw DimensionError("hermitian_solve: rhs is " + b.shape());
  if (n == 0) throw DimensionError("hermitian_solve: empty system");

  double scale = 0.0;
  for (auto z : a.entries()) scale = std::max(scale, std::abs(z));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-10 * std::max(scale, 1e-300)) {
        throw DomainError("hermitian_solve: matrix is not Hermitian");
      }

  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw NumericalError("hermitian_solve: matrix is rank deficient");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  double pmin = l(0, 0).real(), pmax = pmin;
  for (std::size_t i = 1; i < n; ++i) {
    pmin = std::min(pmin, l(i, i).real());
    pmax = std::max(pmax, l(i, i).real());
  }
  const double cond = (pmax / pmin) * (pmax / pmin);
  if (!(cond <= 1e12)) {
    throw NumericalError("hermitian_solve: ill-conditioned system (estimate " +
                         std::to_string(cond) + ")");
  }

  ComplexMatrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Complex s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x(k, c);
      x(ii, c) = s / l(ii, ii);
    }
  }
  return x;
}

// a^H a, the Gram matrix of the columns of a.
inline ComplexMatrix gram(const ComplexMatrix& a) {
  ComplexMatrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      Complex s{};
      for (std::size_t r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * a(r, j);
      g(i, j) = s;
      g(j, i) = std::conj(s);
    }
    g(i, i) = g(i, i).real();
  }
  return g;
}

}  // namespace rismimo
