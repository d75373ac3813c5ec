// Copyright 2026 The Cheaptalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cheaptalk/error.hpp"
#include "cheaptalk/rational.hpp"

namespace cheaptalk {

using Vector = std::vector<Rational>;

/// Dense row-major matrix of rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix from_rows(const std::vector<Vector>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw DimensionError("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.cols_);
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Rational> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  Vector multiply(std::span<const Rational> x) const {
    if (x.size() != cols_) throw DimensionError("matrix-vector dimension mismatch");
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        const Rational& a = (*this)(r, c);
        if (!a.is_zero() && !x[c].is_zero()) out[r] += a * x[c];
      }
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionError("dot product dimension mismatch");
  Rational sum;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) sum += a[i] * b[i];
  }
  return sum;
}

inline Rational sum(std::span<const Rational> v) {
  Rational s;
  for (const auto& x : v) s += x;
  return s;
}

struct LinearSolution {
  enum class Status { kUnique, kUnderdetermined, kNoSolution };

  Status status = Status::kNoSolution;
  // One solution (free variables set to zero). Empty when kNoSolution.
  Vector particular;
  // Basis of the null space of A; empty unless kUnderdetermined.
  std::vector<Vector> null_space;
};

/// Solves A x = b by Gauss-Jordan elimination. Pivots are the first nonzero
/// entry in row order for each column, left to right.
inline LinearSolution solve_linear_system(const Matrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw DimensionError("right-hand side has wrong length");
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  // Augmented copy, last column is b.
  std::vector<Vector> m(rows, Vector(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m[r][c] = a(r, c);
    m[r][cols] = b[r];
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t p = lead;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[lead]);
    const Rational inv = Rational(1) / m[lead][c];
    for (std::size_t k = c; k <= cols; ++k) {
      if (!m[lead][k].is_zero()) m[lead][k] *= inv;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || m[r][c].is_zero()) continue;
      const Rational f = m[r][c];
      for (std::size_t k = c; k <= cols; ++k) {
        if (!m[lead][k].is_zero()) m[r][k] -= f * m[lead][k];
      }
    }
    pivot_cols.push_back(c);
    ++lead;
  }

  LinearSolution out;
  for (std::size_t r = lead; r < rows; ++r) {
    if (!m[r][cols].is_zero()) return out;  // 0 = nonzero
  }

  out.particular.assign(cols, Rational());
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    out.particular[pivot_cols[i]] = m[i][cols];
    is_pivot[pivot_cols[i]] = true;
  }
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -m[i][f];
    out.null_space.push_back(std::move(v));
  }
  out.status = out.null_space.empty() ? LinearSolution::Status::kUnique
                                      : LinearSolution::Status::kUnderdetermined;
  return out;
}

inline std::vector<Vector> null_space(const Matrix& a) {
  Vector zeros(a.rows());
  return solve_linear_system(a, zeros).null_space;
}

/// Finds coefficients l (not all zero) with sum(l) = 0 and sum(l_i p_i) = 0,
/// scaled so the first nonzero coefficient is 1. Returns nullopt when the
/// points are affinely independent.
inline std::optional<Vector> find_affine_dependency(std::span<const Vector> points) {
  if (points.size() < 2) throw ValidationError("affine dependency needs at least two points");
  const std::size_t dim = points.front().size();
  Matrix m(dim + 1, points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != dim) throw DimensionError("points have different dimensions");
    for (std::size_t i = 0; i < dim; ++i) m(i, k) = points[k][i];
    m(dim, k) = 1;
  }
  auto basis = null_space(m);
  if (basis.empty()) return std::nullopt;
  Vector lambda = std::move(basis.front());
  for (const auto& x : lambda) {
    if (!x.is_zero()) {
      const Rational scale = x;
      for (auto& y : lambda) y /= scale;
      break;
    }
  }
  return lambda;
}

}  // namespace cheaptalk
