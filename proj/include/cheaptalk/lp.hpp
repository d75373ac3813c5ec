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

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cheaptalk/error.hpp"
#include "cheaptalk/linalg.hpp"
#include "cheaptalk/rational.hpp"

namespace cheaptalk {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct Constraint {
  Vector coefficients;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct LinearProgram {
  LinearProgram() = default;
  explicit LinearProgram(std::size_t dimension) : objective(dimension) {}

  Vector objective;
  std::vector<Constraint> constraints;
  // Per-variable lower bound, nullopt marks a free variable. An empty vector
  // means every variable is bounded below by zero.
  std::vector<std::optional<Rational>> lower_bounds;

  std::size_t dimension() const { return objective.size(); }

  void add_constraint(Vector coefficients, Relation relation, Rational rhs) {
    constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
  }
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;  // meaningful only when kOptimal
  Vector point;    // meaningful only when kOptimal
  std::size_t pivots = 0;
};

namespace detail {

// Dense simplex tableau; column `cols()` holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * (cols + 1)), basis_(rows) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  Rational& rhs(std::size_t r) { return at(r, cols_); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t basis(std::size_t r) const { return basis_[r]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rational inv = Rational(1) / at(pr, pc);
    nonzero_.clear();
    for (std::size_t k = 0; k <= cols_; ++k) {
      if (at(pr, k).is_zero()) continue;
      at(pr, k) *= inv;
      nonzero_.push_back(k);
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr || at(r, pc).is_zero()) continue;
      const Rational f = at(r, pc);
      for (std::size_t k : nonzero_) at(r, k) -= f * at(pr, k);
    }
    basis_[pr] = pc;
  }

  void remove_row(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                 cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  // Maximises cost . z over the current basis using Bland's rule: the
  // entering column is the lowest-indexed allowed column with negative
  // reduced cost, the leaving row minimises the ratio with ties broken by
  // the lowest basic column index. Returns false when unbounded.
  bool maximize(const Vector& cost, const std::vector<bool>& allowed, std::size_t& pivots) {
    Vector reduced(cols_);
    for (std::size_t j = 0; j < cols_; ++j) reduced[j] = -cost[j];
    for (std::size_t r = 0; r < rows_; ++r) {
      const Rational& cb = cost[basis_[r]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!at(r, j).is_zero()) reduced[j] += cb * at(r, j);
      }
    }
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && reduced[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;

      std::size_t leave = rows_;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_; ++r) {
        const Rational& a = at(r, enter);
        if (a.sign() <= 0) continue;
        Rational ratio = rhs(r) / a;
        if (leave == rows_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows_) return false;

      pivot(leave, enter);
      ++pivots;
      const Rational f = reduced[enter];
      for (std::size_t k = 0; k < cols_; ++k) {
        if (!at(leave, k).is_zero()) reduced[k] -= f * at(leave, k);
      }
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> cells_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace detail

/// Exact two-phase primal simplex. Pivot selection is Bland's rule in both
/// phases, so results (including which optimal vertex is returned) are
/// reproducible.
inline LpResult lp_optimize(const LinearProgram& lp, Sense sense) {
  const std::size_t dim = lp.dimension();
  if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != dim) {
    throw DimensionError("lower_bounds must be empty or match the objective dimension");
  }
  for (const auto& c : lp.constraints) {
    if (c.coefficients.size() != dim) throw DimensionError("constraint dimension mismatch");
  }

  // x_j = offset_j + z_pos - z_neg, with z_neg present only for free variables.
  struct Column {
    Rational offset;
    std::size_t pos = 0;
    std::optional<std::size_t> neg;
  };
  std::vector<Column> vars(dim);
  std::size_t structural = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    vars[j].pos = structural++;
    if (lp.lower_bounds.empty()) continue;
    if (lp.lower_bounds[j]) {
      vars[j].offset = *lp.lower_bounds[j];
    } else {
      vars[j].neg = structural++;
    }
  }

  struct Row {
    Vector coeffs;
    Relation relation;
    Rational rhs;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraints.size());
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const auto& c : lp.constraints) {
    Row row{Vector(structural), c.relation, c.rhs};
    for (std::size_t j = 0; j < dim; ++j) {
      const Rational& a = c.coefficients[j];
      if (a.is_zero()) continue;
      row.coeffs[vars[j].pos] += a;
      if (vars[j].neg) row.coeffs[*vars[j].neg] -= a;
      if (!vars[j].offset.is_zero()) row.rhs -= a * vars[j].offset;
    }
    if (row.rhs.sign() < 0) {
      for (auto& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
    if (row.relation != Relation::kEqual) ++slacks;
    if (row.relation != Relation::kLessEqual) ++artificials;
    rows.push_back(std::move(row));
  }

  const std::size_t first_slack = structural;
  const std::size_t first_artificial = structural + slacks;
  const std::size_t cols = first_artificial + artificials;
  detail::Tableau t(rows.size(), cols);
  std::size_t next_slack = first_slack;
  std::size_t next_art = first_artificial;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < structural; ++j) t.at(r, j) = rows[r].coeffs[j];
    t.rhs(r) = rows[r].rhs;
    switch (rows[r].relation) {
      case Relation::kLessEqual:
        t.at(r, next_slack) = 1;
        t.basis(r) = next_slack++;
        break;
      case Relation::kGreaterEqual:
        t.at(r, next_slack++) = -1;
        t.at(r, next_art) = 1;
        t.basis(r) = next_art++;
        break;
      case Relation::kEqual:
        t.at(r, next_art) = 1;
        t.basis(r) = next_art++;
        break;
    }
  }

  LpResult result;
  std::vector<bool> allowed(cols, true);
  if (artificials > 0) {
    Vector phase1(cols);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = -1;
    t.maximize(phase1, allowed, result.pivots);  // bounded by zero
    Rational infeasibility;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (t.basis(r) >= first_artificial) infeasibility += t.rhs(r);
    }
    if (infeasibility.sign() > 0) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Basic artificials sit at zero: pivot them out or drop redundant rows.
    for (std::size_t r = t.rows(); r-- > 0;) {
      if (t.basis(r) < first_artificial) continue;
      std::size_t j = 0;
      while (j < first_artificial && t.at(r, j).is_zero()) ++j;
      if (j < first_artificial) {
        t.pivot(r, j);
        ++result.pivots;
      } else {
        t.remove_row(r);
      }
    }
    for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;
  }

  Vector cost(cols);
  for (std::size_t j = 0; j < dim; ++j) {
    Rational c = sense == Sense::kMaximize ? lp.objective[j] : -lp.objective[j];
    if (vars[j].neg) cost[*vars[j].neg] = -c;
    cost[vars[j].pos] = std::move(c);
  }
  if (!t.maximize(cost, allowed, result.pivots)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  Vector z(cols);
  for (std::size_t r = 0; r < t.rows(); ++r) z[t.basis(r)] = t.rhs(r);
  result.point.assign(dim, Rational());
  for (std::size_t j = 0; j < dim; ++j) {
    Rational x = vars[j].offset + z[vars[j].pos];
    if (vars[j].neg) x -= z[*vars[j].neg];
    result.point[j] = std::move(x);
  }
  result.value = dot(lp.objective, result.point);
  result.status = LpStatus::kOptimal;
  return result;
}

}  // namespace cheaptalk
