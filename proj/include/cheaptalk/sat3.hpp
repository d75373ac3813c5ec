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
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cheaptalk/error.hpp"
#include "cheaptalk/rational.hpp"

namespace cheaptalk {

struct Literal {
  std::size_t variable = 0;  // 0-based
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

struct CnfFormula {
  std::size_t num_variables = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// One entry per variable; nullopt means unassigned.
using PartialAssignment = std::vector<std::optional<bool>>;

inline std::size_t assigned_count(const PartialAssignment& x) {
  std::size_t k = 0;
  for (const auto& v : x) k += v.has_value();
  return k;
}

inline void validate_formula(const CnfFormula& f) {
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const Clause& c = f.clauses[j];
    for (std::size_t l = 0; l < 3; ++l) {
      if (c[l].variable >= f.num_variables) {
        throw ValidationError("clause " + std::to_string(j + 1) + " uses an undeclared variable");
      }
      for (std::size_t r = 0; r < l; ++r) {
        if (c[r].variable == c[l].variable) {
          throw ValidationError("clause " + std::to_string(j + 1) + " repeats a variable");
        }
      }
    }
  }
}

/// DIMACS CNF: 'c' comment lines, one "p cnf <vars> <clauses>" header, then
/// zero-terminated clauses (which may span lines). A line starting with '%'
/// ends the input. Every clause must have three distinct variables.
inline CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::vector<std::pair<long long, std::size_t>> pending;  // (literal, line)
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  auto finish_clause = [&](std::size_t line) {
    if (pending.size() != 3) {
      throw ParseError(line, "clause has " + std::to_string(pending.size()) + " literals, expected 3");
    }
    Clause c;
    for (std::size_t l = 0; l < 3; ++l) {
      const long long lit = pending[l].first;
      const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (var > f.num_variables) throw ParseError(pending[l].second, "variable " + std::to_string(var) + " exceeds header");
      c[l] = Literal{var - 1, lit < 0};
      for (std::size_t r = 0; r < l; ++r) {
        if (c[r].variable == c[l].variable) throw ParseError(line, "repeated variable in clause");
      }
    }
    f.clauses.push_back(c);
    pending.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line.front() == 'c') continue;
    if (line.front() == '%') break;
    last_line = line_no;

    std::istringstream in{std::string(line)};
    if (line.front() == 'p') {
      if (have_header) throw ParseError(line_no, "duplicate header");
      std::string p, fmt;
      long long vars = -1, clauses = -1;
      std::string extra;
      if (!(in >> p >> fmt >> vars >> clauses) || p != "p" || fmt != "cnf" || vars < 0 || clauses < 0 || (in >> extra)) {
        throw ParseError(line_no, "malformed header, expected 'p cnf <variables> <clauses>'");
      }
      f.num_variables = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before header");
    std::string token;
    while (in >> token) {
      std::size_t used = 0;
      long long lit = 0;
      try {
        lit = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ParseError(line_no, "invalid literal '" + token + "'");
      if (lit == 0) {
        finish_clause(line_no);
      } else {
        pending.emplace_back(lit, line_no);
      }
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(last_line, "last clause is not terminated by 0");
  if (f.clauses.size() != declared_clauses) {
    throw ParseError(last_line, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                    std::to_string(f.clauses.size()));
  }
  return f;
}

inline std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_variables << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c) out << (l.negated ? "-" : "") << l.variable + 1 << ' ';
    out << "0\n";
  }
  return out.str();
}

/// The common number of clauses every variable occurs in, if there is one.
inline std::optional<std::size_t> regularity(const CnfFormula& f) {
  if (f.num_variables == 0 || f.clauses.empty()) return std::nullopt;
  std::vector<std::size_t> count(f.num_variables, 0);
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c) ++count[l.variable];
  }
  for (std::size_t c : count) {
    if (c != count.front()) return std::nullopt;
  }
  const std::size_t d = count.front();
  if (3 * f.clauses.size() != d * f.num_variables) throw std::logic_error("occurrence count mismatch");
  return d;
}

/// Value of a literal under x, or nullopt if its variable is unassigned.
inline std::optional<bool> literal_value(const Literal& l, const PartialAssignment& x) {
  const auto& v = x[l.variable];
  if (!v) return std::nullopt;
  return *v != l.negated;
}

/// Clauses whose three variables are all assigned and all literals false.
inline std::vector<std::size_t> contradictory_clauses(const CnfFormula& f, const PartialAssignment& x) {
  if (x.size() != f.num_variables) throw DimensionError("assignment length differs from variable count");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    bool falsified = true;
    for (const Literal& l : f.clauses[j]) falsified = falsified && literal_value(l, x) == std::optional<bool>(false);
    if (falsified) out.push_back(j);
  }
  return out;
}

struct MaxVarResult {
  std::size_t k = 0;
  PartialAssignment witness;
};

struct MaxVarOptions {
  std::size_t max_variables = 20;
  bool override_guard = false;
};

/// Largest partial assignment creating no contradictory clause, by depth-first
/// search over variables in increasing order, trying True, then False, then
/// unassigned. The first assignment found of maximum size is returned.
inline MaxVarResult max_var_3sat_bruteforce(const CnfFormula& f, const MaxVarOptions& options = {}) {
  validate_formula(f);
  const std::size_t n = f.num_variables;
  if (n > options.max_variables && !options.override_guard) {
    throw GuardExceeded("brute force limited to " + std::to_string(options.max_variables) + " variables (formula has " +
                        std::to_string(n) + "); override to force");
  }
  // occurrences[v] = (clause, negated) pairs.
  std::vector<std::vector<std::pair<std::size_t, bool>>> occurrences(n);
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    for (const Literal& l : f.clauses[j]) occurrences[l.variable].emplace_back(j, l.negated);
  }
  std::vector<int> false_literals(f.clauses.size(), 0);
  PartialAssignment x(n);
  MaxVarResult best;
  bool found = false;

  auto assign = [&](std::size_t v, bool value) {
    bool ok = true;
    for (auto [j, neg] : occurrences[v]) {
      if (value == neg && ++false_literals[j] == 3) ok = false;
    }
    x[v] = value;
    return ok;
  };
  auto unassign = [&](std::size_t v) {
    for (auto [j, neg] : occurrences[v]) {
      if (*x[v] == neg) --false_literals[j];
    }
    x[v].reset();
  };

  auto dfs = [&](auto&& self, std::size_t v, std::size_t size) -> void {
    if (found && size + (n - v) <= best.k) return;
    if (v == n) {
      best.k = size;
      best.witness = x;
      found = true;
      return;
    }
    for (bool value : {true, false}) {
      if (assign(v, value)) self(self, v + 1, size + 1);
      unassign(v);
    }
    self(self, v + 1, size);
  };
  dfs(dfs, 0, 0);
  return best;
}

/// Turns a full assignment into a non-contradictory partial one: for every
/// clause the full assignment falsifies, in clause order, the lowest-indexed
/// variable of that clause that is still assigned is unassigned.
inline PartialAssignment full_to_partial(const CnfFormula& f, const PartialAssignment& full) {
  if (full.size() != f.num_variables) throw DimensionError("assignment length differs from variable count");
  for (const auto& v : full) {
    if (!v) throw ValidationError("full_to_partial needs every variable assigned");
  }
  PartialAssignment out = full;
  for (const Clause& c : f.clauses) {
    bool satisfied = false;
    for (const Literal& l : c) satisfied = satisfied || *literal_value(l, full);
    if (satisfied) continue;
    std::optional<std::size_t> lowest;
    for (const Literal& l : c) {
      if (out[l.variable] && (!lowest || l.variable < *lowest)) lowest = l.variable;
    }
    if (lowest) out[*lowest].reset();
  }
  return out;
}

/// Thresholds of the 4-regular Max-Var-3SAT promise problem and the sender
/// utility gap they induce in the normalised reduction instance.
struct GapThresholds {
  Rational yes_at_least;  // k >= q1 * n
  Rational no_below;      // k < q2 * n
  Rational normalized_gap;
};

inline const Rational& gap_q1() {
  static const Rational q(30476, 30480);
  return q;
}
inline const Rational& gap_q2() {
  static const Rational q(30471, 30480);
  return q;
}
/// Additive approximation constant for 4-regular instances.
inline const Rational& gap_constant() {
  static const Rational c(1, 113792);
  return c;
}

inline GapThresholds gap_thresholds(std::size_t n, std::size_t m, std::size_t d) {
  if (m == 0) throw ValidationError("formula needs at least one clause");
  const Rational nn(static_cast<std::int64_t>(n));
  GapThresholds t;
  t.yes_at_least = gap_q1() * nn;
  t.no_below = gap_q2() * nn;
  t.normalized_gap = (gap_q1() - gap_q2()) * nn * Rational(static_cast<std::int64_t>(d)) /
                     Rational(56 * static_cast<std::int64_t>(m));
  return t;
}

}  // namespace cheaptalk
