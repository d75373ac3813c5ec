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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cheaptalk/digest.hpp"
#include "cheaptalk/error.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/linalg.hpp"
#include "cheaptalk/sat3.hpp"

namespace cheaptalk {

enum class PoolKind { kVariable, kNegVariable, kClause, kSingleton, kPrior };

inline const char* to_string(PoolKind k) {
  switch (k) {
    case PoolKind::kVariable:
      return "variable";
    case PoolKind::kNegVariable:
      return "negVariable";
    case PoolKind::kClause:
      return "clause";
    case PoolKind::kSingleton:
      return "singleton";
    case PoolKind::kPrior:
      return "prior";
  }
  return "?";
}

/// A distinguished posterior: uniform over `members` (the prior for kPrior).
struct Pool {
  std::string name;
  PoolKind kind = PoolKind::kVariable;
  std::vector<std::size_t> members;  // sorted state indices

  friend bool operator==(const Pool&, const Pool&) = default;
};

struct ReductionMetadata {
  std::string formula_digest;
  CnfFormula formula;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::string> states;
  std::vector<Pool> pools;
  Rational epsilon;
  bool normalized = false;
  std::optional<Rational> babbling_gap_alpha;

  std::size_t num_actions() const { return (states.size() + 1) * pools.size() + (babbling_gap_alpha ? 1 : 0); }
  // Action that is a best response exactly at pool p's posterior.
  std::size_t pool_action(std::size_t p) const { return p; }
  // Facet action of pool p tilted towards state w.
  std::size_t facet_action(std::size_t p, std::size_t w) const {
    return pools.size() + p * states.size() + w;
  }

  friend bool operator==(const ReductionMetadata&, const ReductionMetadata&) = default;
};

// State layout: clause j (0-based) owns states 7j .. 7j+6; position l of the
// clause contributes x (7j + 2l) and its negation (7j + 2l + 1); 7j + 6 is c_j.
inline std::size_t literal_state(std::size_t clause, std::size_t position, bool negated) {
  return 7 * clause + 2 * position + (negated ? 1 : 0);
}
inline std::size_t clause_state(std::size_t clause) { return 7 * clause + 6; }

/// Digest of the canonical DIMACS rendering.
inline std::string formula_digest(const CnfFormula& f) { return fnv1a_hex(to_dimacs(f)); }

struct PoolCatalog {
  std::vector<std::string> states;
  std::vector<Pool> pools;
  std::size_t d = 0;
};

/// States and pools of the reduction instance, in catalog order: variable
/// pools (each variable, positive then negative), clause pools (each clause,
/// satisfying polarity triples in binary order with the first literal most
/// significant and 1 = True), then singleton pools in state order.
inline PoolCatalog build_pools(const CnfFormula& formula) {
  validate_formula(formula);
  const auto d = regularity(formula);
  if (!d) throw ValidationError("formula is not regular");
  if (*d < 2 || *d > 6) throw ValidationError("reduction needs 2 <= d <= 6, formula has d = " + std::to_string(*d));

  PoolCatalog cat;
  cat.d = *d;
  const std::size_t m = formula.clauses.size();
  for (std::size_t j = 0; j < m; ++j) {
    for (const Literal& l : formula.clauses[j]) {
      const std::string suffix = std::to_string(l.variable + 1) + "_" + std::to_string(j + 1);
      cat.states.push_back("x" + suffix);
      cat.states.push_back("nx" + suffix);
    }
    cat.states.push_back("c" + std::to_string(j + 1));
  }

  for (std::size_t i = 0; i < formula.num_variables; ++i) {
    for (bool negated : {false, true}) {
      Pool p{(negated ? "Pv(nx" : "Pv(x") + std::to_string(i + 1) + ")",
             negated ? PoolKind::kNegVariable : PoolKind::kVariable,
             {}};
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = 0; l < 3; ++l) {
          if (formula.clauses[j][l].variable == i) p.members.push_back(literal_state(j, l, negated));
        }
      }
      cat.pools.push_back(std::move(p));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (unsigned t = 0; t < 8; ++t) {
      bool satisfied = false;
      std::string pattern;
      Pool p{"", PoolKind::kClause, {}};
      for (std::size_t l = 0; l < 3; ++l) {
        const bool value = (t >> (2 - l)) & 1;
        satisfied = satisfied || value != formula.clauses[j][l].negated;
        pattern += value ? 'T' : 'F';
        p.members.push_back(literal_state(j, l, !value));
      }
      if (!satisfied) continue;
      p.members.push_back(clause_state(j));
      p.name = "Pc(" + std::to_string(j + 1) + "," + pattern + ")";
      cat.pools.push_back(std::move(p));
    }
  }
  for (std::size_t w = 0; w < cat.states.size(); ++w) {
    if (w % 7 == 6) continue;
    cat.pools.push_back(Pool{"Ps(" + cat.states[w] + ")", PoolKind::kSingleton, {w}});
  }
  return cat;
}

/// Posterior of a pool as a dense vector over `num_states` states.
inline Vector pool_posterior(const Pool& p, std::size_t num_states) {
  Vector v(num_states);
  if (p.kind == PoolKind::kPrior) {
    for (auto& x : v) x = Rational(1, static_cast<std::int64_t>(num_states));
  } else {
    const Rational share(1, static_cast<std::int64_t>(p.members.size()));
    for (std::size_t w : p.members) v[w] = share;
  }
  return v;
}

struct ReceiverDesign {
  Matrix utility;  // states x (|points| * (states + 1))
  Rational epsilon;
};

/// Smallest squared distance between two distinct points; equals the
/// smallest gap L_p(p) - L_q(p) between tangent planes of sum y_i^2.
inline Rational min_squared_distance(const std::vector<Vector>& points) {
  std::optional<Rational> best;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      Rational dist;
      for (std::size_t i = 0; i < points[a].size(); ++i) {
        if (points[a][i] == points[b][i]) continue;
        const Rational diff = points[a][i] - points[b][i];
        dist += diff * diff;
      }
      if (!best || dist < *best) best = dist;
    }
  }
  return best.value_or(Rational(1));
}

/// Receiver utilities making each given posterior p the unique belief at
/// which its own action a_p is a best response. Action layout: a_p for every
/// point first, then for each point p the facet actions a_{p,w}, one per state.
/// u_R(w_i, a_p) = 2 p_i - sum_j p_j^2 is the tangent plane of sum y^2 at p;
/// a_{p,w} adds eps * (1[w = w_i] - p_w).
inline ReceiverDesign design_receiver_utilities(std::size_t num_states, const std::vector<Vector>& points) {
  if (points.empty()) throw ValidationError("need at least one point");
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (points[a].size() != num_states) throw DimensionError("point dimension differs from state count");
    for (std::size_t b = 0; b < a; ++b) {
      if (points[a] == points[b]) throw ValidationError("points must be distinct");
    }
  }
  const std::size_t k = points.size();
  ReceiverDesign out{Matrix(num_states, k * (num_states + 1)), min_squared_distance(points)};
  for (std::size_t p = 0; p < k; ++p) {
    Rational norm;
    for (const auto& x : points[p]) {
      if (!x.is_zero()) norm += x * x;
    }
    for (std::size_t i = 0; i < num_states; ++i) {
      const Rational tangent = points[p][i] + points[p][i] - norm;
      out.utility(i, p) = tangent;
      for (std::size_t w = 0; w < num_states; ++w) {
        Rational tilt = (i == w ? Rational(1) : Rational(0)) - points[p][w];
        out.utility(i, k + p * num_states + w) = tangent + out.epsilon * tilt;
      }
    }
  }
  return out;
}

struct ReductionOptions {
  bool normalize = false;
  // Sender utility of the extra no-information action, on the output scale.
  std::optional<Rational> babbling_gap_alpha;
};

struct ReductionInstance {
  Game game;
  ReductionMetadata meta;
};

inline Rational normalize_sender_utility(const Rational& u) { return (u + 7) / 8; }

/// Cheap talk instance whose sender-optimal value is k d / (7m), k the
/// Max-Var-3SAT value of the formula. Uniform prior over the 7m states.
inline ReductionInstance build_instance(const CnfFormula& formula, const ReductionOptions& options = {}) {
  PoolCatalog cat = build_pools(formula);
  const std::size_t n_states = cat.states.size();
  if (options.babbling_gap_alpha) cat.pools.push_back(Pool{"Prior", PoolKind::kPrior, {}});

  std::vector<Vector> points;
  for (const Pool& p : cat.pools) points.push_back(pool_posterior(p, n_states));
  ReceiverDesign design = design_receiver_utilities(n_states, points);

  ReductionMetadata meta;
  meta.formula_digest = formula_digest(formula);
  meta.formula = formula;
  meta.d = cat.d;
  meta.n = formula.num_variables;
  meta.m = formula.clauses.size();
  meta.states = cat.states;
  meta.pools = cat.pools;
  meta.epsilon = design.epsilon;
  meta.normalized = options.normalize;
  meta.babbling_gap_alpha = options.babbling_gap_alpha;

  const std::size_t num_actions = meta.num_actions();
  std::vector<std::string> actions(num_actions);
  for (std::size_t p = 0; p < cat.pools.size(); ++p) {
    actions[meta.pool_action(p)] = "a:" + cat.pools[p].name;
    for (std::size_t w = 0; w < n_states; ++w) {
      actions[meta.facet_action(p, w)] = "a:" + cat.pools[p].name + "@" + cat.states[w];
    }
  }

  Matrix receiver(n_states, num_actions);
  for (std::size_t i = 0; i < n_states; ++i) {
    for (std::size_t a = 0; a < design.utility.cols(); ++a) receiver(i, a) = design.utility(i, a);
  }

  const Rational penalty = options.normalize ? Rational(0) : Rational(-7);
  const Rational zero = options.normalize ? Rational(7, 8) : Rational(0);
  const Rational one = 1;
  Matrix sender(n_states, num_actions);
  for (std::size_t i = 0; i < n_states; ++i) {
    for (std::size_t a = 0; a < num_actions; ++a) sender(i, a) = penalty;
  }
  for (std::size_t p = 0; p < cat.pools.size(); ++p) {
    const Pool& pool = cat.pools[p];
    if (pool.kind == PoolKind::kPrior) continue;
    const bool variable = pool.kind == PoolKind::kVariable || pool.kind == PoolKind::kNegVariable;
    for (std::size_t w : pool.members) sender(w, meta.pool_action(p)) = variable ? one : zero;
  }

  if (options.babbling_gap_alpha) {
    // a_0 copies the receiver's payoffs of the prior pool's action, so it is
    // a best response exactly at the prior; its sender payoff is constant.
    actions.back() = "a0";
    const std::size_t prior_pool = cat.pools.size() - 1;
    for (std::size_t i = 0; i < n_states; ++i) {
      receiver(i, num_actions - 1) = receiver(i, meta.pool_action(prior_pool));
      sender(i, num_actions - 1) = *options.babbling_gap_alpha;
    }
  }

  Vector prior(n_states, Rational(1, static_cast<std::int64_t>(n_states)));
  return ReductionInstance{Game(cat.states, actions, prior, sender, receiver), std::move(meta)};
}

inline std::size_t find_pool(const ReductionMetadata& meta, const std::vector<std::size_t>& members, PoolKind kind) {
  for (std::size_t p = 0; p < meta.pools.size(); ++p) {
    if (meta.pools[p].kind == kind && meta.pools[p].members == members) return p;
  }
  throw ValidationError("no pool with the requested members");
}

/// Equilibrium of the reduction instance certifying a non-contradictory
/// partial assignment: each variable set True (False) forms the pool of its
/// negative (positive) states, each clause state joins the clause pool
/// matching the assignment (unassigned variables take the polarity they have
/// in that clause), and every remaining variable state is a singleton. The
/// receiver plays the pool's own action after each signal. Sender value is
/// k d / (7m) before normalisation.
inline Profile construct_equilibrium(const ReductionMetadata& meta, const PartialAssignment& assignment) {
  const CnfFormula& f = meta.formula;
  if (assignment.size() != f.num_variables) throw DimensionError("assignment length differs from variable count");
  if (!contradictory_clauses(f, assignment).empty()) {
    throw ValidationError("assignment creates a contradictory clause");
  }
  const std::size_t n_states = meta.states.size();
  std::vector<std::optional<std::size_t>> pool_of(n_states);
  std::vector<bool> used(meta.pools.size(), false);
  auto place = [&](std::size_t pool) {
    used[pool] = true;
    for (std::size_t w : meta.pools[pool].members) {
      if (pool_of[w]) throw std::logic_error("state placed in two pools");
      pool_of[w] = pool;
    }
  };

  for (std::size_t i = 0; i < f.num_variables; ++i) {
    if (!assignment[i]) continue;
    place(2 * i + (*assignment[i] ? 1 : 0));
  }
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    std::vector<std::size_t> members;
    for (std::size_t l = 0; l < 3; ++l) {
      const Literal& lit = f.clauses[j][l];
      const bool value = assignment[lit.variable] ? *assignment[lit.variable] : !lit.negated;
      members.push_back(literal_state(j, l, !value));
    }
    members.push_back(clause_state(j));
    place(find_pool(meta, members, PoolKind::kClause));
  }
  for (std::size_t w = 0; w < n_states; ++w) {
    if (!pool_of[w]) place(find_pool(meta, {w}, PoolKind::kSingleton));
  }

  Profile profile;
  std::vector<std::size_t> signal_of_pool(meta.pools.size());
  const std::size_t num_actions = meta.num_actions();
  for (std::size_t p = 0; p < meta.pools.size(); ++p) {
    if (!used[p]) continue;
    signal_of_pool[p] = profile.policy.signals.size();
    profile.policy.signals.push_back(meta.pools[p].name);
    Vector row(num_actions);
    row[meta.pool_action(p)] = 1;
    profile.response.rows.push_back(std::move(row));
  }
  profile.policy.rows.assign(n_states, Vector(profile.policy.signals.size()));
  for (std::size_t w = 0; w < n_states; ++w) profile.policy.rows[w][signal_of_pool[*pool_of[w]]] = 1;
  return profile;
}

/// Sender value that construct_equilibrium certifies for k assigned variables.
inline Rational certified_value(const ReductionMetadata& meta, std::size_t k) {
  Rational v(static_cast<std::int64_t>(k * meta.d), static_cast<std::int64_t>(7 * meta.m));
  return meta.normalized ? normalize_sender_utility(v) : v;
}

/// Variable pools induced with positive probability at which the receiver
/// plays the pool's own action with probability above 7/8.
inline std::vector<std::size_t> attractive_pools(const Game& game, const ReductionMetadata& meta,
                                                 const Profile& profile) {
  const auto posteriors = bayes_posteriors(game, profile.policy);
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < meta.pools.size(); ++p) {
    const Pool& pool = meta.pools[p];
    if (pool.kind != PoolKind::kVariable && pool.kind != PoolKind::kNegVariable) continue;
    const Vector target = pool_posterior(pool, meta.states.size());
    for (std::size_t s = 0; s < posteriors.size(); ++s) {
      if (posteriors[s].marginal.sign() > 0 && posteriors[s].distribution == target &&
          profile.response.rows[s][meta.pool_action(p)] > Rational(7, 8)) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

/// Assignment read off attractive pools: the positive pool of x_i makes it
/// False, the negative pool True. Both at once is an error.
inline PartialAssignment induced_assignment(const ReductionMetadata& meta, const std::vector<std::size_t>& attractive) {
  PartialAssignment x(meta.n);
  for (std::size_t p : attractive) {
    const std::size_t i = p / 2;
    const bool value = meta.pools[p].kind == PoolKind::kNegVariable;
    if (x[i] && *x[i] != value) {
      throw ValidationError("both variable pools of x" + std::to_string(i + 1) + " are attractive");
    }
    x[i] = value;
  }
  return x;
}

}  // namespace cheaptalk
