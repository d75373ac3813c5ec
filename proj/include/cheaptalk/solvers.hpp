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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cheaptalk/error.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/lp.hpp"

namespace cheaptalk {

enum class SolveMethod { kGreedy, kBabbling, kEnumeration, kPersuasionLp };

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::kGreedy:
      return "greedy";
    case SolveMethod::kBabbling:
      return "babbling";
    case SolveMethod::kEnumeration:
      return "enumeration";
    case SolveMethod::kPersuasionLp:
      return "persuasionLP";
  }
  return "?";
}

struct SolveDiagnostics {
  std::size_t supports_examined = 0;
  std::size_t lps_solved = 0;
};

struct SolveResult {
  Rational value;
  Profile profile;
  SolveMethod method = SolveMethod::kEnumeration;
  SolveDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// Binary-action receiver.

/// States of a two-action game grouped by who prefers what. Sender-indifferent
/// states are split by the receiver's strict preference for the first action;
/// states where both players are indifferent are kept apart.
struct StatePartition {
  std::vector<std::size_t> prefers_first;             // sender: a1 > a2
  std::vector<std::size_t> prefers_second;            // sender: a2 > a1
  std::vector<std::size_t> indifferent_receiver_first;   // sender tie, receiver a1 > a2
  std::vector<std::size_t> indifferent_receiver_second;  // sender tie, receiver a1 < a2
  std::vector<std::size_t> doubly_indifferent;        // both players tie
};

inline StatePartition partition_states(const Game& game) {
  if (game.num_actions() != 2) throw ValidationError("binary-action solver needs exactly 2 actions");
  StatePartition p;
  for (std::size_t w = 0; w < game.num_states(); ++w) {
    auto cs = game.sender(w, 0) <=> game.sender(w, 1);
    auto cr = game.receiver(w, 0) <=> game.receiver(w, 1);
    if (cs > 0) {
      p.prefers_first.push_back(w);
    } else if (cs < 0) {
      p.prefers_second.push_back(w);
    } else if (cr > 0) {
      p.indifferent_receiver_first.push_back(w);
    } else if (cr < 0) {
      p.indifferent_receiver_second.push_back(w);
    } else {
      p.doubly_indifferent.push_back(w);
    }
  }
  return p;
}

/// Sender-optimal equilibrium for m = 2 in one pass over the states: the
/// sender-greedy recommendation policy (receiver obeys) when both obedience
/// conditions hold, otherwise the sender-favourable babbling equilibrium.
/// States where both players are indifferent are recommended the second action.
inline SolveResult solve_binary_action(const Game& game) {
  const StatePartition part = partition_states(game);
  const std::size_t n = game.num_states();

  std::vector<bool> recommend_first(n, false);
  for (auto w : part.prefers_first) recommend_first[w] = true;
  for (auto w : part.indifferent_receiver_first) recommend_first[w] = true;

  // Receiver utilities normalised so that u_R(w, a2) = 0.
  Rational first_sum, second_sum, greedy_value;
  bool any_first = false, any_second = false;
  for (std::size_t w = 0; w < n; ++w) {
    Rational gain = (game.receiver(w, 0) - game.receiver(w, 1)) * game.prior()[w];
    if (recommend_first[w]) {
      first_sum += gain;
      any_first = true;
    } else {
      second_sum += gain;
      any_second = true;
    }
    greedy_value += game.prior()[w] * std::max(game.sender(w, 0), game.sender(w, 1));
  }

  SolveResult result;
  if (first_sum.sign() >= 0 && second_sum.sign() <= 0) {
    Profile p;
    p.policy.rows.assign(n, Vector{});
    auto add_signal = [&](std::size_t action, bool first) {
      p.policy.signals.push_back("rec_" + game.actions()[action]);
      for (std::size_t w = 0; w < n; ++w) p.policy.rows[w].push_back(recommend_first[w] == first ? 1 : 0);
      Vector row(2);
      row[action] = 1;
      p.response.rows.push_back(std::move(row));
    };
    if (any_first) add_signal(0, true);
    if (any_second) add_signal(1, false);
    result.profile = std::move(p);
    result.value = greedy_value;
    result.method = SolveMethod::kGreedy;
  } else {
    result.profile = babbling_equilibrium(game, TieBreak::kSenderFavor);
    result.value = profile_values(game, result.profile).sender;
    result.method = SolveMethod::kBabbling;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Persuasion (commitment) benchmark.

/// Optimal Bayesian persuasion value via the direct-recommendation LP. The
/// returned profile recommends actions and is obedient, but is generally not
/// a cheap talk equilibrium.
inline SolveResult solve_persuasion_lp(const Game& game) {
  const std::size_t n = game.num_states();
  const std::size_t m = game.num_actions();
  auto var = [m](std::size_t w, std::size_t a) { return w * m + a; };

  LinearProgram lp(n * m);
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t a = 0; a < m; ++a) lp.objective[var(w, a)] = game.prior()[w] * game.sender(w, a);
    Vector row(n * m);
    for (std::size_t a = 0; a < m; ++a) row[var(w, a)] = 1;
    lp.add_constraint(std::move(row), Relation::kEqual, 1);
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      Vector row(n * m);
      for (std::size_t w = 0; w < n; ++w) row[var(w, a)] = game.prior()[w] * (game.receiver(w, a) - game.receiver(w, b));
      lp.add_constraint(std::move(row), Relation::kGreaterEqual, 0);
    }
  }
  LpResult r = lp_optimize(lp, Sense::kMaximize);
  if (r.status != LpStatus::kOptimal) throw std::logic_error("persuasion LP is always feasible and bounded");

  SolveResult result;
  result.method = SolveMethod::kPersuasionLp;
  result.value = r.value;
  result.diagnostics.lps_solved = 1;
  Profile& p = result.profile;
  p.policy.rows.assign(n, Vector{});
  for (std::size_t a = 0; a < m; ++a) {
    bool used = false;
    for (std::size_t w = 0; w < n; ++w) used = used || r.point[var(w, a)].sign() > 0;
    if (!used) continue;
    p.policy.signals.push_back("rec_" + game.actions()[a]);
    for (std::size_t w = 0; w < n; ++w) p.policy.rows[w].push_back(r.point[var(w, a)]);
    Vector row(m);
    row[a] = 1;
    p.response.rows.push_back(std::move(row));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Support enumeration for a small number of states.

struct EnumerationOptions {
  ObjectiveKind objective = ObjectiveKind::kSender;
  // Number of signals available to the sender; defaults to the state count.
  std::optional<std::size_t> signal_budget;
  std::size_t max_states = 4;
  bool override_guard = false;
};

namespace detail {

using Mask = std::uint64_t;

inline std::vector<std::size_t> bits(Mask m) {
  std::vector<std::size_t> out;
  while (m != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

// A candidate signal: the states allowed to send it and the actions the
// receiver may mix over after it.
struct SignalSupport {
  Mask states = 0;
  Mask actions = 0;
};

class SupportEnumerator {
 public:
  SupportEnumerator(const Game& game, ObjectiveKind objective, std::size_t budget)
      : game_(game), objective_(objective), budget_(budget), n_(game.num_states()), m_(game.num_actions()) {}

  SolveResult run() {
    // Babbling is always an equilibrium, so configurations that cannot reach
    // its value are skipped without changing which optimum is found first.
    const Profile babble = babbling_equilibrium(game_, TieBreak::kSenderFavor);
    floor_ = profile_objective(game_, babble, Objective{objective_, {}});
    build_candidates();
    std::vector<std::size_t> chosen;
    search(0, 0, chosen);
    if (!best_) throw std::logic_error("support enumeration found no equilibrium");
    return assemble();
  }

 private:
  struct Solution {
    Rational value;
    std::vector<std::size_t> config;
    Vector response;  // y, laid out by signal then action in the support
    Vector policy;    // pi, laid out by state then signal in the support
  };

  // Is there a belief supported within `states` at which every action of
  // `actions` is a best response?
  bool support_feasible(Mask states, Mask actions) {
    const auto ws = bits(states);
    const auto as = bits(actions);
    LinearProgram lp(ws.size());
    lp.add_constraint(Vector(ws.size(), Rational(1)), Relation::kEqual, 1);
    for (std::size_t b = 0; b < m_; ++b) {
      if (b == as[0]) continue;
      Vector row(ws.size());
      for (std::size_t i = 0; i < ws.size(); ++i) row[i] = game_.receiver(ws[i], as[0]) - game_.receiver(ws[i], b);
      lp.add_constraint(std::move(row), ((actions >> b) & 1) ? Relation::kEqual : Relation::kGreaterEqual, 0);
    }
    ++diagnostics_.lps_solved;
    return lp_optimize(lp, Sense::kMaximize).status == LpStatus::kOptimal;
  }

  void build_candidates() {
    const Mask all_states = (Mask{1} << n_) - 1;
    for (Mask w = 1; w <= all_states; ++w) {
      // Grow action sets upward from feasible ones only.
      std::vector<Mask> frontier;
      for (std::size_t a = 0; a < m_; ++a) {
        if (support_feasible(w, Mask{1} << a)) frontier.push_back(Mask{1} << a);
      }
      std::vector<Mask> feasible;
      while (!frontier.empty()) {
        feasible.insert(feasible.end(), frontier.begin(), frontier.end());
        std::vector<Mask> next;
        for (Mask t : frontier) {
          const std::size_t top = 63 - static_cast<std::size_t>(std::countl_zero(t));
          for (std::size_t a = top + 1; a < m_; ++a) {
            const Mask grown = t | (Mask{1} << a);
            bool subsets_ok = true;
            for (std::size_t b : bits(t)) {
              Mask sub = grown & ~(Mask{1} << b);
              subsets_ok = subsets_ok && std::find(feasible.begin(), feasible.end(), sub) != feasible.end();
            }
            if (subsets_ok && support_feasible(w, grown)) next.push_back(grown);
          }
        }
        frontier = std::move(next);
      }
      std::sort(feasible.begin(), feasible.end());
      for (Mask t : feasible) candidates_.push_back({w, t});
    }
  }

  // Depth-first over increasing candidate indices; a configuration is
  // evaluated when its signals' state sets cover every state. Two signals
  // with the same pure response are never both chosen: they would be
  // outcome-equivalent to a single merged signal.
  void search(std::size_t start, Mask covered, std::vector<std::size_t>& chosen) {
    const Mask all_states = (Mask{1} << n_) - 1;
    for (std::size_t i = start; i < candidates_.size(); ++i) {
      const SignalSupport& c = candidates_[i];
      if (std::has_single_bit(c.actions)) {
        bool duplicate = false;
        for (std::size_t j : chosen) duplicate = duplicate || candidates_[j].actions == c.actions;
        if (duplicate) continue;
      }
      chosen.push_back(i);
      const Mask now = covered | c.states;
      if (now == all_states) evaluate(chosen);
      if (chosen.size() < budget_) search(i + 1, now, chosen);
      chosen.pop_back();
    }
  }

  // Cheap screen before any LP. In state w the sender earns the same amount
  // from every signal it sends, at most the best payoff that signal's action
  // set allows, and at least the worst payoff of any other signal. Returns
  // nullopt when these ranges cannot meet, otherwise a bound on the objective.
  std::optional<Rational> screen(const std::vector<std::size_t>& config) const {
    Rational bound;
    for (std::size_t w = 0; w < n_; ++w) {
      std::optional<Rational> ceiling, floor, receiver_best;
      for (std::size_t j : config) {
        const auto& c = candidates_[j];
        const bool sends = (c.states >> w) & 1;
        std::optional<Rational> hi, lo;
        for (std::size_t a : bits(c.actions)) {
          const Rational& u = game_.sender(w, a);
          if (!hi || u > *hi) hi = u;
          if (!lo || u < *lo) lo = u;
          if (sends && (!receiver_best || game_.receiver(w, a) > *receiver_best)) receiver_best = game_.receiver(w, a);
        }
        if (sends && (!ceiling || *hi < *ceiling)) ceiling = hi;
        if (!floor || *lo > *floor) floor = lo;
      }
      if (*ceiling < *floor) return std::nullopt;
      Rational v;
      if (objective_ != ObjectiveKind::kReceiver) v += *ceiling;
      if (objective_ != ObjectiveKind::kSender) v += *receiver_best;
      bound += game_.prior()[w] * v;
    }
    return bound;
  }

  // Receiver mixtures y subject to the sender's incentive constraints; the
  // sender's value is linear in y once the signal supports are fixed.
  std::optional<LpResult> response_lp(const std::vector<std::size_t>& config) {
    const std::size_t k = config.size();
    std::vector<std::size_t> offset(k + 1, 0);
    std::vector<std::vector<std::size_t>> acts(k);
    for (std::size_t s = 0; s < k; ++s) {
      acts[s] = bits(candidates_[config[s]].actions);
      offset[s + 1] = offset[s] + acts[s].size();
    }
    LinearProgram lp(offset[k]);
    for (std::size_t s = 0; s < k; ++s) {
      Vector row(offset[k]);
      for (std::size_t i = 0; i < acts[s].size(); ++i) row[offset[s] + i] = 1;
      lp.add_constraint(std::move(row), Relation::kEqual, 1);
    }
    // In each state, every signal it sends must pay the sender as much as the
    // first one it sends, and every other signal no more.
    for (std::size_t w = 0; w < n_; ++w) {
      std::optional<std::size_t> first;
      for (std::size_t s = 0; s < k && !first; ++s) {
        if ((candidates_[config[s]].states >> w) & 1) first = s;
      }
      for (std::size_t t = 0; t < k; ++t) {
        if (t == *first) continue;
        Vector row(offset[k]);
        for (std::size_t i = 0; i < acts[*first].size(); ++i) row[offset[*first] + i] += game_.sender(w, acts[*first][i]);
        for (std::size_t i = 0; i < acts[t].size(); ++i) row[offset[t] + i] -= game_.sender(w, acts[t][i]);
        const bool sends = (candidates_[config[t]].states >> w) & 1;
        lp.add_constraint(std::move(row), sends ? Relation::kEqual : Relation::kGreaterEqual, 0);
      }
      if (objective_ != ObjectiveKind::kReceiver) {
        for (std::size_t i = 0; i < acts[*first].size(); ++i) {
          lp.objective[offset[*first] + i] += game_.prior()[w] * game_.sender(w, acts[*first][i]);
        }
      }
    }
    if (offset[k] == k) {
      // Pure responses: y is fixed, so just check the constraints.
      LpResult r;
      r.status = LpStatus::kOptimal;
      r.point.assign(k, Rational(1));
      for (const auto& c : lp.constraints) {
        const Rational lhs = sum(c.coefficients);
        const auto cmp = lhs <=> c.rhs;
        const bool ok = c.relation == Relation::kEqual ? cmp == 0 : c.relation == Relation::kGreaterEqual ? cmp >= 0 : cmp <= 0;
        if (!ok) return std::nullopt;
      }
      r.value = sum(lp.objective);
      return r;
    }
    ++diagnostics_.lps_solved;
    LpResult r = lp_optimize(lp, Sense::kMaximize);
    if (r.status != LpStatus::kOptimal) return std::nullopt;
    return r;
  }

  // Signalling probabilities subject to the receiver's incentive constraints;
  // the receiver's value is linear in pi once the action supports are fixed.
  std::optional<LpResult> policy_lp(const std::vector<std::size_t>& config) {
    const std::size_t k = config.size();
    // Variable index of pi(s | w) when w may send s.
    std::vector<std::vector<std::optional<std::size_t>>> var(n_, std::vector<std::optional<std::size_t>>(k));
    std::size_t count = 0;
    for (std::size_t w = 0; w < n_; ++w) {
      for (std::size_t s = 0; s < k; ++s) {
        if ((candidates_[config[s]].states >> w) & 1) var[w][s] = count++;
      }
    }
    LinearProgram lp(count);
    for (std::size_t w = 0; w < n_; ++w) {
      Vector row(count);
      for (std::size_t s = 0; s < k; ++s) {
        if (var[w][s]) row[*var[w][s]] = 1;
      }
      lp.add_constraint(std::move(row), Relation::kEqual, 1);
    }
    for (std::size_t s = 0; s < k; ++s) {
      const Mask actions = candidates_[config[s]].actions;
      const std::size_t lead = static_cast<std::size_t>(std::countr_zero(actions));
      for (std::size_t b = 0; b < m_; ++b) {
        if (b == lead) continue;
        Vector row(count);
        for (std::size_t w = 0; w < n_; ++w) {
          if (var[w][s]) row[*var[w][s]] = game_.prior()[w] * (game_.receiver(w, lead) - game_.receiver(w, b));
        }
        lp.add_constraint(std::move(row), ((actions >> b) & 1) ? Relation::kEqual : Relation::kGreaterEqual, 0);
      }
      if (objective_ != ObjectiveKind::kSender) {
        for (std::size_t w = 0; w < n_; ++w) {
          if (var[w][s]) lp.objective[*var[w][s]] += game_.prior()[w] * game_.receiver(w, lead);
        }
      }
    }
    ++diagnostics_.lps_solved;
    LpResult r = lp_optimize(lp, Sense::kMaximize);
    if (r.status != LpStatus::kOptimal) return std::nullopt;
    return r;
  }

  void evaluate(const std::vector<std::size_t>& config) {
    ++diagnostics_.supports_examined;
    const auto bound = screen(config);
    if (!bound || *bound < floor_ || (best_ && *bound <= best_->value)) return;
    std::optional<LpResult> y, pi;
    if (objective_ != ObjectiveKind::kSender) {
      pi = policy_lp(config);
      if (!pi || (objective_ == ObjectiveKind::kReceiver && best_ && pi->value <= best_->value)) return;
      y = response_lp(config);
      if (!y) return;
    } else {
      pi = policy_lp(config);
      if (!pi) return;
      y = response_lp(config);
      if (!y) return;
    }
    Rational value = y->value + pi->value;
    if (best_ && value <= best_->value) return;
    best_ = Solution{std::move(value), config, std::move(y->point), std::move(pi->point)};
  }

  SolveResult assemble() const {
    const auto& config = best_->config;
    const std::size_t k = config.size();
    SolveResult result;
    result.method = SolveMethod::kEnumeration;
    result.diagnostics = diagnostics_;

    // Unpack pi and drop signals that end up with zero probability.
    std::vector<Vector> pi(n_, Vector(k));
    std::size_t idx = 0;
    for (std::size_t w = 0; w < n_; ++w) {
      for (std::size_t s = 0; s < k; ++s) {
        if ((candidates_[config[s]].states >> w) & 1) pi[w][s] = best_->policy[idx++];
      }
    }
    Profile& p = result.profile;
    p.policy.rows.assign(n_, Vector{});
    std::size_t y_offset = 0;
    for (std::size_t s = 0; s < k; ++s) {
      const auto acts = bits(candidates_[config[s]].actions);
      Rational marginal;
      for (std::size_t w = 0; w < n_; ++w) marginal += game_.prior()[w] * pi[w][s];
      if (marginal.sign() > 0) {
        p.policy.signals.push_back("s" + std::to_string(p.policy.signals.size() + 1));
        for (std::size_t w = 0; w < n_; ++w) p.policy.rows[w].push_back(pi[w][s]);
        Vector row(m_);
        for (std::size_t i = 0; i < acts.size(); ++i) row[acts[i]] = best_->response[y_offset + i];
        p.response.rows.push_back(std::move(row));
      }
      y_offset += acts.size();
    }

    Objective objective{objective_, {}};
    result.value = profile_objective(game_, p, objective);
    if (result.value != best_->value) throw std::logic_error("enumeration value does not match its profile");
    return result;
  }

  const Game& game_;
  ObjectiveKind objective_;
  std::size_t budget_;
  std::size_t n_;
  std::size_t m_;
  std::vector<SignalSupport> candidates_;
  std::optional<Solution> best_;
  Rational floor_;
  SolveDiagnostics diagnostics_;
};

}  // namespace detail

/// Optimal equilibrium (for the sender, receiver or welfare) by exhaustive
/// search over signal supports, for games with few states.
///
/// With a signal set of fixed size, a candidate equilibrium is described by
/// which states may send each signal and which actions the receiver may mix
/// over after it. For fixed supports the sender's incentive constraints and
/// value are linear in the receiver's mixtures alone, and the receiver's
/// constraints and value are linear in the signalling probabilities alone,
/// so each support pattern costs two exact LPs. Patterns are scanned in a
/// fixed lexicographic order and the first strictly best one is kept.
inline SolveResult solve_enumeration(const Game& game, const EnumerationOptions& options = {}) {
  if (options.objective == ObjectiveKind::kCustom) {
    throw ValidationError("enumeration supports sender, receiver and welfare objectives");
  }
  const std::size_t n = game.num_states();
  if (n > options.max_states && !options.override_guard) {
    throw GuardExceeded("support enumeration limited to " + std::to_string(options.max_states) +
                        " states (game has " + std::to_string(n) + "); override to force");
  }
  if (n > 16 || game.num_actions() > 63) throw GuardExceeded("support enumeration instance too large");
  const std::size_t budget = options.signal_budget.value_or(n);
  if (budget == 0) throw ValidationError("signal budget must be positive");
  detail::SupportEnumerator e(game, options.objective, budget);
  return e.run();
}

}  // namespace cheaptalk
