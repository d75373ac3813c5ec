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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cheaptalk/error.hpp"
#include "cheaptalk/linalg.hpp"
#include "cheaptalk/rational.hpp"

namespace cheaptalk {

/// A finite cheap talk game: states with a common prior, receiver actions,
/// and state-by-action utility tables for both players. The constructor
/// enforces the invariants, so every Game in existence is valid.
class Game {
 public:
  Game(std::vector<std::string> states, std::vector<std::string> actions, Vector prior,
       Matrix sender_utility, Matrix receiver_utility)
      : states_(std::move(states)),
        actions_(std::move(actions)),
        prior_(std::move(prior)),
        sender_(std::move(sender_utility)),
        receiver_(std::move(receiver_utility)) {
    validate();
  }

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const Vector& prior() const { return prior_; }
  const Matrix& sender_utility() const { return sender_; }
  const Matrix& receiver_utility() const { return receiver_; }
  const Rational& sender(std::size_t state, std::size_t action) const { return sender_(state, action); }
  const Rational& receiver(std::size_t state, std::size_t action) const {
    return receiver_(state, action);
  }

  std::optional<std::size_t> state_index(std::string_view label) const { return find(states_, label); }
  std::optional<std::size_t> action_index(std::string_view label) const { return find(actions_, label); }

  friend bool operator==(const Game&, const Game&) = default;

 private:
  static std::optional<std::size_t> find(const std::vector<std::string>& v, std::string_view label) {
    auto it = std::find(v.begin(), v.end(), label);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  }

  static void check_labels(const std::vector<std::string>& labels, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw ValidationError(std::string("duplicate ") + what + " label '" + l + "'");
    }
  }

  void validate() const {
    if (states_.empty()) throw ValidationError("game needs at least one state");
    if (actions_.empty()) throw ValidationError("game needs at least one action");
    check_labels(states_, "state");
    check_labels(actions_, "action");
    if (prior_.size() != states_.size()) throw ValidationError("prior length differs from state count");
    for (const auto& p : prior_) {
      if (p.sign() <= 0) throw ValidationError("prior entries must be strictly positive");
    }
    if (sum(prior_) != 1) throw ValidationError("prior must sum to 1, got " + sum(prior_).str());
    for (const Matrix* m : {&sender_, &receiver_}) {
      if (m->rows() != states_.size() || m->cols() != actions_.size()) {
        throw ValidationError("utility table must be states x actions");
      }
    }
  }

  std::vector<std::string> states_;
  std::vector<std::string> actions_;
  Vector prior_;
  Matrix sender_;
  Matrix receiver_;
};

/// pi(signal | state), one row per state, one column per listed signal.
struct SignalingPolicy {
  std::vector<std::string> signals;
  std::vector<Vector> rows;

  friend bool operator==(const SignalingPolicy&, const SignalingPolicy&) = default;
};

/// s(action | signal), one row per signal of the accompanying policy.
struct ReceiverStrategy {
  std::vector<Vector> rows;

  friend bool operator==(const ReceiverStrategy&, const ReceiverStrategy&) = default;
};

struct Profile {
  SignalingPolicy policy;
  ReceiverStrategy response;

  std::size_t num_signals() const { return policy.signals.size(); }

  friend bool operator==(const Profile&, const Profile&) = default;
};

struct Posterior {
  Vector distribution;
  Rational marginal;
};

struct ProfileValues {
  Rational sender;
  Rational receiver;
  Rational welfare;
};

struct Violation {
  enum class Kind { kSenderDeviation, kReceiverSuboptimal };

  Kind kind = Kind::kSenderDeviation;
  // State index for sender deviations, signal index for receiver ones.
  std::size_t where = 0;
  // Signal sent (resp. action played) with positive probability.
  std::size_t used = 0;
  // A strictly better signal (resp. a best-response action).
  std::size_t better = 0;
  Rational gap;
};

struct Verdict {
  bool is_equilibrium = true;
  std::vector<Violation> violations;
};

enum class TieBreak { kSenderFavor, kIndexOrder };

enum class ObjectiveKind { kSender, kReceiver, kWelfare, kCustom };

/// A linear objective over outcomes, given as a state x action weight table.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::kSender;
  Matrix weights;  // used only for kCustom

  static Objective sender() { return {ObjectiveKind::kSender, {}}; }
  static Objective receiver() { return {ObjectiveKind::kReceiver, {}}; }
  static Objective welfare() { return {ObjectiveKind::kWelfare, {}}; }
  static Objective custom(Matrix w) { return {ObjectiveKind::kCustom, std::move(w)}; }
};

inline Matrix objective_weights(const Game& game, const Objective& objective) {
  switch (objective.kind) {
    case ObjectiveKind::kSender:
      return game.sender_utility();
    case ObjectiveKind::kReceiver:
      return game.receiver_utility();
    case ObjectiveKind::kWelfare: {
      Matrix w(game.num_states(), game.num_actions());
      for (std::size_t i = 0; i < game.num_states(); ++i) {
        for (std::size_t a = 0; a < game.num_actions(); ++a) w(i, a) = game.sender(i, a) + game.receiver(i, a);
      }
      return w;
    }
    case ObjectiveKind::kCustom:
      if (objective.weights.rows() != game.num_states() || objective.weights.cols() != game.num_actions()) {
        throw DimensionError("custom objective must be states x actions");
      }
      return objective.weights;
  }
  throw ValidationError("unknown objective");
}

namespace detail {

inline void check_distribution(std::span<const Rational> row, std::size_t expected, const std::string& what) {
  if (row.size() != expected) throw ValidationError(what + " has wrong length");
  for (const auto& x : row) {
    if (x.sign() < 0) throw ValidationError(what + " has a negative entry");
  }
  if (sum(row) != 1) throw ValidationError(what + " does not sum to 1");
}

}  // namespace detail

inline Rational signal_marginal(const Game& game, const SignalingPolicy& policy, std::size_t signal) {
  Rational m;
  for (std::size_t w = 0; w < game.num_states(); ++w) {
    const Rational& p = policy.rows[w][signal];
    if (!p.is_zero()) m += p * game.prior()[w];
  }
  return m;
}

/// Throws ValidationError unless the profile is well formed for the game:
/// stochastic rows, unique signal labels, every listed signal on path.
inline void validate_profile(const Game& game, const Profile& profile) {
  const auto& policy = profile.policy;
  const std::size_t k = policy.signals.size();
  if (k == 0) throw ValidationError("policy lists no signals");
  std::set<std::string_view> seen;
  for (const auto& s : policy.signals) {
    if (!seen.insert(s).second) throw ValidationError("duplicate signal label '" + s + "'");
  }
  if (policy.rows.size() != game.num_states()) throw ValidationError("policy needs one row per state");
  for (std::size_t w = 0; w < game.num_states(); ++w) {
    detail::check_distribution(policy.rows[w], k, "policy row for state '" + game.states()[w] + "'");
  }
  for (std::size_t s = 0; s < k; ++s) {
    if (signal_marginal(game, policy, s).is_zero()) {
      throw ValidationError("signal '" + policy.signals[s] + "' is never sent");
    }
  }
  if (profile.response.rows.size() != k) throw ValidationError("receiver strategy needs one row per signal");
  for (std::size_t s = 0; s < k; ++s) {
    detail::check_distribution(profile.response.rows[s], game.num_actions(),
                               "receiver row for signal '" + policy.signals[s] + "'");
  }
}

/// Bayes' rule for every listed signal, aligned with policy.signals.
inline std::vector<Posterior> bayes_posteriors(const Game& game, const SignalingPolicy& policy) {
  const std::size_t n = game.num_states();
  if (policy.rows.size() != n) throw ValidationError("policy needs one row per state");
  std::vector<Posterior> out;
  out.reserve(policy.signals.size());
  for (std::size_t s = 0; s < policy.signals.size(); ++s) {
    Posterior post;
    post.distribution.resize(n);
    for (std::size_t w = 0; w < n; ++w) {
      if (policy.rows[w].size() != policy.signals.size()) throw ValidationError("policy row has wrong length");
      post.distribution[w] = policy.rows[w][s] * game.prior()[w];
      post.marginal += post.distribution[w];
    }
    if (post.marginal.is_zero()) {
      throw ValidationError("posterior undefined: signal '" + policy.signals[s] + "' has zero probability");
    }
    for (auto& x : post.distribution) x /= post.marginal;
    out.push_back(std::move(post));
  }
  return out;
}

inline Rational expected_utility(const Matrix& utility, std::span<const Rational> belief, std::size_t action) {
  Rational v;
  for (std::size_t w = 0; w < belief.size(); ++w) {
    if (!belief[w].is_zero()) v += belief[w] * utility(w, action);
  }
  return v;
}

/// Exact argmax of the receiver's expected utility at `belief`, ascending.
inline std::vector<std::size_t> receiver_best_responses(const Game& game, std::span<const Rational> belief) {
  detail::check_distribution(belief, game.num_states(), "belief");
  std::vector<std::size_t> best;
  Rational best_value;
  for (std::size_t a = 0; a < game.num_actions(); ++a) {
    Rational v = expected_utility(game.receiver_utility(), belief, a);
    if (best.empty() || v > best_value) {
      best.assign(1, a);
      best_value = std::move(v);
    } else if (v == best_value) {
      best.push_back(a);
    }
  }
  return best;
}

/// max_a E_belief[u_R(., a)].
inline Rational receiver_value(const Game& game, std::span<const Rational> belief) {
  detail::check_distribution(belief, game.num_states(), "belief");
  Rational best = expected_utility(game.receiver_utility(), belief, 0);
  for (std::size_t a = 1; a < game.num_actions(); ++a) {
    best = std::max(best, expected_utility(game.receiver_utility(), belief, a));
  }
  return best;
}

/// Value to a player with utility table `utility` in `state` when the
/// receiver answers with the action distribution `response`.
inline Rational response_value(const Matrix& utility, std::size_t state, std::span<const Rational> response) {
  Rational v;
  for (std::size_t a = 0; a < response.size(); ++a) {
    if (!response[a].is_zero()) v += response[a] * utility(state, a);
  }
  return v;
}

/// Signals in the policy's support maximising the sender's payoff in `state`.
/// Unlisted signals are never candidates: off-path deviations are excluded.
inline std::vector<std::size_t> sender_best_signals(const Game& game, std::size_t state, const Profile& profile) {
  if (state >= game.num_states()) throw ValidationError("state index out of range");
  validate_profile(game, profile);
  std::vector<std::size_t> best;
  Rational best_value;
  for (std::size_t s = 0; s < profile.num_signals(); ++s) {
    Rational v = response_value(game.sender_utility(), state, profile.response.rows[s]);
    if (best.empty() || v > best_value) {
      best.assign(1, s);
      best_value = std::move(v);
    } else if (v == best_value) {
      best.push_back(s);
    }
  }
  return best;
}

/// Expected value of an arbitrary state x action weight table under the
/// joint distribution of (state, signal, action) induced by the profile.
inline Rational expected_weight(const Game& game, const Profile& profile, const Matrix& weights) {
  Rational total;
  for (std::size_t w = 0; w < game.num_states(); ++w) {
    Rational state_total;
    for (std::size_t s = 0; s < profile.num_signals(); ++s) {
      const Rational& p = profile.policy.rows[w][s];
      if (p.is_zero()) continue;
      state_total += p * response_value(weights, w, profile.response.rows[s]);
    }
    total += game.prior()[w] * state_total;
  }
  return total;
}

inline ProfileValues profile_values(const Game& game, const Profile& profile) {
  validate_profile(game, profile);
  ProfileValues v;
  v.sender = expected_weight(game, profile, game.sender_utility());
  v.receiver = expected_weight(game, profile, game.receiver_utility());
  v.welfare = v.sender + v.receiver;
  return v;
}

inline Rational profile_objective(const Game& game, const Profile& profile, const Objective& objective) {
  validate_profile(game, profile);
  return expected_weight(game, profile, objective_weights(game, objective));
}

/// Checks both best-response conditions exactly and reports every violation.
/// Invalid profiles raise ValidationError rather than producing a verdict.
inline Verdict verify_equilibrium(const Game& game, const Profile& profile) {
  validate_profile(game, profile);
  Verdict verdict;
  const auto posteriors = bayes_posteriors(game, profile.policy);
  const std::size_t k = profile.num_signals();

  for (std::size_t s = 0; s < k; ++s) {
    const auto& belief = posteriors[s].distribution;
    std::vector<Rational> values(game.num_actions());
    std::size_t best = 0;
    for (std::size_t a = 0; a < game.num_actions(); ++a) {
      values[a] = expected_utility(game.receiver_utility(), belief, a);
      if (values[a] > values[best]) best = a;
    }
    for (std::size_t a = 0; a < game.num_actions(); ++a) {
      if (profile.response.rows[s][a].sign() > 0 && values[a] < values[best]) {
        verdict.violations.push_back(
            {Violation::Kind::kReceiverSuboptimal, s, a, best, values[best] - values[a]});
      }
    }
  }

  for (std::size_t w = 0; w < game.num_states(); ++w) {
    std::vector<Rational> values(k);
    std::size_t best = 0;
    for (std::size_t s = 0; s < k; ++s) {
      values[s] = response_value(game.sender_utility(), w, profile.response.rows[s]);
      if (values[s] > values[best]) best = s;
    }
    for (std::size_t s = 0; s < k; ++s) {
      if (profile.policy.rows[w][s].sign() > 0 && values[s] < values[best]) {
        verdict.violations.push_back(
            {Violation::Kind::kSenderDeviation, w, s, best, values[best] - values[s]});
      }
    }
  }
  verdict.is_equilibrium = verdict.violations.empty();
  return verdict;
}

/// No-revelation profile: a single signal, answered by a best response to
/// the prior. kSenderFavor picks, among the receiver's best responses, one
/// maximising the sender's prior-expected utility (lowest index on ties).
inline Profile babbling_equilibrium(const Game& game, TieBreak tie_break = TieBreak::kSenderFavor) {
  const auto best = receiver_best_responses(game, game.prior());
  std::size_t chosen = best.front();
  if (tie_break == TieBreak::kSenderFavor) {
    Rational chosen_value = expected_utility(game.sender_utility(), game.prior(), chosen);
    for (std::size_t a : best) {
      Rational v = expected_utility(game.sender_utility(), game.prior(), a);
      if (v > chosen_value) {
        chosen = a;
        chosen_value = std::move(v);
      }
    }
  }
  Profile p;
  p.policy.signals = {"babble"};
  p.policy.rows.assign(game.num_states(), Vector{Rational(1)});
  Vector row(game.num_actions());
  row[chosen] = 1;
  p.response.rows = {std::move(row)};
  return p;
}

}  // namespace cheaptalk
