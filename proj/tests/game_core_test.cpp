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

#include <gtest/gtest.h>

#include <vector>

#include "cheaptalk/game.hpp"
#include "test_support.hpp"

namespace cheaptalk {
namespace {

using testing::q;
using testing::vec;

TEST(GameTest, RejectsInvalidGames) {
  auto make = [](Vector prior, std::vector<std::string> states = {"a", "b"}) {
    return Game(states, {"x"}, prior, Matrix(states.size(), 1), Matrix(states.size(), 1));
  };
  EXPECT_NO_THROW(make({q(1, 3), q(2, 3)}));
  EXPECT_THROW(make({1, 1}), ValidationError);
  EXPECT_THROW(make({0, 1}), ValidationError);
  EXPECT_THROW(make({q(3, 2), q(-1, 2)}), ValidationError);
  EXPECT_THROW(make({q(1, 2), q(1, 2)}, {"a", "a"}), ValidationError);
  EXPECT_THROW(Game({"a"}, {}, {1}, Matrix(1, 0), Matrix(1, 0)), ValidationError);
  EXPECT_THROW(Game({"a"}, {"x"}, {1}, Matrix(1, 2), Matrix(1, 1)), ValidationError);
}

TEST(BayesPosteriorsTest, NoRevelationReturnsPrior) {
  Game g = testing::table1_game();
  Profile p = babbling_equilibrium(g);
  auto post = bayes_posteriors(g, p.policy);
  ASSERT_EQ(post.size(), 1u);
  EXPECT_EQ(post[0].distribution, g.prior());
  EXPECT_EQ(post[0].marginal, 1);
}

TEST(BayesPosteriorsTest, FullRevelation) {
  Game g = testing::table1_game();
  SignalingPolicy p{{"zero", "one"}, {{1, 0}, {0, 1}}};
  auto post = bayes_posteriors(g, p);
  EXPECT_EQ(post[0].distribution, vec({1, 0}));
  EXPECT_EQ(post[1].distribution, vec({0, 1}));
  EXPECT_EQ(post[0].marginal, q(1, 2));
  EXPECT_EQ(post[1].marginal, q(1, 2));
}

TEST(BayesPosteriorsTest, Table1Split) {
  Game g = testing::table1_game();
  auto post = bayes_posteriors(g, testing::table1_mixed_profile().policy);
  EXPECT_EQ(post[0].distribution[1], q(1, 4));
  EXPECT_EQ(post[1].distribution[1], q(3, 4));
  EXPECT_EQ(post[0].marginal, q(1, 2));
  EXPECT_EQ(post[1].marginal, q(1, 2));
}

TEST(BayesPosteriorsTest, ZeroMarginalIsAnError) {
  Game g = testing::table1_game();
  SignalingPolicy p{{"used", "unused"}, {{1, 0}, {1, 0}}};
  EXPECT_THROW(bayes_posteriors(g, p), ValidationError);
}

// Expected receiver utilities on the Table-1 game as lines in p = P(w1).
std::vector<std::size_t> table1_best_by_lines(const Rational& p) {
  std::vector<Rational> lines = {3 - 8 * p, 2 - 4 * p, -2 + 4 * p, -5 + 8 * p};
  Rational best = *std::max_element(lines.begin(), lines.end());
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < 4; ++a) {
    if (lines[a] == best) out.push_back(a);
  }
  return out;
}

TEST(ReceiverBestResponsesTest, Table1Examples) {
  Game g = testing::table1_game();
  EXPECT_EQ(receiver_best_responses(g, vec({q(3, 4), q(1, 4)})), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(receiver_best_responses(g, vec({1, 0})), (std::vector<std::size_t>{0}));
  EXPECT_EQ(receiver_best_responses(g, vec({q(1, 2), q(1, 2)})), (std::vector<std::size_t>{1, 2}));
  for (int k = 0; k <= 40; ++k) {
    Rational p(k, 40);
    EXPECT_EQ(receiver_best_responses(g, vec({1 - p, p})), table1_best_by_lines(p)) << p;
  }
}

TEST(ReceiverBestResponsesTest, MalformedBelief) {
  Game g = testing::table1_game();
  EXPECT_THROW(receiver_best_responses(g, vec({q(1, 2), q(1, 3)})), ValidationError);
  EXPECT_THROW(receiver_best_responses(g, vec({q(3, 2), q(-1, 2)})), ValidationError);
  EXPECT_THROW(receiver_best_responses(g, vec({1})), ValidationError);
}

TEST(ReceiverBestResponsesTest, InvariantUnderPerStateShift) {
  testing::Random rnd(21);
  for (int trial = 0; trial < 200; ++trial) {
    Game g = rnd.game(rnd.integer(1, 4), rnd.integer(1, 4));
    Matrix shifted = g.receiver_utility();
    std::size_t state = rnd.integer(0, g.num_states() - 1);
    Rational c = rnd.rational(-5, 5, 3);
    for (std::size_t a = 0; a < g.num_actions(); ++a) shifted(state, a) += c;
    Game h(g.states(), g.actions(), g.prior(), g.sender_utility(), shifted);
    Vector belief = rnd.distribution(g.num_states(), false);
    EXPECT_EQ(receiver_best_responses(g, belief), receiver_best_responses(h, belief));
  }
}

TEST(SenderBestSignalsTest, Examples) {
  Game g = testing::table1_game();
  EXPECT_EQ(sender_best_signals(g, 0, testing::table1_mixed_profile()), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(sender_best_signals(g, 0, testing::table1_persuasion_profile()), (std::vector<std::size_t>{0}));
  EXPECT_EQ(sender_best_signals(g, 1, babbling_equilibrium(g)), (std::vector<std::size_t>{0}));
  EXPECT_THROW(sender_best_signals(g, 2, babbling_equilibrium(g)), ValidationError);
}

TEST(ProfileValuesTest, Table1Equilibrium) {
  Game g = testing::table1_game();
  auto v = profile_values(g, testing::table1_mixed_profile());
  EXPECT_EQ(v.sender, q(1, 2));
  EXPECT_EQ(v.receiver, 1);
  EXPECT_EQ(v.welfare, q(3, 2));
}

TEST(ProfileValuesTest, BabblingWithA2) {
  Game g = testing::table1_game();
  Profile p = babbling_equilibrium(g, TieBreak::kIndexOrder);
  ASSERT_EQ(p.response.rows[0], vec({0, 1, 0, 0}));
  auto v = profile_values(g, p);
  EXPECT_EQ(v.sender, 0);
  EXPECT_EQ(v.receiver, 0);
}

TEST(VerifyEquilibriumTest, Table1MixedProfileIsEquilibrium) {
  Game g = testing::table1_game();
  Verdict v = verify_equilibrium(g, testing::table1_mixed_profile());
  EXPECT_TRUE(v.is_equilibrium);
  EXPECT_TRUE(v.violations.empty());
}

TEST(VerifyEquilibriumTest, PersuasionProfileIsNot) {
  Game g = testing::table1_game();
  Verdict v = verify_equilibrium(g, testing::table1_persuasion_profile());
  EXPECT_FALSE(v.is_equilibrium);
  ASSERT_EQ(v.violations.size(), 2u);
  const Violation& first = v.violations[0];
  EXPECT_EQ(first.kind, Violation::Kind::kSenderDeviation);
  EXPECT_EQ(first.where, 0u);  // state w0
  EXPECT_EQ(first.used, 1u);   // sends H with probability 1/4
  EXPECT_EQ(first.better, 0u); // toward L
  EXPECT_EQ(first.gap, 4);     // 2 - (-2)
  EXPECT_EQ(v.violations[1].where, 1u);
  EXPECT_EQ(v.violations[1].better, 1u);
}

TEST(VerifyEquilibriumTest, ReceiverViolationsCarryGaps) {
  Game g = testing::table1_game();
  Profile p = testing::table1_mixed_profile();
  p.response.rows[0] = vec({0, 0, 0, 1});  // a4 at posterior 1/4
  Verdict v = verify_equilibrium(g, p);
  ASSERT_FALSE(v.is_equilibrium);
  bool found = false;
  for (const auto& x : v.violations) {
    if (x.kind == Violation::Kind::kReceiverSuboptimal) {
      found = true;
      EXPECT_EQ(x.where, 0u);
      EXPECT_EQ(x.used, 3u);
      EXPECT_EQ(x.gap, 4);  // 1 - (-3)
    }
  }
  EXPECT_TRUE(found);
}

TEST(VerifyEquilibriumTest, InvalidProfileIsAnErrorNotAVerdict) {
  Game g = testing::table1_game();
  Profile p = testing::table1_mixed_profile();
  p.response.rows[1] = vec({0, 0, q(1, 2), q(1, 3)});
  EXPECT_THROW(verify_equilibrium(g, p), ValidationError);
  p = testing::table1_mixed_profile();
  p.policy.signals[1] = "L";
  EXPECT_THROW(verify_equilibrium(g, p), ValidationError);
  p = testing::table1_mixed_profile();
  p.response.rows.pop_back();
  EXPECT_THROW(verify_equilibrium(g, p), ValidationError);
}

TEST(BabblingTest, Table1TieBreaks) {
  Game g = testing::table1_game();
  EXPECT_EQ(babbling_equilibrium(g, TieBreak::kSenderFavor).response.rows[0], vec({0, 1, 0, 0}));
  EXPECT_EQ(babbling_equilibrium(g, TieBreak::kIndexOrder).response.rows[0], vec({0, 1, 0, 0}));
  EXPECT_EQ(profile_values(g, babbling_equilibrium(g)).sender, 0);
}

TEST(BabblingTest, UniqueBestResponse) {
  Game g({"w"}, {"x", "y"}, {1}, Matrix::from_rows({{5, 0}}), Matrix::from_rows({{0, 1}}));
  EXPECT_EQ(babbling_equilibrium(g).response.rows[0], vec({0, 1}));
}

TEST(BabblingTest, SenderFavorBreaksReceiverIndifference) {
  Game g({"w0", "w1"}, {"a1", "a2"}, {q(1, 2), q(1, 2)}, Matrix::from_rows({{1, 0}, {1, 0}}),
         Matrix::from_rows({{1, 0}, {-1, 0}}));
  EXPECT_EQ(babbling_equilibrium(g, TieBreak::kSenderFavor).response.rows[0], vec({1, 0}));
  Game h({"w0", "w1"}, {"a1", "a2"}, {q(1, 2), q(1, 2)}, Matrix::from_rows({{0, 1}, {0, 1}}),
         Matrix::from_rows({{1, 0}, {-1, 0}}));
  EXPECT_EQ(babbling_equilibrium(h, TieBreak::kSenderFavor).response.rows[0], vec({0, 1}));
  EXPECT_EQ(babbling_equilibrium(h, TieBreak::kIndexOrder).response.rows[0], vec({1, 0}));
}

TEST(GameInvariantsTest, PriorSplitIdentity) {
  testing::Random rnd(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = rnd.integer(1, 5);
    Game g = rnd.game(n, 2);
    auto policy = rnd.policy(n, rnd.integer(1, 5));
    auto post = bayes_posteriors(g, policy);
    Vector mix(n);
    Rational total;
    for (const auto& p : post) {
      total += p.marginal;
      for (std::size_t i = 0; i < n; ++i) mix[i] += p.marginal * p.distribution[i];
    }
    EXPECT_EQ(mix, g.prior());
    EXPECT_EQ(total, 1);
  }
}

TEST(GameInvariantsTest, BabblingAlwaysVerifies) {
  testing::Random rnd(37);
  for (int trial = 0; trial < 300; ++trial) {
    Game g = rnd.game(rnd.integer(1, 5), rnd.integer(1, 5));
    for (TieBreak t : {TieBreak::kSenderFavor, TieBreak::kIndexOrder}) {
      EXPECT_TRUE(verify_equilibrium(g, babbling_equilibrium(g, t)).is_equilibrium);
    }
  }
}

TEST(GameInvariantsTest, ReceiverValueIsMidpointConvex) {
  testing::Random rnd(41);
  for (int trial = 0; trial < 300; ++trial) {
    Game g = rnd.game(rnd.integer(1, 5), rnd.integer(1, 5));
    Vector a = rnd.distribution(g.num_states(), false), b = rnd.distribution(g.num_states(), false);
    Vector mid(g.num_states());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = (a[i] + b[i]) / 2;
    EXPECT_LE(receiver_value(g, mid), (receiver_value(g, a) + receiver_value(g, b)) / 2);
  }
}

TEST(GameInvariantsTest, SenderIndifferentAcrossUsedSignals) {
  Game g = testing::table1_game();
  Profile p = testing::table1_mixed_profile();
  for (std::size_t w = 0; w < g.num_states(); ++w) {
    auto best = sender_best_signals(g, w, p);
    Rational best_value = response_value(g.sender_utility(), w, p.response.rows[best.front()]);
    for (std::size_t s = 0; s < p.num_signals(); ++s) {
      if (p.policy.rows[w][s].sign() > 0) {
        EXPECT_EQ(response_value(g.sender_utility(), w, p.response.rows[s]), best_value);
      }
    }
  }
}

}  // namespace
}  // namespace cheaptalk
