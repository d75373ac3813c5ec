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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Every comparison is exact.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cheaptalk/cheaptalk.hpp"
#include "cheaptalk/io.hpp"
#include "test_support.hpp"

namespace cheaptalk {
namespace {

using testing::q;

// Records the first failed expectation of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  std::size_t count() const { return count_; }

 private:
  std::string failure_;
  std::size_t count_ = 0;
};

std::string str(const Rational& r) { return r.str(); }

Vector midpoint(const Vector& a, const Vector& b) {
  Vector m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = (a[i] + b[i]) / 2;
  return m;
}

// Expected receiver utility of every action at belief y.
Vector action_values(const Game& g, const Vector& y) {
  Vector out(g.num_actions());
  for (std::size_t a = 0; a < g.num_actions(); ++a) out[a] = expected_utility(g.receiver_utility(), y, a);
  return out;
}

std::string sample(const std::string& name) { return std::string(CHEAPTALK_SAMPLES_DIR) + "/" + name; }

CnfFormula load_cnf(const std::string& name) { return parse_dimacs(io::read_file(sample(name))); }

// ---------------------------------------------------------------------------

void worked_example(Check& c) {
  const Game g = testing::table1_game();
  EnumerationOptions opts;
  opts.objective = ObjectiveKind::kSender;
  SolveResult r = solve_enumeration(g, opts);
  c.expect(r.value == q(1, 2), "enumeration value " + str(r.value) + ", expected 1/2");
  c.expect(verify_equilibrium(g, r.profile).is_equilibrium, "enumeration profile fails verification");
  c.expect(profile_values(g, r.profile).sender == r.value, "reported value differs from profile value");

  const Profile mixed = io::load_profile(sample("table1_mixed_profile.json"));
  c.expect(verify_equilibrium(g, mixed).is_equilibrium, "mixed profile fails verification");
  c.expect(profile_values(g, mixed).sender == q(1, 2), "mixed profile sender value differs from 1/2");
  const auto posts = bayes_posteriors(g, mixed.policy);
  c.expect(posts.size() == 2 && posts[0].distribution[1] == q(1, 4) && posts[1].distribution[1] == q(3, 4),
           "mixed profile posteriors differ from 1/4 and 3/4");
}

void persuasion_baseline(Check& c) {
  const Game g = testing::table1_game();
  const Rational commit = solve_persuasion_lp(g).value;
  c.expect(commit == 1, "persuasion value " + str(commit) + ", expected 1");
  const Rational babble = profile_values(g, babbling_equilibrium(g)).sender;
  c.expect(babble == 0, "babbling value " + str(babble) + ", expected 0");
  const Rational cheap = solve_enumeration(g).value;
  c.expect(babble <= cheap && cheap <= commit, "dominance chain broken");
  c.expect(cheap == q(1, 2), "cheap talk optimum " + str(cheap));
}

void reduction_end_to_end(Check& c) {
  const CnfFormula f = load_cnf("two_regular.cnf");
  const ReductionInstance inst = build_instance(f);
  c.expect(inst.game.num_states() == 14, "state count " + std::to_string(inst.game.num_states()));
  c.expect(inst.game.num_actions() == 480, "action count " + std::to_string(inst.game.num_actions()));
  const MaxVarResult mv = max_var_3sat_bruteforce(f);
  c.expect(mv.k == 3, "max-var k = " + std::to_string(mv.k));
  c.expect(contradictory_clauses(f, mv.witness).empty(), "witness falsifies a clause");

  const Profile eq = construct_equilibrium(inst.meta, mv.witness);
  c.expect(verify_equilibrium(inst.game, eq).is_equilibrium, "certificate fails verification");
  const Rational v = profile_values(inst.game, eq).sender;
  c.expect(v == q(3, 7), "certificate sender value " + str(v) + ", expected 3/7");
  c.expect(certified_value(inst.meta, 3) == q(3, 7), "certified value differs from 3/7");

  ReductionOptions norm;
  norm.normalize = true;
  const ReductionInstance ninst = build_instance(f, norm);
  const Profile neq = construct_equilibrium(ninst.meta, mv.witness);
  c.expect(verify_equilibrium(ninst.game, neq).is_equilibrium, "normalized certificate fails verification");
  const Rational nv = profile_values(ninst.game, neq).sender;
  c.expect(nv == (q(3, 7) + 7) / 8, "normalized value " + str(nv) + ", expected 13/14");
}

// Property 1 and the facet form of Property 2 for one catalog.
void check_catalog(Check& c, const Game& g, const std::vector<Vector>& points, std::size_t n,
                   testing::Random& rng, const std::string& label) {
  const std::size_t k = points.size();
  auto pool_action = [&](std::size_t p) { return p; };
  auto facet_action = [&](std::size_t p, std::size_t w) { return k + p * n + w; };

  for (std::size_t p = 0; p < k; ++p) {
    const auto best = receiver_best_responses(g, points[p]);
    const std::set<std::size_t> bs(best.begin(), best.end());
    c.expect(bs.count(pool_action(p)) == 1, label + ": a_p not a best response at p");
    for (std::size_t o = 0; o < k; ++o) {
      if (o != p) c.expect(bs.count(pool_action(o)) == 0, label + ": a_p' best at p");
    }
  }

  auto probe = [&](const Vector& y) {
    const Vector val = action_values(g, y);
    for (std::size_t p = 0; p < k; ++p) {
      if (y == points[p]) continue;
      Rational top = val[facet_action(p, 0)];
      for (std::size_t w = 1; w < n; ++w) top = std::max(top, val[facet_action(p, w)]);
      c.expect(top > val[pool_action(p)], label + ": no facet beats a_p away from p");
    }
  };
  for (const auto& y : points) probe(y);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) probe(midpoint(points[a], points[b]));
  }
  for (int t = 0; t < 100; ++t) probe(rng.distribution(n, t % 2 == 0, 9));
}

void pool_properties(Check& c) {
  testing::Random rng(2026);
  std::set<std::vector<Vector>> seen;
  while (seen.size() < 60) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto k = static_cast<std::size_t>(rng.integer(2, 10));
    std::vector<Vector> points;
    while (points.size() < k) {
      Vector p = rng.distribution(n, false, 6);
      if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(std::move(p));
    }
    if (!seen.insert(points).second) continue;
    const ReceiverDesign d = design_receiver_utilities(n, points);
    c.expect(d.epsilon > 0, "nonpositive epsilon");
    std::vector<std::string> states, actions;
    for (std::size_t i = 0; i < n; ++i) states.push_back("w" + std::to_string(i));
    for (std::size_t a = 0; a < d.utility.cols(); ++a) actions.push_back("a" + std::to_string(a));
    const Game g(states, actions, rng.distribution(n), Matrix(n, d.utility.cols()), d.utility);
    check_catalog(c, g, points, n, rng, "random catalog " + std::to_string(seen.size()));
  }

  for (const char* name : {"two_regular.cnf", "four_regular.cnf"}) {
    const ReductionInstance inst = build_instance(load_cnf(name));
    std::vector<Vector> points;
    for (const Pool& p : inst.meta.pools) points.push_back(pool_posterior(p, inst.meta.states.size()));
    check_catalog(c, inst.game, points, inst.meta.states.size(), rng, name);
  }
}

void binary_oracle(Check& c) {
  testing::Random rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(1 + t % 4);
    const Game g = rng.game(n, 2, -3, 3, 4);
    const SolveResult b = solve_binary_action(g);
    const SolveResult e = solve_enumeration(g);
    const std::string tag = "game " + std::to_string(t) + ": ";
    c.expect(b.value == e.value, tag + "binary " + str(b.value) + " vs enumeration " + str(e.value));
    c.expect(verify_equilibrium(g, b.profile).is_equilibrium, tag + "binary profile fails verification");
    c.expect(verify_equilibrium(g, e.profile).is_equilibrium, tag + "enumeration profile fails verification");
    c.expect(profile_values(g, b.profile).sender == b.value, tag + "binary value mismatch");
  }
}

// Splits every signal into copies sharing its posterior and response.
Profile inflate(const Profile& p, std::size_t target, testing::Random& rng) {
  Profile out = p;
  std::size_t next = 0;
  while (out.num_signals() < target) {
    const std::size_t s = next++ % out.num_signals();
    const Rational keep(rng.integer(1, 4), 5);
    for (auto& row : out.policy.rows) {
      const Rational moved = row[s] * (1 - keep);
      row[s] -= moved;
      row.push_back(moved);
    }
    out.policy.signals.push_back(out.policy.signals[s] + "_copy" + std::to_string(next));
    out.response.rows.push_back(out.response.rows[s]);
  }
  return out;
}

void support_reduction(Check& c) {
  testing::Random rng(77);
  const ObjectiveKind kinds[] = {ObjectiveKind::kSender, ObjectiveKind::kReceiver, ObjectiveKind::kWelfare};
  int done = 0;
  for (int t = 0; done < 120; ++t) {
    const auto n = static_cast<std::size_t>(2 + t % 3);
    const auto m = static_cast<std::size_t>(rng.integer(2, 3));
    const Game g = rng.game(n, m);
    EnumerationOptions opts;
    opts.objective = kinds[t % 3];
    const Profile base = solve_enumeration(g, opts).profile;
    const Profile big = inflate(base, n + 2 + static_cast<std::size_t>(rng.integer(0, 2)), rng);
    const std::string tag = "equilibrium " + std::to_string(t) + ": ";
    c.expect(verify_equilibrium(g, big).is_equilibrium, tag + "inflated profile fails verification");
    for (ObjectiveKind kind : kinds) {
      Objective obj{kind, {}};
      const Profile red = reduce_support(g, big, obj);
      const std::size_t bound = kind == ObjectiveKind::kSender ? n : n + 1;
      c.expect(verify_equilibrium(g, red).is_equilibrium, tag + "reduced profile fails verification");
      c.expect(red.num_signals() <= bound, tag + "reduced profile has " + std::to_string(red.num_signals()) + " signals");
      c.expect(profile_objective(g, red, obj) == profile_objective(g, big, obj), tag + "objective changed");
    }
    ++done;
  }
}

void max_var(Check& c) {
  const CnfFormula single = load_cnf("single_clause.cnf");
  c.expect(max_var_3sat_bruteforce(single).k == 3, "single clause k differs from 3");
  const CnfFormula all = load_cnf("all_polarities.cnf");
  c.expect(max_var_3sat_bruteforce(all).k == 2, "8-polarity k differs from 2");
  const PartialAssignment part = full_to_partial(all, PartialAssignment(3, true));
  c.expect(assigned_count(part) == 2, "full_to_partial kept " + std::to_string(assigned_count(part)) + " variables");
  c.expect(contradictory_clauses(all, part).empty(), "full_to_partial output falsifies a clause");
}

void invariants(Check& c) {
  testing::Random rng(8);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 5));
    const auto m = static_cast<std::size_t>(rng.integer(1, 4));
    const Game g = rng.game(n, m);
    const SignalingPolicy pol = rng.policy(n, static_cast<std::size_t>(rng.integer(1, 5)));
    Vector sum(n);
    for (const Posterior& p : bayes_posteriors(g, pol)) {
      for (std::size_t i = 0; i < n; ++i) sum[i] += p.marginal * p.distribution[i];
    }
    c.expect(sum == g.prior(), "split identity fails on policy " + std::to_string(t));
    c.expect(verify_equilibrium(g, babbling_equilibrium(g)).is_equilibrium,
             "babbling fails verification on game " + std::to_string(t));

    const Vector y = rng.distribution(n, false, 9);
    const Vector z = rng.distribution(n, false, 9);
    const Rational lhs = receiver_value(g, midpoint(y, z));
    const Rational rhs = (receiver_value(g, y) + receiver_value(g, z)) / 2;
    c.expect(lhs <= rhs, "midpoint convexity fails on pair " + std::to_string(t));
  }
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> body;
};

}  // namespace
}  // namespace cheaptalk

int main() {
  using namespace cheaptalk;
  const Criterion criteria[] = {
      {"worked example: enumeration optimum 1/2 and mixed profile", 60, worked_example},
      {"persuasion baseline 1 and dominance chain 0 <= 1/2 <= 1", 1, persuasion_baseline},
      {"reduction end to end on the d=2 formula", 60, reduction_end_to_end},
      {"pool design properties on random and reduction catalogs", 120, pool_properties},
      {"binary solver equals enumeration on 200 games", 600, binary_oracle},
      {"support reduction on inflated equilibria", 120, support_reduction},
      {"max-var 3SAT examples", 10, max_var},
      {"universal invariants on 500 random instances", 120, invariants},
  };
  int failures = 0;
  int index = 0;
  for (const auto& cr : criteria) {
    ++index;
    Check check;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && !check.ok()) error = check.failure();
    if (error.empty() && secs > cr.limit_seconds) error = "over the time limit";
    const bool pass = error.empty();
    failures += pass ? 0 : 1;
    std::printf("%s %d %s (%zu checks, %.2f s)%s%s\n", pass ? "PASS" : "FAIL", index, cr.name, check.count(), secs,
                pass ? "" : ": ", error.c_str());
  }
  return failures == 0 ? 0 : 1;
}
