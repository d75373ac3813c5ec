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
#include "cheaptalk/game.hpp"
#include "cheaptalk/linalg.hpp"

namespace cheaptalk {

/// One posterior of a split of the prior, with its probability and, for
/// lifted reductions, the objective value attached to it.
struct SplitPoint {
  Vector posterior;
  Rational weight;
  std::optional<Rational> tag;
  std::size_t signal = 0;  // index of the originating signal
};

namespace detail {

inline Vector lifted(const SplitPoint& p) {
  Vector v = p.posterior;
  if (p.tag) v.push_back(*p.tag);
  return v;
}

}  // namespace detail

/// Shrinks a split to at most `bound` points while keeping the weighted sum
/// of posteriors (and of tags) fixed. Each round finds an affine dependency
/// lambda among the current points and moves the weights along +lambda or
/// -lambda until some weight hits zero; the direction whose zeroed set has the
/// lowest index wins. Zero-weight points are dropped, order is preserved.
inline std::vector<SplitPoint> reduce_split(std::vector<SplitPoint> points, std::size_t bound) {
  if (bound == 0) throw ValidationError("split bound must be positive");
  while (points.size() > bound) {
    std::vector<Vector> coords;
    coords.reserve(points.size());
    for (const auto& p : points) coords.push_back(detail::lifted(p));
    auto lambda = find_affine_dependency(coords);
    if (!lambda) throw ValidationError("split exceeds bound but points are affinely independent");

    // Step t along direction d zeroes argmin_{d_i > 0} w_i / d_i.
    auto step = [&](int dir) {
      std::optional<Rational> t;
      std::size_t first = points.size();
      for (std::size_t i = 0; i < points.size(); ++i) {
        Rational d = dir > 0 ? (*lambda)[i] : -(*lambda)[i];
        if (d.sign() <= 0) continue;
        Rational ratio = points[i].weight / d;
        if (!t || ratio < *t) {
          t = ratio;
          first = i;
        }
      }
      return std::make_pair(*t, first);
    };
    auto [t_plus, first_plus] = step(+1);
    auto [t_minus, first_minus] = step(-1);
    const bool use_plus = first_plus <= first_minus;
    const Rational t = use_plus ? t_plus : -t_minus;

    std::vector<SplitPoint> next;
    for (std::size_t i = 0; i < points.size(); ++i) {
      points[i].weight -= t * (*lambda)[i];
      if (points[i].weight.sign() > 0) next.push_back(std::move(points[i]));
    }
    points = std::move(next);
  }
  return points;
}

/// Returns an equilibrium with at most n (sender objective) or n + 1 (any
/// other linear objective) signals and exactly the same objective value.
/// Surviving signals keep their labels and receiver rows; the policy is
/// rebuilt from the reduced split by pi'(s | w) = weight(s) p_s(w) / mu(w).
inline Profile reduce_support(const Game& game, const Profile& profile, const Objective& objective) {
  Verdict verdict = verify_equilibrium(game, profile);
  if (!verdict.is_equilibrium) {
    throw NotEquilibriumError("support reduction requires an equilibrium profile");
  }
  const std::size_t n = game.num_states();
  const bool lift = objective.kind != ObjectiveKind::kSender;
  const Matrix weights = objective_weights(game, objective);
  const auto posteriors = bayes_posteriors(game, profile.policy);

  std::vector<SplitPoint> points;
  for (std::size_t s = 0; s < profile.num_signals(); ++s) {
    SplitPoint p{posteriors[s].distribution, posteriors[s].marginal, std::nullopt, s};
    if (lift) {
      Rational tag;
      for (std::size_t w = 0; w < n; ++w) {
        if (!p.posterior[w].is_zero()) {
          tag += p.posterior[w] * response_value(weights, w, profile.response.rows[s]);
        }
      }
      p.tag = std::move(tag);
    }
    // Merge into an earlier identical (lifted) point.
    bool merged = false;
    for (auto& q : points) {
      if (q.posterior == p.posterior && q.tag == p.tag) {
        q.weight += p.weight;
        merged = true;
        break;
      }
    }
    if (!merged) points.push_back(std::move(p));
  }

  points = reduce_split(std::move(points), lift ? n + 1 : n);

  Profile out;
  out.policy.rows.assign(n, Vector(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    out.policy.signals.push_back(profile.policy.signals[points[k].signal]);
    out.response.rows.push_back(profile.response.rows[points[k].signal]);
    for (std::size_t w = 0; w < n; ++w) {
      if (points[k].posterior[w].is_zero()) continue;
      out.policy.rows[w][k] = points[k].weight * points[k].posterior[w] / game.prior()[w];
    }
  }
  return out;
}

}  // namespace cheaptalk
