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

// JSON documents for games, profiles, verdicts, solver results and reduction
// metadata. Every number is an exact rational written as a string ("3/4",
// "-2"); integers are accepted on input, floating-point numbers never are.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cheaptalk/error.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/reduction.hpp"
#include "cheaptalk/sat3.hpp"
#include "cheaptalk/solvers.hpp"
#include "json.hpp"

namespace cheaptalk::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Primitives.

inline Json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(static_cast<std::int64_t>(j.get<std::uint64_t>()))
                                  : Rational(j.get<std::int64_t>());
  }
  throw ValidationError(where + ": expected a rational string or integer");
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing \"" + key + "\"");
  return *it;
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  return j;
}

inline Vector vector_from_json(const Json& j, const std::string& where) {
  Vector out;
  const Json& a = array(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(rational_from_json(a[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<Vector> rows_from_json(const Json& j, const std::string& where) {
  std::vector<Vector> out;
  const Json& a = array(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(vector_from_json(a[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json rows_to_json(const std::vector<Vector>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(to_json(r));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  std::vector<Vector> rows = rows_from_json(j, where);
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw ValidationError(where + ": rows differ in length");
  }
  return Matrix::from_rows(rows);
}

inline std::vector<std::string> labels_from_json(const Json& j, const std::string& where) {
  std::vector<std::string> out;
  for (const auto& x : array(j, where)) {
    if (!x.is_string()) throw ValidationError(where + ": labels must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

inline Json parse_json(std::string_view text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(where + ": invalid JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

/// Canonical rendering used for every written document.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Game and profile.

inline Json to_json(const Game& g) {
  Json out;
  out["states"] = g.states();
  out["actions"] = g.actions();
  out["prior"] = to_json(g.prior());
  out["u_S"] = to_json(g.sender_utility());
  out["u_R"] = to_json(g.receiver_utility());
  return out;
}

inline Game game_from_json(const Json& j) {
  const std::string w = "game";
  auto states = labels_from_json(member(j, "states", w), w + ".states");
  auto actions = labels_from_json(member(j, "actions", w), w + ".actions");
  auto prior = vector_from_json(member(j, "prior", w), w + ".prior");
  auto table = [&](const char* key) {
    std::vector<Vector> rows = rows_from_json(member(j, key, w), w + "." + key);
    if (rows.size() != states.size()) throw ValidationError(w + "." + key + ": need one row per state");
    for (const auto& r : rows) {
      if (r.size() != actions.size()) throw ValidationError(w + "." + key + ": need one entry per action");
    }
    return Matrix::from_rows(rows);
  };
  Matrix us = table("u_S");
  Matrix ur = table("u_R");
  return Game(std::move(states), std::move(actions), std::move(prior), std::move(us), std::move(ur));
}

inline Json to_json(const Profile& p) {
  Json out;
  out["signals"] = p.policy.signals;
  out["pi"] = rows_to_json(p.policy.rows);
  out["s"] = rows_to_json(p.response.rows);
  return out;
}

inline Profile profile_from_json(const Json& j) {
  const std::string w = "profile";
  Profile p;
  p.policy.signals = labels_from_json(member(j, "signals", w), w + ".signals");
  p.policy.rows = rows_from_json(member(j, "pi", w), w + ".pi");
  p.response.rows = rows_from_json(member(j, "s", w), w + ".s");
  return p;
}

inline Game load_game(const std::string& path) { return game_from_json(parse_json(read_file(path), path)); }
inline Profile load_profile(const std::string& path) { return profile_from_json(parse_json(read_file(path), path)); }

// ---------------------------------------------------------------------------
// Reports.

inline Json to_json(const ProfileValues& v) {
  Json out;
  out["sender"] = to_json(v.sender);
  out["receiver"] = to_json(v.receiver);
  out["welfare"] = to_json(v.welfare);
  return out;
}

/// Violations name states, signals and actions by label.
inline Json to_json(const Game& g, const Profile& p, const Verdict& v) {
  Json out;
  out["is_equilibrium"] = v.is_equilibrium;
  Json list = Json::array();
  for (const Violation& x : v.violations) {
    Json e;
    if (x.kind == Violation::Kind::kSenderDeviation) {
      e["kind"] = "senderDeviation";
      e["state"] = g.states()[x.where];
      e["used"] = p.policy.signals[x.used];
      e["better"] = p.policy.signals[x.better];
    } else {
      e["kind"] = "receiverSuboptimal";
      e["signal"] = p.policy.signals[x.where];
      e["used"] = g.actions()[x.used];
      e["better"] = g.actions()[x.better];
    }
    e["gap"] = to_json(x.gap);
    list.push_back(std::move(e));
  }
  out["violations"] = std::move(list);
  return out;
}

inline Json to_json(const SolveResult& r) {
  Json out;
  out["method"] = to_string(r.method);
  out["value"] = to_json(r.value);
  out["diagnostics"] = {{"supports_examined", r.diagnostics.supports_examined},
                        {"lps_solved", r.diagnostics.lps_solved}};
  out["profile"] = to_json(r.profile);
  return out;
}

// ---------------------------------------------------------------------------
// Formulas, assignments and reduction metadata.

/// Signed 1-based literals: 3 means x3 = True, -3 means x3 = False.
inline Json assignment_to_json(const PartialAssignment& x) {
  Json out = Json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) out.push_back((*x[i] ? 1 : -1) * static_cast<long long>(i + 1));
  }
  return out;
}

inline PartialAssignment assignment_from_literals(const std::vector<long long>& literals, std::size_t n) {
  PartialAssignment x(n);
  for (long long lit : literals) {
    const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
    if (lit == 0 || var > n) throw ValidationError("assignment literal " + std::to_string(lit) + " out of range");
    if (x[var - 1]) throw ValidationError("variable " + std::to_string(var) + " assigned twice");
    x[var - 1] = lit > 0;
  }
  return x;
}

/// Parses "1,-2,3" (spaces allowed). An empty string or "none" is the empty
/// assignment.
inline PartialAssignment parse_assignment(std::string_view text, std::size_t n) {
  std::vector<long long> literals;
  std::string s(text);
  if (s == "none") s.clear();
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string token = s.substr(pos, end - pos);
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    std::size_t used = 0;
    long long lit = 0;
    try {
      lit = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size()) throw ValidationError("invalid assignment literal '" + token + "'");
    literals.push_back(lit);
    pos = end + 1;
  }
  return assignment_from_literals(literals, n);
}

inline Json formula_to_json(const CnfFormula& f) {
  Json clauses = Json::array();
  for (const Clause& c : f.clauses) {
    Json lits = Json::array();
    for (const Literal& l : c) lits.push_back((l.negated ? -1 : 1) * static_cast<long long>(l.variable + 1));
    clauses.push_back(std::move(lits));
  }
  Json out;
  out["num_variables"] = f.num_variables;
  out["clauses"] = std::move(clauses);
  return out;
}

inline CnfFormula formula_from_json(const Json& j) {
  const std::string w = "formula";
  const Json& nv = member(j, "num_variables", w);
  if (!nv.is_number_unsigned()) throw ValidationError(w + ".num_variables: expected a non-negative integer");
  CnfFormula f;
  f.num_variables = nv.get<std::size_t>();
  for (const auto& c : array(member(j, "clauses", w), w + ".clauses")) {
    if (!c.is_array() || c.size() != 3) throw ValidationError(w + ".clauses: each clause has 3 literals");
    Clause clause;
    for (std::size_t l = 0; l < 3; ++l) {
      if (!c[l].is_number_integer()) throw ValidationError(w + ".clauses: literals are integers");
      const long long lit = c[l].get<long long>();
      const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (lit == 0) throw ValidationError(w + ".clauses: literal 0");
      clause[l] = Literal{var - 1, lit < 0};
    }
    f.clauses.push_back(clause);
  }
  validate_formula(f);
  return f;
}

inline PoolKind pool_kind_from_string(const std::string& s) {
  for (PoolKind k : {PoolKind::kVariable, PoolKind::kNegVariable, PoolKind::kClause, PoolKind::kSingleton,
                     PoolKind::kPrior}) {
    if (s == to_string(k)) return k;
  }
  throw ValidationError("unknown pool kind '" + s + "'");
}

inline Json to_json(const ReductionMetadata& meta) {
  Json out;
  out["formula_digest"] = meta.formula_digest;
  out["d"] = meta.d;
  out["n"] = meta.n;
  out["m"] = meta.m;
  out["formula"] = formula_to_json(meta.formula);
  out["states"] = meta.states;
  Json pools = Json::array();
  for (const Pool& p : meta.pools) {
    Json members = Json::array();
    for (std::size_t w : p.members) members.push_back(meta.states[w]);
    pools.push_back({{"name", p.name}, {"kind", to_string(p.kind)}, {"members", std::move(members)}});
  }
  out["pools"] = std::move(pools);
  out["epsilon"] = to_json(meta.epsilon);
  out["normalization"] = meta.normalized ? "unitInterval" : "none";
  out["babbling_gap_alpha"] = meta.babbling_gap_alpha ? to_json(*meta.babbling_gap_alpha) : Json(nullptr);
  return out;
}

inline ReductionMetadata metadata_from_json(const Json& j) {
  const std::string w = "metadata";
  ReductionMetadata meta;
  const Json& digest = member(j, "formula_digest", w);
  if (!digest.is_string()) throw ValidationError(w + ".formula_digest: expected a string");
  meta.formula_digest = digest.get<std::string>();
  auto count = [&](const char* key) {
    const Json& v = member(j, key, w);
    if (!v.is_number_unsigned()) throw ValidationError(w + "." + key + ": expected a non-negative integer");
    return v.get<std::size_t>();
  };
  meta.d = count("d");
  meta.n = count("n");
  meta.m = count("m");
  meta.formula = formula_from_json(member(j, "formula", w));
  meta.states = labels_from_json(member(j, "states", w), w + ".states");
  for (const auto& p : array(member(j, "pools", w), w + ".pools")) {
    Pool pool;
    const Json& name = member(p, "name", w + ".pools");
    const Json& kind = member(p, "kind", w + ".pools");
    if (!name.is_string() || !kind.is_string()) throw ValidationError(w + ".pools: name and kind are strings");
    pool.name = name.get<std::string>();
    pool.kind = pool_kind_from_string(kind.get<std::string>());
    for (const auto& label : labels_from_json(member(p, "members", w + ".pools"), w + ".pools.members")) {
      auto it = std::find(meta.states.begin(), meta.states.end(), label);
      if (it == meta.states.end()) throw ValidationError(w + ".pools: unknown state '" + label + "'");
      pool.members.push_back(static_cast<std::size_t>(it - meta.states.begin()));
    }
    meta.pools.push_back(std::move(pool));
  }
  meta.epsilon = rational_from_json(member(j, "epsilon", w), w + ".epsilon");
  const Json& norm = member(j, "normalization", w);
  if (norm != "none" && norm != "unitInterval") throw ValidationError(w + ".normalization: expected none or unitInterval");
  meta.normalized = norm == "unitInterval";
  const Json& alpha = member(j, "babbling_gap_alpha", w);
  if (!alpha.is_null()) meta.babbling_gap_alpha = rational_from_json(alpha, w + ".babbling_gap_alpha");

  if (formula_digest(meta.formula) != meta.formula_digest) throw ValidationError(w + ": formula digest mismatch");
  if (meta.m != meta.formula.clauses.size() || meta.n != meta.formula.num_variables || meta.states.size() != 7 * meta.m) {
    throw ValidationError(w + ": counts do not match the formula");
  }
  return meta;
}

}  // namespace cheaptalk::io
