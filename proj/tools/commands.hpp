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

// Subcommand implementations. Each returns an exit code and a JSON report;
// argument parsing and timing live in cli_app.hpp.

#include <filesystem>
#include <optional>
#include <string>

#include "cheaptalk/cheaptalk.hpp"

namespace cheaptalk::cli {

using io::Json;

struct Outcome {
  int exit_code = 0;
  Json report;
};

inline Json input_entry(const std::string& path, const std::string& text) {
  return Json{{"path", path}, {"digest", fnv1a_hex(text)}};
}

inline Json make_report(const std::string& command, Json args, Json inputs) {
  Json r;
  r["command"] = command;
  r["args"] = std::move(args);
  r["inputs"] = std::move(inputs);
  return r;
}

inline Objective objective_from_name(const std::string& name) {
  if (name == "sender") return Objective::sender();
  if (name == "receiver") return Objective::receiver();
  if (name == "welfare") return Objective::welfare();
  throw ValidationError("unknown objective '" + name + "' (expected sender, receiver or welfare)");
}

inline void write_document(const std::optional<std::string>& path, const Json& doc, Json& report) {
  if (!path) return;
  io::write_file(*path, io::dump(doc));
  report["outputs"].push_back(*path);
}

// ---------------------------------------------------------------------------

inline Outcome verify(const std::string& game_path, const std::string& profile_path) {
  const std::string game_text = io::read_file(game_path);
  const std::string profile_text = io::read_file(profile_path);
  Game game = io::game_from_json(io::parse_json(game_text, game_path));
  Profile profile = io::profile_from_json(io::parse_json(profile_text, profile_path));
  Verdict verdict = verify_equilibrium(game, profile);

  Outcome o;
  o.report = make_report("verify", Json::object(),
                         Json::array({input_entry(game_path, game_text), input_entry(profile_path, profile_text)}));
  o.report["result"] = {{"verdict", io::to_json(game, profile, verdict)},
                        {"values", io::to_json(profile_values(game, profile))}};
  o.exit_code = verdict.is_equilibrium ? 0 : 1;
  return o;
}

struct SolveArgs {
  std::string game_path;
  std::string method = "enum";
  std::string objective = "sender";
  std::optional<std::size_t> budget;
  std::size_t max_states = 4;
  bool force = false;
  std::optional<std::string> out;
};

inline Outcome solve(const SolveArgs& a) {
  const std::string text = io::read_file(a.game_path);
  Game game = io::game_from_json(io::parse_json(text, a.game_path));
  const Objective objective = objective_from_name(a.objective);

  SolveResult result;
  if (a.method == "binary" || a.method == "persuasion") {
    if (objective.kind != ObjectiveKind::kSender) {
      throw ValidationError("method '" + a.method + "' only optimises the sender objective");
    }
    if (a.budget) throw ValidationError("--budget applies to the enum method only");
    result = a.method == "binary" ? solve_binary_action(game) : solve_persuasion_lp(game);
  } else if (a.method == "enum") {
    EnumerationOptions opts;
    opts.objective = objective.kind;
    opts.signal_budget = a.budget;
    opts.max_states = a.max_states;
    opts.override_guard = a.force;
    result = solve_enumeration(game, opts);
  } else {
    throw ValidationError("unknown method '" + a.method + "' (expected binary, enum or persuasion)");
  }

  Json args{{"method", a.method}, {"objective", a.objective}};
  if (a.budget) args["budget"] = *a.budget;
  Outcome o;
  o.report = make_report("solve", std::move(args), Json::array({input_entry(a.game_path, text)}));
  Json res = io::to_json(result);
  res["values"] = io::to_json(profile_values(game, result.profile));
  res["is_equilibrium"] = verify_equilibrium(game, result.profile).is_equilibrium;
  o.report["result"] = std::move(res);
  o.report["outputs"] = Json::array();
  write_document(a.out, io::to_json(result.profile), o.report);
  return o;
}

struct ReduceArgs {
  std::string cnf_path;
  bool normalize = false;
  std::optional<std::string> babbling_gap;
  std::string out_dir;
};

inline Outcome reduce(const ReduceArgs& a) {
  const std::string text = io::read_file(a.cnf_path);
  CnfFormula formula = parse_dimacs(text);
  ReductionOptions opts;
  opts.normalize = a.normalize;
  if (a.babbling_gap) opts.babbling_gap_alpha = Rational::parse(*a.babbling_gap);
  ReductionInstance inst = build_instance(formula, opts);

  std::filesystem::create_directories(a.out_dir);
  const std::string game_path = (std::filesystem::path(a.out_dir) / "game.json").string();
  const std::string meta_path = (std::filesystem::path(a.out_dir) / "meta.json").string();

  Json args{{"normalize", a.normalize}};
  args["babbling_gap"] = opts.babbling_gap_alpha ? io::to_json(*opts.babbling_gap_alpha) : Json(nullptr);
  Outcome o;
  o.report = make_report("reduce", std::move(args), Json::array({input_entry(a.cnf_path, text)}));
  o.report["result"] = {{"states", inst.game.num_states()},
                        {"actions", inst.game.num_actions()},
                        {"pools", inst.meta.pools.size()},
                        {"d", inst.meta.d},
                        {"n", inst.meta.n},
                        {"m", inst.meta.m},
                        {"epsilon", io::to_json(inst.meta.epsilon)},
                        {"formula_digest", inst.meta.formula_digest}};
  o.report["outputs"] = Json::array();
  write_document(game_path, io::to_json(inst.game), o.report);
  write_document(meta_path, io::to_json(inst.meta), o.report);
  return o;
}

inline Outcome construct_eq(const std::string& meta_path, const std::string& assignment,
                            const std::optional<std::string>& out) {
  const std::string text = io::read_file(meta_path);
  ReductionMetadata meta = io::metadata_from_json(io::parse_json(text, meta_path));
  PartialAssignment x = io::parse_assignment(assignment, meta.n);
  Profile profile = construct_equilibrium(meta, x);

  Outcome o;
  o.report = make_report("construct-eq", Json{{"assignment", io::assignment_to_json(x)}},
                         Json::array({input_entry(meta_path, text)}));
  o.report["result"] = {{"k", assigned_count(x)},
                        {"certified_value", io::to_json(certified_value(meta, assigned_count(x)))},
                        {"signals", profile.num_signals()},
                        {"profile", io::to_json(profile)}};
  o.report["outputs"] = Json::array();
  write_document(out, io::to_json(profile), o.report);
  return o;
}

struct ReduceSignalsArgs {
  std::string game_path;
  std::string profile_path;
  std::string objective = "sender";
  std::optional<std::string> weights_path;
  std::optional<std::string> out;
};

inline Outcome reduce_signals(const ReduceSignalsArgs& a) {
  const std::string game_text = io::read_file(a.game_path);
  const std::string profile_text = io::read_file(a.profile_path);
  Game game = io::game_from_json(io::parse_json(game_text, a.game_path));
  Profile profile = io::profile_from_json(io::parse_json(profile_text, a.profile_path));
  Json inputs = Json::array({input_entry(a.game_path, game_text), input_entry(a.profile_path, profile_text)});

  Objective objective;
  std::string objective_name = a.objective;
  if (a.weights_path) {
    const std::string w_text = io::read_file(*a.weights_path);
    objective = Objective::custom(io::matrix_from_json(io::parse_json(w_text, *a.weights_path), *a.weights_path));
    objective_name = "custom";
    inputs.push_back(input_entry(*a.weights_path, w_text));
  } else {
    objective = objective_from_name(a.objective);
  }
  Profile reduced = reduce_support(game, profile, objective);

  Outcome o;
  o.report = make_report("reduce-signals", Json{{"objective", objective_name}}, std::move(inputs));
  o.report["result"] = {{"signals_before", profile.num_signals()},
                        {"signals_after", reduced.num_signals()},
                        {"value", io::to_json(profile_objective(game, reduced, objective))},
                        {"profile", io::to_json(reduced)}};
  o.report["outputs"] = Json::array();
  write_document(a.out, io::to_json(reduced), o.report);
  return o;
}

inline Outcome maxvar3sat(const std::string& cnf_path, std::size_t max_vars, bool force) {
  const std::string text = io::read_file(cnf_path);
  CnfFormula f = parse_dimacs(text);
  MaxVarOptions opts;
  opts.max_variables = max_vars;
  opts.override_guard = force;
  MaxVarResult r = max_var_3sat_bruteforce(f, opts);

  Outcome o;
  o.report = make_report("maxvar3sat", Json::object(), Json::array({input_entry(cnf_path, text)}));
  Json res{{"k", r.k}, {"witness", io::assignment_to_json(r.witness)}};
  if (auto d = regularity(f)) {
    res["d"] = *d;
  } else {
    res["d"] = nullptr;
  }
  o.report["result"] = std::move(res);
  return o;
}

inline Outcome babbling(const std::string& game_path, const std::string& tie_break,
                        const std::optional<std::string>& out) {
  const std::string text = io::read_file(game_path);
  Game game = io::game_from_json(io::parse_json(text, game_path));
  TieBreak tb;
  if (tie_break == "sender") {
    tb = TieBreak::kSenderFavor;
  } else if (tie_break == "index") {
    tb = TieBreak::kIndexOrder;
  } else {
    throw ValidationError("unknown tie-break '" + tie_break + "' (expected sender or index)");
  }
  Profile p = babbling_equilibrium(game, tb);

  Outcome o;
  o.report = make_report("babbling", Json{{"tie_break", tie_break}}, Json::array({input_entry(game_path, text)}));
  o.report["result"] = {{"values", io::to_json(profile_values(game, p))}, {"profile", io::to_json(p)}};
  o.report["outputs"] = Json::array();
  write_document(out, io::to_json(p), o.report);
  return o;
}

}  // namespace cheaptalk::cli
