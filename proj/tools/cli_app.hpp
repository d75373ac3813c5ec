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

#include <chrono>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace cheaptalk::cli {

/// Parses argv, runs one subcommand and prints its report as JSON on `out`.
/// Returns 0 on success (or equilibrium), 1 when verification finds
/// violations, 2 on usage, parse or validation errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact cheap talk equilibria: verification, solvers and the 3SAT reduction", "cheaptalk"};
  app.require_subcommand(1);

  std::string game, profile, cnf, meta, assignment;
  std::optional<std::string> out_file;

  auto* verify_cmd = app.add_subcommand("verify", "Check a profile against the equilibrium conditions");
  verify_cmd->add_option("game", game, "Game JSON")->required();
  verify_cmd->add_option("profile", profile, "Profile JSON")->required();

  SolveArgs solve_args;
  std::vector<std::string> solve_pos;
  std::size_t budget = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an optimal equilibrium or the persuasion benchmark");
  solve_cmd->add_option("args", solve_pos, "[METHOD] GAME")->required()->expected(1, 2);
  auto* method_opt = solve_cmd->add_option("--method", solve_args.method, "binary, enum or persuasion");
  solve_cmd->add_option("--objective", solve_args.objective, "sender, receiver or welfare (enum only)");
  auto* budget_opt = solve_cmd->add_option("--budget", budget, "Signal budget for enum (default: number of states)");
  solve_cmd->add_option("--max-states", solve_args.max_states, "State-count guard for enum");
  solve_cmd->add_flag("--force", solve_args.force, "Ignore the state-count guard");
  solve_cmd->add_option("--out", solve_args.out, "Write the profile JSON here");

  ReduceArgs reduce_args;
  auto* reduce_cmd = app.add_subcommand("reduce", "Build the cheap talk instance of a regular 3CNF formula");
  reduce_cmd->add_option("cnf", reduce_args.cnf_path, "DIMACS CNF file")->required();
  reduce_cmd->add_flag("--normalize", reduce_args.normalize, "Map sender utilities into [0, 1]");
  reduce_cmd->add_option("--babbling-gap", reduce_args.babbling_gap, "Add the prior pool and action a0 paying ALPHA");
  reduce_cmd->add_option("--out", reduce_args.out_dir, "Directory for game.json and meta.json")->required();

  auto* construct_cmd = app.add_subcommand("construct-eq", "Certificate equilibrium for a partial assignment");
  construct_cmd->add_option("meta", meta, "Reduction metadata JSON")->required();
  construct_cmd->add_option("assignment", assignment, "Signed literals such as 1,-2 (empty or 'none' for no variables)")
      ->required();
  construct_cmd->add_option("--out", out_file, "Write the profile JSON here");

  ReduceSignalsArgs rs_args;
  auto* rs_cmd = app.add_subcommand("reduce-signals", "Shrink an equilibrium's signal set, keeping its value");
  rs_cmd->add_option("game", rs_args.game_path, "Game JSON")->required();
  rs_cmd->add_option("profile", rs_args.profile_path, "Profile JSON")->required();
  rs_cmd->add_option("--objective", rs_args.objective, "sender, receiver or welfare");
  rs_cmd->add_option("--weights", rs_args.weights_path, "Custom objective: JSON states x actions table");
  rs_cmd->add_option("--out", rs_args.out, "Write the reduced profile JSON here");

  std::size_t max_vars = 20;
  bool force_sat = false;
  auto* sat_cmd = app.add_subcommand("maxvar3sat", "Largest non-contradictory partial assignment (brute force)");
  sat_cmd->add_option("cnf", cnf, "DIMACS CNF file")->required();
  sat_cmd->add_option("--max-vars", max_vars, "Variable-count guard");
  sat_cmd->add_flag("--force", force_sat, "Ignore the variable-count guard");

  std::string tie_break = "sender";
  auto* babble_cmd = app.add_subcommand("babbling", "No-information equilibrium");
  babble_cmd->add_option("game", game, "Game JSON")->required();
  babble_cmd->add_option("--tie-break", tie_break, "sender or index");
  babble_cmd->add_option("--out", out_file, "Write the profile JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    if (*verify_cmd) {
      outcome = verify(game, profile);
    } else if (*solve_cmd) {
      if (solve_pos.size() == 2) {
        if (method_opt->count() > 0) throw ValidationError("method given both positionally and with --method");
        solve_args.method = solve_pos[0];
      }
      solve_args.game_path = solve_pos.back();
      if (budget_opt->count() > 0) solve_args.budget = budget;
      outcome = solve(solve_args);
    } else if (*reduce_cmd) {
      outcome = reduce(reduce_args);
    } else if (*construct_cmd) {
      outcome = construct_eq(meta, assignment, out_file);
    } else if (*rs_cmd) {
      outcome = reduce_signals(rs_args);
    } else if (*sat_cmd) {
      outcome = maxvar3sat(cnf, max_vars, force_sat);
    } else if (*babble_cmd) {
      outcome = babbling(game, tie_break, out_file);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  outcome.report["elapsed_ms"] = elapsed.count();
  out << io::dump(outcome.report);
  return outcome.exit_code;
}

}  // namespace cheaptalk::cli
