#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pm/diagnostics.hpp"

namespace pm {

struct ExperimentConfig {
  Game game;
  Prior prior;
  PolicyKind policy;
  int horizon = 0;  // must match the prior horizon
  int replicates = 1;
  std::uint64_t seed = 0;
  bool per_step_checks = false;
  bool keep_trace = false;  // retain per-round records in memory
  std::string csv_path;     // written when nonempty
  std::string json_path;    // written when nonempty
  Potential potential = Potential::negentropy();
  bool expect_fail = false;  // the Thompson failure demo inverts the verdict
};

struct RoundRecord {
  int replicate = 0;
  int t = 0;
  Action action = 0;
  Outcome outcome = 0;
  Symbol symbol = 0;
  double loss = 0.0;
  bool has_diagnostics = false;
  bool has_bound = false;
  StepDiagnostics diag;
};

struct RunResult {
  std::string policy;
  int replicates = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> replicate_regret;  // realized cumulative regret per replicate
  double regret_mean = 0.0;
  double regret_se = 0.0;

  bool step_checks_enabled = false;
  std::optional<StepLemma> step_lemma;
  int step_fail_count = 0;
  double min_step_slack = 0.0;
  int max_ancestors = 0;  // over all rounds and replicates
  // Replicate mean of the summed per-round Bregman gains, with its standard
  // error; the telescoped total stays below the potential diameter.
  double bregman_total_mean = 0.0;
  double bregman_total_se = 0.0;

  std::optional<CumulativeTheorem> theorem;
  std::optional<CumulativeCheck> bound_check;
  BoundContext context;

  std::vector<RoundRecord> trace;

  // All enabled checks green (per-step and cumulative).
  bool checks_pass() const;
};

// Policy/game compatibility; throws IncompatiblePolicy. Returns the geometry
// so callers can reuse it.
GeometryReport check_compatibility(const Game& game, const PolicyKind& policy);

// Rolls the policy forward n rounds per replicate with exact belief updates;
// the adversary's whole sequence is drawn once per replicate from the prior.
// Deterministic for a fixed config, including byte-identical CSV/JSON
// artefacts.
RunResult run_experiment(const ExperimentConfig& config);

std::string run_result_json(const RunResult& result);
void write_trace_csv(const std::string& path, const std::vector<RoundRecord>& trace);

struct ExhaustiveResult {
  long beliefs_checked = 0;
  double min_slack = 0.0;
  int fail_count = 0;
  bool all_pass() const { return fail_count == 0; }
};

// Walks every belief reachable with positive probability up to the horizon
// (all policy-playable actions crossed with all positive-probability
// signals) and checks the per-step inequality at each one.
ExhaustiveResult exhaustive_step_check(const Game& game, const Prior& prior,
                                       const PolicyKind& policy,
                                       const Potential& potential = Potential::negentropy());

}  // namespace pm
