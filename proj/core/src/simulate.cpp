#include "pm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>

#include "json.hpp"

namespace pm {

bool RunResult::checks_pass() const {
  if (step_checks_enabled && step_fail_count > 0) return false;
  if (bound_check && !bound_check->pass) return false;
  return true;
}

GeometryReport check_compatibility(const Game& game, const PolicyKind& policy) {
  GeometryReport geo = analyze(game);
  switch (policy.type) {
    case PolicyKind::Type::Mario:
      if (geo.classification != Classification::LocallyObservable || !geo.nondegenerate)
        throw IncompatiblePolicy(
            "mario needs a locally observable nondegenerate game; try mario-degenerate");
      break;
    case PolicyKind::Type::MarioDegenerate:
      if (geo.classification != Classification::LocallyObservable)
        throw IncompatiblePolicy("mario-degenerate needs a locally observable game");
      break;
    case PolicyKind::Type::ForcedExploration:
      if (geo.classification != Classification::LocallyObservable &&
          geo.classification != Classification::GloballyObservable)
        throw IncompatiblePolicy("forced exploration needs an observable nontrivial game");
      break;
    default:
      break;
  }
  return geo;
}

namespace {

struct PolicyRuntime {
  PolicyKind policy;
  const GeometryReport* geometry = nullptr;
  std::vector<Action> cover;  // MarioDegenerate

  // Distribution for the current belief; also reports the round's tree size
  // when a transfer tree is involved.
  std::vector<double> distribution(const BeliefState& belief, int* max_ancestors) const {
    switch (policy.type) {
      case PolicyKind::Type::Mario: {
        const TransferTree tree = build_tree(belief, *geometry);
        if (max_ancestors) *max_ancestors = tree.max_ancestor_count();
        std::vector<double> p = belief.optimal_action_posterior();
        for (int i = 0; i < belief.game().k; ++i) p = water_transfer(p, tree);
        return p;
      }
      case PolicyKind::Type::MarioDegenerate: {
        const TransferTree tree = degenerate_parent_chain(belief, *geometry, cover);
        if (max_ancestors) *max_ancestors = tree.max_ancestor_count();
        std::vector<double> p = belief.optimal_action_posterior();
        for (int i = 0; i < belief.game().k; ++i) p = water_transfer(p, tree);
        return p;
      }
      default:
        return policy_distribution(policy, belief, *geometry);
    }
  }
};

int sample_atom(const Prior& prior, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last = 0;
  for (size_t i = 0; i < prior.atoms.size(); ++i) {
    if (prior.atoms[i].weight <= 0.0) continue;
    last = static_cast<int>(i);
    cum += prior.atoms[i].weight;
    if (u < cum) return last;
  }
  return last;
}

std::optional<CumulativeTheorem> select_theorem(const PolicyKind& policy,
                                                const BoundContext& ctx) {
  switch (policy.type) {
    case PolicyKind::Type::Thompson:
      if (ctx.others_revealing && ctx.k >= 2) return CumulativeTheorem::ThompsonCops;
      if (ctx.self_revealing) return CumulativeTheorem::ThompsonBandit;
      return std::nullopt;
    case PolicyKind::Type::Mario:
      return CumulativeTheorem::MarioNondegenerate;
    case PolicyKind::Type::MarioDegenerate:
      return CumulativeTheorem::MarioDegenerate;
    case PolicyKind::Type::ForcedExploration:
      return CumulativeTheorem::ForcedExploration;
    default:
      return std::nullopt;
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  const Game& game = config.game;
  const Prior& prior = config.prior;
  if (config.horizon != prior.horizon)
    throw InvalidInput("config horizon must match the prior horizon");
  if (config.horizon < 1 || config.replicates < 1)
    throw InvalidInput("need horizon >= 1 and replicates >= 1");
  game.validate();
  prior.validate(game.d);

  PolicyKind policy = config.policy;
  const GeometryReport geo = check_compatibility(game, policy);
  BoundContext ctx = BoundContext::from_game(game, geo);
  if (policy.type == PolicyKind::Type::ForcedExploration) {
    if (policy.gamma_auto) {
      policy.gamma = forced_exploration_gamma(config.horizon, game.k, ctx.v_global);
      policy.gamma_auto = false;
    }
    ctx.gamma = policy.gamma;
  }
  PolicyRuntime runtime{policy, &geo,
                        policy.type == PolicyKind::Type::MarioDegenerate
                            ? (policy.cover.empty() ? default_cover(geo) : policy.cover)
                            : std::vector<Action>{}};

  std::optional<StepLemma> lemma;
  if (config.per_step_checks) lemma = select_step_lemma(policy, ctx);

  const TieBreak tie = policy.tie_break();
  const std::vector<bool> pareto(geo.pareto.begin(), geo.pareto.end());
  const BeliefState initial_belief(game, prior, tie, &pareto);

  RunResult result;
  result.policy = policy.describe();
  result.replicates = config.replicates;
  result.horizon = config.horizon;
  result.seed = config.seed;
  result.step_checks_enabled = config.per_step_checks;
  result.step_lemma = lemma;
  result.min_step_slack = std::numeric_limits<double>::infinity();
  result.context = ctx;

  const bool want_rows = config.keep_trace || !config.csv_path.empty();
  const bool want_diag = config.per_step_checks || want_rows;
  std::vector<RoundRecord> rows;

  std::vector<double> bregman_totals;
  bregman_totals.reserve(config.replicates);

  for (int r = 0; r < config.replicates; ++r) {
    Rng rng(replicate_seed(config.seed, static_cast<std::uint64_t>(r)));
    const int atom = sample_atom(prior, rng);
    const auto& sequence = prior.atoms[atom].sequence;
    BeliefState belief = initial_belief;
    const Action best_fixed = belief.atom_optimal_action(atom);

    double cumulative = 0.0;
    double bregman_total = 0.0;
    for (int t = 1; t <= config.horizon; ++t) {
      int round_ancestors = 0;
      const std::vector<double> dist = runtime.distribution(belief, &round_ancestors);
      result.max_ancestors = std::max(result.max_ancestors, round_ancestors);

      RoundRecord row;
      row.replicate = r;
      row.t = t;
      if (want_diag) {
        if (lemma) {
          row.diag = check_step_inequality(belief, dist, *lemma, ctx, config.potential);
          row.has_bound = true;
          result.min_step_slack = std::min(result.min_step_slack, row.diag.slack);
          if (!row.diag.pass) ++result.step_fail_count;
        } else {
          row.diag.t = t;
          row.diag.expected_instant_regret = expected_instant_regret(belief, dist);
          row.diag.mutual_info = belief.mutual_information(dist);
          row.diag.bregman_gain = belief.expected_bregman_gain(dist, config.potential);
        }
        row.diag.max_ancestors = round_ancestors;
        bregman_total += row.diag.bregman_gain;
        row.has_diagnostics = true;
      }

      const Action a = sample_action(dist, rng);
      const Outcome x = sequence[t - 1];
      const Symbol sigma = game.signal(a, x);
      row.action = a;
      row.outcome = x;
      row.symbol = sigma;
      row.loss = game.loss[a][x];
      cumulative += game.loss[a][x] - game.loss[best_fixed][x];
      belief.advance(a, sigma);
      if (want_rows) rows.push_back(std::move(row));
    }
    result.replicate_regret.push_back(cumulative);
    if (want_diag) bregman_totals.push_back(bregman_total);
  }

  auto mean_se = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double se =
        xs.size() > 1 ? std::sqrt(var / (xs.size() - 1.0) / xs.size()) : 0.0;
    return std::pair<double, double>{mean, se};
  };
  std::tie(result.regret_mean, result.regret_se) = mean_se(result.replicate_regret);
  if (!bregman_totals.empty())
    std::tie(result.bregman_total_mean, result.bregman_total_se) = mean_se(bregman_totals);
  if (!std::isfinite(result.min_step_slack)) result.min_step_slack = 0.0;

  result.theorem = select_theorem(policy, ctx);
  if (result.theorem) {
    result.bound_check = check_cumulative_bound(result.regret_mean, result.regret_se,
                                                *result.theorem, ctx, config.horizon);
  }

  if (!config.csv_path.empty()) write_trace_csv(config.csv_path, rows);
  if (config.keep_trace) result.trace = std::move(rows);
  if (!config.json_path.empty()) {
    std::ofstream out(config.json_path);
    if (!out) throw InvalidInput("cannot open output file: " + config.json_path);
    out << run_result_json(result) << "\n";
  }
  return result;
}

void write_trace_csv(const std::string& path, const std::vector<RoundRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  out << "replicate,t,action,outcome,symbol,loss,exp_instant_regret,mutual_info,"
         "bregman_gain,bound_rhs,slack,pass\n";
  char buf[512];
  for (const auto& row : trace) {
    if (row.has_bound) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                    row.replicate, row.t, row.action, row.outcome, row.symbol, row.loss,
                    row.diag.expected_instant_regret, row.diag.mutual_info,
                    row.diag.bregman_gain, row.diag.bound_rhs, row.diag.slack,
                    row.diag.pass ? 1 : 0);
    } else if (row.has_diagnostics) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,,,\n",
                    row.replicate, row.t, row.action, row.outcome, row.symbol, row.loss,
                    row.diag.expected_instant_regret, row.diag.mutual_info,
                    row.diag.bregman_gain);
    } else {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%.17g,,,,,,\n", row.replicate, row.t,
                    row.action, row.outcome, row.symbol, row.loss);
    }
    out << buf;
  }
}

std::string run_result_json(const RunResult& result) {
  nlohmann::ordered_json j;
  j["policy"] = result.policy;
  j["replicates"] = result.replicates;
  j["horizon"] = result.horizon;
  j["seed"] = result.seed;
  j["regret_mean"] = result.regret_mean;
  j["regret_se"] = result.regret_se;
  j["step_checks_enabled"] = result.step_checks_enabled;
  if (result.step_lemma) {
    j["step_lemma"] = to_string(*result.step_lemma);
    j["step_fail_count"] = result.step_fail_count;
    j["min_step_slack"] = result.min_step_slack;
  }
  j["max_ancestors"] = result.max_ancestors;
  j["bregman_total_mean"] = result.bregman_total_mean;
  if (result.theorem) {
    j["theorem"] = to_string(*result.theorem);
    j["theorem_rhs"] = result.bound_check->bound;
    j["bound_pass"] = result.bound_check->pass;
  }
  j["checks_pass"] = result.checks_pass();
  return j.dump(2);
}

ExhaustiveResult exhaustive_step_check(const Game& game, const Prior& prior,
                                       const PolicyKind& policy_in, const Potential& potential) {
  game.validate();
  prior.validate(game.d);
  PolicyKind policy = policy_in;
  const GeometryReport geo = check_compatibility(game, policy);
  BoundContext ctx = BoundContext::from_game(game, geo);
  if (policy.type == PolicyKind::Type::ForcedExploration) {
    if (policy.gamma_auto) {
      policy.gamma = forced_exploration_gamma(prior.horizon, game.k, ctx.v_global);
      policy.gamma_auto = false;
    }
    ctx.gamma = policy.gamma;
  }
  const StepLemma lemma = select_step_lemma(policy, ctx);
  PolicyRuntime runtime{policy, &geo,
                        policy.type == PolicyKind::Type::MarioDegenerate
                            ? (policy.cover.empty() ? default_cover(geo) : policy.cover)
                            : std::vector<Action>{}};
  const std::vector<bool> pareto(geo.pareto.begin(), geo.pareto.end());

  ExhaustiveResult result;
  result.min_slack = std::numeric_limits<double>::infinity();

  std::function<void(const BeliefState&)> walk = [&](const BeliefState& belief) {
    if (belief.t() > prior.horizon) return;
    const std::vector<double> dist = runtime.distribution(belief, nullptr);
    const StepDiagnostics diag = check_step_inequality(belief, dist, lemma, ctx, potential);
    ++result.beliefs_checked;
    result.min_slack = std::min(result.min_slack, diag.slack);
    if (!diag.pass) ++result.fail_count;
    for (Action a = 0; a < game.k; ++a) {
      if (dist[a] <= 1e-12) continue;
      for (Symbol sigma : game.alphabet(a)) {
        if (belief.signal_probability(a, sigma) <= 1e-12) continue;
        walk(belief.posterior_update(a, sigma));
      }
    }
  };
  walk(BeliefState(game, prior, policy.tie_break(), &pareto));
  if (!std::isfinite(result.min_slack)) result.min_slack = 0.0;
  return result;
}

}  // namespace pm
