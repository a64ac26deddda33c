// Command-line front end: game classification, estimator synthesis, policy
// simulation with per-round diagnostics, bundled demo games and the
// acceptance check suite.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pm/acceptance.hpp"
#include "pm/fixtures.hpp"
#include "pm/simulate.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("PM_LOG");
  if (env == nullptr) return 1;
  const std::string level(env);
  if (level == "off") return 0;
  if (level == "info") return 2;
  if (level == "debug") return 3;
  return 1;  // warn
}

void log_info(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[pm] " << msg << "\n";
}

nlohmann::ordered_json report_json(const pm::Game& game, const pm::GeometryReport& geo) {
  nlohmann::ordered_json j;
  j["k"] = game.k;
  j["d"] = game.d;
  j["classification"] = pm::to_string(geo.classification);
  j["nondegenerate"] = geo.nondegenerate;
  j["cell_dim"] = geo.cell_dim;
  j["pareto"] = std::vector<bool>(geo.pareto.begin(), geo.pareto.end());
  j["degenerate"] = std::vector<bool>(geo.degenerate.begin(), geo.degenerate.end());
  j["duplicate_classes"] = geo.duplicate_classes;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [a, b] : geo.neighbour_pairs) {
    nlohmann::ordered_json p;
    p["pair"] = {a, b};
    p["n_ab"] = geo.n_ab.at({a, b});
    pairs.push_back(std::move(p));
  }
  j["neighbour_pairs"] = std::move(pairs);
  j["neighbourhood"] = geo.neighbourhood;

  if (!geo.neighbour_pairs.empty() && geo.observable()) {
    const bool local = geo.classification == pm::Classification::LocallyObservable;
    const auto norms = pm::game_v(game, geo, local);
    j["v"] = norms.v;
    j["v_kind"] = local ? "local" : "global";
    j["v_bound"] = norms.v_bound;
    auto per_pair = nlohmann::ordered_json::array();
    for (const auto& [pair, norm] : norms.pair_norms) {
      nlohmann::ordered_json p;
      p["pair"] = {pair.first, pair.second};
      p["sup_norm"] = norm;
      per_pair.push_back(std::move(p));
    }
    j["pair_sup_norms"] = std::move(per_pair);
  }
  return j;
}

nlohmann::ordered_json estimator_json(const pm::Game& game, const pm::EstimationFunction& f) {
  nlohmann::ordered_json j;
  j["pair"] = {f.pair.first, f.pair.second};
  j["sup_norm"] = f.sup_norm;
  j["support"] = f.support;
  auto values = nlohmann::ordered_json::array();
  for (const auto& [key, v] : f.values) {
    nlohmann::ordered_json entry;
    entry["action"] = key.first;
    entry["symbol"] = key.second;
    auto name = game.symbol_names.find(key.second);
    if (name != game.symbol_names.end()) entry["symbol_name"] = name->second;
    entry["value"] = v;
    values.push_back(std::move(entry));
  }
  j["values"] = std::move(values);
  j["identity_residual"] = f.identity_residual(game);
  return j;
}

struct DemoSetup {
  pm::Game game;
  pm::Prior prior;
};

DemoSetup demo_setup(const std::string& name, double cost, int horizon, int arms,
                     int prior_atoms, std::uint64_t seed) {
  using namespace pm::fixtures;
  if (name == "spam") return {spam_game(cost), spam_prior(horizon)};
  if (name == "ski") {
    const pm::Game g = ski_game();
    return {g, random_sequence_prior(g, horizon, prior_atoms, seed ^ 0x9e37)};
  }
  if (name == "bandit") {
    const pm::Game g = bandit_game(arms);
    return {g, random_sequence_prior(g, horizon, prior_atoms, seed ^ 0xb1d)};
  }
  if (name == "cops") {
    const pm::Game g = cops_game(arms);
    return {g, random_sequence_prior(g, horizon, prior_atoms, seed ^ 0xc095)};
  }
  throw pm::InvalidInput("unknown demo: " + name);
}

pm::Prior prior_from_generator(const std::string& spec, const pm::Game& game, int horizon) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto parse_list = [](const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) out.push_back(std::stod(token));
    return out;
  };
  if (kind == "dirac") {
    std::vector<pm::Outcome> seq;
    for (double v : parse_list(arg)) seq.push_back(static_cast<pm::Outcome>(v));
    return pm::Prior::dirac(seq);
  }
  if (kind == "iid-product") {
    const auto law = arg == "uniform" || arg.empty()
                         ? std::vector<double>(game.d, 1.0 / game.d)
                         : parse_list(arg);
    return pm::Prior::iid_product(law, horizon);
  }
  throw pm::InvalidInput("unknown prior generator: " + spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite partial monitoring: geometry, estimators, exact Bayesian simulation"};
  app.require_subcommand(1);

  // classify
  std::string game_path;
  auto* classify = app.add_subcommand("classify", "print the geometry report for a game file");
  classify->add_option("--game", game_path, "game JSON file")->required();

  // estimators
  std::string est_game_path, method = "lp";
  std::vector<int> pair;
  bool local = false;
  auto* estimators = app.add_subcommand("estimators", "synthesise a loss-difference estimator");
  estimators->add_option("--game", est_game_path, "game JSON file")->required();
  estimators->add_option("--pair", pair, "action pair a b")->expected(2)->required();
  estimators->add_flag("--local", local, "restrict the support to N_ab");
  estimators->add_option("--method", method, "lp | pinv")
      ->check(CLI::IsMember({"lp", "pinv"}));

  // simulate
  std::string sim_game_path, sim_prior_path, sim_prior_gen, policy_spec = "thompson";
  std::string csv_path, json_path;
  int horizon = 100, replicates = 100;
  std::uint64_t seed = 1;
  bool step_checks = false, expect_fail = false;
  auto* simulate = app.add_subcommand("simulate", "run a policy against a game and prior");
  simulate->add_option("--game", sim_game_path, "game JSON file")->required();
  simulate->add_option("--prior", sim_prior_path, "prior JSON file");
  simulate->add_option("--prior-gen", sim_prior_gen,
                       "dirac:<x1,..,xn> | iid-product:uniform | iid-product:<p0,..>");
  simulate->add_option("--policy", policy_spec,
                       "thompson | mario | mario-degenerate | forced:<g> | forced:auto");
  simulate->add_option("-n,--horizon", horizon, "rounds per replicate");
  simulate->add_option("-R,--replicates", replicates, "Monte Carlo replicates");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_flag("--step-checks", step_checks, "assert the per-step inequality each round");
  simulate->add_flag("--expect-fail", expect_fail,
                     "invert the verdict (the Thompson failure demo)");
  simulate->add_option("--csv", csv_path, "per-round trace output");
  simulate->add_option("--json", json_path, "summary output");

  // demo
  std::string demo_name;
  double cost = 0.25;
  int arms = 2, prior_atoms = 64;
  std::string demo_policy = "thompson", demo_csv, demo_json;
  int demo_n = 100, demo_R = 500;
  std::uint64_t demo_seed = 1;
  bool demo_checks = false, demo_expect_fail = false;
  auto* demo = app.add_subcommand("demo", "run a bundled game");
  demo->add_option("name", demo_name, "spam | ski | bandit | cops")->required();
  demo->add_option("--cost", cost, "spam: cost of the revealing action");
  demo->add_option("--k,--arms", arms, "bandit/cops: number of arms");
  demo->add_option("--prior-atoms", prior_atoms, "random-sequence prior size (non-spam demos)");
  demo->add_option("--policy", demo_policy, "policy spec");
  demo->add_option("-n,--horizon", demo_n, "rounds per replicate");
  demo->add_option("-R,--replicates", demo_R, "Monte Carlo replicates");
  demo->add_option("--seed", demo_seed, "base seed");
  demo->add_flag("--step-checks", demo_checks, "assert the per-step inequality each round");
  demo->add_flag("--expect-fail", demo_expect_fail, "invert the verdict");
  demo->add_option("--csv", demo_csv, "per-round trace output");
  demo->add_option("--json", demo_json, "summary output");

  // check
  std::string check_json;
  auto* check = app.add_subcommand("check", "run the full acceptance suite");
  check->add_option("--json", check_json, "write the per-criterion results as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) {
      const pm::Game game = pm::load_game(game_path);
      const pm::GeometryReport geo = pm::analyze(game);
      std::cout << report_json(game, geo).dump(2) << "\n";
      return 0;
    }

    if (estimators->parsed()) {
      const pm::Game game = pm::load_game(est_game_path);
      const pm::GeometryReport geo = pm::analyze(game);
      const pm::EstimationFunction f =
          method == "pinv"
              ? pm::pseudoinverse_estimator(game, geo, pair[0], pair[1], local)
              : pm::min_supnorm_estimator(game, geo, pair[0], pair[1], local);
      std::cout << estimator_json(game, f).dump(2) << "\n";
      return 0;
    }

    auto run_config = [&](pm::ExperimentConfig cfg, bool invert) {
      const pm::RunResult result = pm::run_experiment(cfg);
      std::cout << pm::run_result_json(result) << "\n";
      const bool ok = result.checks_pass() != invert;
      return ok ? 0 : 1;
    };

    if (simulate->parsed()) {
      pm::ExperimentConfig cfg;
      cfg.game = pm::load_game(sim_game_path);
      if (!sim_prior_path.empty()) {
        cfg.prior = pm::load_prior(sim_prior_path);
        horizon = cfg.prior.horizon;
      } else if (!sim_prior_gen.empty()) {
        cfg.prior = prior_from_generator(sim_prior_gen, cfg.game, horizon);
        horizon = cfg.prior.horizon;
      } else {
        throw pm::InvalidInput("simulate needs --prior or --prior-gen");
      }
      cfg.policy = pm::PolicyKind::parse(policy_spec);
      cfg.horizon = horizon;
      cfg.replicates = replicates;
      cfg.seed = seed;
      cfg.per_step_checks = step_checks;
      cfg.csv_path = csv_path;
      cfg.json_path = json_path;
      cfg.expect_fail = expect_fail;
      log_info("simulate: " + policy_spec + ", n=" + std::to_string(horizon) +
               ", R=" + std::to_string(replicates));
      return run_config(std::move(cfg), expect_fail);
    }

    if (demo->parsed()) {
      DemoSetup setup = demo_setup(demo_name, cost, demo_n, arms, prior_atoms, demo_seed);
      pm::ExperimentConfig cfg;
      cfg.game = std::move(setup.game);
      cfg.prior = std::move(setup.prior);
      cfg.policy = pm::PolicyKind::parse(demo_policy);
      cfg.horizon = demo_n;
      cfg.replicates = demo_R;
      cfg.seed = demo_seed;
      cfg.per_step_checks = demo_checks;
      cfg.csv_path = demo_csv;
      cfg.json_path = demo_json;
      cfg.expect_fail = demo_expect_fail;
      log_info("demo " + demo_name + ": " + demo_policy);
      return run_config(std::move(cfg), demo_expect_fail);
    }

    if (check->parsed()) {
      const auto results = pm::acceptance::run_all();
      for (const auto& r : results) std::cout << pm::acceptance::format_line(r) << "\n";
      if (!check_json.empty()) {
        std::ofstream out(check_json);
        out << pm::acceptance::to_json(results) << "\n";
      }
      return pm::acceptance::all_pass(results) ? 0 : 1;
    }
  } catch (const pm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
