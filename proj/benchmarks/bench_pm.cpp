#include <benchmark/benchmark.h>

#include "pm/fixtures.hpp"
#include "pm/simulate.hpp"

namespace {

void BM_AnalyzeSpam(benchmark::State& state) {
  const pm::Game game = pm::fixtures::spam_game(0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pm::analyze(game));
  }
}
BENCHMARK(BM_AnalyzeSpam);

void BM_AnalyzeSki(benchmark::State& state) {
  const pm::Game game = pm::fixtures::ski_game();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pm::analyze(game));
  }
}
BENCHMARK(BM_AnalyzeSki);

void BM_MinSupnormEstimator(benchmark::State& state) {
  const pm::Game game = pm::fixtures::cops_game(3);
  const pm::GeometryReport geo = pm::analyze(game);
  const auto pair = geo.neighbour_pairs.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pm::min_supnorm_estimator(game, geo, pair.first, pair.second, true));
  }
}
BENCHMARK(BM_MinSupnormEstimator);

void BM_WaterTransfer(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<pm::Action> parents(k);
  parents[0] = -1;
  for (int a = 1; a < k; ++a) parents[a] = a / 2;
  const auto tree = pm::TransferTree::from_parents(parents, 0);
  pm::Rng rng(7);
  std::vector<double> p(k);
  double total = 0;
  for (double& v : p) total += v = rng.uniform();
  for (double& v : p) v /= total;
  for (auto _ : state) {
    auto q = p;
    for (int i = 0; i < k; ++i) q = pm::water_transfer(q, tree);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_WaterTransfer)->Arg(8)->Arg(32);

void BM_PosteriorRound(benchmark::State& state) {
  const pm::Game game = pm::fixtures::bandit_game(3);
  const pm::Prior prior = pm::fixtures::random_sequence_prior(game, 50, 256, 11);
  const pm::BeliefState initial(game, prior);
  for (auto _ : state) {
    pm::BeliefState belief = initial;
    const auto p = belief.optimal_action_posterior();
    benchmark::DoNotOptimize(belief.mutual_information(p));
    belief.advance(0, game.signal(0, prior.atoms[0].sequence[0]));
    benchmark::DoNotOptimize(belief.optimal_action_posterior());
  }
}
BENCHMARK(BM_PosteriorRound);

void BM_SimulateMarioSpam(benchmark::State& state) {
  pm::ExperimentConfig cfg;
  cfg.game = pm::fixtures::spam_game(0.25);
  cfg.prior = pm::fixtures::spam_prior(50);
  cfg.policy = pm::PolicyKind::mario();
  cfg.horizon = 50;
  cfg.replicates = 20;
  cfg.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pm::run_experiment(cfg));
  }
}
BENCHMARK(BM_SimulateMarioSpam);

}  // namespace

BENCHMARK_MAIN();
