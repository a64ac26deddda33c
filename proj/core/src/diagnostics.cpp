#include "pm/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace pm {

double expected_instant_regret(const BeliefState& belief, std::span<const double> action_dist) {
  const int k = belief.game().k;
  if (static_cast<int>(action_dist.size()) != k)
    throw InvalidInput("action distribution has wrong length");
  double played = 0.0;
  for (Action a = 0; a < k; ++a)
    if (action_dist[a] != 0.0) played += action_dist[a] * belief.expected_loss(a);
  double optimal = 0.0;
  for (Action a = 0; a < k; ++a) optimal += belief.conditional_loss_mass(a);
  return played - optimal;
}

double potential_diameter(const Potential& potential, int k) { return potential.diameter(k); }

double verify_martingale(const BeliefState& belief, Action a) {
  const auto pstar = belief.optimal_action_posterior();
  std::vector<double> mixed(pstar.size(), 0.0);
  for (const auto& [sigma, prob] : belief.signal_law(a)) {
    if (prob <= 0.0) continue;
    const auto next = belief.posterior_after(a, sigma);
    for (size_t i = 0; i < mixed.size(); ++i) mixed[i] += prob * next[i];
  }
  double worst = 0.0;
  for (size_t i = 0; i < mixed.size(); ++i)
    worst = std::max(worst, std::fabs(mixed[i] - pstar[i]));
  return worst;
}

const char* to_string(StepLemma lemma) {
  switch (lemma) {
    case StepLemma::ThompsonSelfRevealing: return "thompson-self-revealing";
    case StepLemma::ThompsonOthersRevealing: return "thompson-others-revealing";
    case StepLemma::MarioNondegenerate: return "mario-nondegenerate";
    case StepLemma::MarioDegenerate: return "mario-degenerate";
    case StepLemma::ForcedExploration: return "forced-exploration";
  }
  return "?";
}

const char* to_string(CumulativeTheorem theorem) {
  switch (theorem) {
    case CumulativeTheorem::MarioNondegenerate: return "mario-nondegenerate";
    case CumulativeTheorem::MarioDegenerate: return "mario-degenerate";
    case CumulativeTheorem::ForcedExploration: return "forced-exploration";
    case CumulativeTheorem::ThompsonBandit: return "thompson-bandit";
    case CumulativeTheorem::ThompsonCops: return "thompson-cops";
  }
  return "?";
}

BoundContext BoundContext::from_game(const Game& game, const GeometryReport& geometry) {
  BoundContext c;
  c.k = game.k;
  c.d = game.d;
  c.classification = geometry.classification;
  c.nondegenerate = geometry.nondegenerate;
  c.self_revealing = game.self_revealing_feedback();
  c.others_revealing = game.others_revealing_feedback();
  if (geometry.classification == Classification::LocallyObservable)
    c.v_local = game_v(game, geometry, /*local=*/true).v;
  if (geometry.observable() && !geometry.neighbour_pairs.empty())
    c.v_global = game_v(game, geometry, /*local=*/false).v;
  return c;
}

StepLemma select_step_lemma(const PolicyKind& policy, const BoundContext& context) {
  switch (policy.type) {
    case PolicyKind::Type::Thompson:
    case PolicyKind::Type::FixedDistribution:
      if (context.others_revealing && context.k >= 2) return StepLemma::ThompsonOthersRevealing;
      if (context.self_revealing) return StepLemma::ThompsonSelfRevealing;
      if (context.classification == Classification::LocallyObservable && context.nondegenerate)
        return StepLemma::MarioNondegenerate;
      throw UnknownPairing("no per-step inequality for Thompson on this game class");
    case PolicyKind::Type::Mario:
      if (context.classification == Classification::LocallyObservable && context.nondegenerate)
        return StepLemma::MarioNondegenerate;
      throw UnknownPairing("the Mario per-step inequality needs a locally observable nondegenerate game");
    case PolicyKind::Type::MarioDegenerate:
      if (context.classification == Classification::LocallyObservable)
        return StepLemma::MarioDegenerate;
      throw UnknownPairing("the degenerate Mario inequality needs a locally observable game");
    case PolicyKind::Type::ForcedExploration:
      if (context.classification == Classification::LocallyObservable ||
          context.classification == Classification::GloballyObservable)
        return StepLemma::ForcedExploration;
      throw UnknownPairing("forced exploration needs an observable game");
  }
  throw UnknownPairing("unknown policy kind");
}

namespace {

double step_bound_rhs(StepLemma lemma, const BoundContext& ctx, const BeliefState& belief,
                      std::span<const double> action_dist, double mutual_info) {
  const double k = ctx.k;
  switch (lemma) {
    case StepLemma::ThompsonSelfRevealing: {
      const double gain =
          belief.expected_bregman_gain(action_dist, Potential::half_tsallis());
      return std::sqrt(std::sqrt(k) * gain);
    }
    case StepLemma::ThompsonOthersRevealing:
      return std::sqrt(2.0 * mutual_info);
    case StepLemma::MarioNondegenerate:
      return (ctx.d + 1) * std::pow(k, 1.5) * std::sqrt(8.0 * mutual_info);
    case StepLemma::MarioDegenerate:
      return ctx.v_local * std::pow(k, 1.5) * std::sqrt(8.0 * mutual_info);
    case StepLemma::ForcedExploration:
      if (!(ctx.gamma > 0.0)) throw InvalidInput("forced exploration bound needs gamma > 0");
      return ctx.gamma + k * ctx.v_global * std::sqrt(2.0 * mutual_info / ctx.gamma);
  }
  throw InvalidInput("unknown step lemma");
}

}  // namespace

StepDiagnostics check_step_inequality(const BeliefState& belief,
                                      std::span<const double> action_dist, StepLemma lemma,
                                      const BoundContext& context, const Potential& potential) {
  StepDiagnostics diag;
  diag.t = belief.t();
  diag.expected_instant_regret = expected_instant_regret(belief, action_dist);
  diag.mutual_info = belief.mutual_information(action_dist);
  diag.bregman_gain = belief.expected_bregman_gain(action_dist, potential);
  diag.bound_rhs = step_bound_rhs(lemma, context, belief, action_dist, diag.mutual_info);
  diag.slack = diag.bound_rhs - diag.expected_instant_regret;
  diag.pass = diag.slack >= -tol::step_inequality;
  return diag;
}

double cumulative_bound_rhs(CumulativeTheorem theorem, const BoundContext& ctx, int horizon) {
  const double n = horizon;
  const double k = ctx.k;
  const double logk = std::log(k);
  switch (theorem) {
    case CumulativeTheorem::MarioNondegenerate:
      return std::pow(k, 1.5) * (ctx.d + 1) * std::sqrt(8.0 * n * logk);
    case CumulativeTheorem::MarioDegenerate:
      return ctx.v_local * std::pow(k, 1.5) * std::sqrt(8.0 * n * logk);
    case CumulativeTheorem::ForcedExploration:
      return 3.0 * std::pow(n * k * ctx.v_global, 2.0 / 3.0) * std::cbrt(logk / 2.0);
    case CumulativeTheorem::ThompsonBandit:
      return std::sqrt(2.0 * k * n);
    case CumulativeTheorem::ThompsonCops:
      return std::sqrt(2.0 * n * logk);
  }
  throw InvalidInput("unknown cumulative theorem");
}

double general_cumulative_bound(double alpha, double beta, const Potential& potential, int k,
                                int horizon) {
  return alpha * horizon + std::sqrt(horizon * beta * potential.diameter(k));
}

CumulativeCheck check_cumulative_bound(double regret_mean, double regret_se,
                                       CumulativeTheorem theorem, const BoundContext& context,
                                       int horizon) {
  CumulativeCheck c;
  c.estimate = regret_mean;
  c.std_error = regret_se;
  c.bound = cumulative_bound_rhs(theorem, context, horizon);
  c.pass = regret_mean + 3.0 * regret_se <= c.bound;
  return c;
}

}  // namespace pm
