#include "pm/belief.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pm {

BeliefState::BeliefState(const Game& game, const Prior& prior, TieBreak tie,
                         const std::vector<bool>* pareto)
    : game_(&game), prior_(&prior), tie_(tie) {
  game.validate();
  prior.validate(game.d);
  if (tie == TieBreak::ParetoFirst && pareto == nullptr)
    throw InvalidInput("ParetoFirst tie-break needs Pareto flags");

  auto table = std::make_shared<AStarTable>();
  table->frac.resize(prior.atoms.size());
  table->lowest.resize(prior.atoms.size());
  for (size_t i = 0; i < prior.atoms.size(); ++i) {
    const auto& seq = prior.atoms[i].sequence;
    std::vector<double> total(game.k, 0.0);
    for (Outcome x : seq)
      for (Action a = 0; a < game.k; ++a) total[a] += game.loss[a][x];
    const double best = *std::min_element(total.begin(), total.end());
    std::vector<Action> argmin;
    for (Action a = 0; a < game.k; ++a)
      if (total[a] <= best + 1e-12) argmin.push_back(a);
    table->lowest[i] = argmin.front();
    auto& row = table->frac[i];
    switch (tie) {
      case TieBreak::LowestIndex:
        row = {{argmin.front(), 1.0}};
        break;
      case TieBreak::Uniform:
        for (Action a : argmin) row.push_back({a, 1.0 / argmin.size()});
        break;
      case TieBreak::ParetoFirst: {
        Action pick = -1;
        for (Action a : argmin)
          if ((*pareto)[a]) {
            pick = a;
            break;
          }
        if (pick < 0) pick = argmin.front();
        row = {{pick, 1.0}};
        break;
      }
    }
  }
  astar_ = std::move(table);
  weights_.resize(prior.atoms.size());
  for (size_t i = 0; i < prior.atoms.size(); ++i) weights_[i] = prior.atoms[i].weight;
}

void BeliefState::check_in_round() const {
  if (t_ > prior_->horizon) throw InvalidInput("round index past the horizon");
}

void BeliefState::advance(Action a, Symbol sigma) {
  check_in_round();
  if (a < 0 || a >= game_->k) throw InvalidInput("action index out of range");
  const auto alphabet = game_->alphabet(a);
  if (std::find(alphabet.begin(), alphabet.end(), sigma) == alphabet.end())
    throw InvalidInput("symbol is not in the action's alphabet");
  double total = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (game_->signal(a, atom_outcome(static_cast<int>(i))) != sigma) weights_[i] = 0.0;
    total += weights_[i];
  }
  if (total <= 0.0)
    throw InconsistentObservation("observed symbol has posterior probability zero");
  for (double& w : weights_) {
    w /= total;
    if (w < tol::atom_drop) w = 0.0;
  }
  history_.push_back({a, sigma});
  ++t_;
}

BeliefState BeliefState::posterior_update(Action a, Symbol sigma) const {
  BeliefState next = *this;
  next.advance(a, sigma);
  return next;
}

std::vector<double> BeliefState::optimal_action_posterior() const {
  std::vector<double> p(game_->k, 0.0);
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    for (const auto& [a, f] : astar_->frac[i]) p[a] += weights_[i] * f;
  }
  return p;
}

double BeliefState::expected_loss(Action a) const {
  check_in_round();
  double sum = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    sum += weights_[i] * game_->loss[a][atom_outcome(static_cast<int>(i))];
  }
  return sum;
}

double BeliefState::conditional_loss_mass(Action a) const {
  check_in_round();
  double sum = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    sum += weights_[i] * atom_fraction(static_cast<int>(i), a) *
           game_->loss[a][atom_outcome(static_cast<int>(i))];
  }
  return sum;
}

BeliefState BeliefState::conditional_posterior(Action a) const {
  BeliefState cond = *this;
  double total = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    cond.weights_[i] = weights_[i] * atom_fraction(static_cast<int>(i), a);
    total += cond.weights_[i];
  }
  if (total <= 0.0)
    throw ZeroProbabilityCondition("optimal action has posterior probability zero");
  for (double& w : cond.weights_) w /= total;
  return cond;
}

std::vector<std::pair<Symbol, double>> BeliefState::signal_law(Action b) const {
  check_in_round();
  std::map<Symbol, double> law;
  for (Symbol sigma : game_->alphabet(b)) law[sigma] = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    law[game_->signal(b, atom_outcome(static_cast<int>(i)))] += weights_[i];
  }
  return {law.begin(), law.end()};
}

double BeliefState::signal_probability(Action a, Symbol sigma) const {
  check_in_round();
  double p = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    if (game_->signal(a, atom_outcome(static_cast<int>(i))) == sigma) p += weights_[i];
  }
  return p;
}

double BeliefState::mutual_information(std::span<const double> action_dist) const {
  check_in_round();
  if (static_cast<int>(action_dist.size()) != game_->k)
    throw InvalidInput("action distribution has wrong length");
  const auto pstar = optimal_action_posterior();
  double info = 0.0;
  for (Action a = 0; a < game_->k; ++a) {
    if (pstar[a] <= 0.0) continue;
    for (Action b = 0; b < game_->k; ++b) {
      if (action_dist[b] <= 0.0) continue;
      // KL between the conditional (optimal action = a) and unconditional
      // law of action b's symbol this round.
      std::map<Symbol, double> cond, uncond;
      for (size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] == 0.0) continue;
        const Symbol s = game_->signal(b, atom_outcome(static_cast<int>(i)));
        uncond[s] += weights_[i];
        cond[s] += weights_[i] * atom_fraction(static_cast<int>(i), a);
      }
      double kl = 0.0;
      for (const auto& [s, mass] : cond) {
        if (mass <= 0.0) continue;
        const double c = mass / pstar[a];
        const double u = uncond[s];
        if (u <= 0.0) throw Error("internal: conditional signal mass without unconditional mass");
        kl += c * std::log(c / u);
      }
      info += pstar[a] * action_dist[b] * kl;
    }
  }
  return std::max(info, 0.0);
}

std::vector<double> BeliefState::posterior_after(Action a, Symbol sigma) const {
  check_in_round();
  std::vector<double> p(game_->k, 0.0);
  double total = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    if (game_->signal(a, atom_outcome(static_cast<int>(i))) != sigma) continue;
    total += weights_[i];
    for (const auto& [act, f] : astar_->frac[i]) p[act] += weights_[i] * f;
  }
  if (total <= 0.0)
    throw InconsistentObservation("hypothetical observation has probability zero");
  for (double& v : p) v /= total;
  return p;
}

double BeliefState::expected_bregman_gain(std::span<const double> action_dist,
                                          const Potential& potential) const {
  check_in_round();
  if (static_cast<int>(action_dist.size()) != game_->k)
    throw InvalidInput("action distribution has wrong length");
  const auto pstar = optimal_action_posterior();
  double gain = 0.0;
  for (Action a = 0; a < game_->k; ++a) {
    if (action_dist[a] <= 0.0) continue;
    for (const auto& [sigma, prob] : signal_law(a)) {
      if (prob <= 0.0) continue;
      const auto next = posterior_after(a, sigma);
      gain += action_dist[a] * prob * potential.divergence(next, pstar);
    }
  }
  return gain;
}

Action BeliefState::atom_optimal_action(int atom) const { return astar_->lowest[atom]; }

double BeliefState::atom_fraction(int atom, Action a) const {
  for (const auto& [act, f] : astar_->frac[atom])
    if (act == a) return f;
  return 0.0;
}

}  // namespace pm
