#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pm/game.hpp"
#include "pm/potential.hpp"
#include "pm/prior.hpp"

namespace pm {

// How per-atom ties in the whole-horizon argmin defining the optimal action
// are resolved. Uniform splits the atom's mass over the tied minimisers;
// ParetoFirst prefers Pareto optimal actions (then lowest index), which
// zeroes the optimal-action posterior on degenerate actions.
enum class TieBreak { LowestIndex, Uniform, ParetoFirst };

// Exact posterior over the atoms of a finitely supported prior, together
// with every derived quantity the policies and diagnostics need. A value
// type: updates return/produce new states, so distinct simulation replicates
// never share one.
class BeliefState {
 public:
  // pareto flags are required only for TieBreak::ParetoFirst.
  BeliefState(const Game& game, const Prior& prior, TieBreak tie = TieBreak::LowestIndex,
              const std::vector<bool>* pareto = nullptr);

  int t() const { return t_; }                 // 1-based current round
  int horizon() const { return prior_->horizon; }
  TieBreak tie_break() const { return tie_; }
  const Game& game() const { return *game_; }
  const Prior& prior() const { return *prior_; }
  std::span<const double> weights() const { return weights_; }
  const std::vector<std::pair<Action, Symbol>>& history() const { return history_; }

  // Zeroes atoms inconsistent with observing symbol sigma after playing a in
  // round t, renormalises and advances the round. Throws
  // InconsistentObservation when no atom survives.
  BeliefState posterior_update(Action a, Symbol sigma) const;
  void advance(Action a, Symbol sigma);  // in-place variant

  // P*_t: posterior law of the optimal action.
  std::vector<double> optimal_action_posterior() const;

  double expected_loss(Action a) const;
  // E_t[loss of a | optimal action = a] weighted by the posterior, i.e. the
  // numerator sum over atoms; divide-free companion of expected_loss.
  double conditional_loss_mass(Action a) const;

  // Posterior conditioned on the optimal action being a. Throws
  // ZeroProbabilityCondition when that event has posterior probability 0.
  BeliefState conditional_posterior(Action a) const;

  // Law of the symbol emitted by action b this round, over alphabet(b).
  std::vector<std::pair<Symbol, double>> signal_law(Action b) const;

  // I_t of the optimal action against the (action, signal) pair when the
  // action is drawn from P.
  double mutual_information(std::span<const double> action_dist) const;

  // Expected one-step Bregman gain of the optimal-action posterior when the
  // action is drawn from P. With the negentropy potential this equals
  // mutual_information.
  double expected_bregman_gain(std::span<const double> action_dist,
                               const Potential& potential) const;

  // P* after a hypothetical (a, sigma) observation; cheap, no state copy.
  std::vector<double> posterior_after(Action a, Symbol sigma) const;

  // Probability this round that action a emits symbol sigma.
  double signal_probability(Action a, Symbol sigma) const;

  // Lowest-index whole-horizon optimal action of one atom (ties resolved by
  // index regardless of the tie mode; all tied actions share the total).
  Action atom_optimal_action(int atom) const;

  // Tie-broken share of atom i assigned to action a when forming P*.
  double atom_fraction(int atom, Action a) const;

 private:
  struct AStarTable {
    // Sparse (action, fraction) rows per atom.
    std::vector<std::vector<std::pair<Action, double>>> frac;
    std::vector<Action> lowest;  // lowest-index argmin per atom
  };

  const Game* game_;
  const Prior* prior_;
  TieBreak tie_ = TieBreak::LowestIndex;
  std::shared_ptr<const AStarTable> astar_;
  std::vector<double> weights_;
  int t_ = 1;
  std::vector<std::pair<Action, Symbol>> history_;

  Outcome atom_outcome(int atom) const { return prior_->atoms[atom].sequence[t_ - 1]; }
  void check_in_round() const;
};

}  // namespace pm
