#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pm/game.hpp"
#include "pm/geometry.hpp"

namespace pm {

// A loss-difference estimation function for an action pair (a, b): a value
// per (action, realized symbol) such that summing values[c, signal(c, x)]
// over actions reconstructs loss(a, x) - loss(b, x) at every outcome x.
struct EstimationFunction {
  ActionPair pair;
  std::map<std::pair<Action, Symbol>, double> values;
  std::vector<Action> support;  // actions carrying any nonzero value
  double sup_norm = 0.0;

  double value(Action c, Symbol sigma) const;
  // Sum of values[c, signal(c, x)] over all actions.
  double evaluate(const Game& game, Outcome x) const;
  // Max over outcomes of |evaluate(x) - (loss(a,x) - loss(b,x))|.
  double identity_residual(const Game& game) const;
  // The (b, a) function: same support, negated values.
  EstimationFunction negated() const;
};

// Per-action 0/1 signal matrices S_c (one row per realized symbol, one
// column per outcome) and their vertical stack.
struct SignalMatrixStack {
  std::vector<std::pair<Action, Symbol>> row_index;
  std::vector<std::vector<double>> rows;  // |row_index| x d

  static SignalMatrixStack build(const Game& game, const std::vector<Action>& actions);
  // Each outcome emits exactly one symbol per action.
  bool columns_sum_to_one(const Game& game, const std::vector<Action>& actions) const;
};

// Minimal sup-norm estimator for the pair, solved as a linear program with
// the equality constraints relaxed to |.| <= tol::lp_feasibility. With
// local=true the support is restricted to N_ab. Returns nullopt when the
// system is infeasible, i.e. the pair is not (locally) observable.
std::optional<EstimationFunction> try_min_supnorm_estimator(const Game& game,
                                                            const GeometryReport& geometry,
                                                            Action a, Action b, bool local);

// Same, but throws NotObservable instead of returning nullopt.
EstimationFunction min_supnorm_estimator(const Game& game, const GeometryReport& geometry,
                                         Action a, Action b, bool local);

// Minimum-norm solution of the estimator system through the Moore-Penrose
// pseudo-inverse of the (restricted) signal stack. Throws ResidualTooLarge
// when the identity fails, i.e. the pair is not (locally) observable.
EstimationFunction pseudoinverse_estimator(const Game& game, const GeometryReport& geometry,
                                           Action a, Action b, bool local);

struct ObservabilityNorms {
  double v = 0.0;       // max over neighbour pairs of the minimal sup-norm
  double v_bound = 0.0;  // sqrt(d) * (1+k)^(d/2)
  std::map<ActionPair, double> pair_norms;
};

// v for the whole game (local or global flavour). Throws NotObservable when
// some pair admits no estimator under the requested restriction.
ObservabilityNorms game_v(const Game& game, const GeometryReport& geometry, bool local);

}  // namespace pm
