#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pm/game.hpp"

namespace pm {

enum class Classification { Trivial, LocallyObservable, GloballyObservable, Hopeless };

const char* to_string(Classification c);

using ActionPair = std::pair<Action, Action>;  // stored with first < second

inline ActionPair make_pair_key(Action a, Action b) {
  return a < b ? ActionPair{a, b} : ActionPair{b, a};
}

struct GeometryReport {
  std::vector<int> cell_dim;           // -1 encodes an empty cell
  std::vector<bool> pareto;            // cell_dim == d-1
  std::vector<bool> degenerate;        // !pareto
  std::vector<std::vector<Action>> duplicate_classes;
  std::vector<ActionPair> neighbour_pairs;
  std::map<ActionPair, std::vector<Action>> n_ab;
  std::vector<std::vector<Action>> neighbourhood;  // N_a, excludes a itself
  Classification classification = Classification::Trivial;
  bool nondegenerate = false;

  bool is_neighbour_pair(Action a, Action b) const;
  bool observable() const {
    return classification == Classification::Trivial ||
           classification == Classification::LocallyObservable ||
           classification == Classification::GloballyObservable;
  }
};

// Affine dimension of the cell C_a inside the outcome simplex, computed by
// iterated linear programs that greedily collect affinely independent
// feasible points. Returns -1 for an empty cell.
int cell_dimension(const Game& game, Action a);

// Partition of the actions by exactly equal loss rows (no tolerance:
// duplicates are a modelling artefact of the input, not a numerical
// property).
std::vector<std::vector<Action>> find_duplicates(const Game& game);

// Whether the Pareto optimal, non-duplicate actions a and b share a cell
// face of dimension d-2. Throws InvalidInput on non-Pareto or duplicate
// arguments.
bool neighbours(const Game& game, Action a, Action b);

// The action set N_ab of a neighbour pair: a, b, their duplicates, and every
// action whose nonempty cell is contained in the shared face (tested with
// one LP per action constraint). Throws InvalidInput if (a, b) is not a
// neighbour pair.
std::vector<Action> neighbourhood_set(const Game& game, Action a, Action b);

// Runs the whole static analysis, including the observability
// classification.
GeometryReport analyze(const Game& game);

namespace detail {

// Shared LP plumbing over a cell polytope, reused by the observability
// module's feasibility tests.
struct CellConstraints {
  int d = 0;
  std::vector<std::vector<double>> ineq_lhs;  // rows v with <v, u> <= 0
  std::vector<std::vector<double>> eq_lhs;    // rows v with <v, u> = 0

  static CellConstraints for_cell(const Game& game, Action a);
  void add_equality(std::vector<double> v) { eq_lhs.push_back(std::move(v)); }

  // max <w, u> over the polytope; nullopt when infeasible.
  struct Opt {
    double value;
    std::vector<double> point;
  };
  std::optional<Opt> maximize(const std::vector<double>& w) const;
  int affine_dimension() const;
};

}  // namespace detail

}  // namespace pm
