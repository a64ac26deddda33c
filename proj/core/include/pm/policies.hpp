#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pm/belief.hpp"
#include "pm/geometry.hpp"
#include "pm/rng.hpp"

namespace pm {

// Round-t directed tree over the actions, rooted at the greedy action, along
// which the water transfer operator moves probability mass.
struct TransferTree {
  Action root = 0;
  std::vector<Action> greedy_ties;             // V_t, ascending
  std::vector<ActionPair> tie_edges;           // E_t
  std::vector<Action> parent;                  // -1 at the root
  std::vector<int> depth;                      // 0 at the root
  std::vector<std::vector<Action>> ancestors;  // path a -> ... -> root, inclusive
  std::vector<std::vector<Action>> descendants;  // strict descendants

  int size() const { return static_cast<int>(parent.size()); }
  int max_ancestor_count() const;

  // Derives depth/ancestors/descendants from a parent map; validates the
  // single-root directed-tree shape.
  static TransferTree from_parents(std::vector<Action> parent, Action root);

  // Structural invariants: one root, one parent per non-root, all paths
  // reach the root. With geometry given, additionally parent(a) in N_a.
  void check_invariants(const GeometryReport* geometry = nullptr) const;
};

// Greedy-rooted tree per the two-case parent rule: outside the tie set V_t a
// node's parent is its best neighbour; inside V_t it is the neighbour
// closest to the root in (V_t, E_t). Throws DisconnectedVt when (V_t, E_t)
// is not connected. Requires a nondegenerate game.
TransferTree build_tree(const BeliefState& belief, const GeometryReport& geometry);

// One application of the water transfer operator W_t: the deepest anomalous
// action (lowest index on depth ties) is averaged with its heaviest
// descendants. Identity when no action is anomalous.
std::vector<double> water_transfer(std::span<const double> dist, const TransferTree& tree);

// Actions whose mass is below the maximum over their descendants.
std::vector<Action> anomalous_actions(std::span<const double> dist, const TransferTree& tree);

// W_t^k applied to P*_t.
std::vector<double> mario_distribution(const BeliefState& belief, const GeometryReport& geometry);

// (1-gamma) P*_t + gamma uniform. The caller must have built the belief with
// the Pareto-first tie-break so degenerate actions carry no posterior mass.
std::vector<double> forced_exploration_distribution(const BeliefState& belief, double gamma);

// Exploration rate schedule used with the globally observable bound.
double forced_exploration_gamma(int horizon, int k, double v);

// Tree for degenerate games: the base tree on the cover C is spliced with
// the convex-combination chains through duplicates and degenerate actions.
// Throws CoverFailure when C's cells do not cover the simplex.
TransferTree degenerate_parent_chain(const BeliefState& belief, const GeometryReport& geometry,
                                     const std::vector<Action>& cover);

// Default cover: the lowest-index Pareto representative of each duplicate
// class.
std::vector<Action> default_cover(const GeometryReport& geometry);

std::vector<double> mario_degenerate_distribution(const BeliefState& belief,
                                                  const GeometryReport& geometry,
                                                  const std::vector<Action>& cover);

// Inverse-CDF sampling with the project RNG.
Action sample_action(std::span<const double> dist, Rng& rng);

struct PolicyKind {
  enum class Type { Thompson, Mario, MarioDegenerate, ForcedExploration, FixedDistribution };
  Type type = Type::Thompson;
  double gamma = 0.0;            // ForcedExploration
  bool gamma_auto = false;       // resolve gamma from the schedule at setup
  std::vector<Action> cover;     // MarioDegenerate; empty = default cover
  std::vector<double> fixed;     // FixedDistribution

  static PolicyKind thompson() { return {Type::Thompson, 0, false, {}, {}}; }
  static PolicyKind mario() { return {Type::Mario, 0, false, {}, {}}; }
  static PolicyKind mario_degenerate(std::vector<Action> cover = {}) {
    return {Type::MarioDegenerate, 0, false, std::move(cover), {}};
  }
  static PolicyKind forced(double gamma) { return {Type::ForcedExploration, gamma, false, {}, {}}; }
  static PolicyKind forced_auto() { return {Type::ForcedExploration, 0, true, {}, {}}; }
  static PolicyKind fixed(std::vector<double> dist) {
    return {Type::FixedDistribution, 0, false, {}, std::move(dist)};
  }

  // Parses "thompson", "mario", "mario-degenerate", "forced:<gamma>",
  // "forced:auto".
  static PolicyKind parse(const std::string& text);
  std::string describe() const;
  // The tie-break the policy's analysis assumes.
  TieBreak tie_break() const;
};

// The action distribution the policy plays from the current belief.
std::vector<double> policy_distribution(const PolicyKind& policy, const BeliefState& belief,
                                        const GeometryReport& geometry);

}  // namespace pm
