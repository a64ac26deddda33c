#include "pm/policies.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace pm {

int TransferTree::max_ancestor_count() const {
  int m = 0;
  for (const auto& path : ancestors) m = std::max(m, static_cast<int>(path.size()));
  return m;
}

TransferTree TransferTree::from_parents(std::vector<Action> parent, Action root) {
  TransferTree tree;
  const int k = static_cast<int>(parent.size());
  if (root < 0 || root >= k || parent[root] != -1)
    throw InvalidInput("transfer tree: root must have no parent");
  tree.root = root;
  tree.parent = std::move(parent);
  tree.depth.assign(k, -1);
  tree.depth[root] = 0;
  tree.ancestors.assign(k, {});
  tree.descendants.assign(k, {});
  for (Action a = 0; a < k; ++a) {
    std::vector<Action> path{a};
    Action cur = a;
    while (cur != root) {
      cur = tree.parent[cur];
      if (cur < 0 || cur >= k || static_cast<int>(path.size()) > k)
        throw InvalidInput("transfer tree: parents do not form a tree rooted as claimed");
      path.push_back(cur);
    }
    tree.depth[a] = static_cast<int>(path.size()) - 1;
    for (size_t i = 1; i < path.size(); ++i) tree.descendants[path[i]].push_back(a);
    tree.ancestors[a] = std::move(path);
  }
  for (auto& d : tree.descendants) std::sort(d.begin(), d.end());
  return tree;
}

void TransferTree::check_invariants(const GeometryReport* geometry) const {
  const int k = size();
  int roots = 0;
  for (Action a = 0; a < k; ++a) {
    if (parent[a] == -1) {
      ++roots;
      if (a != root) throw Error("transfer tree: parentless non-root action");
    } else if (parent[a] < 0 || parent[a] >= k || parent[a] == a) {
      throw Error("transfer tree: bad parent pointer");
    }
  }
  if (roots != 1) throw Error("transfer tree: exactly one root required");
  for (Action a = 0; a < k; ++a) {
    if (ancestors[a].front() != a || ancestors[a].back() != root)
      throw Error("transfer tree: ancestor path must run from the action to the root");
    if (static_cast<int>(ancestors[a].size()) != depth[a] + 1)
      throw Error("transfer tree: depth inconsistent with the ancestor path");
    if (geometry != nullptr && a != root) {
      const auto& nbh = geometry->neighbourhood[a];
      if (std::find(nbh.begin(), nbh.end(), parent[a]) == nbh.end())
        throw Error("transfer tree: parent is not a neighbour");
    }
  }
}

namespace {

struct TreeInputs {
  std::vector<double> expected_loss;
  const std::vector<std::vector<Action>>* neighbourhood = nullptr;
  const std::vector<ActionPair>* neighbour_pairs = nullptr;
};

// The two-case parent rule over a local index set; ties broken by lowest
// index throughout.
TransferTree tree_from_losses(const TreeInputs& in) {
  const int k = static_cast<int>(in.expected_loss.size());
  const auto& el = in.expected_loss;
  Action greedy = 0;
  for (Action a = 1; a < k; ++a)
    if (el[a] < el[greedy]) greedy = a;

  std::vector<Action> ties;
  for (Action a = 0; a < k; ++a)
    if (el[a] - el[greedy] <= tol::greedy_tie) ties.push_back(a);

  std::vector<std::vector<Action>> tie_adj(k);
  std::vector<ActionPair> tie_edges;
  for (const auto& [a, b] : *in.neighbour_pairs) {
    if (std::binary_search(ties.begin(), ties.end(), a) &&
        std::binary_search(ties.begin(), ties.end(), b)) {
      tie_adj[a].push_back(b);
      tie_adj[b].push_back(a);
      tie_edges.push_back({a, b});
    }
  }

  // Shortest paths to the greedy root inside (V_t, E_t).
  std::vector<int> rho(k, -1);
  rho[greedy] = 0;
  std::deque<Action> queue{greedy};
  while (!queue.empty()) {
    const Action cur = queue.front();
    queue.pop_front();
    std::sort(tie_adj[cur].begin(), tie_adj[cur].end());
    for (Action next : tie_adj[cur]) {
      if (rho[next] < 0) {
        rho[next] = rho[cur] + 1;
        queue.push_back(next);
      }
    }
  }
  for (Action a : ties) {
    if (rho[a] < 0)
      throw DisconnectedVt("greedy tie set is not connected through neighbour edges");
  }

  std::vector<Action> parent(k, -1);
  for (Action a = 0; a < k; ++a) {
    if (a == greedy) continue;
    const bool in_ties = rho[a] >= 0;
    Action best = -1;
    for (Action b : (*in.neighbourhood)[a]) {
      if (in_ties) {
        if (rho[b] < 0) continue;
        if (best < 0 || rho[b] < rho[best]) best = b;
      } else {
        if (best < 0 || el[b] < el[best]) best = b;
      }
    }
    if (best < 0) throw DisconnectedVt("action has no neighbour to attach to");
    if (!in_ties && !(el[best] < el[a]))
      throw Error("internal: non-greedy action lacks a strictly better neighbour");
    parent[a] = best;
  }

  TransferTree tree = TransferTree::from_parents(std::move(parent), greedy);
  tree.greedy_ties = std::move(ties);
  tree.tie_edges = std::move(tie_edges);
  return tree;
}

}  // namespace

TransferTree build_tree(const BeliefState& belief, const GeometryReport& geometry) {
  const Game& game = belief.game();
  if (!geometry.nondegenerate)
    throw InvalidInput("build_tree requires a nondegenerate game; use the chain variant");
  TreeInputs in;
  in.expected_loss.resize(game.k);
  for (Action a = 0; a < game.k; ++a) in.expected_loss[a] = belief.expected_loss(a);
  in.neighbourhood = &geometry.neighbourhood;
  in.neighbour_pairs = &geometry.neighbour_pairs;
  TransferTree tree = tree_from_losses(in);
#ifndef NDEBUG
  tree.check_invariants(&geometry);
#endif
  return tree;
}

std::vector<Action> anomalous_actions(std::span<const double> dist, const TransferTree& tree) {
  std::vector<Action> out;
  for (Action a = 0; a < tree.size(); ++a) {
    const auto& desc = tree.descendants[a];
    if (desc.empty()) continue;
    double peak = -std::numeric_limits<double>::infinity();
    for (Action b : desc) peak = std::max(peak, dist[b]);
    if (dist[a] < peak) out.push_back(a);
  }
  return out;
}

std::vector<double> water_transfer(std::span<const double> dist, const TransferTree& tree) {
  if (static_cast<int>(dist.size()) != tree.size())
    throw InvalidInput("water_transfer: distribution size mismatch");
  std::vector<double> result(dist.begin(), dist.end());
  const auto anomalous = anomalous_actions(dist, tree);
  if (anomalous.empty()) return result;

  Action chosen = anomalous.front();
  for (Action a : anomalous) {
    if (tree.depth[a] > tree.depth[chosen]) chosen = a;  // lowest index wins depth ties
  }

  // Candidate levels are the descendant masses, scanned in strictly
  // decreasing order after deduplication.
  const auto& desc = tree.descendants[chosen];
  std::vector<double> levels;
  for (Action b : desc) levels.push_back(dist[b]);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  for (double alpha : levels) {
    double sum = dist[chosen];
    int count = 1;
    double below = -std::numeric_limits<double>::infinity();
    for (Action b : desc) {
      if (dist[b] >= alpha) {
        sum += dist[b];
        ++count;
      } else {
        below = std::max(below, dist[b]);
      }
    }
    const double average = sum / count;
    if (average > below) {
      result[chosen] = average;
      for (Action b : desc)
        if (dist[b] >= alpha) result[b] = average;
      return result;
    }
  }
  throw Error("internal: water transfer found no feasible level");
}

std::vector<double> mario_distribution(const BeliefState& belief, const GeometryReport& geometry) {
  const TransferTree tree = build_tree(belief, geometry);
  std::vector<double> p = belief.optimal_action_posterior();
  for (int i = 0; i < belief.game().k; ++i) p = water_transfer(p, tree);
  return p;
}

std::vector<double> forced_exploration_distribution(const BeliefState& belief, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidInput("gamma must lie in (0, 1]");
  if (belief.tie_break() != TieBreak::ParetoFirst)
    throw InvalidInput("forced exploration expects the Pareto-first tie-break");
  const int k = belief.game().k;
  std::vector<double> p = belief.optimal_action_posterior();
  for (double& v : p) v = (1.0 - gamma) * v + gamma / k;
  return p;
}

double forced_exploration_gamma(int horizon, int k, double v) {
  if (horizon < 1 || k < 2 || v <= 0.0)
    throw InvalidInput("gamma schedule needs n >= 1, k >= 2 and v > 0");
  const double gamma = std::pow(static_cast<double>(horizon), -1.0 / 3.0) *
                       std::pow(k * v, 2.0 / 3.0) *
                       std::pow(std::log(static_cast<double>(k)) / 2.0, 1.0 / 3.0);
  return std::min(gamma, 1.0);
}

std::vector<Action> default_cover(const GeometryReport& geometry) {
  std::vector<Action> cover;
  for (const auto& cls : geometry.duplicate_classes) {
    for (Action a : cls) {
      if (geometry.pareto[a]) {
        cover.push_back(a);
        break;
      }
    }
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

namespace {

std::vector<std::vector<double>> cover_probe_points(int d) {
  std::vector<std::vector<double>> probes;
  for (int x = 0; x < d; ++x) {
    std::vector<double> u(d, 0.0);
    u[x] = 1.0;
    probes.push_back(std::move(u));
  }
  for (int x = 0; x < d; ++x) {
    for (int y = x + 1; y < d; ++y) {
      std::vector<double> u(d, 0.0);
      u[x] = u[y] = 0.5;
      probes.push_back(std::move(u));
    }
  }
  probes.push_back(std::vector<double>(d, 1.0 / d));
  Rng rng(0x9d2c5680);
  for (int i = 0; i < 256; ++i) {
    std::vector<double> u(d);
    double total = 0.0;
    for (double& v : u) {
      v = -std::log(1.0 - rng.uniform());
      total += v;
    }
    for (double& v : u) v /= total;
    probes.push_back(std::move(u));
  }
  return probes;
}

void check_cover(const Game& game, const GeometryReport& geometry,
                 const std::vector<Action>& cover) {
  if (cover.empty()) throw InvalidInput("empty cover");
  for (size_t i = 0; i < cover.size(); ++i) {
    const Action a = cover[i];
    if (a < 0 || a >= game.k) throw InvalidInput("cover action out of range");
    if (!geometry.pareto[a]) throw InvalidInput("cover must contain only Pareto optimal actions");
    for (size_t j = i + 1; j < cover.size(); ++j)
      if (game.loss[a] == game.loss[cover[j]])
        throw InvalidInput("cover must not contain duplicate actions");
  }
  for (const auto& u : cover_probe_points(game.d)) {
    bool covered = false;
    for (Action c : cover) {
      double worst = 0.0;
      for (Action b = 0; b < game.k && worst <= tol::geometry; ++b) {
        if (b == c) continue;
        double margin = 0.0;
        for (Outcome x = 0; x < game.d; ++x)
          margin += (game.loss[c][x] - game.loss[b][x]) * u[x];
        worst = std::max(worst, margin);
      }
      if (worst <= tol::geometry) {
        covered = true;
        break;
      }
    }
    if (!covered) throw CoverFailure("cover cells do not cover the outcome simplex");
  }
}

// Mixing coefficient with l_e = alpha l_c + (1-alpha) l_p, if one exists in
// (0, 1]; exact duplicates of c map to alpha = 1 and duplicates of p are
// rejected.
std::optional<double> combination_alpha(const Game& game, Action e, Action c, Action p) {
  if (game.loss[e] == game.loss[c]) return 1.0;
  if (game.loss[e] == game.loss[p]) return std::nullopt;
  double num = 0.0;
  double den = 0.0;
  for (Outcome x = 0; x < game.d; ++x) {
    const double dir = game.loss[c][x] - game.loss[p][x];
    num += (game.loss[e][x] - game.loss[p][x]) * dir;
    den += dir * dir;
  }
  if (den <= 0.0) return std::nullopt;
  const double alpha = num / den;
  if (alpha <= 1e-12 || alpha > 1.0 + 1e-12) return std::nullopt;
  for (Outcome x = 0; x < game.d; ++x) {
    const double fit = alpha * game.loss[c][x] + (1.0 - alpha) * game.loss[p][x];
    if (std::fabs(fit - game.loss[e][x]) > tol::estimation) return std::nullopt;
  }
  return std::min(alpha, 1.0);
}

}  // namespace

TransferTree degenerate_parent_chain(const BeliefState& belief, const GeometryReport& geometry,
                                     const std::vector<Action>& cover) {
  const Game& game = belief.game();
  check_cover(game, geometry, cover);

  // Base tree over the cover, treated as a game of its own.
  Game sub;
  sub.k = static_cast<int>(cover.size());
  sub.d = game.d;
  for (Action c : cover) {
    sub.loss.push_back(game.loss[c]);
    sub.signals.push_back(game.signals[c]);
  }
  const GeometryReport subgeo = analyze(sub);
  if (!subgeo.nondegenerate)
    throw Error("internal: a covering set of distinct Pareto actions must be nondegenerate");
  TreeInputs in;
  in.expected_loss.resize(sub.k);
  for (int i = 0; i < sub.k; ++i) in.expected_loss[i] = belief.expected_loss(cover[i]);
  in.neighbourhood = &subgeo.neighbourhood;
  in.neighbour_pairs = &subgeo.neighbour_pairs;
  const TransferTree base = tree_from_losses(in);

  const Action greedy = cover[base.root];
  std::vector<Action> parent(game.k, -2);  // -2 marks "not yet placed"
  std::vector<bool> in_cover(game.k, false);
  for (Action c : cover) in_cover[c] = true;

  // Root chain: the greedy action's duplicates, ascending; the last one
  // becomes the root of the extended tree.
  Action root = greedy;
  {
    std::vector<Action> dups;
    for (Action e = 0; e < game.k; ++e)
      if (e != greedy && game.loss[e] == game.loss[greedy]) dups.push_back(e);
    Action prev = greedy;
    for (Action e : dups) {
      parent[prev] = e;
      prev = e;
    }
    root = prev;
  }

  // Edge chains: child, then its duplicates and the strict combinations
  // ordered by decreasing alpha, ending at the base parent.
  for (int ci = 0; ci < sub.k; ++ci) {
    if (ci == base.root) continue;
    const Action child = cover[ci];
    const Action target = cover[base.parent[ci]];
    std::vector<std::pair<double, Action>> members;
    for (Action e = 0; e < game.k; ++e) {
      if (in_cover[e] || parent[e] != -2) continue;
      if (auto alpha = combination_alpha(game, e, child, target))
        members.push_back({*alpha, e});
    }
    std::sort(members.begin(), members.end(), [](const auto& lhs, const auto& rhs) {
      if (lhs.first != rhs.first) return lhs.first > rhs.first;
      return lhs.second < rhs.second;
    });
    Action prev = child;
    for (const auto& [alpha, e] : members) {
      parent[prev] = e;
      prev = e;
    }
    parent[prev] = target;
  }

  // Anything still unplaced (empty cells off every chain) hangs off the
  // root so the operator is total; such actions never carry posterior mass.
  for (Action e = 0; e < game.k; ++e)
    if (parent[e] == -2 && e != root) parent[e] = root;
  parent[root] = -1;

  TransferTree tree = TransferTree::from_parents(std::move(parent), root);
  for (Action a : base.greedy_ties) tree.greedy_ties.push_back(cover[a]);
  for (const auto& [a, b] : base.tie_edges)
    tree.tie_edges.push_back(make_pair_key(cover[a], cover[b]));
  return tree;
}

std::vector<double> mario_degenerate_distribution(const BeliefState& belief,
                                                  const GeometryReport& geometry,
                                                  const std::vector<Action>& cover) {
  const TransferTree tree = degenerate_parent_chain(belief, geometry, cover);
  std::vector<double> p = belief.optimal_action_posterior();
  for (int i = 0; i < belief.game().k; ++i) p = water_transfer(p, tree);
  return p;
}

Action sample_action(std::span<const double> dist, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  Action last_positive = 0;
  for (size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] <= 0.0) continue;
    last_positive = static_cast<Action>(a);
    cum += dist[a];
    if (u < cum) return last_positive;
  }
  return last_positive;
}

PolicyKind PolicyKind::parse(const std::string& text) {
  if (text == "thompson") return thompson();
  if (text == "mario") return mario();
  if (text == "mario-degenerate") return mario_degenerate();
  if (text.rfind("forced:", 0) == 0) {
    const std::string arg = text.substr(7);
    if (arg == "auto") return forced_auto();
    try {
      return forced(std::stod(arg));
    } catch (const std::exception&) {
      throw InvalidInput("bad forced exploration rate: " + arg);
    }
  }
  throw InvalidInput("unknown policy: " + text);
}

std::string PolicyKind::describe() const {
  switch (type) {
    case Type::Thompson: return "thompson";
    case Type::Mario: return "mario";
    case Type::MarioDegenerate: return "mario-degenerate";
    case Type::ForcedExploration:
      return gamma_auto ? "forced:auto" : "forced:" + std::to_string(gamma);
    case Type::FixedDistribution: return "fixed";
  }
  return "?";
}

TieBreak PolicyKind::tie_break() const {
  switch (type) {
    case Type::MarioDegenerate: return TieBreak::Uniform;
    case Type::ForcedExploration: return TieBreak::ParetoFirst;
    default: return TieBreak::LowestIndex;
  }
}

std::vector<double> policy_distribution(const PolicyKind& policy, const BeliefState& belief,
                                        const GeometryReport& geometry) {
  switch (policy.type) {
    case PolicyKind::Type::Thompson:
      return belief.optimal_action_posterior();
    case PolicyKind::Type::Mario:
      return mario_distribution(belief, geometry);
    case PolicyKind::Type::MarioDegenerate: {
      const auto cover = policy.cover.empty() ? default_cover(geometry) : policy.cover;
      return mario_degenerate_distribution(belief, geometry, cover);
    }
    case PolicyKind::Type::ForcedExploration:
      if (policy.gamma_auto)
        throw InvalidInput("forced:auto must be resolved to a rate before sampling");
      return forced_exploration_distribution(belief, policy.gamma);
    case PolicyKind::Type::FixedDistribution: {
      if (static_cast<int>(policy.fixed.size()) != belief.game().k)
        throw InvalidInput("fixed distribution has wrong length");
      return policy.fixed;
    }
  }
  throw InvalidInput("unknown policy type");
}

}  // namespace pm
