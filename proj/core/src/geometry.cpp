#include "pm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pm/lp.hpp"
#include "pm/observability.hpp"

namespace pm {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "Trivial";
    case Classification::LocallyObservable: return "LocallyObservable";
    case Classification::GloballyObservable: return "GloballyObservable";
    case Classification::Hopeless: return "Hopeless";
  }
  return "?";
}

bool GeometryReport::is_neighbour_pair(Action a, Action b) const {
  const auto key = make_pair_key(a, b);
  return std::find(neighbour_pairs.begin(), neighbour_pairs.end(), key) != neighbour_pairs.end();
}

namespace detail {

CellConstraints CellConstraints::for_cell(const Game& game, Action a) {
  CellConstraints c;
  c.d = game.d;
  for (Action b = 0; b < game.k; ++b) {
    if (b == a) continue;
    std::vector<double> row(game.d);
    for (Outcome x = 0; x < game.d; ++x) row[x] = game.loss[a][x] - game.loss[b][x];
    c.ineq_lhs.push_back(std::move(row));
  }
  return c;
}

std::optional<CellConstraints::Opt> CellConstraints::maximize(const std::vector<double>& w) const {
  lp::Problem p;
  p.num_vars = d;
  p.objective = w;
  p.add_row(std::vector<double>(d, 1.0), lp::Relation::Eq, 1.0);
  for (const auto& row : ineq_lhs) p.add_row(row, lp::Relation::LessEq, 0.0);
  for (const auto& row : eq_lhs) p.add_row(row, lp::Relation::Eq, 0.0);
  lp::Solution s = lp::solve_max(std::move(p));
  if (!s.optimal()) return std::nullopt;
  return Opt{s.value, std::move(s.x)};
}

int CellConstraints::affine_dimension() const {
  auto first = maximize(std::vector<double>(d, 0.0));
  if (!first) return -1;
  std::vector<std::vector<double>> basis;  // orthonormal hull directions
  const std::vector<double> origin = first->point;

  auto project_out = [&](std::vector<double> v) {
    for (const auto& b : basis) {
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += v[i] * b[i];
      for (int i = 0; i < d; ++i) v[i] -= dot * b[i];
    }
    return v;
  };
  auto norm = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  // Scan coordinate directions in index order (deterministic); restart the
  // scan whenever the hull grows.
  bool grew = true;
  while (grew && static_cast<int>(basis.size()) < d - 1) {
    grew = false;
    for (int i = 0; i < d && !grew; ++i) {
      std::vector<double> w(d, 0.0);
      w[i] = 1.0;
      w = project_out(std::move(w));
      if (norm(w) <= 1e-12) continue;
      for (int sign = 0; sign < 2 && !grew; ++sign) {
        std::vector<double> obj = w;
        if (sign == 1)
          for (double& v : obj) v = -v;
        auto opt = maximize(obj);
        if (!opt) continue;
        double base = 0.0;
        for (int j = 0; j < d; ++j) base += obj[j] * origin[j];
        if (opt->value - base <= tol::geometry) continue;
        std::vector<double> dir(d);
        for (int j = 0; j < d; ++j) dir[j] = opt->point[j] - origin[j];
        dir = project_out(std::move(dir));
        const double len = norm(dir);
        if (len <= 1e-12) continue;
        for (double& v : dir) v /= len;
        basis.push_back(std::move(dir));
        grew = true;
      }
    }
  }
  return static_cast<int>(basis.size());
}

}  // namespace detail

int cell_dimension(const Game& game, Action a) {
  if (a < 0 || a >= game.k) throw InvalidInput("action index out of range");
  return detail::CellConstraints::for_cell(game, a).affine_dimension();
}

std::vector<std::vector<Action>> find_duplicates(const Game& game) {
  std::vector<std::vector<Action>> classes;
  std::vector<bool> assigned(game.k, false);
  for (Action a = 0; a < game.k; ++a) {
    if (assigned[a]) continue;
    std::vector<Action> cls{a};
    assigned[a] = true;
    for (Action b = a + 1; b < game.k; ++b) {
      if (!assigned[b] && game.loss[a] == game.loss[b]) {
        cls.push_back(b);
        assigned[b] = true;
      }
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

namespace {

int intersection_dimension(const Game& game, Action a, Action b) {
  auto cell = detail::CellConstraints::for_cell(game, a);
  std::vector<double> diff(game.d);
  for (Outcome x = 0; x < game.d; ++x) diff[x] = game.loss[a][x] - game.loss[b][x];
  cell.add_equality(std::move(diff));
  return cell.affine_dimension();
}

bool cell_contained_in(const Game& game, Action c, Action target) {
  // max over C_c of <l_target - l_e, u> must stay <= 0 for every e.
  const auto cell = detail::CellConstraints::for_cell(game, c);
  for (Action e = 0; e < game.k; ++e) {
    if (e == target) continue;
    std::vector<double> w(game.d);
    for (Outcome x = 0; x < game.d; ++x) w[x] = game.loss[target][x] - game.loss[e][x];
    auto opt = cell.maximize(w);
    if (!opt) return false;  // empty cell: handled by the caller
    if (opt->value > tol::geometry) return false;
  }
  return true;
}

}  // namespace

bool neighbours(const Game& game, Action a, Action b) {
  if (a == b) throw InvalidInput("neighbours: need two distinct actions");
  if (game.loss[a] == game.loss[b]) throw InvalidInput("neighbours: duplicate actions");
  if (cell_dimension(game, a) != game.d - 1 || cell_dimension(game, b) != game.d - 1)
    throw InvalidInput("neighbours: both actions must be Pareto optimal");
  return intersection_dimension(game, a, b) == game.d - 2;
}

std::vector<Action> neighbourhood_set(const Game& game, Action a, Action b) {
  if (!neighbours(game, a, b)) throw InvalidInput("neighbourhood_set: not a neighbour pair");
  std::vector<Action> out;
  for (Action c = 0; c < game.k; ++c) {
    const bool dup_of_a = game.loss[c] == game.loss[a];
    const bool dup_of_b = game.loss[c] == game.loss[b];
    if (dup_of_a || dup_of_b) {
      out.push_back(c);
      continue;
    }
    if (cell_dimension(game, c) < 0) continue;  // empty cells excluded
    if (cell_contained_in(game, c, a) && cell_contained_in(game, c, b)) out.push_back(c);
  }
  return out;
}

GeometryReport analyze(const Game& game) {
  game.validate();
  GeometryReport r;
  const int k = game.k;
  const int d = game.d;
  r.cell_dim.resize(k);
  r.pareto.resize(k);
  r.degenerate.resize(k);
  for (Action a = 0; a < k; ++a) {
    r.cell_dim[a] = cell_dimension(game, a);
    r.pareto[a] = r.cell_dim[a] == d - 1;
    r.degenerate[a] = !r.pareto[a];
  }
  r.duplicate_classes = find_duplicates(game);
  bool has_duplicates = false;
  for (const auto& cls : r.duplicate_classes) has_duplicates |= cls.size() > 1;
  bool has_degenerate = false;
  for (Action a = 0; a < k; ++a) has_degenerate |= r.degenerate[a];
  r.nondegenerate = !has_duplicates && !has_degenerate;

  // Pairwise intersection dimensions give both the neighbour pairs and the
  // per-action neighbourhoods N_a.
  r.neighbourhood.assign(k, {});
  for (Action a = 0; a < k; ++a) {
    for (Action b = a + 1; b < k; ++b) {
      if (r.cell_dim[a] < 0 || r.cell_dim[b] < 0) continue;
      int dim;
      if (game.loss[a] == game.loss[b]) {
        dim = r.cell_dim[a];  // identical cells
      } else {
        dim = intersection_dimension(game, a, b);
      }
      if (dim >= d - 2) {
        r.neighbourhood[a].push_back(b);
        r.neighbourhood[b].push_back(a);
      }
      if (dim == d - 2 && r.pareto[a] && r.pareto[b] && game.loss[a] != game.loss[b]) {
        r.neighbour_pairs.push_back({a, b});
      }
    }
  }
  for (const auto& pair : r.neighbour_pairs) {
    r.n_ab[pair] = neighbourhood_set(game, pair.first, pair.second);
  }

  if (r.neighbour_pairs.empty()) {
    r.classification = Classification::Trivial;
    return r;
  }
  bool all_local = true;
  for (const auto& pair : r.neighbour_pairs) {
    if (!try_min_supnorm_estimator(game, r, pair.first, pair.second, /*local=*/true)) {
      all_local = false;
      break;
    }
  }
  if (all_local) {
    r.classification = Classification::LocallyObservable;
    return r;
  }
  bool all_global = true;
  for (const auto& pair : r.neighbour_pairs) {
    if (!try_min_supnorm_estimator(game, r, pair.first, pair.second, /*local=*/false)) {
      all_global = false;
      break;
    }
  }
  r.classification = all_global ? Classification::GloballyObservable : Classification::Hopeless;
  return r;
}

}  // namespace pm
