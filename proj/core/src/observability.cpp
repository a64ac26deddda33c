#include "pm/observability.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "pm/lp.hpp"

namespace pm {

double EstimationFunction::value(Action c, Symbol sigma) const {
  auto it = values.find({c, sigma});
  return it == values.end() ? 0.0 : it->second;
}

double EstimationFunction::evaluate(const Game& game, Outcome x) const {
  double sum = 0.0;
  for (Action c = 0; c < game.k; ++c) sum += value(c, game.signal(c, x));
  return sum;
}

double EstimationFunction::identity_residual(const Game& game) const {
  double worst = 0.0;
  for (Outcome x = 0; x < game.d; ++x) {
    const double target = game.loss[pair.first][x] - game.loss[pair.second][x];
    worst = std::max(worst, std::fabs(evaluate(game, x) - target));
  }
  return worst;
}

EstimationFunction EstimationFunction::negated() const {
  EstimationFunction out = *this;
  std::swap(out.pair.first, out.pair.second);
  for (auto& [key, v] : out.values) v = -v;
  return out;
}

SignalMatrixStack SignalMatrixStack::build(const Game& game, const std::vector<Action>& actions) {
  SignalMatrixStack s;
  for (Action c : actions) {
    for (Symbol sigma : game.alphabet(c)) {
      std::vector<double> row(game.d, 0.0);
      for (Outcome x = 0; x < game.d; ++x)
        if (game.signal(c, x) == sigma) row[x] = 1.0;
      s.row_index.push_back({c, sigma});
      s.rows.push_back(std::move(row));
    }
  }
  return s;
}

bool SignalMatrixStack::columns_sum_to_one(const Game& game, const std::vector<Action>& actions) const {
  for (Action c : actions) {
    for (Outcome x = 0; x < game.d; ++x) {
      double sum = 0.0;
      for (size_t r = 0; r < row_index.size(); ++r)
        if (row_index[r].first == c) sum += rows[r][x];
      if (sum != 1.0) return false;
    }
  }
  return true;
}

namespace {

std::vector<Action> estimator_support(const Game& game, const GeometryReport& geometry, Action a,
                                      Action b, bool local) {
  if (!local) {
    std::vector<Action> all(game.k);
    for (Action c = 0; c < game.k; ++c) all[c] = c;
    return all;
  }
  auto it = geometry.n_ab.find(make_pair_key(a, b));
  if (it == geometry.n_ab.end())
    throw InvalidInput("local estimator requested for a pair without a computed N_ab");
  return it->second;
}

EstimationFunction pack_estimator(const Game& game, const SignalMatrixStack& stack, Action a,
                                  Action b, const std::vector<double>& w) {
  EstimationFunction f;
  f.pair = {a, b};
  double sup = 0.0;
  for (size_t r = 0; r < stack.row_index.size(); ++r) {
    const double v = w[r];
    sup = std::max(sup, std::fabs(v));
    if (v != 0.0) f.values[stack.row_index[r]] = v;
  }
  f.sup_norm = sup;
  for (Action c = 0; c < game.k; ++c) {
    for (Symbol sigma : game.alphabet(c)) {
      if (std::fabs(f.value(c, sigma)) > 0.0) {
        f.support.push_back(c);
        break;
      }
    }
  }
  return f;
}

EstimationFunction zero_estimator(Action a, Action b) {
  EstimationFunction f;
  f.pair = {a, b};
  f.sup_norm = 0.0;
  return f;
}

}  // namespace

std::optional<EstimationFunction> try_min_supnorm_estimator(const Game& game,
                                                            const GeometryReport& geometry,
                                                            Action a, Action b, bool local) {
  if (game.loss[a] == game.loss[b]) return zero_estimator(a, b);

  const auto support = estimator_support(game, geometry, a, b, local);
  const auto stack = SignalMatrixStack::build(game, support);
  const int m = static_cast<int>(stack.row_index.size());

  // Variables: w split into positive/negative parts, then t; minimise t
  // subject to |S^T w - (l_a - l_b)| <= lp_feasibility and |w_i| <= t.
  lp::Problem p;
  p.num_vars = 2 * m + 1;
  p.objective.assign(p.num_vars, 0.0);
  p.objective[2 * m] = 1.0;
  for (Outcome x = 0; x < game.d; ++x) {
    std::vector<double> row(p.num_vars, 0.0);
    for (int r = 0; r < m; ++r) {
      row[r] = stack.rows[r][x];
      row[m + r] = -stack.rows[r][x];
    }
    const double target = game.loss[a][x] - game.loss[b][x];
    p.add_row(row, lp::Relation::LessEq, target + tol::lp_feasibility);
    for (double& v : row) v = -v;
    p.add_row(std::move(row), lp::Relation::LessEq, -(target - tol::lp_feasibility));
  }
  for (int r = 0; r < m; ++r) {
    std::vector<double> row(p.num_vars, 0.0);
    row[r] = 1.0;
    row[m + r] = -1.0;
    row[2 * m] = -1.0;
    p.add_row(row, lp::Relation::LessEq, 0.0);
    for (double& v : row) v = -v;
    p.add_row(std::move(row), lp::Relation::LessEq, 0.0);
  }
  lp::Solution s = lp::solve(p);
  if (!s.optimal()) return std::nullopt;
  std::vector<double> w(m);
  for (int r = 0; r < m; ++r) w[r] = s.x[r] - s.x[m + r];
  return pack_estimator(game, stack, a, b, w);
}

EstimationFunction min_supnorm_estimator(const Game& game, const GeometryReport& geometry,
                                         Action a, Action b, bool local) {
  auto f = try_min_supnorm_estimator(game, geometry, a, b, local);
  if (!f) throw NotObservable("pair admits no estimation function under the requested support");
  return *f;
}

EstimationFunction pseudoinverse_estimator(const Game& game, const GeometryReport& geometry,
                                           Action a, Action b, bool local) {
  if (game.loss[a] == game.loss[b]) return zero_estimator(a, b);
  const auto support = estimator_support(game, geometry, a, b, local);
  const auto stack = SignalMatrixStack::build(game, support);
  const int m = static_cast<int>(stack.row_index.size());

  // Minimum-norm w with S^T w = l_a - l_b, through the SVD of S^T.
  Eigen::MatrixXd st(game.d, m);
  for (int r = 0; r < m; ++r)
    for (Outcome x = 0; x < game.d; ++x) st(x, r) = stack.rows[r][x];
  Eigen::VectorXd diff(game.d);
  for (Outcome x = 0; x < game.d; ++x) diff(x) = game.loss[a][x] - game.loss[b][x];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(st, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sing = svd.singularValues();
  Eigen::VectorXd inv_sing = sing;
  for (int i = 0; i < sing.size(); ++i)
    inv_sing(i) = sing(i) > tol::svd_cutoff ? 1.0 / sing(i) : 0.0;
  Eigen::VectorXd w = svd.matrixV() * inv_sing.asDiagonal() * svd.matrixU().transpose() * diff;

  const double residual = (st * w - diff).lpNorm<Eigen::Infinity>();
  if (residual > tol::estimation)
    throw ResidualTooLarge("pseudo-inverse estimator misses the loss-difference identity");
  std::vector<double> wv(w.data(), w.data() + m);
  return pack_estimator(game, stack, a, b, wv);
}

ObservabilityNorms game_v(const Game& game, const GeometryReport& geometry, bool local) {
  ObservabilityNorms out;
  out.v_bound = std::sqrt(static_cast<double>(game.d)) *
                std::pow(1.0 + game.k, static_cast<double>(game.d) / 2.0);
  for (const auto& pair : geometry.neighbour_pairs) {
    auto f = try_min_supnorm_estimator(game, geometry, pair.first, pair.second, local);
    if (!f) throw NotObservable("game is not observable under the requested support restriction");
    out.pair_norms[pair] = f->sup_norm;
    out.v = std::max(out.v, f->sup_norm);
  }
  if (local && geometry.nondegenerate && out.v > game.d + 1 + tol::estimation) {
    throw Error("internal: minimal local estimator norm exceeds d+1 on a nondegenerate game");
  }
  return out;
}

}  // namespace pm
