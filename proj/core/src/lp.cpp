#include "pm/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace pm::lp {
namespace {

constexpr double kCostTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-8;

struct Tableau {
  // rows: one per constraint; columns: structural + slack/surplus +
  // artificial, plus the rhs in the last position.
  std::vector<std::vector<double>> rows;
  std::vector<double> cost;  // reduced-cost row, same width as rows
  std::vector<int> basis;    // basic column per row
  std::vector<bool> allowed;
  int ncols = 0;

  double& rhs(int i) { return rows[i][ncols]; }

  void pivot(int r, int c) {
    const double p = rows[r][c];
    for (int j = 0; j <= ncols; ++j) rows[r][j] /= p;
    rows[r][c] = 1.0;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      const double f = rows[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= ncols; ++j) rows[i][j] -= f * rows[r][j];
      rows[i][c] = 0.0;
    }
    const double f = cost[c];
    if (f != 0.0) {
      for (int j = 0; j <= ncols; ++j) cost[j] -= f * rows[r][j];
      cost[c] = 0.0;
    }
    basis[r] = c;
  }

  // Bland's rule: lowest-index entering column, lowest basic index on ratio
  // ties. Returns false when the problem is unbounded in this phase.
  bool iterate() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (allowed[j] && cost[j] < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (size_t i = 0; i < rows.size(); ++i) {
        const double a = rows[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = rhs(static_cast<int>(i)) / a;
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && basis[i] < basis[leave])) {
          leave = static_cast<int>(i);
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

Solution solve(const Problem& problem) {
  const int n = problem.num_vars;
  const int m = static_cast<int>(problem.rows.size());
  assert(static_cast<int>(problem.objective.size()) == n);

  int num_slack = 0;
  for (const auto& row : problem.rows)
    if (row.rel != Relation::Eq) ++num_slack;

  // Normalise every row to nonnegative rhs, then attach slack (basic when
  // possible) or an artificial variable.
  Tableau t;
  t.ncols = n + num_slack;  // artificials appended below
  std::vector<int> artificial_rows;
  int slack_at = n;
  for (int i = 0; i < m; ++i) {
    const auto& row = problem.rows[i];
    assert(static_cast<int>(row.coeffs.size()) == n);
    std::vector<double> r(row.coeffs.begin(), row.coeffs.end());
    Relation rel = row.rel;
    double rhs = row.rhs;
    if (rhs < 0.0) {
      for (double& v : r) v = -v;
      rhs = -rhs;
      if (rel == Relation::LessEq)
        rel = Relation::GreaterEq;
      else if (rel == Relation::GreaterEq)
        rel = Relation::LessEq;
    }
    r.resize(t.ncols + 1, 0.0);
    r[t.ncols] = rhs;
    int basic = -1;
    if (rel == Relation::LessEq) {
      r[slack_at] = 1.0;
      basic = slack_at++;
    } else if (rel == Relation::GreaterEq) {
      r[slack_at] = -1.0;
      ++slack_at;
    }
    t.rows.push_back(std::move(r));
    t.basis.push_back(basic);
    if (basic < 0) artificial_rows.push_back(i);
  }

  const int num_artificial = static_cast<int>(artificial_rows.size());
  const int total = t.ncols + num_artificial;
  for (auto& r : t.rows) {
    r.insert(r.end() - 1, num_artificial, 0.0);
  }
  for (int a = 0; a < num_artificial; ++a) {
    const int i = artificial_rows[a];
    t.rows[i][t.ncols + a] = 1.0;
    t.basis[i] = t.ncols + a;
  }
  const int structural_cols = t.ncols;
  t.ncols = total;
  t.allowed.assign(total, true);

  if (num_artificial > 0) {
    // Phase 1: minimise the sum of artificials.
    t.cost.assign(total + 1, 0.0);
    for (int i : artificial_rows) {
      for (int j = 0; j <= total; ++j) t.cost[j] -= t.rows[i][j];
    }
    for (int a = 0; a < num_artificial; ++a) t.cost[structural_cols + a] = 0.0;
    if (!t.iterate()) return {Status::Infeasible, 0.0, {}};
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= structural_cols) infeas += t.rhs(i);
    if (infeas > kFeasTol) return {Status::Infeasible, 0.0, {}};
    // Drive leftover artificials out of the basis; rows with no eligible
    // pivot are redundant and dropped.
    for (int i = m - 1; i >= 0; --i) {
      if (t.basis[i] < structural_cols) continue;
      int col = -1;
      for (int j = 0; j < structural_cols; ++j) {
        if (std::fabs(t.rows[i][j]) > 1e-7) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        t.pivot(i, col);
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
    for (int a = 0; a < num_artificial; ++a) t.allowed[structural_cols + a] = false;
  } else {
    t.allowed.assign(total, true);
  }

  // Phase 2.
  t.cost.assign(total + 1, 0.0);
  for (int j = 0; j < n; ++j) t.cost[j] = problem.objective[j];
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const int b = t.basis[i];
    const double cb = (b < n) ? problem.objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= total; ++j) t.cost[j] -= cb * t.rows[i][j];
    t.cost[b] = 0.0;
  }
  if (!t.iterate()) return {Status::Unbounded, 0.0, {}};

  Solution sol;
  sol.status = Status::Optimal;
  sol.x.assign(n, 0.0);
  for (size_t i = 0; i < t.rows.size(); ++i) {
    if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs(static_cast<int>(i));
  }
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += problem.objective[j] * sol.x[j];
  return sol;
}

Solution solve_max(Problem problem) {
  for (double& c : problem.objective) c = -c;
  Solution s = solve(problem);
  s.value = -s.value;
  return s;
}

}  // namespace pm::lp
