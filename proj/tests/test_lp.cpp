#include "pm/lp.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"
#include "pm/rng.hpp"

using namespace pm;

TEST_CASE("simple bounded maximisation") {
  // max x + y st x + 2y <= 4, 3x + y <= 6
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {1.0, 1.0};
  p.add_row({1.0, 2.0}, lp::Relation::LessEq, 4.0);
  p.add_row({3.0, 1.0}, lp::Relation::LessEq, 6.0);
  const auto s = lp::solve_max(p);
  REQUIRE(s.optimal());
  CHECK(s.value == doctest::Approx(2.8));  // vertex (1.6, 1.2)
  CHECK(s.x[0] == doctest::Approx(1.6));
  CHECK(s.x[1] == doctest::Approx(1.2));
}

TEST_CASE("equality constraints over the simplex") {
  // min x0 over the 3-simplex with x0 = x1
  lp::Problem p;
  p.num_vars = 3;
  p.objective = {1.0, 0.0, 0.0};
  p.add_row({1.0, 1.0, 1.0}, lp::Relation::Eq, 1.0);
  p.add_row({1.0, -1.0, 0.0}, lp::Relation::Eq, 0.0);
  const auto s = lp::solve(p);
  REQUIRE(s.optimal());
  CHECK(s.value == doctest::Approx(0.0));
  CHECK(s.x[2] == doctest::Approx(1.0));
}

TEST_CASE("infeasible system detected") {
  lp::Problem p;
  p.num_vars = 1;
  p.objective = {1.0};
  p.add_row({1.0}, lp::Relation::GreaterEq, 2.0);
  p.add_row({1.0}, lp::Relation::LessEq, 1.0);
  CHECK(lp::solve(p).status == lp::Status::Infeasible);
}

TEST_CASE("unbounded direction detected") {
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {1.0, 0.0};
  p.add_row({-1.0, 1.0}, lp::Relation::LessEq, 1.0);
  CHECK(lp::solve_max(p).status == lp::Status::Unbounded);
}

TEST_CASE("degenerate rhs and duplicate rows") {
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {1.0, 2.0};
  p.add_row({1.0, 1.0}, lp::Relation::LessEq, 0.0);
  p.add_row({1.0, 1.0}, lp::Relation::LessEq, 0.0);
  p.add_row({1.0, 0.0}, lp::Relation::GreaterEq, 0.0);
  const auto s = lp::solve_max(p);
  REQUIRE(s.optimal());
  CHECK(s.value == doctest::Approx(0.0));
}

namespace {

// Oracle for 2-variable problems: enumerate candidate vertices from all
// constraint pairs (plus the axes) and take the best feasible one.
double brute_force_max_2d(const lp::Problem& p) {
  std::vector<std::vector<double>> lines;  // a x + b y = c rows
  for (const auto& row : p.rows) lines.push_back({row.coeffs[0], row.coeffs[1], row.rhs});
  lines.push_back({1.0, 0.0, 0.0});
  lines.push_back({0.0, 1.0, 0.0});
  const double inf = std::numeric_limits<double>::infinity();
  double best = -inf;
  auto feasible = [&](double x, double y) {
    if (x < -1e-9 || y < -1e-9) return false;
    for (const auto& row : p.rows) {
      const double lhs = row.coeffs[0] * x + row.coeffs[1] * y;
      if (row.rel == lp::Relation::LessEq && lhs > row.rhs + 1e-9) return false;
      if (row.rel == lp::Relation::GreaterEq && lhs < row.rhs - 1e-9) return false;
      if (row.rel == lp::Relation::Eq && std::fabs(lhs - row.rhs) > 1e-9) return false;
    }
    return true;
  };
  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i][0] * lines[j][1] - lines[i][1] * lines[j][0];
      if (std::fabs(det) < 1e-12) continue;
      const double x = (lines[i][2] * lines[j][1] - lines[i][1] * lines[j][2]) / det;
      const double y = (lines[i][0] * lines[j][2] - lines[i][2] * lines[j][0]) / det;
      if (feasible(x, y)) best = std::max(best, p.objective[0] * x + p.objective[1] * y);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("random 2-variable problems match vertex enumeration") {
  Rng rng(42);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    lp::Problem p;
    p.num_vars = 2;
    p.objective = {rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
    const int rows = 2 + rng.uniform_int(4);
    bool bounded_box = false;
    for (int r = 0; r < rows; ++r) {
      const double a = rng.uniform() * 2 - 1;
      const double b = rng.uniform() * 2 - 1;
      const double c = rng.uniform() * 2 - 0.5;
      if (a > 0 && b > 0 && c > 0) bounded_box = true;
      p.add_row({a, b}, lp::Relation::LessEq, c);
    }
    // Force boundedness so the oracle applies.
    if (!bounded_box) p.add_row({1.0, 1.0}, lp::Relation::LessEq, 3.0);
    const double oracle = brute_force_max_2d(p);
    const auto s = lp::solve_max(p);
    if (oracle == -std::numeric_limits<double>::infinity()) {
      CHECK(s.status == lp::Status::Infeasible);
    } else {
      REQUIRE(s.optimal());
      CHECK(s.value == doctest::Approx(oracle).epsilon(1e-7));
      ++solved;
    }
  }
  CHECK(solved > 100);
}
