#pragma once

#include <vector>

namespace pm::lp {

enum class Relation { LessEq, Eq, GreaterEq };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

// min objective . x  subject to  rows,  x >= 0.
// Callers model free variables by splitting them into positive and negative
// parts. Problems here are desk scale (tens of variables/rows), so the solver
// is a dense two-phase simplex with Bland's rule; deterministic by
// construction.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> rows;

  void add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    rows.push_back(Constraint{std::move(coeffs), rel, rhs});
  }
};

struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  bool optimal() const { return status == Status::Optimal; }
};

Solution solve(const Problem& problem);

// Convenience: max objective . x, reported with the sign of the maximum.
Solution solve_max(Problem problem);

}  // namespace pm::lp
