#pragma once

#include <string>
#include <vector>

#include "pm/game.hpp"

namespace pm::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs every acceptance criterion with its pinned tolerances and thresholds.
// Deterministic: all seeds are fixed inside.
std::vector<CriterionResult> run_all();

bool all_pass(const std::vector<CriterionResult>& results);
std::string to_json(const std::vector<CriterionResult>& results);
// One "PASS criterion-N name: detail" line per criterion.
std::string format_line(const CriterionResult& result);

namespace oracle {
// Closed-form d=2 cell dimension: cells are intervals in the probability of
// outcome 0, so the dimension falls out of interval arithmetic. Independent
// of the LP route.
int interval_cell_dimension(const Game& game, Action a);
}  // namespace oracle

}  // namespace pm::acceptance
