#pragma once

#include <map>
#include <string>
#include <vector>

#include "pm/types.hpp"

namespace pm {

// A finite partial monitoring game: k actions, d outcomes, losses in [0,1]
// and a per-(action, outcome) feedback symbol. Immutable once validated.
struct Game {
  int k = 0;
  int d = 0;
  std::vector<std::vector<double>> loss;    // k x d
  std::vector<std::vector<Symbol>> signals;  // k x d, small nonnegative ids
  std::map<Symbol, std::string> symbol_names;

  const std::vector<double>& loss_row(Action a) const { return loss[a]; }
  Symbol signal(Action a, Outcome x) const { return signals[a][x]; }

  // Distinct symbols emitted by action a, ascending.
  std::vector<Symbol> alphabet(Action a) const;

  // True when every action's signal determines that action's own loss.
  bool self_revealing_feedback() const;
  // True when playing any action determines the losses of all *other*
  // actions.
  bool others_revealing_feedback() const;

  void validate() const;  // throws InvalidInput
};

Game game_from_json(const std::string& text);
std::string game_to_json(const Game& game);
Game load_game(const std::string& path);

}  // namespace pm
