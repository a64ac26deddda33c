#include "pm/game.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pm {

std::vector<Symbol> Game::alphabet(Action a) const {
  std::set<Symbol> seen(signals[a].begin(), signals[a].end());
  return {seen.begin(), seen.end()};
}

bool Game::self_revealing_feedback() const {
  for (Action a = 0; a < k; ++a) {
    for (Outcome x = 0; x < d; ++x) {
      for (Outcome y = x + 1; y < d; ++y) {
        if (signals[a][x] == signals[a][y] && loss[a][x] != loss[a][y]) return false;
      }
    }
  }
  return true;
}

bool Game::others_revealing_feedback() const {
  for (Action b = 0; b < k; ++b) {
    for (Action a = 0; a < k; ++a) {
      if (a == b) continue;
      for (Outcome x = 0; x < d; ++x) {
        for (Outcome y = x + 1; y < d; ++y) {
          if (signals[b][x] == signals[b][y] && loss[a][x] != loss[a][y]) return false;
        }
      }
    }
  }
  return true;
}

void Game::validate() const {
  if (k < 1 || d < 1) throw InvalidInput("game requires k >= 1 and d >= 1");
  if (static_cast<int>(loss.size()) != k || static_cast<int>(signals.size()) != k)
    throw InvalidInput("loss/signal matrices must have k rows");
  for (Action a = 0; a < k; ++a) {
    if (static_cast<int>(loss[a].size()) != d || static_cast<int>(signals[a].size()) != d)
      throw InvalidInput("loss/signal matrices must have d columns");
    for (Outcome x = 0; x < d; ++x) {
      const double l = loss[a][x];
      if (!(l >= 0.0 && l <= 1.0)) throw InvalidInput("loss entries must lie in [0,1]");
      if (signals[a][x] < 0) throw InvalidInput("signal ids must be nonnegative");
    }
  }
}

Game game_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad game JSON: ") + e.what());
  }
  Game g;
  try {
    g.k = j.at("k").get<int>();
    g.d = j.at("d").get<int>();
    g.loss = j.at("loss").get<std::vector<std::vector<double>>>();
    g.signals = j.at("signals").get<std::vector<std::vector<int>>>();
    if (j.contains("symbol_names")) {
      for (auto& [key, value] : j.at("symbol_names").items()) {
        g.symbol_names[std::stoi(key)] = value.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad game JSON: ") + e.what());
  }
  g.validate();
  return g;
}

std::string game_to_json(const Game& game) {
  nlohmann::ordered_json j;
  j["k"] = game.k;
  j["d"] = game.d;
  j["loss"] = game.loss;
  j["signals"] = game.signals;
  if (!game.symbol_names.empty()) {
    nlohmann::ordered_json names;
    for (const auto& [id, name] : game.symbol_names) names[std::to_string(id)] = name;
    j["symbol_names"] = names;
  }
  return j.dump(2);
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return game_from_json(buf.str());
}

}  // namespace pm
