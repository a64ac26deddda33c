#include "pm/fixtures.hpp"

#include <cmath>

namespace pm {
namespace fixtures {

Game spam_game(double cost) {
  if (!(cost >= 0.0 && cost <= 1.0)) throw InvalidInput("spam cost must lie in [0,1]");
  Game g;
  g.k = 3;
  g.d = 2;
  g.loss = {{1.0, 0.0}, {0.0, 1.0}, {cost, cost}};
  g.signals = {{0, 0}, {0, 0}, {1, 2}};
  g.symbol_names = {{0, "\xE2\x8A\xA5"}, {1, "notspam"}, {2, "spam"}};
  return g;
}

Prior spam_prior(int horizon) {
  return Prior::mixture_of_diracs({{0.5, std::vector<Outcome>(horizon, 1)},
                                   {0.5, std::vector<Outcome>(horizon, 0)}});
}

Game ski_game() {
  Game g;
  g.k = 4;
  g.d = 3;
  g.loss = {{0.75, 0.0, 1.0}, {0.0, 0.75, 1.0}, {0.5, 0.5, 0.25}, {1.0, 1.0, 0.0}};
  g.signals = {{1, 2, 3}, {1, 2, 3}, {0, 0, 0}, {1, 2, 3}};
  g.symbol_names = {{0, "\xE2\x8A\xA5"}, {1, "sun"}, {2, "snow"}, {3, "rain"}};
  return g;
}

Game chain_game(int k) {
  if (k < 2) throw InvalidInput("chain game needs k >= 2");
  Game g;
  g.k = k;
  g.d = 2;
  for (int a = 0; a < k; ++a) {
    const double s = static_cast<double>(a) / (k - 1);
    g.loss.push_back({s * s, (1.0 - s) * (1.0 - s)});
    g.signals.push_back({1, 2});
  }
  return g;
}

Prior chain_prior(const Game& game, int target, int horizon) {
  const int k = game.k;
  if (target < 0 || target >= k) throw InvalidInput("chain target out of range");
  // Losses are u*s^2 + (1-u)*(1-s)^2 with minimiser s* = 1-u, so the cell of
  // action a covers 1-u in [(a-1/2)/(k-1), (a+1/2)/(k-1)]; aim at its
  // centre.
  const double u = 1.0 - static_cast<double>(target) / (k - 1);
  std::vector<std::pair<double, std::vector<Outcome>>> mix;
  if (u > 0.0) mix.push_back({u, std::vector<Outcome>(horizon, 0)});
  if (u < 1.0) mix.push_back({1.0 - u, std::vector<Outcome>(horizon, 1)});
  return Prior::mixture_of_diracs(mix);
}

namespace {

Game binary_loss_game(int arms, bool reveal_others) {
  if (arms < 1 || arms > 16) throw InvalidInput("binary-loss games support 1..16 arms");
  Game g;
  g.k = arms;
  g.d = 1 << arms;
  for (Action a = 0; a < arms; ++a) {
    std::vector<double> loss(g.d);
    std::vector<Symbol> sig(g.d);
    for (Outcome x = 0; x < g.d; ++x) {
      loss[x] = static_cast<double>((x >> a) & 1);
      if (reveal_others) {
        // The (k-1)-bit word of all loss bits except arm a.
        int word = 0;
        int pos = 0;
        for (int b = 0; b < arms; ++b) {
          if (b == a) continue;
          word |= ((x >> b) & 1) << pos;
          ++pos;
        }
        sig[x] = word;
      } else {
        sig[x] = static_cast<Symbol>((x >> a) & 1);
      }
    }
    g.loss.push_back(std::move(loss));
    g.signals.push_back(std::move(sig));
  }
  return g;
}

}  // namespace

Game bandit_game(int arms) { return binary_loss_game(arms, /*reveal_others=*/false); }

Game cops_game(int arms) { return binary_loss_game(arms, /*reveal_others=*/true); }

Prior uniform_iid_prior(const Game& game, int horizon) {
  return Prior::iid_product(std::vector<double>(game.d, 1.0 / game.d), horizon);
}

Prior random_sequence_prior(const Game& game, int horizon, int num_atoms, std::uint64_t seed) {
  if (num_atoms < 1) throw InvalidInput("need at least one atom");
  Rng rng(seed);
  Prior p;
  p.horizon = horizon;
  for (int i = 0; i < num_atoms; ++i) {
    std::vector<Outcome> seq(horizon);
    for (Outcome& x : seq) x = rng.uniform_int(game.d);
    p.atoms.push_back({1.0 / num_atoms, std::move(seq)});
  }
  return p;
}

Game random_game(Rng& rng, const RandomGameOptions& options) {
  Game g;
  g.k = options.k;
  g.d = options.d;
  for (Action a = 0; a < g.k; ++a) {
    std::vector<double> loss(g.d);
    for (double& l : loss) {
      l = rng.uniform();
      if (options.loss_grid > 0) l = std::round(l * options.loss_grid) / options.loss_grid;
    }
    std::vector<Symbol> sig(g.d);
    if (rng.uniform() < options.revealing_prob) {
      for (Outcome x = 0; x < g.d; ++x) sig[x] = x;
    } else {
      const int symbols = 1 + rng.uniform_int(g.d);
      for (Outcome x = 0; x < g.d; ++x) sig[x] = rng.uniform_int(symbols);
    }
    g.loss.push_back(std::move(loss));
    g.signals.push_back(std::move(sig));
  }
  return g;
}

}  // namespace fixtures
}  // namespace pm
