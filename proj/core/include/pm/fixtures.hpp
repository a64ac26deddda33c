#pragma once

#include <cstdint>

#include "pm/game.hpp"
#include "pm/prior.hpp"
#include "pm/rng.hpp"

namespace pm {
namespace fixtures {

// 3-action / 2-outcome label-or-ask game. Actions: 0 = mark spam,
// 1 = mark not-spam, 2 = ask for the label at cost `cost`. Outcomes:
// 0 = not spam, 1 = spam. Only action 2 reveals the outcome.
Game spam_game(double cost);
// Equal mixture of the all-spam and all-notspam sequences.
Prior spam_prior(int horizon);

// 4-action / 3-outcome weather game: actions ski, climb, math, raindance
// against outcomes sun, snow, rain; math gives no feedback, everything else
// reveals the weather.
Game ski_game();

// k actions with losses on a parabola over two outcomes and full feedback;
// the cells tile the interval in index order, so round trees are chains.
Game chain_game(int k);
// Two-atom prior whose round-1 posterior outcome mean lands inside the cell
// of `target`, putting the greedy root there.
Prior chain_prior(const Game& game, int target, int horizon);

// k-armed bandit with binary losses as a finite game: outcomes are the 2^k
// loss vectors, playing an action reveals exactly its own loss bit.
Game bandit_game(int arms);

// Same outcome space, but playing an action reveals every loss bit except
// its own.
Game cops_game(int arms);

// Uniform i.i.d. prior over all d^n sequences.
Prior uniform_iid_prior(const Game& game, int horizon);

// num_atoms uniformly weighted sequences drawn i.i.d. uniform over outcomes.
Prior random_sequence_prior(const Game& game, int horizon, int num_atoms, std::uint64_t seed);

struct RandomGameOptions {
  int k = 3;
  int d = 3;
  // Chance that an action's signal row fully reveals the outcome; the rest
  // get a random coarser symbol partition.
  double revealing_prob = 0.5;
  // Round losses to this grid (0 disables). A coarse grid makes ties and
  // degenerate structure show up in the sample.
  int loss_grid = 0;
};

Game random_game(Rng& rng, const RandomGameOptions& options);

}  // namespace fixtures
}  // namespace pm
