#pragma once

#include <stdexcept>
#include <string>

namespace pm {

using Action = int;
using Outcome = int;
using Symbol = int;

// Numerical tolerances, pinned project-wide.
namespace tol {
// Absolute tolerance for all LP feasibility and cell-dimension decisions.
inline constexpr double geometry = 1e-9;
// Estimation-function identity residual.
inline constexpr double estimation = 1e-8;
// Relaxation of the estimator equality constraints inside the LP.
inline constexpr double lp_feasibility = 1e-8;
// Singular values below this are treated as zero in the pseudo-inverse.
inline constexpr double svd_cutoff = 1e-10;
// Expected-loss equality when forming the greedy tie set V_t.
inline constexpr double greedy_tie = 1e-9;
// Slack allowed when asserting a per-step regret/information inequality.
inline constexpr double step_inequality = 1e-8;
// Posterior weights below this are zeroed after renormalisation.
inline constexpr double atom_drop = 1e-15;
}  // namespace tol

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed game/prior/config input.
struct InvalidInput : Error {
  using Error::Error;
};

// A posterior update zeroed every atom: the observed symbol has prior
// probability zero.
struct InconsistentObservation : Error {
  using Error::Error;
};

// Conditioning on an optimal-action event of posterior probability zero.
struct ZeroProbabilityCondition : Error {
  using Error::Error;
};

// The estimator system for a pair has no solution; the pair (hence the game)
// is not observable under the requested support restriction.
struct NotObservable : Error {
  using Error::Error;
};

// The pseudo-inverse solution fails the loss-difference identity.
struct ResidualTooLarge : Error {
  using Error::Error;
};

// The greedy tie set with its neighbour edges is not connected; this
// indicates broken geometry for the game at hand.
struct DisconnectedVt : Error {
  using Error::Error;
};

// The chosen action subset does not cover the outcome simplex.
struct CoverFailure : Error {
  using Error::Error;
};

// The configured policy cannot run on the configured game class.
struct IncompatiblePolicy : Error {
  using Error::Error;
};

// No per-step inequality is known for the policy/game pairing.
struct UnknownPairing : Error {
  using Error::Error;
};

}  // namespace pm
