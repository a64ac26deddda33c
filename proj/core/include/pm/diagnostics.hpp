#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pm/belief.hpp"
#include "pm/observability.hpp"
#include "pm/policies.hpp"

namespace pm {

// E_t[loss of the played action] minus E_t[loss of the optimal action],
// both exact finite sums over the posterior atoms.
double expected_instant_regret(const BeliefState& belief, std::span<const double> action_dist);

double potential_diameter(const Potential& potential, int k);

// Max entrywise deviation of sum_sigma P(signal = sigma) * P*_after(a,
// sigma) from P*_t; an exact-Bayes identity, so the result is rounding
// noise.
double verify_martingale(const BeliefState& belief, Action a);

// Which per-step inequality applies to a policy/game pairing.
enum class StepLemma {
  ThompsonSelfRevealing,    // E_t[regret] <= sqrt(sqrt(k) * half-Tsallis gain)
  ThompsonOthersRevealing,  // E_t[regret] <= sqrt(2 I_t)
  MarioNondegenerate,       // E_t[regret] <= (d+1) k^{3/2} sqrt(8 I_t)
  MarioDegenerate,          // E_t[regret] <= v k^{3/2} sqrt(8 I_t)
  ForcedExploration,        // E_t[regret] <= gamma + k v sqrt(2 I_t / gamma)
};

const char* to_string(StepLemma lemma);

// Game-level constants the right-hand sides need.
struct BoundContext {
  int k = 0;
  int d = 0;
  Classification classification = Classification::Trivial;
  bool nondegenerate = false;
  bool self_revealing = false;    // every action's signal determines its own loss
  bool others_revealing = false;  // any action's signal determines all other losses
  double v_local = 0.0;
  double v_global = 0.0;
  double gamma = 0.0;  // forced exploration rate in force

  static BoundContext from_game(const Game& game, const GeometryReport& geometry);
};

// Throws UnknownPairing when no lemma covers the combination. The Thompson
// pairing on a general locally observable game deliberately reuses the
// Mario right-hand side: it is the check that exposes under-exploration.
StepLemma select_step_lemma(const PolicyKind& policy, const BoundContext& context);

struct StepDiagnostics {
  int t = 0;
  double expected_instant_regret = 0.0;
  double mutual_info = 0.0;
  double bregman_gain = 0.0;  // under the run's configured potential
  double bound_rhs = 0.0;
  double slack = 0.0;  // bound_rhs - expected_instant_regret
  bool pass = false;   // slack >= -tol::step_inequality
  int max_ancestors = 0;
};

// Fills a StepDiagnostics record for the current belief and action
// distribution under the selected lemma.
StepDiagnostics check_step_inequality(const BeliefState& belief,
                                      std::span<const double> action_dist, StepLemma lemma,
                                      const BoundContext& context, const Potential& potential);

enum class CumulativeTheorem {
  MarioNondegenerate,  // k^{3/2} (d+1) sqrt(8 n log k)
  MarioDegenerate,     // v k^{3/2} sqrt(8 n log k)
  ForcedExploration,   // 3 (n k v)^{2/3} (log(k)/2)^{1/3}
  ThompsonBandit,      // sqrt(2 k n)
  ThompsonCops,        // sqrt(2 n log k)
};

const char* to_string(CumulativeTheorem theorem);

double cumulative_bound_rhs(CumulativeTheorem theorem, const BoundContext& context, int horizon);

// General-form bound alpha n + sqrt(n beta diam_F) for a caller-supplied
// per-step inequality shape.
double general_cumulative_bound(double alpha, double beta, const Potential& potential, int k,
                                int horizon);

struct CumulativeCheck {
  double estimate = 0.0;   // Monte Carlo mean of the cumulative regret
  double std_error = 0.0;  // replicate standard error
  double bound = 0.0;
  bool pass = false;  // estimate + 3 * std_error <= bound
};

CumulativeCheck check_cumulative_bound(double regret_mean, double regret_se,
                                       CumulativeTheorem theorem, const BoundContext& context,
                                       int horizon);

}  // namespace pm
