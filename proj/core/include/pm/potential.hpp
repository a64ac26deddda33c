#pragma once

#include <span>

#include "pm/types.hpp"

namespace pm {

// Convex potential on the simplex with its Bregman divergence. Negentropy
// makes the divergence the relative entropy between probability vectors; the
// half-Tsallis potential F(p) = -2 sum sqrt(p_a) drives the bandit bound.
struct Potential {
  enum class Kind { Negentropy, HalfTsallis };
  Kind kind = Kind::Negentropy;

  static Potential negentropy() { return {Kind::Negentropy}; }
  static Potential half_tsallis() { return {Kind::HalfTsallis}; }

  double value(std::span<const double> p) const;
  // D_F(p, q). Requires q to dominate p entrywise in support (q_i = 0 only
  // where p_i = 0), which holds for posterior martingale steps.
  double divergence(std::span<const double> p, std::span<const double> q) const;
  // Exact supremum of F(x) - F(y) over the simplex on k actions: log(k) for
  // negentropy, 2*sqrt(k) - 2 for half-Tsallis.
  double diameter(int k) const;
  const char* name() const;
};

}  // namespace pm
