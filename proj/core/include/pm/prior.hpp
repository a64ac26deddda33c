#pragma once

#include <string>
#include <vector>

#include "pm/types.hpp"

namespace pm {

// A finitely supported prior over outcome sequences of length n: the
// adversary commits to a whole sequence drawn from these atoms.
struct Prior {
  struct Atom {
    double weight = 0.0;
    std::vector<Outcome> sequence;
  };

  int horizon = 0;
  std::vector<Atom> atoms;

  void validate(int num_outcomes) const;  // throws InvalidInput
  void normalize();

  static Prior dirac(std::vector<Outcome> sequence);
  static Prior mixture_of_diracs(const std::vector<std::pair<double, std::vector<Outcome>>>& mix);
  // Expands an i.i.d. per-round outcome law into d^n atoms; throws
  // InvalidInput when d^n exceeds 1e6.
  static Prior iid_product(const std::vector<double>& outcome_law, int horizon);
};

Prior prior_from_json(const std::string& text);
std::string prior_to_json(const Prior& prior);
Prior load_prior(const std::string& path);

}  // namespace pm
