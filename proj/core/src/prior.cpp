#include "pm/prior.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pm {

void Prior::validate(int num_outcomes) const {
  if (horizon < 1) throw InvalidInput("prior horizon must be >= 1");
  if (atoms.empty()) throw InvalidInput("prior needs at least one atom");
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.weight > 0.0)) throw InvalidInput("atom weights must be positive");
    total += atom.weight;
    if (static_cast<int>(atom.sequence.size()) != horizon)
      throw InvalidInput("atom sequences must have length n");
    for (Outcome x : atom.sequence) {
      if (x < 0 || x >= num_outcomes) throw InvalidInput("atom outcome out of range");
    }
  }
  if (std::fabs(total - 1.0) > 1e-12) throw InvalidInput("atom weights must sum to 1");
}

void Prior::normalize() {
  double total = 0.0;
  for (const auto& atom : atoms) total += atom.weight;
  if (total <= 0.0) throw InvalidInput("prior has no mass");
  for (auto& atom : atoms) atom.weight /= total;
}

Prior Prior::dirac(std::vector<Outcome> sequence) {
  Prior p;
  p.horizon = static_cast<int>(sequence.size());
  p.atoms.push_back({1.0, std::move(sequence)});
  return p;
}

Prior Prior::mixture_of_diracs(const std::vector<std::pair<double, std::vector<Outcome>>>& mix) {
  Prior p;
  if (mix.empty()) throw InvalidInput("empty mixture");
  p.horizon = static_cast<int>(mix.front().second.size());
  for (const auto& [w, seq] : mix) p.atoms.push_back({w, seq});
  p.normalize();
  return p;
}

Prior Prior::iid_product(const std::vector<double>& outcome_law, int horizon) {
  const int d = static_cast<int>(outcome_law.size());
  if (d < 1 || horizon < 1) throw InvalidInput("iid_product needs d >= 1 and n >= 1");
  double count = std::pow(static_cast<double>(d), static_cast<double>(horizon));
  if (count > 1e6) throw InvalidInput("iid_product would expand beyond 1e6 atoms");
  Prior p;
  p.horizon = horizon;
  std::vector<Outcome> seq(horizon, 0);
  for (;;) {
    double w = 1.0;
    for (Outcome x : seq) w *= outcome_law[x];
    if (w > 0.0) p.atoms.push_back({w, seq});
    int pos = horizon - 1;
    while (pos >= 0 && seq[pos] == d - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
  p.normalize();
  return p;
}

Prior prior_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad prior JSON: ") + e.what());
  }
  Prior p;
  try {
    p.horizon = j.at("n").get<int>();
    for (const auto& atom : j.at("atoms")) {
      p.atoms.push_back(
          {atom.at("weight").get<double>(), atom.at("sequence").get<std::vector<int>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad prior JSON: ") + e.what());
  }
  return p;
}

std::string prior_to_json(const Prior& prior) {
  nlohmann::ordered_json j;
  j["n"] = prior.horizon;
  auto atoms = nlohmann::ordered_json::array();
  for (const auto& atom : prior.atoms) {
    nlohmann::ordered_json a;
    a["weight"] = atom.weight;
    a["sequence"] = atom.sequence;
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  return j.dump(2);
}

Prior load_prior(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open prior file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return prior_from_json(buf.str());
}

}  // namespace pm
