#include "pm/potential.hpp"

#include <cmath>

namespace pm {

double Potential::value(std::span<const double> p) const {
  double f = 0.0;
  if (kind == Kind::Negentropy) {
    for (double v : p) {
      if (v > 0.0) f += v * std::log(v) - v;
    }
  } else {
    for (double v : p) f -= 2.0 * std::sqrt(std::max(v, 0.0));
  }
  return f;
}

double Potential::divergence(std::span<const double> p, std::span<const double> q) const {
  if (p.size() != q.size()) throw InvalidInput("divergence: dimension mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    const double qi = q[i];
    if (pi <= 0.0 && qi <= 0.0) continue;
    if (qi <= 0.0) throw Error("internal: Bregman divergence hit an unsupported zero");
    if (kind == Kind::Negentropy) {
      if (pi <= 0.0) {
        sum += qi;
      } else {
        sum += pi * std::log(pi / qi) - pi + qi;
      }
    } else {
      const double diff = std::sqrt(std::max(pi, 0.0)) - std::sqrt(qi);
      sum += diff * diff / std::sqrt(qi);
    }
  }
  return sum;
}

double Potential::diameter(int k) const {
  if (k < 1) throw InvalidInput("diameter: k must be >= 1");
  if (kind == Kind::Negentropy) return std::log(static_cast<double>(k));
  return 2.0 * std::sqrt(static_cast<double>(k)) - 2.0;
}

const char* Potential::name() const {
  return kind == Kind::Negentropy ? "negentropy" : "half-tsallis";
}

}  // namespace pm
