#include "cogsec/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cogsec/error.hpp"

namespace cogsec {

namespace {
constexpr double kNearOne = 8 * std::numeric_limits<double>::epsilon();
}  // namespace

void CPTParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("cpt alpha must lie in (0,1]");
  if (!(beta_v > 0.0 && beta_v <= 1.0)) throw InvalidParameter("cpt beta_v must lie in (0,1]");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidParameter("cpt lambda must be positive");
  if (!(gamma_plus > 0.28 && gamma_plus <= 1.0)) throw InvalidParameter("cpt gamma_plus must lie in (0.28,1]");
  if (!(gamma_minus > 0.28 && gamma_minus <= 1.0)) throw InvalidParameter("cpt gamma_minus must lie in (0.28,1]");
}

Prospect::Prospect(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  double total = 0.0;
  for (const auto& o : outcomes_) {
    if (!std::isfinite(o.value)) throw InvalidParameter("outcome value must be finite");
    if (!(o.prob >= 0.0 && o.prob <= 1.0)) throw InvalidParameter("outcome probability must lie in [0,1]");
    total += o.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidParameter("prospect probabilities must sum to one");
}

Prospect Prospect::padded(std::vector<Outcome> outcomes) {
  double total = 0.0;
  for (const auto& o : outcomes) total += o.prob;
  if (total < 1.0 - 1e-12) outcomes.push_back({0.0, 1.0 - total});
  return Prospect(std::move(outcomes));
}

Prospect Prospect::binary(double win, double p, double otherwise) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("outcome probability must lie in [0,1]");
  return Prospect({{win, p}, {otherwise, 1.0 - p}});
}

double value_function(double x, const CPTParams& p) {
  if (x >= 0.0) return std::pow(x, p.alpha);
  return -p.lambda * std::pow(-x, p.beta_v);
}

double weighting_function(double p, double gamma) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("probability must lie in [0,1]");
  if (p == 0.0) return 0.0;
  if (gamma == 1.0) return p;
  // w has unbounded slope at 1, so a cumulative sum that rounds to 1 - 2^-53
  // would shift w by ~1e-5 for small gamma. Treat that rounding band as 1.
  if (p >= 1.0 - kNearOne) return 1.0;
  const double a = std::pow(p, gamma);
  const double b = std::pow(1.0 - p, gamma);
  return a / std::pow(a + b, 1.0 / gamma);
}

DecisionWeights decision_weights(const Prospect& pr, const CPTParams& p) {
  // Merge equal values; std::map keeps them ordered ascending.
  std::map<double, double> merged;
  for (const auto& o : pr.outcomes()) {
    if (o.value != 0.0) merged[o.value] += o.prob;
  }

  DecisionWeights out;
  // Gains: from the best outcome down, pi = w(P[X >= x]) - w(P[X > x]).
  double tail = 0.0;
  for (auto it = merged.rbegin(); it != merged.rend() && it->first > 0.0; ++it) {
    const double above = std::min(1.0, tail);
    const double at_or_above = std::min(1.0, tail + it->second);
    const double pi = weighting_function(at_or_above, p.gamma_plus) - weighting_function(above, p.gamma_plus);
    out.gains.push_back({it->first, it->second, std::max(0.0, pi)});
    tail += it->second;
  }
  // Losses: from the worst outcome up, pi = w(P[X <= x]) - w(P[X < x]).
  tail = 0.0;
  for (auto it = merged.begin(); it != merged.end() && it->first < 0.0; ++it) {
    const double below = std::min(1.0, tail);
    const double at_or_below = std::min(1.0, tail + it->second);
    const double pi = weighting_function(at_or_below, p.gamma_minus) - weighting_function(below, p.gamma_minus);
    out.losses.push_back({it->first, it->second, std::max(0.0, pi)});
    tail += it->second;
  }
  return out;
}

double prospect_value(const Prospect& pr, const CPTParams& p) {
  const DecisionWeights dw = decision_weights(pr, p);
  double v = 0.0;
  for (const auto& g : dw.gains) v += g.pi * value_function(g.value, p);
  for (const auto& l : dw.losses) v += l.pi * value_function(l.value, p);
  return v;
}

}  // namespace cogsec
