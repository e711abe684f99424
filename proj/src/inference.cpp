#include "cogsec/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogsec/error.hpp"

namespace cogsec {

namespace {

constexpr double kUnderflowGuard = 1e-300;

bool needs_log_space(std::span<const double> a, std::span<const double> b) {
  auto tiny = [](double v) { return v > 0.0 && v < kUnderflowGuard; };
  return std::any_of(a.begin(), a.end(), tiny) || std::any_of(b.begin(), b.end(), tiny);
}

}  // namespace

MassFunction uniform_prior(const Grid& grid) {
  return MassFunction(grid, std::vector<double>(grid.size(), 1.0 / static_cast<double>(grid.size())));
}

MassFunction bayes_update(const MassFunction& prior, const Likelihood& like) {
  if (!(prior.grid() == like.grid())) throw InvalidParameter("prior and likelihood live on different grids");
  const std::size_t n = prior.size();
  const auto p = prior.mass();
  const auto l = like.weight();
  std::vector<double> post(n);

  // Flat evidence: return the prior untouched rather than a renormalized copy
  // that can differ in the last bit.
  if (std::all_of(l.begin(), l.end(), [&](double v) { return v == l[0]; }) && l[0] > 0.0) return prior;

  if (needs_log_space(p, l)) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    double peak = neg_inf;
    for (std::size_t i = 0; i < n; ++i) {
      post[i] = (p[i] > 0.0 && l[i] > 0.0) ? std::log(p[i]) + std::log(l[i]) : neg_inf;
      peak = std::max(peak, post[i]);
    }
    if (peak == neg_inf) throw DegenerateEvidence("prior and likelihood have disjoint support");
    for (double& v : post) v = (v == neg_inf) ? 0.0 : std::exp(v - peak);
  } else {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      post[i] = p[i] * l[i];
      total += post[i];
    }
    if (!(total > 0.0)) throw DegenerateEvidence("prior and likelihood have disjoint support");
  }
  return normalize(post, prior.grid());
}

std::vector<MassFunction> sequential_update(const MassFunction& prior0, std::span<const Likelihood> likes) {
  if (likes.empty()) throw InvalidParameter("sequential update needs at least one likelihood");
  std::vector<MassFunction> out;
  out.reserve(likes.size());
  for (std::size_t t = 0; t < likes.size(); ++t) {
    const MassFunction& prior = out.empty() ? prior0 : out.back();
    try {
      out.push_back(bayes_update(prior, likes[t]));
    } catch (const DegenerateEvidence&) {
      throw DegenerateEvidence("prior and likelihood have disjoint support", static_cast<long>(t));
    }
  }
  return out;
}

}  // namespace cogsec
