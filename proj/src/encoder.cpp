#include "cogsec/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cogsec/error.hpp"

namespace cogsec {

namespace {

double trapezoid(const Grid& g, std::span<const double> f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += g.quadrature_weight(i) * f[i];
  return acc;
}

}  // namespace

ResourceAllocation::ResourceAllocation(Grid grid, std::vector<double> density)
    : grid_(grid), density_(std::move(density)) {
  if (density_.size() != grid_.size()) throw InvalidParameter("resource density length does not match grid");
  for (double v : density_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidParameter("resource density must be finite and nonnegative");
  }
  const double total = trapezoid(grid_, density_);
  if (!(total > 0.0)) throw InvalidParameter("resource density has no positive budget");
  for (double& v : density_) v /= total;
}

ResourceAllocation::ResourceAllocation(Restored, Grid grid, std::vector<double> density)
    : grid_(grid), density_(std::move(density)) {
  if (density_.size() != grid_.size()) throw InvalidParameter("resource density length does not match grid");
  for (double v : density_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidParameter("resource density must be finite and nonnegative");
  }
  if (std::abs(budget() - 1.0) > 1e-9) throw InvalidParameter("restored resource budget is not one");
}

ResourceAllocation ResourceAllocation::restore(Grid grid, std::vector<double> density) {
  return ResourceAllocation(Restored{}, grid, std::move(density));
}

double ResourceAllocation::budget() const noexcept { return trapezoid(grid_, density_); }

MassFunction ResourceAllocation::as_mass() const {
  std::vector<double> m(density_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = density_[i] * grid_.quadrature_weight(i);
  return normalize(m, grid_);
}

void EncoderConfig::validate() const {
  if (!(sigma_m > 0.0) || !std::isfinite(sigma_m)) throw InvalidParameter("sigma_m must be positive");
  if (!(sigma_c > 0.0) || !std::isfinite(sigma_c)) throw InvalidParameter("sigma_c must be positive");
  if (!(credibility >= 0.0 && credibility <= 1.0)) throw InvalidParameter("credibility must lie in [0,1]");
}

Likelihood::Likelihood(Grid grid, std::vector<double> weight) : grid_(grid), weight_(std::move(weight)) {
  // Same invariants as a mass function.
  MassFunction check(grid_, weight_);
  (void)check;
}

Likelihood Likelihood::from_weights(const Grid& grid, std::span<const double> weights) {
  const MassFunction m = normalize(weights, grid);
  return Likelihood(grid, {m.mass().begin(), m.mass().end()});
}

ResourceAllocation uniform_resources(const Grid& grid) {
  return ResourceAllocation(grid, std::vector<double>(grid.size(), 1.0));
}

ResourceAllocation ramp_resources(const Grid& grid, double bias) {
  if (!(std::abs(bias) <= 1.0)) throw InvalidParameter("ramp bias must lie in [-1,1]");
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double u = 2.0 * (grid.node(i) - grid.lo()) / (grid.hi() - grid.lo()) - 1.0;
    d[i] = std::max(0.0, 1.0 + bias * u);
  }
  return ResourceAllocation(grid, std::move(d));
}

ResourceAllocation bump_resources(const Grid& grid, double center, double width, double floor) {
  if (!grid.contains(center)) throw InvalidParameter("bump center lies outside the grid");
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidParameter("bump width must be positive");
  if (!(floor >= 0.0 && floor < 1.0)) throw InvalidParameter("bump floor must lie in [0,1)");
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double z = (grid.node(i) - center) / width;
    d[i] = floor + (1.0 - floor) * std::exp(-0.5 * z * z);
  }
  return ResourceAllocation(grid, std::move(d));
}

CumulativeMap::CumulativeMap(const ResourceAllocation& r) : grid_(r.grid()), values_(r.grid().size(), 0.0) {
  const double d = grid_.spacing();
  for (std::size_t i = 1; i < values_.size(); ++i) {
    values_[i] = values_[i - 1] + 0.5 * d * (r[i - 1] + r[i]);
  }
  for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
}

double CumulativeMap::operator()(double h) const {
  if (h <= grid_.lo()) return values_.front();
  if (h >= grid_.hi()) return values_.back();
  const double t = (h - grid_.lo()) / grid_.spacing();
  const auto i = std::min(static_cast<std::size_t>(t), values_.size() - 2);
  const double frac = t - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

CumulativeMap mapping_F(const ResourceAllocation& r) { return CumulativeMap(r); }

Likelihood encode_likelihood_at(const ResourceAllocation& r, const EncoderConfig& cfg, double measurement) {
  cfg.validate();
  const Grid& g = r.grid();
  const std::size_t n = g.size();

  if (cfg.credibility == 0.0) return discredited_likelihood(g);

  const CumulativeMap F(r);
  const auto nodes = g.nodes();

  // Noisy-cue hypotheses j weighted by their resources and by how well their
  // encoding F(j) explains the measurement.
  std::vector<double> inner(n);
  const double inv_m = 1.0 / (2.0 * cfg.sigma_m * cfg.sigma_m);
  for (std::size_t j = 0; j < n; ++j) {
    const double dm = measurement - F[j];
    inner[j] = r[j] * std::exp(-dm * dm * inv_m) * g.spacing();
  }

  // Cue kernel p(noisy cue j | hypothesis h). Beyond 12 sigma the kernel is
  // below 1e-31 relative and is skipped.
  const double inv_c = 1.0 / (2.0 * cfg.sigma_c * cfg.sigma_c);
  const double reach = 12.0 * cfg.sigma_c;
  std::vector<double> w(n, 0.0);
  for (std::size_t h = 0; h < n; ++h) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = nodes[j] - nodes[h];
      if (std::abs(dx) > reach || inner[j] == 0.0) continue;
      acc += inner[j] * std::exp(-dx * dx * inv_c);
    }
    w[h] = acc;
  }

  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalFailure("encoded likelihood underflowed; measurement too far from the encoded range");
  }
  const double k = cfg.credibility;
  const double u = 1.0 / static_cast<double>(n);
  for (double& v : w) v = k * (v / total) + (1.0 - k) * u;
  return Likelihood::from_weights(g, w);
}

Likelihood encode_likelihood(const ResourceAllocation& r, const EncoderConfig& cfg, double stimulus) {
  if (!r.grid().contains(stimulus)) throw InvalidParameter("stimulus lies outside the hypothesis grid");
  return encode_likelihood_at(r, cfg, mapping_F(r)(stimulus));
}

Likelihood encode_likelihood_sampled(const ResourceAllocation& r, const EncoderConfig& cfg, double stimulus,
                                     std::uint64_t seed) {
  if (!r.grid().contains(stimulus)) throw InvalidParameter("stimulus lies outside the hypothesis grid");
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, cfg.sigma_m);
  const double m = mapping_F(r)(stimulus) + noise(rng);
  return encode_likelihood_at(r, cfg, m);
}

Likelihood discredited_likelihood(const Grid& grid) {
  return Likelihood(grid, std::vector<double>(grid.size(), 1.0 / static_cast<double>(grid.size())));
}

}  // namespace cogsec
