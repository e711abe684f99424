#ifndef COGSEC_ENCODER_HPP
#define COGSEC_ENCODER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cogsec/grid.hpp"

namespace cogsec {

// Cognitive resource density over the hypothesis grid. The total budget
// (trapezoid integral of the density) is normalized to one.
class ResourceAllocation {
 public:
  // Rescales `density` so the budget integrates to one.
  ResourceAllocation(Grid grid, std::vector<double> density);

  // Rebuilds an already-normalized allocation bit for bit (budget checked to 1e-9).
  static ResourceAllocation restore(Grid grid, std::vector<double> density);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> density() const noexcept { return density_; }
  double operator[](std::size_t i) const noexcept { return density_[i]; }

  double budget() const noexcept;
  // Resource mass per node (density times quadrature weight); sums to one.
  MassFunction as_mass() const;

  friend bool operator==(const ResourceAllocation&, const ResourceAllocation&) = default;

 private:
  struct Restored {};
  ResourceAllocation(Restored, Grid grid, std::vector<double> density);

  Grid grid_;
  std::vector<double> density_;
};

struct EncoderConfig {
  double sigma_m = 0.3;      // internal measurement noise, in F units on [0,1]
  double sigma_c = 0.75;     // cue uncertainty, in hypothesis units
  double credibility = 1.0;  // 1 = fully credible, 0 = discredited

  void validate() const;
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// Evidence weight per hypothesis, stored normalized to unit sum.
class Likelihood {
 public:
  Likelihood(Grid grid, std::vector<double> weight);

  static Likelihood from_weights(const Grid& grid, std::span<const double> weights);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> weight() const noexcept { return weight_; }
  double operator[](std::size_t i) const noexcept { return weight_[i]; }
  std::size_t size() const noexcept { return weight_.size(); }
  MassFunction as_mass() const { return MassFunction(grid_, weight_); }

  friend bool operator==(const Likelihood&, const Likelihood&) = default;

 private:
  Grid grid_;
  std::vector<double> weight_;
};

ResourceAllocation uniform_resources(const Grid& grid);

// Linear ramp; positive bias favours high (truthful) hypotheses.
ResourceAllocation ramp_resources(const Grid& grid, double bias);

// Gaussian bump around `center` on top of a uniform floor.
ResourceAllocation bump_resources(const Grid& grid, double center, double width, double floor);

// Cumulative map F from hypotheses to internal units, F(lo)=0 and F(hi)=1.
class CumulativeMap {
 public:
  explicit CumulativeMap(const ResourceAllocation& r);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  // Piecewise-linear evaluation between nodes.
  double operator()(double h) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

CumulativeMap mapping_F(const ResourceAllocation& r);

// Deterministic encoding: the internal measurement is F(stimulus).
Likelihood encode_likelihood(const ResourceAllocation& r, const EncoderConfig& cfg, double stimulus);

// Encoding at an explicit internal measurement m.
Likelihood encode_likelihood_at(const ResourceAllocation& r, const EncoderConfig& cfg, double measurement);

// Stochastic encoding: m ~ Normal(F(stimulus), sigma_m) drawn from a generator seeded with `seed`.
Likelihood encode_likelihood_sampled(const ResourceAllocation& r, const EncoderConfig& cfg, double stimulus,
                                     std::uint64_t seed);

Likelihood discredited_likelihood(const Grid& grid);

}  // namespace cogsec

#endif  // COGSEC_ENCODER_HPP
