#include "cogsec/infometrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cogsec/error.hpp"

namespace cogsec {

ObservationModel ObservationModel::gaussian(double sigma, std::size_t n_obs) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("gaussian sigma must be positive");
  return ObservationModel(GaussianObservation{sigma}, n_obs);
}

ObservationModel ObservationModel::custom(CustomObservation obs, std::size_t n_obs) {
  if (!obs.log_likelihood) throw InvalidParameter("custom observation model needs a log-likelihood");
  if (!(obs.scale > 0.0) || !std::isfinite(obs.scale)) throw InvalidParameter("custom model scale must be positive");
  return ObservationModel(std::move(obs), n_obs);
}

ObservationModel ObservationModel::with_n_obs(std::size_t n) const { return ObservationModel(kind_, n); }

double ObservationModel::log_likelihood(double y, double x) const {
  if (const auto* g = std::get_if<GaussianObservation>(&kind_)) {
    const double z = (y - x) / g->sigma;
    return -0.5 * z * z - std::log(g->sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  return std::get<CustomObservation>(kind_).log_likelihood(y, x);
}

double ObservationModel::scale() const {
  if (const auto* g = std::get_if<GaussianObservation>(&kind_)) return g->sigma;
  return std::get<CustomObservation>(kind_).scale;
}

UtilizableSubset::UtilizableSubset(std::vector<std::size_t> indices, std::size_t n_obs) : indices_(std::move(indices)) {
  std::set<std::size_t> seen;
  for (std::size_t i : indices_) {
    if (i >= n_obs) throw InvalidParameter("subset index " + std::to_string(i) + " is out of range");
    if (!seen.insert(i).second) throw InvalidParameter("subset index " + std::to_string(i) + " is repeated");
  }
}

UtilizableSubset UtilizableSubset::full(std::size_t n_obs) {
  std::vector<std::size_t> all(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) all[i] = i;
  return UtilizableSubset(std::move(all), n_obs);
}

double fisher_information(const ObservationModel& model, double x) {
  if (model.n_obs() == 0) return 0.0;
  if (const auto* g = std::get_if<GaussianObservation>(&model.kind())) {
    return static_cast<double>(model.n_obs()) / (g->sigma * g->sigma);
  }
  return fisher_information_numerical(model, x).value;
}

FisherEstimate fisher_information_numerical(const ObservationModel& model, double x, const NumericalOptions& opts) {
  if (model.n_obs() == 0) return {0.0, opts.expectation == Expectation::monte_carlo ? std::optional(0.0) : std::nullopt};

  const double scale = model.scale();
  const double h = opts.step_scale * scale;
  auto score = [&](double y) {
    const double up = model.log_likelihood(y, x + h);
    const double down = model.log_likelihood(y, x - h);
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalFailure("log-likelihood is not finite near x = " + std::to_string(x));
    }
    return (up - down) / (2.0 * h);
  };
  const double n = static_cast<double>(model.n_obs());

  if (opts.expectation == Expectation::quadrature) {
    // Composite Simpson over y in [x - k*scale, x + k*scale].
    std::size_t nodes = std::max<std::size_t>(opts.quadrature_nodes, 3);
    if (nodes % 2 == 0) ++nodes;
    const double a = x - opts.quadrature_halfwidth * scale;
    const double b = x + opts.quadrature_halfwidth * scale;
    const double dy = (b - a) / static_cast<double>(nodes - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      const double y = a + dy * static_cast<double>(i);
      const double ll = model.log_likelihood(y, x);
      if (std::isnan(ll)) throw NumericalFailure("log-likelihood is NaN at y = " + std::to_string(y));
      const double density = std::exp(ll);
      if (density == 0.0) continue;
      const double s = score(y);
      const double w = (i == 0 || i + 1 == nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * density * s * s;
    }
    return {n * acc * dy / 3.0, std::nullopt};
  }

  std::mt19937_64 rng(opts.seed);
  std::function<double(double, std::mt19937_64&)> draw;
  if (const auto* g = std::get_if<GaussianObservation>(&model.kind())) {
    const double sigma = g->sigma;
    draw = [sigma](double mu, std::mt19937_64& r) { return std::normal_distribution<double>(mu, sigma)(r); };
  } else {
    draw = std::get<CustomObservation>(model.kind()).sample;
    if (!draw) throw InvalidParameter("Monte Carlo expectation needs a sampler on the custom model");
  }
  if (opts.mc_draws < 2) throw InvalidParameter("Monte Carlo expectation needs at least 2 draws");
  // Welford accumulation in draw order keeps the reduction deterministic.
  double m = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < opts.mc_draws; ++k) {
    const double s = score(draw(x, rng));
    const double v = s * s;
    const double delta = v - m;
    m += delta / static_cast<double>(k + 1);
    m2 += delta * (v - m);
  }
  const double var = m2 / static_cast<double>(opts.mc_draws - 1);
  return {n * m, n * std::sqrt(var / static_cast<double>(opts.mc_draws))};
}

double utilizable_ratio(const ObservationModel& model, const UtilizableSubset& u, double x) {
  if (model.n_obs() == 0) throw UndefinedRatio("utilizable ratio is undefined with no observations");
  if (u.size() > model.n_obs()) throw InvalidParameter("subset is larger than the observation set");
  const double full = fisher_information(model, x);
  if (!(full > 0.0)) throw UndefinedRatio("full-set Fisher information is zero");
  const double part = fisher_information(model.with_n_obs(u.size()), x);
  return std::clamp(part / full, 0.0, 1.0);
}

}  // namespace cogsec
