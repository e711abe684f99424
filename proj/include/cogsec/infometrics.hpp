#ifndef COGSEC_INFOMETRICS_HPP
#define COGSEC_INFOMETRICS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace cogsec {

// Observation model for N iid observations of a scalar quantity x.
//
// A gaussian model has log p(y|x) = -(y-x)^2 / (2 sigma^2) + const and a
// closed-form Fisher information. A custom model supplies its own
// single-observation log-likelihood log p(y|x), a length scale used to size
// the finite-difference step and quadrature range, and optionally a sampler
// for Monte Carlo expectations.
struct GaussianObservation {
  double sigma = 1.0;
};

struct CustomObservation {
  std::function<double(double y, double x)> log_likelihood;
  double scale = 1.0;
  std::function<double(double x, std::mt19937_64& rng)> sample;
};

class ObservationModel {
 public:
  static ObservationModel gaussian(double sigma, std::size_t n_obs);
  static ObservationModel custom(CustomObservation obs, std::size_t n_obs);

  std::size_t n_obs() const noexcept { return n_obs_; }
  bool is_gaussian() const noexcept { return std::holds_alternative<GaussianObservation>(kind_); }
  ObservationModel with_n_obs(std::size_t n) const;

  // Log-likelihood of one observation, either kind.
  double log_likelihood(double y, double x) const;
  double scale() const;
  const std::variant<GaussianObservation, CustomObservation>& kind() const noexcept { return kind_; }

 private:
  ObservationModel(std::variant<GaussianObservation, CustomObservation> kind, std::size_t n_obs)
      : kind_(std::move(kind)), n_obs_(n_obs) {}
  std::variant<GaussianObservation, CustomObservation> kind_;
  std::size_t n_obs_;
};

// Zero-based indices of the observations an agent can actually process.
class UtilizableSubset {
 public:
  UtilizableSubset(std::vector<std::size_t> indices, std::size_t n_obs);
  static UtilizableSubset full(std::size_t n_obs);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

 private:
  std::vector<std::size_t> indices_;
};

enum class Expectation { quadrature, monte_carlo };

struct NumericalOptions {
  Expectation expectation = Expectation::quadrature;
  double step_scale = 1e-4;         // finite-difference step = step_scale * model scale
  std::size_t quadrature_nodes = 20001;
  double quadrature_halfwidth = 12.0;  // in units of model scale
  std::size_t mc_draws = 100000;
  std::uint64_t seed = 1;
};

struct FisherEstimate {
  double value = 0.0;
  std::optional<double> standard_error;  // Monte Carlo only
};

// J(x) = n_obs * E[(d/dx log p(y|x))^2]. Closed form for gaussian models,
// numerical for custom ones.
double fisher_information(const ObservationModel& model, double x);

// Finite-difference score with quadrature or seeded Monte Carlo
// expectation. Works for both kinds.
FisherEstimate fisher_information_numerical(const ObservationModel& model, double x,
                                            const NumericalOptions& opts = {});

// J_U / J_full; |U|/N for iid models.
double utilizable_ratio(const ObservationModel& model, const UtilizableSubset& u, double x);

}  // namespace cogsec

#endif  // COGSEC_INFOMETRICS_HPP
