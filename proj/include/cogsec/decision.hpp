#ifndef COGSEC_DECISION_HPP
#define COGSEC_DECISION_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cogsec/grid.hpp"
#include "cogsec/valuation.hpp"

namespace cogsec {

// Ordinal (a grid of rating values) or nominal (labelled alternatives).
class ActionSpace {
 public:
  static ActionSpace ordinal(const Grid& grid) { return ActionSpace(grid); }
  static ActionSpace nominal(std::vector<std::string> labels);
  // {"no_share", "share"}; index 0 wins greedy ties.
  static ActionSpace share_space();

  bool is_ordinal() const noexcept { return std::holds_alternative<Grid>(kind_); }
  const Grid& grid() const;
  const std::vector<std::string>& labels() const;
  std::size_t size() const noexcept;
  std::string label(std::size_t i) const;

  friend bool operator==(const ActionSpace&, const ActionSpace&) = default;

 private:
  explicit ActionSpace(std::variant<Grid, std::vector<std::string>> k) : kind_(std::move(k)) {}
  std::variant<Grid, std::vector<std::string>> kind_;
};

struct ValueProfile {
  ActionSpace space;
  std::vector<double> v;

  void validate() const;
  friend bool operator==(const ValueProfile&, const ValueProfile&) = default;
};

enum class ValueMap { raw_posterior, cpt };

// Per-action value of a correct selection (gain >= 0) and of an incorrect
// one (loss <= 0).
struct ValueSpec {
  std::vector<double> gain;
  std::vector<double> loss;
  ValueMap value_map = ValueMap::raw_posterior;

  static ValueSpec uniform(std::size_t n, double gain = 1.0, ValueMap map = ValueMap::raw_posterior);
  void validate(std::size_t n) const;
};

struct SoftmaxParams {
  double beta_s = 1.0;
};

// Probability over an action space (choice distribution).
struct ActionDistribution {
  ActionSpace space;
  std::vector<double> prob;

  MassFunction as_mass() const;
  friend bool operator==(const ActionDistribution&, const ActionDistribution&) = default;
};

// Prospective value of selecting each rating. The probability of being
// correct for action a is the posterior mass of its bin.
ValueProfile veracity_profile(const MassFunction& post, const ValueSpec& spec, const CPTParams& params);

// Mean of the profile normalized to a selection density.
double select_mse(const ValueProfile& profile);

// Index of the maximal value; ties resolve to the lowest index.
std::size_t select_greedy(const ValueProfile& profile);

// Luce-Shepard (softmax) choice rule, mass ∝ exp(beta_s · V).
ActionDistribution luce_shepard(const ValueProfile& profile, const SoftmaxParams& sp);

double softmax_mean(const ValueProfile& profile, const SoftmaxParams& sp);

struct GoodnessOfFit {
  double mse = 0.0;
  double r2 = 0.0;
  bool r2_defined = true;  // false when the reference has zero variance
};

GoodnessOfFit goodness_of_fit(std::span<const double> model, std::span<const double> ref);

struct FitTracePoint {
  double beta_s;
  double mse;
  bool refinement;
};

struct BetaFit {
  double beta_s = 0.0;
  double mse = 0.0;
  double r2 = 0.0;
  bool r2_defined = true;
  std::vector<std::string> warnings;
  std::vector<FitTracePoint> trace;
};

struct BetaSearch {
  double lo = 0.01;
  double hi = 100.0;
  std::size_t grid_points = 200;
  double tolerance = 1e-4;
};

using CurveFn = std::function<std::vector<double>(double beta_s)>;

// Minimizes MSE between curve_fn(beta) and ref: a log-spaced scan of
// [lo, hi], then golden-section refinement between the neighbours of the
// best scan point.
BetaFit fit_beta(const CurveFn& curve_fn, std::span<const double> ref, const BetaSearch& search = {});

}  // namespace cogsec

#endif  // COGSEC_DECISION_HPP
