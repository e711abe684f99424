#ifndef COGSEC_VALUATION_HPP
#define COGSEC_VALUATION_HPP

#include <vector>

namespace cogsec {

// Cumulative Prospect Theory parameters. Defaults are the canonical
// Tversky-Kahneman estimates.
struct CPTParams {
  double alpha = 0.88;        // gain curvature
  double beta_v = 0.88;       // loss curvature
  double lambda = 2.25;       // loss aversion
  double gamma_plus = 0.61;   // gain probability-weighting curvature
  double gamma_minus = 0.69;  // loss probability-weighting curvature

  // Throws InvalidParameter unless 0 < alpha, beta_v <= 1, lambda > 0 and
  // 0.28 < gamma <= 1 (below 0.28 the weighting function is not monotone).
  void validate() const;

  // Parameters under which prospect_value reduces to expected value.
  static CPTParams linear() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }

  friend bool operator==(const CPTParams&, const CPTParams&) = default;
};

struct Outcome {
  double value;
  double prob;
};

// Mutually exclusive outcomes whose probabilities total one.
class Prospect {
 public:
  // Requires probabilities in [0,1] summing to 1 within 1e-9.
  explicit Prospect(std::vector<Outcome> outcomes);

  // Adds a zero-value outcome carrying whatever probability is missing.
  static Prospect padded(std::vector<Outcome> outcomes);

  // The two-outcome prospect {win w.p. p; otherwise w.p. 1-p}.
  static Prospect binary(double win, double p, double otherwise);

  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }

 private:
  std::vector<Outcome> outcomes_;
};

double value_function(double x, const CPTParams& p);

// Tversky-Kahneman weighting w(p) = p^g / (p^g + (1-p)^g)^(1/g).
double weighting_function(double p, double gamma);

// A merged outcome with its rank-dependent decision weight.
struct RankedOutcome {
  double value;
  double prob;
  double pi;
};

// Gains in descending order of value, losses in ascending order (most
// extreme first). Zero-value outcomes are dropped and equal values merged.
struct DecisionWeights {
  std::vector<RankedOutcome> gains;
  std::vector<RankedOutcome> losses;
};

DecisionWeights decision_weights(const Prospect& pr, const CPTParams& p);

double prospect_value(const Prospect& pr, const CPTParams& p);

}  // namespace cogsec

#endif  // COGSEC_VALUATION_HPP
