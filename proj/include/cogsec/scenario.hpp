#ifndef COGSEC_SCENARIO_HPP
#define COGSEC_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cogsec/decision.hpp"
#include "cogsec/encoder.hpp"
#include "cogsec/grid.hpp"
#include "cogsec/valuation.hpp"

namespace cogsec {

enum class ScenarioKind { normative, availability, anchoring, affect_shift, discredited, illusory_truth, sharing };

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view s);

struct ResourceSpec {
  enum class Type { uniform, ramp, bump };
  Type type = Type::uniform;
  double bias = 0.0;    // ramp
  double center = 3.5;  // bump
  double width = 0.5;   // bump
  double floor = 0.1;   // bump

  ResourceAllocation build(const Grid& grid) const;
  friend bool operator==(const ResourceSpec&, const ResourceSpec&) = default;
};

struct PriorSpec {
  enum class Type { uniform, explicit_values, gaussian };
  Type type = Type::uniform;
  std::vector<double> values;  // explicit_values, normalized on build
  double mu = 3.5;             // gaussian
  double sigma = 1.0;          // gaussian

  MassFunction build(const Grid& grid) const;
  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;
};

// Gaussian-shaped adjustment of per-action gains or losses.
struct ValueBump {
  double center = 1.0;
  double width = 0.25;
  double height = 1.0;
  friend bool operator==(const ValueBump&, const ValueBump&) = default;
};

struct ValueSpecConfig {
  ValueMap map = ValueMap::raw_posterior;
  double gain_base = 1.0;
  std::vector<ValueBump> gain_bumps;
  double loss_base = 0.0;
  std::vector<ValueBump> loss_bumps;

  ValueSpec build(const Grid& grid) const;
  friend bool operator==(const ValueSpecConfig&, const ValueSpecConfig&) = default;
};

struct ChoiceRule {
  enum class Type { mse, greedy, softmax };
  Type type = Type::mse;
  double beta_s = 1.0;  // softmax
  friend bool operator==(const ChoiceRule&, const ChoiceRule&) = default;
};

enum class SharingVariant { normative, misaligned, compromised };

std::string_view to_string(SharingVariant v);
std::optional<SharingVariant> parse_sharing_variant(std::string_view s);

struct SharingParams {
  SharingVariant variant = SharingVariant::normative;
  double share_truth = 1.0;
  double share_false = -1.0;
  double no_share = 0.0;
  std::size_t n_exposures = 1;
  std::optional<double> p_true;  // bypasses the posterior when set
  friend bool operator==(const SharingParams&, const SharingParams&) = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::normative;
  Grid grid = rating_grid();
  double stimulus = 3.5;
  ResourceSpec resources;
  EncoderConfig encoder;
  bool stochastic = false;
  PriorSpec prior;
  ValueSpecConfig values;
  CPTParams cpt;
  ChoiceRule rule;
  std::size_t n_reps = 8;  // illusory_truth
  SharingParams sharing;
  std::uint64_t seed = 0;

  // Kind-specific consistency checks; throws ConfigError naming the field.
  void validate() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ReferencePoint {
  int repetition;
  double mean_rating;
  friend bool operator==(const ReferencePoint&, const ReferencePoint&) = default;
};

// Empirical mean ratings by repetition; repetitions strictly increasing and
// ratings within the scale.
class ReferenceSeries {
 public:
  explicit ReferenceSeries(std::vector<ReferencePoint> points, double lo = 1.0, double hi = 6.0);
  const std::vector<ReferencePoint>& points() const noexcept { return points_; }
  std::vector<double> ratings() const;
  int max_repetition() const { return points_.back().repetition; }

 private:
  std::vector<ReferencePoint> points_;
};

struct SharingOutcome {
  double p_true = 0.0;
  double v_share = 0.0;
  double v_no_share = 0.0;
  std::optional<double> threshold;  // p_true where V_share crosses V_no_share
  std::string decision;
  friend bool operator==(const SharingOutcome&, const SharingOutcome&) = default;
};

using Selection = std::variant<double, std::string>;

struct FitStats {
  double mse = 0.0;
  double r2 = 0.0;
  bool r2_defined = true;
};

bool operator==(const FitStats& a, const FitStats& b);

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::normative;
  ResourceAllocation resources;
  Likelihood likelihood;
  MassFunction prior;
  std::vector<MassFunction> posteriors;  // one per exposure
  ValueProfile profile;
  ActionDistribution choice;
  Selection selection;
  std::vector<double> series;  // per-repetition ratings (illusory_truth)
  std::optional<FitStats> stats;
  std::optional<SharingOutcome> sharing;

  const MassFunction& posterior() const { return posteriors.back(); }
  friend bool operator==(const ScenarioResult&, const ScenarioResult&) = default;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::optional<ReferenceSeries>& ref = std::nullopt);
ScenarioResult run_illusory_truth(const ScenarioConfig& cfg, const std::optional<ReferenceSeries>& ref = std::nullopt);
ScenarioResult run_sharing(const ScenarioConfig& cfg);

// Encoded likelihood for a config (stage "encoder").
Likelihood scenario_likelihood(const ScenarioConfig& cfg);

// Per-repetition posteriors for the illusory-truth chain.
std::vector<MassFunction> illusory_posteriors(const ScenarioConfig& cfg);

// Selection under `rule` for each posterior; the illusory-truth rating series.
std::vector<double> ratings_from_posteriors(const std::vector<MassFunction>& posteriors, const ValueSpec& values,
                                            const CPTParams& cpt, const ChoiceRule& rule);

// Posterior probability that the statement is true: mass above the grid
// midpoint, with the midpoint node split evenly.
double truth_probability(const MassFunction& post);

// V_share for the prospect {share_truth w.p. p; share_false w.p. 1-p}.
double share_value(const SharingParams& s, double p_true, const CPTParams& cpt);

}  // namespace cogsec

#endif  // COGSEC_SCENARIO_HPP
