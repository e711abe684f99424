#include "cogsec/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "cogsec/error.hpp"
#include "cogsec/inference.hpp"

namespace cogsec {

namespace {

constexpr std::array<std::pair<ScenarioKind, std::string_view>, 7> kKindNames{{
    {ScenarioKind::normative, "normative"},
    {ScenarioKind::availability, "availability"},
    {ScenarioKind::anchoring, "anchoring"},
    {ScenarioKind::affect_shift, "affect_shift"},
    {ScenarioKind::discredited, "discredited"},
    {ScenarioKind::illusory_truth, "illusory_truth"},
    {ScenarioKind::sharing, "sharing"},
}};

constexpr std::array<std::pair<SharingVariant, std::string_view>, 3> kVariantNames{{
    {SharingVariant::normative, "normative"},
    {SharingVariant::misaligned, "misaligned"},
    {SharingVariant::compromised, "compromised"},
}};

// Runs `fn`, relabelling module errors with the pipeline stage.
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

double bump_sum(const std::vector<ValueBump>& bumps, double x) {
  double acc = 0.0;
  for (const auto& b : bumps) {
    const double z = (x - b.center) / b.width;
    acc += b.height * std::exp(-0.5 * z * z);
  }
  return acc;
}

ActionDistribution point_choice(const ActionSpace& space, std::size_t index) {
  std::vector<double> p(space.size(), 0.0);
  p[index] = 1.0;
  return {space, std::move(p)};
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(SharingVariant v) {
  for (const auto& [variant, name] : kVariantNames) {
    if (variant == v) return name;
  }
  return "unknown";
}

std::optional<SharingVariant> parse_sharing_variant(std::string_view s) {
  for (const auto& [variant, name] : kVariantNames) {
    if (name == s) return variant;
  }
  return std::nullopt;
}

ResourceAllocation ResourceSpec::build(const Grid& grid) const {
  switch (type) {
    case Type::uniform:
      return uniform_resources(grid);
    case Type::ramp:
      return ramp_resources(grid, bias);
    case Type::bump:
      return bump_resources(grid, center, width, floor);
  }
  throw InvalidParameter("unknown resource type");
}

MassFunction PriorSpec::build(const Grid& grid) const {
  switch (type) {
    case Type::uniform:
      return uniform_prior(grid);
    case Type::explicit_values:
      return normalize(values, grid);
    case Type::gaussian:
      return gaussian_mass(grid, mu, sigma);
  }
  throw InvalidParameter("unknown prior type");
}

ValueSpec ValueSpecConfig::build(const Grid& grid) const {
  ValueSpec spec{std::vector<double>(grid.size()), std::vector<double>(grid.size()), map};
  for (const auto& b : gain_bumps) {
    if (!(b.width > 0.0)) throw InvalidParameter("value bump width must be positive");
  }
  for (const auto& b : loss_bumps) {
    if (!(b.width > 0.0)) throw InvalidParameter("value bump width must be positive");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    spec.gain[i] = gain_base + bump_sum(gain_bumps, x);
    spec.loss[i] = loss_base + bump_sum(loss_bumps, x);
  }
  spec.validate(grid.size());
  return spec;
}

bool operator==(const FitStats& a, const FitStats& b) {
  const bool r2_equal = (std::isnan(a.r2) && std::isnan(b.r2)) || a.r2 == b.r2;
  return a.mse == b.mse && r2_equal && a.r2_defined == b.r2_defined;
}

void ScenarioConfig::validate() const {
  if (!grid.contains(stimulus)) throw ConfigError("stimulus", "must lie within the grid");
  try {
    encoder.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("encoder", e.what());
  }
  try {
    cpt.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("cpt", e.what());
  }
  if (rule.type == ChoiceRule::Type::softmax && (!(rule.beta_s >= 0.0) || !std::isfinite(rule.beta_s))) {
    throw ConfigError("rule.beta_s", "must be finite and >= 0");
  }
  if (prior.type == PriorSpec::Type::explicit_values && prior.values.size() != grid.size()) {
    throw ConfigError("prior.values", "needs one entry per grid node (" + std::to_string(grid.size()) + ")");
  }

  using RT = ResourceSpec::Type;
  switch (kind) {
    case ScenarioKind::normative:
      if (resources.type != RT::uniform) throw ConfigError("resources.type", "normative scenarios use uniform resources");
      break;
    case ScenarioKind::availability:
      if (resources.type != RT::ramp) throw ConfigError("resources.type", "availability scenarios use a ramp");
      break;
    case ScenarioKind::anchoring:
      if (resources.type != RT::bump) throw ConfigError("resources.type", "anchoring scenarios use a bump");
      break;
    case ScenarioKind::illusory_truth:
      if (resources.type != RT::ramp) throw ConfigError("resources.type", "illusory truth uses a truth-bias ramp");
      if (n_reps < 1) throw ConfigError("illusory_truth.n_reps", "must be at least 1");
      break;
    case ScenarioKind::sharing:
      if (rule.type != ChoiceRule::Type::greedy) throw ConfigError("rule.type", "sharing decisions use the greedy rule");
      if (sharing.n_exposures < 1) throw ConfigError("sharing.n_exposures", "must be at least 1");
      if (!(sharing.share_truth >= 0.0)) throw ConfigError("sharing.share_truth", "must be >= 0");
      if (sharing.no_share != 0.0) throw ConfigError("sharing.no_share", "not sharing is valued at 0");
      if (sharing.p_true && !(*sharing.p_true >= 0.0 && *sharing.p_true <= 1.0)) {
        throw ConfigError("sharing.p_true", "must lie in [0,1]");
      }
      switch (sharing.variant) {
        case SharingVariant::normative:
          if (!(sharing.share_false < 0.0)) throw ConfigError("sharing.share_false", "normative sharing penalizes false shares");
          break;
        case SharingVariant::misaligned:
          if (!(sharing.share_false > 0.0)) throw ConfigError("sharing.share_false", "misaligned sharing rewards engagement");
          break;
        case SharingVariant::compromised:
          if (!(sharing.share_false < 0.0)) throw ConfigError("sharing.share_false", "compromised sharing penalizes false shares");
          if (resources.type != RT::ramp) throw ConfigError("resources.type", "compromised sharing uses a truth-bias ramp");
          break;
      }
      break;
    case ScenarioKind::affect_shift:
    case ScenarioKind::discredited:
      break;
  }
}

ReferenceSeries::ReferenceSeries(std::vector<ReferencePoint> points, double lo, double hi) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidParameter("reference series is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.repetition < 1) throw InvalidParameter("reference repetitions start at 1");
    if (i > 0 && p.repetition <= points_[i - 1].repetition) {
      throw InvalidParameter("reference repetitions must be strictly increasing");
    }
    if (!(p.mean_rating >= lo && p.mean_rating <= hi)) throw InvalidParameter("reference rating outside the scale");
  }
}

std::vector<double> ReferenceSeries::ratings() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.mean_rating);
  return out;
}

double truth_probability(const MassFunction& post) {
  const Grid& g = post.grid();
  const double mid = g.midpoint();
  const double tol = 1e-9 * g.spacing();
  double p = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    const double x = g.node(i);
    if (x > mid + tol) {
      p += post[i];
    } else if (std::abs(x - mid) <= tol) {
      p += 0.5 * post[i];
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

double share_value(const SharingParams& s, double p_true, const CPTParams& cpt) {
  return prospect_value(Prospect::binary(s.share_truth, p_true, s.share_false), cpt);
}

Likelihood scenario_likelihood(const ScenarioConfig& cfg) {
  const ResourceAllocation r = in_stage("resources", [&] { return cfg.resources.build(cfg.grid); });
  return in_stage("encoder", [&] {
    if (cfg.kind == ScenarioKind::discredited) return discredited_likelihood(cfg.grid);
    if (cfg.stochastic) return encode_likelihood_sampled(r, cfg.encoder, cfg.stimulus, cfg.seed);
    return encode_likelihood(r, cfg.encoder, cfg.stimulus);
  });
}

std::vector<MassFunction> illusory_posteriors(const ScenarioConfig& cfg) {
  const Likelihood like = scenario_likelihood(cfg);
  const MassFunction prior = in_stage("prior", [&] { return cfg.prior.build(cfg.grid); });
  const std::vector<Likelihood> likes(cfg.n_reps, like);
  return in_stage("inference", [&] { return sequential_update(prior, likes); });
}

namespace {

struct Choice {
  ValueProfile profile;
  ActionDistribution distribution;
  double selection;
};

Choice choose(const MassFunction& post, const ValueSpec& values, const CPTParams& cpt, const ChoiceRule& rule) {
  ValueProfile profile = in_stage("valuation", [&] { return veracity_profile(post, values, cpt); });
  return in_stage("decision", [&]() -> Choice {
    switch (rule.type) {
      case ChoiceRule::Type::mse: {
        const double sel = select_mse(profile);
        auto dist = normalize(profile.v, profile.space.grid());
        ActionDistribution d{profile.space, {dist.mass().begin(), dist.mass().end()}};
        return {std::move(profile), std::move(d), sel};
      }
      case ChoiceRule::Type::greedy: {
        const std::size_t i = select_greedy(profile);
        auto d = point_choice(profile.space, i);
        const double sel = profile.space.grid().node(i);
        return {std::move(profile), std::move(d), sel};
      }
      case ChoiceRule::Type::softmax: {
        auto d = luce_shepard(profile, {rule.beta_s});
        const double sel = mean(d.as_mass());
        return {std::move(profile), std::move(d), sel};
      }
    }
    throw InvalidParameter("unknown choice rule");
  });
}

}  // namespace

std::vector<double> ratings_from_posteriors(const std::vector<MassFunction>& posteriors, const ValueSpec& values,
                                            const CPTParams& cpt, const ChoiceRule& rule) {
  std::vector<double> out;
  out.reserve(posteriors.size());
  for (const auto& post : posteriors) out.push_back(choose(post, values, cpt, rule).selection);
  return out;
}

ScenarioResult run_illusory_truth(const ScenarioConfig& cfg, const std::optional<ReferenceSeries>& ref) {
  if (cfg.n_reps < 1) throw InvalidParameter("illusory truth needs n_reps >= 1");
  cfg.validate();
  if (ref && ref->max_repetition() > static_cast<int>(cfg.n_reps)) {
    throw InvalidParameter("reference series extends past n_reps = " + std::to_string(cfg.n_reps));
  }

  const ResourceAllocation r = in_stage("resources", [&] { return cfg.resources.build(cfg.grid); });
  const Likelihood like = scenario_likelihood(cfg);
  const MassFunction prior = in_stage("prior", [&] { return cfg.prior.build(cfg.grid); });
  const std::vector<Likelihood> likes(cfg.n_reps, like);
  std::vector<MassFunction> posteriors = in_stage("inference", [&] { return sequential_update(prior, likes); });
  const ValueSpec values = in_stage("valuation", [&] { return cfg.values.build(cfg.grid); });

  std::vector<double> series = ratings_from_posteriors(posteriors, values, cfg.cpt, cfg.rule);
  Choice last = choose(posteriors.back(), values, cfg.cpt, cfg.rule);

  std::optional<FitStats> stats;
  if (ref) {
    std::vector<double> model;
    for (const auto& p : ref->points()) model.push_back(series[static_cast<std::size_t>(p.repetition - 1)]);
    const GoodnessOfFit g = goodness_of_fit(model, ref->ratings());
    stats = FitStats{g.mse, g.r2, g.r2_defined};
  }

  return ScenarioResult{
      .kind = cfg.kind,
      .resources = r,
      .likelihood = like,
      .prior = prior,
      .posteriors = std::move(posteriors),
      .profile = std::move(last.profile),
      .choice = std::move(last.distribution),
      .selection = series.back(),
      .series = std::move(series),
      .stats = stats,
      .sharing = std::nullopt,
  };
}

ScenarioResult run_sharing(const ScenarioConfig& cfg) {
  cfg.validate();
  const ResourceAllocation r = in_stage("resources", [&] { return cfg.resources.build(cfg.grid); });
  const Likelihood like = scenario_likelihood(cfg);
  const MassFunction prior = in_stage("prior", [&] { return cfg.prior.build(cfg.grid); });
  const std::vector<Likelihood> likes(cfg.sharing.n_exposures, like);
  std::vector<MassFunction> posteriors = in_stage("inference", [&] { return sequential_update(prior, likes); });

  const SharingParams& s = cfg.sharing;
  SharingOutcome out;
  out.p_true = s.p_true.value_or(truth_probability(posteriors.back()));
  out.v_share = in_stage("valuation", [&] { return share_value(s, out.p_true, cfg.cpt); });
  out.v_no_share = s.no_share;

  // Bisection for the indifference point, when V_share changes sign on [0,1].
  const double v0 = share_value(s, 0.0, cfg.cpt) - s.no_share;
  const double v1 = share_value(s, 1.0, cfg.cpt) - s.no_share;
  if ((v0 < 0.0) != (v1 < 0.0)) {
    double a = 0.0;
    double b = 1.0;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      if ((share_value(s, m, cfg.cpt) - s.no_share < 0.0) == (v0 < 0.0)) {
        a = m;
      } else {
        b = m;
      }
    }
    out.threshold = 0.5 * (a + b);
  }

  ValueProfile profile{ActionSpace::share_space(), {out.v_no_share, out.v_share}};
  const std::size_t pick = in_stage("decision", [&] { return select_greedy(profile); });
  out.decision = profile.space.label(pick);
  ActionDistribution choice = point_choice(profile.space, pick);

  return ScenarioResult{
      .kind = cfg.kind,
      .resources = r,
      .likelihood = like,
      .prior = prior,
      .posteriors = std::move(posteriors),
      .profile = std::move(profile),
      .choice = std::move(choice),
      .selection = out.decision,
      .series = {},
      .stats = std::nullopt,
      .sharing = out,
  };
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::optional<ReferenceSeries>& ref) {
  if (cfg.kind == ScenarioKind::illusory_truth) return run_illusory_truth(cfg, ref);
  if (cfg.kind == ScenarioKind::sharing) return run_sharing(cfg);
  cfg.validate();

  const ResourceAllocation r = in_stage("resources", [&] { return cfg.resources.build(cfg.grid); });
  const Likelihood like = scenario_likelihood(cfg);
  const MassFunction prior = in_stage("prior", [&] { return cfg.prior.build(cfg.grid); });
  MassFunction post = in_stage("inference", [&] { return bayes_update(prior, like); });
  const ValueSpec values = in_stage("valuation", [&] { return cfg.values.build(cfg.grid); });
  Choice c = choose(post, values, cfg.cpt, cfg.rule);

  return ScenarioResult{
      .kind = cfg.kind,
      .resources = r,
      .likelihood = like,
      .prior = prior,
      .posteriors = {std::move(post)},
      .profile = std::move(c.profile),
      .choice = std::move(c.distribution),
      .selection = c.selection,
      .series = {},
      .stats = std::nullopt,
      .sharing = std::nullopt,
  };
}

}  // namespace cogsec
