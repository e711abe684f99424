#include "cogsec/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "cogsec/error.hpp"

namespace cogsec {

ActionSpace ActionSpace::nominal(std::vector<std::string> labels) {
  if (labels.empty()) throw InvalidParameter("nominal action space needs at least one label");
  for (const auto& l : labels) {
    if (l.empty()) throw InvalidParameter("nominal action labels must be nonempty");
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw InvalidParameter("nominal action labels must be unique");
  }
  return ActionSpace(std::move(labels));
}

ActionSpace ActionSpace::share_space() { return nominal({"no_share", "share"}); }

const Grid& ActionSpace::grid() const {
  if (!is_ordinal()) throw UnsupportedRule("nominal action space has no grid");
  return std::get<Grid>(kind_);
}

const std::vector<std::string>& ActionSpace::labels() const {
  if (is_ordinal()) throw UnsupportedRule("ordinal action space has no labels");
  return std::get<std::vector<std::string>>(kind_);
}

std::size_t ActionSpace::size() const noexcept {
  return is_ordinal() ? std::get<Grid>(kind_).size() : std::get<std::vector<std::string>>(kind_).size();
}

std::string ActionSpace::label(std::size_t i) const {
  if (!is_ordinal()) return labels().at(i);
  std::ostringstream os;
  os << grid().node(i);
  return os.str();
}

void ValueProfile::validate() const {
  if (v.size() != space.size()) throw InvalidParameter("value profile length does not match action space");
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidParameter("value profile entries must be finite");
  }
}

ValueSpec ValueSpec::uniform(std::size_t n, double gain, ValueMap map) {
  return ValueSpec{std::vector<double>(n, gain), std::vector<double>(n, 0.0), map};
}

void ValueSpec::validate(std::size_t n) const {
  if (gain.size() != n || loss.size() != n) throw InvalidParameter("value spec length does not match action grid");
  for (double g : gain) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidParameter("gains must be finite and nonnegative");
  }
  for (double l : loss) {
    if (!(l <= 0.0) || !std::isfinite(l)) throw InvalidParameter("losses must be finite and nonpositive");
  }
}

MassFunction ActionDistribution::as_mass() const { return MassFunction(space.grid(), prob); }

ValueProfile veracity_profile(const MassFunction& post, const ValueSpec& spec, const CPTParams& params) {
  const std::size_t n = post.size();
  spec.validate(n);
  ValueProfile out{ActionSpace::ordinal(post.grid()), std::vector<double>(n, 0.0)};
  for (std::size_t a = 0; a < n; ++a) {
    const double p_correct = std::clamp(post[a], 0.0, 1.0);
    if (spec.value_map == ValueMap::raw_posterior) {
      out.v[a] = p_correct * spec.gain[a];
    } else {
      out.v[a] = prospect_value(Prospect::binary(spec.gain[a], p_correct, spec.loss[a]), params);
    }
  }
  return out;
}

double select_mse(const ValueProfile& profile) {
  profile.validate();
  if (!profile.space.is_ordinal()) throw UnsupportedRule("the MSE rule needs an ordinal action space");
  double total = 0.0;
  for (double x : profile.v) {
    if (x < 0.0) throw DegenerateProfile("the MSE rule needs a nonnegative value profile");
    total += x;
  }
  if (!(total > 0.0)) throw DegenerateProfile("value profile is identically zero");
  return mean(normalize(profile.v, profile.space.grid()));
}

std::size_t select_greedy(const ValueProfile& profile) {
  profile.validate();
  return static_cast<std::size_t>(
      std::distance(profile.v.begin(), std::max_element(profile.v.begin(), profile.v.end())));
}

ActionDistribution luce_shepard(const ValueProfile& profile, const SoftmaxParams& sp) {
  profile.validate();
  if (!(sp.beta_s >= 0.0) || !std::isfinite(sp.beta_s)) throw InvalidParameter("beta_s must be finite and >= 0");
  const double peak = *std::max_element(profile.v.begin(), profile.v.end());
  std::vector<double> p(profile.v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(sp.beta_s * (profile.v[i] - peak));
    total += p[i];
  }
  for (double& x : p) x /= total;
  return {profile.space, std::move(p)};
}

double softmax_mean(const ValueProfile& profile, const SoftmaxParams& sp) {
  if (!profile.space.is_ordinal()) throw UnsupportedRule("softmax mean needs an ordinal action space");
  return mean(luce_shepard(profile, sp).as_mass());
}

GoodnessOfFit goodness_of_fit(std::span<const double> model, std::span<const double> ref) {
  if (model.size() != ref.size() || ref.empty()) throw InvalidParameter("model and reference lengths differ");
  double ref_mean = 0.0;
  for (double r : ref) ref_mean += r;
  ref_mean /= static_cast<double>(ref.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ss_res += (model[i] - ref[i]) * (model[i] - ref[i]);
    ss_tot += (ref[i] - ref_mean) * (ref[i] - ref_mean);
  }
  GoodnessOfFit g;
  g.mse = ss_res / static_cast<double>(ref.size());
  if (ss_tot > 0.0) {
    g.r2 = 1.0 - ss_res / ss_tot;
  } else {
    g.r2 = std::numeric_limits<double>::quiet_NaN();
    g.r2_defined = false;
  }
  return g;
}

BetaFit fit_beta(const CurveFn& curve_fn, std::span<const double> ref, const BetaSearch& search) {
  if (ref.size() < 3) throw InvalidParameter("reference series needs at least 3 points");
  for (double r : ref) {
    if (!std::isfinite(r)) throw InvalidParameter("reference series must be finite");
  }
  if (!(search.lo > 0.0 && search.hi > search.lo && search.grid_points >= 3)) {
    throw InvalidParameter("invalid beta search range");
  }

  BetaFit fit;
  auto objective = [&](double beta, bool refinement) {
    const std::vector<double> model = curve_fn(beta);
    if (model.size() != ref.size()) throw FitFailure("model series length does not match the reference");
    for (double m : model) {
      if (!std::isfinite(m)) throw FitFailure("model produced a non-finite value at beta_s = " + std::to_string(beta));
    }
    const double mse = goodness_of_fit(model, ref).mse;
    fit.trace.push_back({beta, mse, refinement});
    return mse;
  };

  const double log_lo = std::log(search.lo);
  const double step = (std::log(search.hi) - log_lo) / static_cast<double>(search.grid_points - 1);
  std::vector<double> betas(search.grid_points);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    betas[i] = (i + 1 == betas.size()) ? search.hi : std::exp(log_lo + step * static_cast<double>(i));
  }
  std::size_t best = 0;
  double best_mse = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double mse = objective(betas[i], false);
    if (mse < best_mse) {
      best_mse = mse;
      best = i;
    }
  }

  // Golden-section refinement on the bracket around the best scan point.
  double a = betas[best == 0 ? 0 : best - 1];
  double b = betas[std::min(best + 1, betas.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c, true);
  double fd = objective(d, true);
  while (b - a > search.tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c, true);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d, true);
    }
  }
  double beta_star = 0.5 * (a + b);
  double mse_star = objective(beta_star, true);
  if (best_mse < mse_star) {
    beta_star = betas[best];
    mse_star = best_mse;
  }

  const GoodnessOfFit g = goodness_of_fit(curve_fn(beta_star), ref);
  fit.beta_s = beta_star;
  fit.mse = mse_star;
  fit.r2 = g.r2;
  fit.r2_defined = g.r2_defined;
  if (!g.r2_defined) fit.warnings.emplace_back("reference series has zero variance; R^2 is undefined");
  return fit;
}

}  // namespace cogsec
