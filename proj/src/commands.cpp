#include "cogsec/commands.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cogsec/error.hpp"
#include "cogsec/infometrics.hpp"
#include "cogsec/scenario_io.hpp"

#ifndef COGSEC_VERSION
#define COGSEC_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace cogsec {

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.error_class() == ErrorClass::input ? kExitInput : kExitNumerical;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidParameter("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidParameter("failed writing " + path.string());
}

void prepare_out_dir(const fs::path& dir) {
  if (dir.empty()) throw InvalidParameter("--out is required");
  fs::create_directories(dir);
}

struct LoadedConfig {
  fs::path path;
  ScenarioConfig cfg;
  std::string hash;
};

LoadedConfig load(const fs::path& arg, const std::optional<std::uint64_t>& seed) {
  LoadedConfig lc;
  lc.path = resolve_config_path(arg);
  lc.cfg = load_config(lc.path);
  if (seed) lc.cfg.seed = *seed;
  lc.hash = sha256_hex(dump_json(config_to_json(lc.cfg)));
  return lc;
}

json manifest(const LoadedConfig& lc, const std::vector<fs::path>& outputs, double wall_seconds) {
  json files = json::array();
  for (const auto& p : outputs) files.push_back(p.generic_string());
  return json{
      {"config_path", lc.path.generic_string()},
      {"config_hash", lc.hash},
      {"seed", lc.cfg.seed},
      {"version", COGSEC_VERSION},
      {"outputs", files},
      {"wall_time_s", wall_seconds},
  };
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_text(const Grid& g, std::span<const double> v) {
  std::ostringstream s;
  write_stage_csv(s, g, v);
  return s.str();
}

std::string action_csv(const ActionSpace& space, std::span<const double> v) {
  if (space.is_ordinal()) return csv_text(space.grid(), v);
  std::ostringstream s;
  write_stage_csv(s, space.labels(), v);
  return s.str();
}

std::vector<fs::path> write_result_files(const fs::path& dir, const ScenarioResult& r) {
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(dir / name, text);
    written.push_back(dir / name);
  };
  const Grid& g = r.prior.grid();

  emit("result.json", dump_json(result_to_json(r)));
  emit("resources.csv", csv_text(g, r.resources.density()));
  emit("likelihood.csv", csv_text(g, r.likelihood.weight()));
  emit("prior.csv", csv_text(g, r.prior.mass()));
  emit("posterior.csv", csv_text(g, r.posterior().mass()));
  if (r.posteriors.size() > 1) {
    for (std::size_t t = 0; t < r.posteriors.size(); ++t) {
      std::ostringstream name;
      name << "posterior_rep" << std::setw(2) << std::setfill('0') << (t + 1) << ".csv";
      emit(name.str(), csv_text(g, r.posteriors[t].mass()));
    }
  }
  emit("profile.csv", action_csv(r.profile.space, r.profile.v));
  emit("choice.csv", action_csv(r.choice.space, r.choice.prob));
  if (!r.series.empty()) {
    std::ostringstream s;
    s << "repetition,rating\n";
    for (std::size_t t = 0; t < r.series.size(); ++t) s << (t + 1) << ',' << format_number(r.series[t]) << '\n';
    emit("series.csv", s.str());
  }
  return written;
}

// Sets one numeric field of a resolved config document, addressed by a
// dotted path ("values.gain_bumps.0.height" reaches into arrays).
ScenarioConfig with_field(const ScenarioConfig& base, const std::string& dotted, double value) {
  if (dotted.empty()) throw ConfigError("--param", "is required");
  std::string pointer = "/" + dotted;
  for (char& c : pointer) {
    if (c == '.') c = '/';
  }
  json doc = config_to_json(base);
  json::json_pointer ptr;
  try {
    ptr = json::json_pointer(pointer);
  } catch (const json::exception&) {
    throw ConfigError(dotted, "not a valid field path");
  }
  if (!doc.contains(ptr)) throw ConfigError(dotted, "unknown field");
  json& slot = doc[ptr];
  if (slot.is_number_integer()) {
    if (value != std::floor(value) || value < 0.0) throw ConfigError(dotted, "takes nonnegative integer values");
    slot = static_cast<std::uint64_t>(value);
  } else if (slot.is_number() || slot.is_null()) {
    slot = value;
  } else {
    throw ConfigError(dotted, "is not a numeric field");
  }
  return parse_config(doc);
}

std::string selection_text(const Selection& s) {
  if (const auto* d = std::get_if<double>(&s)) return format_number(*d);
  return std::get<std::string>(s);
}

std::vector<std::size_t> parse_subset(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, comma - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidParameter("--subset: '" + item + "' is not a nonnegative integer index");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw InvalidParameter(what + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalFailure("SHA-256 digest failed");
  }
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return s.str();
}

fs::path preset_directory() {
  if (const char* env = std::getenv("COGSEC_PRESETS"); env && *env) return env;
#ifdef COGSEC_DEFAULT_PRESET_DIR
  return COGSEC_DEFAULT_PRESET_DIR;
#else
  return "presets";
#endif
}

fs::path resolve_config_path(const fs::path& p) {
  if (p.empty()) throw ConfigError("--config", "is required");
  if (fs::is_regular_file(p)) return p;
  if (!p.has_parent_path()) {
    const fs::path dir = preset_directory();
    if (fs::is_regular_file(dir / p)) return dir / p;
    fs::path with_ext = dir / p;
    with_ext += ".json";
    if (fs::is_regular_file(with_ext)) return with_ext;
  }
  throw ConfigError("--config", "no such file or preset: " + p.string());
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0], "--range")};
  if (parts.size() != 3) throw InvalidParameter("--range must be start:stop:step");
  const double a = parse_double(parts[0], "--range start");
  const double b = parse_double(parts[1], "--range stop");
  const double step = parse_double(parts[2], "--range step");
  if (!(step > 0.0)) throw InvalidParameter("--range step must be positive");
  if (b < a) throw InvalidParameter("--range stop is below start");
  // Points are start + i*step so rounding does not accumulate; stop is
  // included when it lies on the lattice up to rounding.
  const double span = (b - a) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  if (count > 1000000) throw InvalidParameter("--range has too many points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = a + static_cast<double>(i) * step;
  if (std::abs(out.back() - b) <= 1e-9 * std::max(1.0, std::abs(b))) out.back() = b;
  return out;
}

int cmd_run(const RunOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const LoadedConfig lc = load(opts.config, opts.seed);
    std::optional<ReferenceSeries> ref;
    if (opts.ref) ref = load_reference_csv(*opts.ref);
    prepare_out_dir(opts.out);

    const ScenarioResult result = run_scenario(lc.cfg, ref);
    std::vector<fs::path> outputs = write_result_files(opts.out, result);
    outputs.push_back(opts.out / "manifest.json");
    write_file(opts.out / "manifest.json", dump_json(manifest(lc, outputs, seconds_since(t0))));
    return kExitOk;
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const LoadedConfig lc = load(opts.config, opts.seed);
    const std::vector<double> points = parse_range(opts.range);

    // Resolve every row's config before running anything, so a bad field
    // fails fast with no partial output.
    std::vector<ScenarioConfig> configs;
    configs.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      ScenarioConfig c = with_field(lc.cfg, opts.param, points[i]);
      c.seed = lc.cfg.seed + i;
      configs.push_back(std::move(c));
    }
    prepare_out_dir(opts.out);

    std::ostringstream csv;
    csv << "param,selection,decision,p_true,v_share,final_rating\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const ScenarioResult r = run_scenario(configs[i]);
      csv << format_number(points[i]) << ',' << selection_text(r.selection) << ',';
      if (r.sharing) {
        csv << r.sharing->decision << ',' << format_number(r.sharing->p_true) << ','
            << format_number(r.sharing->v_share);
      } else {
        csv << ",,";
      }
      csv << ',';
      if (!r.series.empty()) csv << format_number(r.series.back());
      csv << '\n';
    }
    write_file(opts.out / "sweep.csv", csv.str());
    const std::vector<fs::path> outputs{opts.out / "sweep.csv", opts.out / "manifest.json"};
    json m = manifest(lc, outputs, seconds_since(t0));
    m["sweep"] = {{"param", opts.param}, {"range", opts.range}, {"rows", points.size()}};
    write_file(opts.out / "manifest.json", dump_json(m));
    return kExitOk;
  });
}

int cmd_fit(const FitOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const LoadedConfig lc = load(opts.config, opts.seed);
    const ScenarioConfig& cfg = lc.cfg;
    if (cfg.kind != ScenarioKind::illusory_truth) throw ConfigError("kind", "fit needs an illusory_truth config");
    if (cfg.rule.type != ChoiceRule::Type::softmax) throw ConfigError("rule.type", "fit needs the softmax rule");
    if (opts.ref.empty()) throw ConfigError("--ref", "is required");
    const ReferenceSeries ref = load_reference_csv(opts.ref);
    if (ref.max_repetition() > static_cast<int>(cfg.n_reps)) {
      throw ConfigError("illusory_truth.n_reps", "reference series extends to repetition " +
                                                    std::to_string(ref.max_repetition()));
    }
    prepare_out_dir(opts.out);

    // Posteriors do not depend on beta_s; compute them once.
    const std::vector<MassFunction> all = illusory_posteriors(cfg);
    std::vector<MassFunction> at_ref;
    for (const auto& p : ref.points()) at_ref.push_back(all[static_cast<std::size_t>(p.repetition - 1)]);
    const ValueSpec values = cfg.values.build(cfg.grid);

    const CurveFn curve = [&](double beta) {
      ChoiceRule rule = cfg.rule;
      rule.beta_s = beta;
      return ratings_from_posteriors(at_ref, values, cfg.cpt, rule);
    };
    const BetaFit fit = fit_beta(curve, ref.ratings());

    ChoiceRule best = cfg.rule;
    best.beta_s = fit.beta_s;
    const std::vector<double> series = ratings_from_posteriors(all, values, cfg.cpt, best);

    json trace = json::array();
    for (const auto& t : fit.trace) {
      trace.push_back({{"beta_s", t.beta_s}, {"mse", t.mse}, {"phase", t.refinement ? "refine" : "scan"}});
    }
    json reference = json::array();
    for (const auto& p : ref.points()) reference.push_back({{"repetition", p.repetition}, {"mean_rating", p.mean_rating}});

    const json doc{
        {"beta_s", fit.beta_s},
        {"mse", fit.mse},
        {"r2", std::isfinite(fit.r2) ? json(fit.r2) : json(nullptr)},
        {"r2_defined", fit.r2_defined},
        {"warnings", fit.warnings},
        {"ratings", series},
        {"reference", reference},
        {"trace", trace},
    };
    write_file(opts.out / "fit.json", dump_json(doc));
    const std::vector<fs::path> outputs{opts.out / "fit.json", opts.out / "manifest.json"};
    json m = manifest(lc, outputs, seconds_since(t0));
    m["reference_path"] = opts.ref.generic_string();
    write_file(opts.out / "manifest.json", dump_json(m));
    return kExitOk;
  });
}

int cmd_info(const InfoOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ObservationModel model = ObservationModel::gaussian(opts.gaussian_sigma, opts.n);
    const UtilizableSubset u =
        opts.subset ? UtilizableSubset(parse_subset(*opts.subset), opts.n) : UtilizableSubset::full(opts.n);
    const double ratio = utilizable_ratio(model, u, opts.x);

    NumericalOptions num;
    if (opts.monte_carlo) {
      num.expectation = Expectation::monte_carlo;
      num.mc_draws = opts.draws;
      num.seed = opts.seed;
    }
    const FisherEstimate numerical = fisher_information_numerical(model, opts.x, num);

    json doc{
        {"J", fisher_information(model, opts.x)},
        {"J_numerical", numerical.value},
        {"J_utilizable", fisher_information(model.with_n_obs(u.size()), opts.x)},
        {"ratio", ratio},
        {"n", opts.n},
        {"subset_size", u.size()},
        {"sigma", opts.gaussian_sigma},
        {"x", opts.x},
        {"expectation", opts.monte_carlo ? "monte_carlo" : "quadrature"},
    };
    if (numerical.standard_error) doc["J_numerical_se"] = *numerical.standard_error;
    out << dump_json(doc);
    return kExitOk;
  });
}

}  // namespace cogsec
