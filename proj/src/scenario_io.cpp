#include "cogsec/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cogsec/error.hpp"

namespace cogsec {

namespace {

// Cursor over one JSON object that tracks its dotted path and rejects keys
// that were never read.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) {
    seen_.insert(std::string(key));
    return obj_.contains(key) && !obj_.at(std::string(key)).is_null();
  }

  double number(std::string_view key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(std::string(key));
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key), "must be finite");
    return x;
  }

  std::size_t count(std::string_view key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(std::string(key));
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(field(key), "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::uint64_t seed(std::string_view key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(std::string(key));
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(field(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(std::string_view key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(std::string(key));
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(std::string_view key, std::string fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(std::string(key));
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }

  const json* child(std::string_view key) {
    if (!has(key)) return nullptr;
    return &obj_.at(std::string(key));
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> number_array(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::vector<ValueBump> parse_bumps(const json* arr, const std::string& path) {
  std::vector<ValueBump> out;
  if (!arr) return out;
  if (!arr->is_array()) throw ConfigError(path, "expected an array");
  for (std::size_t i = 0; i < arr->size(); ++i) {
    Fields f((*arr)[i], path + "[" + std::to_string(i) + "]");
    ValueBump b;
    b.center = f.number("center", b.center);
    b.width = f.number("width", b.width);
    b.height = f.number("height", b.height);
    if (!(b.width > 0.0)) throw ConfigError(f.field("width"), "must be positive");
    f.finish();
    out.push_back(b);
  }
  return out;
}

json bumps_to_json(const std::vector<ValueBump>& bumps) {
  json arr = json::array();
  for (const auto& b : bumps) arr.push_back({{"center", b.center}, {"width", b.width}, {"height", b.height}});
  return arr;
}

std::string_view to_string(ResourceSpec::Type t) {
  switch (t) {
    case ResourceSpec::Type::uniform:
      return "uniform";
    case ResourceSpec::Type::ramp:
      return "ramp";
    case ResourceSpec::Type::bump:
      return "bump";
  }
  return "uniform";
}

std::string_view to_string(PriorSpec::Type t) {
  switch (t) {
    case PriorSpec::Type::uniform:
      return "uniform";
    case PriorSpec::Type::explicit_values:
      return "explicit";
    case PriorSpec::Type::gaussian:
      return "gaussian";
  }
  return "uniform";
}

std::string_view to_string(ChoiceRule::Type t) {
  switch (t) {
    case ChoiceRule::Type::mse:
      return "mse";
    case ChoiceRule::Type::greedy:
      return "greedy";
    case ChoiceRule::Type::softmax:
      return "softmax";
  }
  return "mse";
}

std::string_view to_string(ValueMap m) { return m == ValueMap::cpt ? "cpt" : "raw_posterior"; }

json grid_to_json(const Grid& g) { return {{"lo", g.lo()}, {"hi", g.hi()}, {"n", g.size()}}; }

Grid grid_from_json(const json& j) {
  return Grid(j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("n").get<std::size_t>());
}

json vec(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

// JSON has no NaN; nulls stand in for it.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  ScenarioConfig cfg;
  Fields root(doc, "");

  const std::string kind = root.string("kind", "");
  if (kind.empty()) throw ConfigError("kind", "is required");
  const auto k = parse_scenario_kind(kind);
  if (!k) throw ConfigError("kind", "unknown scenario kind '" + kind + "'");
  cfg.kind = *k;

  if (const json* g = root.child("grid")) {
    Fields f(*g, "grid");
    const double lo = f.number("lo", 1.0);
    const double hi = f.number("hi", 6.0);
    const std::size_t n = f.count("n", 501);
    f.finish();
    try {
      cfg.grid = Grid(lo, hi, n);
    } catch (const InvalidParameter& e) {
      throw ConfigError("grid", e.what());
    }
  }

  cfg.stimulus = root.number("stimulus", cfg.grid.midpoint());

  if (const json* r = root.child("resources")) {
    Fields f(*r, "resources");
    const std::string type = f.string("type", "uniform");
    if (type == "uniform") {
      cfg.resources.type = ResourceSpec::Type::uniform;
    } else if (type == "ramp") {
      cfg.resources.type = ResourceSpec::Type::ramp;
      cfg.resources.bias = f.number("bias", 0.0);
      if (!(std::abs(cfg.resources.bias) <= 1.0)) throw ConfigError("resources.bias", "must lie in [-1,1]");
    } else if (type == "bump") {
      cfg.resources.type = ResourceSpec::Type::bump;
      cfg.resources.center = f.number("center", cfg.resources.center);
      cfg.resources.width = f.number("width", cfg.resources.width);
      cfg.resources.floor = f.number("floor", cfg.resources.floor);
      if (!cfg.grid.contains(cfg.resources.center)) throw ConfigError("resources.center", "must lie within the grid");
      if (!(cfg.resources.width > 0.0)) throw ConfigError("resources.width", "must be positive");
      if (!(cfg.resources.floor >= 0.0 && cfg.resources.floor < 1.0)) {
        throw ConfigError("resources.floor", "must lie in [0,1)");
      }
    } else {
      throw ConfigError("resources.type", "expected uniform, ramp or bump");
    }
    f.finish();
  }

  if (const json* e = root.child("encoder")) {
    Fields f(*e, "encoder");
    cfg.encoder.sigma_m = f.number("sigma_m", cfg.encoder.sigma_m);
    cfg.encoder.sigma_c = f.number("sigma_c", cfg.encoder.sigma_c);
    cfg.encoder.credibility = f.number("credibility", cfg.encoder.credibility);
    cfg.stochastic = f.boolean("stochastic", false);
    f.finish();
    if (!(cfg.encoder.sigma_m > 0.0)) throw ConfigError("encoder.sigma_m", "must be positive");
    if (!(cfg.encoder.sigma_c > 0.0)) throw ConfigError("encoder.sigma_c", "must be positive");
    if (!(cfg.encoder.credibility >= 0.0 && cfg.encoder.credibility <= 1.0)) {
      throw ConfigError("encoder.credibility", "must lie in [0,1]");
    }
  }

  if (const json* p = root.child("prior")) {
    Fields f(*p, "prior");
    const std::string type = f.string("type", "uniform");
    if (type == "uniform") {
      cfg.prior.type = PriorSpec::Type::uniform;
    } else if (type == "explicit") {
      cfg.prior.type = PriorSpec::Type::explicit_values;
      const json* v = f.child("values");
      if (!v) throw ConfigError("prior.values", "is required for an explicit prior");
      cfg.prior.values = number_array(*v, "prior.values");
    } else if (type == "gaussian") {
      cfg.prior.type = PriorSpec::Type::gaussian;
      cfg.prior.mu = f.number("mu", cfg.prior.mu);
      cfg.prior.sigma = f.number("sigma", cfg.prior.sigma);
      if (!(cfg.prior.sigma > 0.0)) throw ConfigError("prior.sigma", "must be positive");
    } else {
      throw ConfigError("prior.type", "expected uniform, explicit or gaussian");
    }
    f.finish();
  }

  if (const json* v = root.child("values")) {
    Fields f(*v, "values");
    const std::string map = f.string("map", "raw_posterior");
    if (map == "raw_posterior") {
      cfg.values.map = ValueMap::raw_posterior;
    } else if (map == "cpt") {
      cfg.values.map = ValueMap::cpt;
    } else {
      throw ConfigError("values.map", "expected raw_posterior or cpt");
    }
    cfg.values.gain_base = f.number("gain", cfg.values.gain_base);
    cfg.values.gain_bumps = parse_bumps(f.child("gain_bumps"), "values.gain_bumps");
    cfg.values.loss_base = f.number("loss", cfg.values.loss_base);
    cfg.values.loss_bumps = parse_bumps(f.child("loss_bumps"), "values.loss_bumps");
    f.finish();
    if (!(cfg.values.gain_base >= 0.0)) throw ConfigError("values.gain", "must be >= 0");
    if (!(cfg.values.loss_base <= 0.0)) throw ConfigError("values.loss", "must be <= 0");
  }

  if (const json* c = root.child("cpt")) {
    Fields f(*c, "cpt");
    cfg.cpt.alpha = f.number("alpha", cfg.cpt.alpha);
    cfg.cpt.beta_v = f.number("beta_v", cfg.cpt.beta_v);
    cfg.cpt.lambda = f.number("lambda", cfg.cpt.lambda);
    cfg.cpt.gamma_plus = f.number("gamma_plus", cfg.cpt.gamma_plus);
    cfg.cpt.gamma_minus = f.number("gamma_minus", cfg.cpt.gamma_minus);
    f.finish();
  }

  if (const json* r = root.child("rule")) {
    Fields f(*r, "rule");
    const std::string type = f.string("type", "mse");
    if (type == "mse") {
      cfg.rule.type = ChoiceRule::Type::mse;
    } else if (type == "greedy") {
      cfg.rule.type = ChoiceRule::Type::greedy;
    } else if (type == "softmax") {
      cfg.rule.type = ChoiceRule::Type::softmax;
      cfg.rule.beta_s = f.number("beta_s", cfg.rule.beta_s);
    } else {
      throw ConfigError("rule.type", "expected mse, greedy or softmax");
    }
    f.finish();
  }

  if (const json* it = root.child("illusory_truth")) {
    Fields f(*it, "illusory_truth");
    cfg.n_reps = f.count("n_reps", cfg.n_reps);
    f.finish();
  }

  if (const json* s = root.child("sharing")) {
    Fields f(*s, "sharing");
    const std::string variant = f.string("variant", "normative");
    const auto v = parse_sharing_variant(variant);
    if (!v) throw ConfigError("sharing.variant", "expected normative, misaligned or compromised");
    cfg.sharing.variant = *v;
    cfg.sharing.share_truth = f.number("share_truth", cfg.sharing.share_truth);
    cfg.sharing.share_false = f.number("share_false", cfg.sharing.share_false);
    cfg.sharing.no_share = f.number("no_share", cfg.sharing.no_share);
    cfg.sharing.n_exposures = f.count("n_exposures", cfg.sharing.n_exposures);
    if (f.has("p_true")) cfg.sharing.p_true = f.number("p_true", 0.0);
    f.finish();
  }

  cfg.seed = root.seed("seed", 0);
  root.finish();

  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line/column for the diagnostic.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json config_to_json(const ScenarioConfig& cfg) {
  json resources = {{"type", to_string(cfg.resources.type)}};
  if (cfg.resources.type == ResourceSpec::Type::ramp) resources["bias"] = cfg.resources.bias;
  if (cfg.resources.type == ResourceSpec::Type::bump) {
    resources["center"] = cfg.resources.center;
    resources["width"] = cfg.resources.width;
    resources["floor"] = cfg.resources.floor;
  }

  json prior = {{"type", to_string(cfg.prior.type)}};
  if (cfg.prior.type == PriorSpec::Type::explicit_values) prior["values"] = cfg.prior.values;
  if (cfg.prior.type == PriorSpec::Type::gaussian) {
    prior["mu"] = cfg.prior.mu;
    prior["sigma"] = cfg.prior.sigma;
  }

  json rule = {{"type", to_string(cfg.rule.type)}};
  if (cfg.rule.type == ChoiceRule::Type::softmax) rule["beta_s"] = cfg.rule.beta_s;

  return json{
      {"kind", to_string(cfg.kind)},
      {"grid", grid_to_json(cfg.grid)},
      {"stimulus", cfg.stimulus},
      {"resources", resources},
      {"encoder",
       {{"sigma_m", cfg.encoder.sigma_m},
        {"sigma_c", cfg.encoder.sigma_c},
        {"credibility", cfg.encoder.credibility},
        {"stochastic", cfg.stochastic}}},
      {"prior", prior},
      {"values",
       {{"map", to_string(cfg.values.map)},
        {"gain", cfg.values.gain_base},
        {"gain_bumps", bumps_to_json(cfg.values.gain_bumps)},
        {"loss", cfg.values.loss_base},
        {"loss_bumps", bumps_to_json(cfg.values.loss_bumps)}}},
      {"cpt",
       {{"alpha", cfg.cpt.alpha},
        {"beta_v", cfg.cpt.beta_v},
        {"lambda", cfg.cpt.lambda},
        {"gamma_plus", cfg.cpt.gamma_plus},
        {"gamma_minus", cfg.cpt.gamma_minus}}},
      {"rule", rule},
      {"illusory_truth", {{"n_reps", cfg.n_reps}}},
      {"sharing",
       {{"variant", to_string(cfg.sharing.variant)},
        {"share_truth", cfg.sharing.share_truth},
        {"share_false", cfg.sharing.share_false},
        {"no_share", cfg.sharing.no_share},
        {"n_exposures", cfg.sharing.n_exposures},
        {"p_true", cfg.sharing.p_true ? json(*cfg.sharing.p_true) : json(nullptr)}}},
      {"seed", cfg.seed},
  };
}

json result_to_json(const ScenarioResult& r) {
  json posteriors = json::array();
  for (const auto& p : r.posteriors) posteriors.push_back(vec(p.mass()));

  json actions = r.profile.space.is_ordinal() ? json{{"type", "ordinal"}}
                                              : json{{"type", "nominal"}, {"labels", r.profile.space.labels()}};

  json selection = std::holds_alternative<double>(r.selection) ? json(std::get<double>(r.selection))
                                                               : json(std::get<std::string>(r.selection));

  json stats = nullptr;
  if (r.stats) stats = {{"mse", r.stats->mse}, {"r2", number_or_null(r.stats->r2)}, {"r2_defined", r.stats->r2_defined}};

  json sharing = nullptr;
  if (r.sharing) {
    sharing = {{"p_true", r.sharing->p_true},
               {"v_share", r.sharing->v_share},
               {"v_no_share", r.sharing->v_no_share},
               {"threshold", r.sharing->threshold ? json(*r.sharing->threshold) : json(nullptr)},
               {"decision", r.sharing->decision}};
  }

  return json{
      {"kind", to_string(r.kind)},
      {"grid", grid_to_json(r.prior.grid())},
      {"stages",
       {{"resources", vec(r.resources.density())},
        {"likelihood", vec(r.likelihood.weight())},
        {"prior", vec(r.prior.mass())},
        {"posteriors", posteriors},
        {"profile", r.profile.v},
        {"choice", r.choice.prob}}},
      {"actions", actions},
      {"selection", selection},
      {"series", r.series},
      {"stats", stats},
      {"sharing", sharing},
  };
}

ScenarioResult result_from_json(const json& doc) {
  try {
    const auto kind = parse_scenario_kind(doc.at("kind").get<std::string>());
    if (!kind) throw ConfigError("kind", "unknown scenario kind");
    const Grid grid = grid_from_json(doc.at("grid"));
    const json& stages = doc.at("stages");

    std::vector<MassFunction> posteriors;
    for (const auto& p : stages.at("posteriors")) posteriors.emplace_back(grid, p.get<std::vector<double>>());

    const json& actions = doc.at("actions");
    const ActionSpace space = actions.at("type") == "ordinal"
                                  ? ActionSpace::ordinal(grid)
                                  : ActionSpace::nominal(actions.at("labels").get<std::vector<std::string>>());

    Selection selection;
    if (doc.at("selection").is_string()) {
      selection = doc.at("selection").get<std::string>();
    } else {
      selection = doc.at("selection").get<double>();
    }

    std::optional<FitStats> stats;
    if (!doc.at("stats").is_null()) {
      const json& s = doc.at("stats");
      stats = FitStats{s.at("mse").get<double>(), number_from(s.at("r2")), s.at("r2_defined").get<bool>()};
    }

    std::optional<SharingOutcome> sharing;
    if (!doc.at("sharing").is_null()) {
      const json& s = doc.at("sharing");
      SharingOutcome o;
      o.p_true = s.at("p_true").get<double>();
      o.v_share = s.at("v_share").get<double>();
      o.v_no_share = s.at("v_no_share").get<double>();
      if (!s.at("threshold").is_null()) o.threshold = s.at("threshold").get<double>();
      o.decision = s.at("decision").get<std::string>();
      sharing = o;
    }

    return ScenarioResult{
        .kind = *kind,
        .resources = ResourceAllocation::restore(grid, stages.at("resources").get<std::vector<double>>()),
        .likelihood = Likelihood(grid, stages.at("likelihood").get<std::vector<double>>()),
        .prior = MassFunction(grid, stages.at("prior").get<std::vector<double>>()),
        .posteriors = std::move(posteriors),
        .profile = ValueProfile{space, stages.at("profile").get<std::vector<double>>()},
        .choice = ActionDistribution{space, stages.at("choice").get<std::vector<double>>()},
        .selection = selection,
        .series = doc.at("series").get<std::vector<double>>(),
        .stats = stats,
        .sharing = sharing,
    };
  } catch (const json::exception& e) {
    throw ConfigError("result", std::string("malformed result document: ") + e.what());
  }
}

ReferenceSeries parse_reference_csv(std::istream& in) {
  std::vector<ReferencePoint> points;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = "row " + std::to_string(row);
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ConfigError(where, "expected exactly two columns");
    }
    const std::string a = trim(t.substr(0, comma));
    const std::string b = trim(t.substr(comma + 1));
    if (!header_seen) {
      if (a != "repetition" || b != "mean_rating") throw ConfigError(where, "header must be 'repetition,mean_rating'");
      header_seen = true;
      continue;
    }
    ReferencePoint p{};
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), p.repetition);
    if (ra.ec != std::errc() || ra.ptr != a.data() + a.size()) throw ConfigError(where, "repetition is not an integer");
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), p.mean_rating);
    if (rb.ec != std::errc() || rb.ptr != b.data() + b.size() || !std::isfinite(p.mean_rating)) {
      throw ConfigError(where, "mean_rating is not a number");
    }
    if (p.repetition < 1) throw ConfigError(where, "repetition must be >= 1");
    if (!points.empty() && p.repetition <= points.back().repetition) {
      throw ConfigError(where, "repetitions must be strictly increasing");
    }
    if (!(p.mean_rating >= 1.0 && p.mean_rating <= 6.0)) throw ConfigError(where, "mean_rating must lie in [1,6]");
    points.push_back(p);
  }
  if (!header_seen) throw ConfigError("row 1", "missing header 'repetition,mean_rating'");
  if (points.empty()) throw ConfigError("row " + std::to_string(row), "reference series has no data rows");
  return ReferenceSeries(std::move(points));
}

ReferenceSeries load_reference_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open reference file " + path.string());
  return parse_reference_csv(in);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void write_stage_csv(std::ostream& out, std::span<const std::string> nodes, std::span<const double> values) {
  out << "node,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << nodes[i] << ',' << format_number(values[i]) << '\n';
}

void write_stage_csv(std::ostream& out, const Grid& grid, std::span<const double> values) {
  out << "node,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_number(grid.node(i)) << ',' << format_number(values[i]) << '\n';
  }
}

}  // namespace cogsec
