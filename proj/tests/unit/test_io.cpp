#include <cmath>
#include <sstream>

#include "cogsec/error.hpp"
#include "cogsec/scenario_io.hpp"
#include "doctest.h"

using namespace cogsec;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const auto c = parse_config_text(R"({"kind": "normative"})");
  CHECK(c.kind == ScenarioKind::normative);
  CHECK(c.grid == rating_grid());
  CHECK(c.stimulus == 3.5);
  CHECK(c.encoder == EncoderConfig{});
  CHECK(c.cpt == CPTParams{});
  CHECK(c.seed == 0);
}

TEST_CASE("config errors name the offending field") {
  CHECK(field_of(R"({})") == "kind");
  CHECK(field_of(R"({"kind": "nope"})") == "kind");
  CHECK(field_of(R"({"kind": "normative", "extra": 1})") == "extra");
  CHECK(field_of(R"({"kind": "normative", "encoder": {"sigma_m": "x"}})") == "encoder.sigma_m");
  CHECK(field_of(R"({"kind": "normative", "encoder": {"sigma_m": -1}})") == "encoder.sigma_m");
  CHECK(field_of(R"({"kind": "normative", "encoder": {"typo": 1}})") == "encoder.typo");
  CHECK(field_of(R"({"kind": "availability", "resources": {"type": "ramp", "bias": 3}})") == "resources.bias");
  CHECK(field_of(R"({"kind": "normative", "values": {"gain_bumps": [{"center": 1, "wdth": 2}]}})") ==
        "values.gain_bumps[0].wdth");
  CHECK(field_of(R"({"kind": "normative", "prior": {"type": "explicit", "values": [1, 2]}})") == "prior.values");
  CHECK(field_of(R"({"kind": "sharing", "rule": {"type": "greedy"}, "sharing": {"variant": "odd"}})") ==
        "sharing.variant");
  CHECK(field_of(R"({"kind": "normative", "seed": -4})") == "seed");
  CHECK(field_of(R"({"kind": "illusory_truth", "resources": {"type": "ramp", "bias": 0.2},
                     "illusory_truth": {"n_reps": 0}})") == "illusory_truth.n_reps");
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_config_text("{\n  \"kind\": \"normative\",\n  \"stimulus\": ,\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "line 3, column 15");
  }
}

TEST_CASE("resolved config round-trips") {
  const auto c = parse_config_text(R"({
    "kind": "sharing", "stimulus": 2.5,
    "resources": {"type": "ramp", "bias": 0.7},
    "encoder": {"sigma_m": 0.5, "sigma_c": 0.75, "credibility": 0.9, "stochastic": true},
    "prior": {"type": "gaussian", "mu": 3.1, "sigma": 0.4},
    "values": {"map": "cpt", "gain": 2, "gain_bumps": [{"center": 1, "width": 0.3, "height": 4}], "loss": -1},
    "cpt": {"alpha": 0.9, "lambda": 2},
    "rule": {"type": "greedy"},
    "sharing": {"variant": "compromised", "share_false": -0.5, "n_exposures": 3, "p_true": 0.4},
    "seed": 12345678901234
  })");
  CHECK(parse_config(config_to_json(c)) == c);
  CHECK(c.sharing.p_true == 0.4);
  CHECK(c.seed == 12345678901234ULL);
}

TEST_CASE("result JSON round-trips for every kind") {
  std::vector<ScenarioConfig> cfgs;
  for (auto text : {R"({"kind": "normative", "grid": {"n": 101}})",
                    R"({"kind": "anchoring", "grid": {"n": 101}, "resources": {"type": "bump", "center": 2}})",
                    R"({"kind": "discredited", "grid": {"n": 101}, "encoder": {"credibility": 0}})",
                    R"({"kind": "illusory_truth", "grid": {"n": 101}, "resources": {"type": "ramp", "bias": 0.5},
                        "rule": {"type": "softmax", "beta_s": 3}})",
                    R"({"kind": "sharing", "grid": {"n": 101}, "rule": {"type": "greedy"}})"}) {
    cfgs.push_back(parse_config_text(text));
  }
  for (const auto& c : cfgs) {
    const auto r = run_scenario(c);
    const auto text = dump_json(result_to_json(r));
    const auto back = result_from_json(json::parse(text));
    CHECK(back == r);
    CHECK(dump_json(result_to_json(back)) == text);
  }
  // NaN R^2 survives as null.
  auto c = cfgs[3];
  const auto r = run_scenario(c, ReferenceSeries({{1, 4}, {2, 4}, {3, 4}}));
  REQUIRE(r.stats);
  CHECK(std::isnan(r.stats->r2));
  CHECK(result_from_json(result_to_json(r)) == r);
}

TEST_CASE("reference CSV parsing") {
  std::istringstream good("# comment\nrepetition,mean_rating\n1,3.5\n2, 3.75\r\n\n4,4.0\n");
  const auto s = parse_reference_csv(good);
  CHECK(s.points().size() == 3);
  CHECK(s.points()[2].repetition == 4);
  CHECK(s.ratings()[1] == 3.75);

  auto row_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_reference_csv(in);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  CHECK(row_of("rep,rating\n1,3\n") == "row 1");
  CHECK(row_of("repetition,mean_rating\n1,3\n2,abc\n") == "row 3");
  CHECK(row_of("repetition,mean_rating\n1,3\n1,4\n") == "row 3");
  CHECK(row_of("repetition,mean_rating\n0,3\n") == "row 2");
  CHECK(row_of("repetition,mean_rating\n1,7\n") == "row 2");
  CHECK(row_of("repetition,mean_rating\n1,3,4\n") == "row 2");
  CHECK(row_of("repetition,mean_rating\n") == "row 1");
  CHECK(row_of("") == "row 1");
}

TEST_CASE("number formatting is 12 significant digits, locale free") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(-123456.7890123) == "-123456.789012");
  std::ostringstream out;
  write_stage_csv(out, Grid(0, 1, 3), std::vector<double>{0.25, 0.5, 0.25});
  CHECK(out.str() == "node,value\n0,0.25\n0.5,0.5\n1,0.25\n");
}
