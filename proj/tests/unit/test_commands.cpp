#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cogsec/commands.hpp"
#include "cogsec/scenario_io.hpp"
#include "doctest.h"

using namespace cogsec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "cogsec_unit" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_CASE("range parsing") {
  CHECK(parse_range("0.5") == std::vector<double>{0.5});
  const auto r = parse_range("0:1:0.1");
  REQUIRE(r.size() == 11);
  CHECK(r.back() == 1.0);
  CHECK(r[3] == doctest::Approx(0.3));
  CHECK(parse_range("2:2:1").size() == 1);
  CHECK_THROWS(parse_range("0:1"));
  CHECK_THROWS(parse_range("0:1:0"));
  CHECK_THROWS(parse_range("1:0:0.1"));
  CHECK_THROWS(parse_range("a:b:c"));
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("preset lookup honours the environment override") {
  const auto dir = scratch("presets");
  write(dir / "mine.json", R"({"kind": "normative"})");
  setenv("COGSEC_PRESETS", dir.c_str(), 1);
  CHECK(resolve_config_path("mine") == dir / "mine.json");
  CHECK(resolve_config_path("mine.json") == dir / "mine.json");
  CHECK_THROWS(resolve_config_path("absent"));
  unsetenv("COGSEC_PRESETS");
  CHECK(fs::is_regular_file(resolve_config_path("normative")));
}

TEST_CASE("run writes stage files and a manifest") {
  const auto out = scratch("run");
  std::ostringstream err;
  REQUIRE(cmd_run({"discredited", out, std::nullopt, 5}, err) == kExitOk);
  for (auto f : {"result.json", "resources.csv", "likelihood.csv", "prior.csv", "posterior.csv", "profile.csv",
                 "choice.csv", "manifest.json"}) {
    CHECK(fs::is_regular_file(out / f));
  }
  CHECK(slurp(out / "posterior.csv") == slurp(out / "prior.csv"));
  const auto m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["seed"] == 5);
  CHECK(m["config_hash"].get<std::string>().size() == 64);
  for (const auto& p : m["outputs"]) CHECK(fs::exists(p.get<std::string>()));

  const auto again = scratch("run_again");
  REQUIRE(cmd_run({"discredited", again, std::nullopt, 5}, err) == kExitOk);
  CHECK(slurp(out / "result.json") == slurp(again / "result.json"));
}

TEST_CASE("run exit codes") {
  const auto dir = scratch("codes");
  std::ostringstream err;
  CHECK(cmd_run({write(dir / "bad.json", "{\"kind\": \"normative\",}"), dir / "o", std::nullopt, {}}, err) ==
        kExitInput);
  CHECK(err.str().find("line 1") != std::string::npos);

  err.str("");
  CHECK(cmd_run({write(dir / "field.json", R"({"kind": "normative", "encoder": {"sigma_q": 1}})"), dir / "o",
                 std::nullopt, {}},
                err) == kExitInput);
  CHECK(err.str().find("encoder.sigma_q") != std::string::npos);

  err.str("");
  const auto under = write(dir / "under.json", R"({"kind": "normative", "grid": {"n": 11}, "stimulus": 3.55,
      "encoder": {"sigma_m": 1e-6, "sigma_c": 0.001}})");
  CHECK(cmd_run({under, dir / "o", std::nullopt, {}}, err) == kExitNumerical);
  CHECK(err.str().find("encoder:") != std::string::npos);

  CHECK(cmd_run({"no_such_preset", dir / "o", std::nullopt, {}}, err) == kExitInput);
}

TEST_CASE("sweep with a single point matches run") {
  const auto out = scratch("sweep1");
  std::ostringstream err;
  REQUIRE(cmd_sweep({"availability", out / "s", "resources.bias", "0.5", {}}, err) == kExitOk);
  REQUIRE(cmd_run({"availability", out / "r", std::nullopt, {}}, err) == kExitOk);
  const auto res = json::parse(slurp(out / "r" / "result.json"));
  std::istringstream csv(slurp(out / "s" / "sweep.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  const auto sel = row.substr(row.find(',') + 1, row.find(',', row.find(',') + 1) - row.find(',') - 1);
  CHECK(sel == format_number(res["selection"].get<double>()));
}

TEST_CASE("sweep rejects unknown or non-numeric fields") {
  const auto out = scratch("sweep_bad");
  std::ostringstream err;
  CHECK(cmd_sweep({"normative", out, "encoder.nope", "0:1:0.5", {}}, err) == kExitInput);
  CHECK(cmd_sweep({"normative", out, "kind", "0:1:0.5", {}}, err) == kExitInput);
  CHECK(cmd_sweep({"normative", out, "resources.bias", "0:1:0.5", {}}, err) == kExitInput);
  CHECK(cmd_sweep({"normative", out, "stimulus", "0:1:0.5", {}}, err) == kExitInput);
  CHECK_FALSE(fs::exists(out / "sweep.csv"));
}

TEST_CASE("fit self-recovery and synthetic reference") {
  const auto dir = scratch("fit");
  std::ostringstream err;
  const auto cfg = json::parse(slurp(resolve_config_path("illusory_truth")));
  auto at2 = cfg;
  at2["rule"]["beta_s"] = 2.0;
  const auto cfg_path = write(dir / "it.json", at2.dump());
  REQUIRE(cmd_run({cfg_path, dir / "run", std::nullopt, {}}, err) == kExitOk);
  const auto series = json::parse(slurp(dir / "run" / "result.json"))["series"];
  std::string csv = "repetition,mean_rating\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    std::ostringstream line;
    line.precision(17);
    line << t + 1 << ',' << series[t].get<double>() << '\n';
    csv += line.str();
  }
  const auto ref = write(dir / "self.csv", csv);
  REQUIRE(cmd_fit({cfg_path, ref, dir / "fit", {}}, err) == kExitOk);
  const auto fit = json::parse(slurp(dir / "fit" / "fit.json"));
  CHECK(fit["mse"].get<double>() <= 1e-10);
  CHECK(std::abs(fit["beta_s"].get<double>() - 2.0) <= 0.01);

  const fs::path synth = fs::path(COGSEC_DEFAULT_PRESET_DIR) / "reference" / "synthetic_logarithmic.csv";
  REQUIRE(cmd_fit({"illusory_truth", synth, dir / "synth", {}}, err) == kExitOk);
  CHECK(json::parse(slurp(dir / "synth" / "fit.json"))["r2"].get<double>() >= 0.8);

  CHECK(cmd_fit({"illusory_truth", write(dir / "bad.csv", "repetition,mean_rating\n1,x\n"), dir / "bad", {}}, err) ==
        kExitInput);
  CHECK(err.str().find("row 2") != std::string::npos);
  CHECK(cmd_fit({"normative", synth, dir / "wrong", {}}, err) == kExitInput);
}

TEST_CASE("info output and errors") {
  std::ostringstream out, err;
  InfoOptions o;
  o.n = 10;
  REQUIRE(cmd_info(o, out, err) == kExitOk);
  const auto doc = json::parse(out.str());
  CHECK(doc["J"] == 10.0);
  CHECK(std::abs(doc["J_numerical"].get<double>() - 10.0) <= 0.1);
  CHECK(doc["ratio"] == 1.0);

  out.str("");
  o.n = 12;
  o.subset = "0,1,2";
  REQUIRE(cmd_info(o, out, err) == kExitOk);
  CHECK(json::parse(out.str())["ratio"] == 0.25);

  o.n = 0;
  o.subset.reset();
  CHECK(cmd_info(o, out, err) == kExitInput);
  o.n = 5;
  o.subset = "0,x";
  CHECK(cmd_info(o, out, err) == kExitInput);
  o.subset = "7";
  CHECK(cmd_info(o, out, err) == kExitInput);
  o.subset.reset();
  o.gaussian_sigma = -1;
  CHECK(cmd_info(o, out, err) == kExitInput);
}
