#ifndef COGSEC_COMMANDS_HPP
#define COGSEC_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cogsec {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> ref;
  std::optional<std::uint64_t> seed;
};

struct SweepOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::string param;  // dotted path into the config, e.g. "resources.bias"
  std::string range;  // "start:stop:step" (stop inclusive) or a single value
  std::optional<std::uint64_t> seed;
};

struct FitOptions {
  std::filesystem::path config;
  std::filesystem::path ref;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
};

struct InfoOptions {
  double gaussian_sigma = 1.0;
  std::size_t n = 0;
  std::optional<std::string> subset;  // comma-separated zero-based indices; default all
  double x = 0.0;
  bool monte_carlo = false;
  std::size_t draws = 100000;
  std::uint64_t seed = 1;
};

// Each command reports diagnostics on `err` and returns an exit code.
int cmd_run(const RunOptions& opts, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& err);
int cmd_fit(const FitOptions& opts, std::ostream& err);
int cmd_info(const InfoOptions& opts, std::ostream& out, std::ostream& err);

// A config argument that is not an existing file is looked up in the preset
// directory ($COGSEC_PRESETS, else the installed default), with or without
// the .json suffix.
std::filesystem::path resolve_config_path(const std::filesystem::path& p);
std::filesystem::path preset_directory();

// Values of a "start:stop:step" range; a bare number is a single point.
std::vector<double> parse_range(const std::string& spec);

std::string sha256_hex(const std::string& data);

}  // namespace cogsec

#endif  // COGSEC_COMMANDS_HPP
