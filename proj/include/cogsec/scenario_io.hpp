#ifndef COGSEC_SCENARIO_IO_HPP
#define COGSEC_SCENARIO_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cogsec/scenario.hpp"

namespace cogsec {

using json = nlohmann::json;

// Config documents. Missing fields take defaults; unknown fields and type
// mismatches raise ConfigError naming the dotted field path.
ScenarioConfig parse_config(const json& doc);
ScenarioConfig parse_config_text(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Fully resolved config, every field present.
json config_to_json(const ScenarioConfig& cfg);

json result_to_json(const ScenarioResult& r);
ScenarioResult result_from_json(const json& doc);

// Two-column CSV "repetition,mean_rating" with a header row. Lines starting
// with '#' are comments. Errors name the offending row.
ReferenceSeries parse_reference_csv(std::istream& in);
ReferenceSeries load_reference_csv(const std::filesystem::path& path);

// Locale-independent, 12 significant digits.
std::string format_number(double x);

// Canonical text form used for files and hashing: 2-space indent, trailing LF.
std::string dump_json(const json& doc);

// "node,value" CSV with LF endings.
void write_stage_csv(std::ostream& out, std::span<const std::string> nodes, std::span<const double> values);
void write_stage_csv(std::ostream& out, const Grid& grid, std::span<const double> values);

}  // namespace cogsec

#endif  // COGSEC_SCENARIO_IO_HPP
