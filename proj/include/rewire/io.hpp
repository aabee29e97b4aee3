#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace rewire {

// Version string baked in at configure time (git describe, or the project
// version when building outside a checkout).
const char* tool_version();

// FNV-1a, used to fingerprint configs inside reports.
std::uint64_t fnv1a64(std::string_view data);
std::string hex_u64(std::uint64_t value);

// Shortest-round-trip decimal rendering for doubles, so CSV output is
// byte-stable across runs.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Common report envelope.  Every JSON report carries these fields and
// validates against schemas/report.schema.json (schema_version 1).
nlohmann::json make_report_base(const std::string& kind, std::uint64_t seed,
                                std::string_view config_text);

// Structural validation of the envelope: required keys, types, and a known
// schema_version.  Throws std::invalid_argument describing the first problem.
void validate_report(const nlohmann::json& report);

}  // namespace rewire
