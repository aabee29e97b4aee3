#include "rewire/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef REWIRE_GIT_DESCRIBE
#define REWIRE_GIT_DESCRIBE "unversioned"
#endif

namespace rewire {

const char* tool_version() { return REWIRE_GIT_DESCRIBE; }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex_u64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json make_report_base(const std::string& kind, std::uint64_t seed,
                                std::string_view config_text) {
  nlohmann::json report;
  report["schema_version"] = 1;
  report["tool_version"] = tool_version();
  report["kind"] = kind;
  report["seed"] = seed;
  report["config_hash"] = hex_u64(fnv1a64(config_text));
  return report;
}

void validate_report(const nlohmann::json& report) {
  const auto field = [&](const char* key) -> const nlohmann::json& {
    if (!report.contains(key)) {
      throw std::invalid_argument(std::string("report missing key: ") + key);
    }
    return report.at(key);
  };
  const auto wrong_type = [](const char* key) {
    throw std::invalid_argument(std::string("report key has wrong type: ") + key);
  };
  if (!field("schema_version").is_number_integer()) wrong_type("schema_version");
  if (report["schema_version"].get<int>() != 1) {
    throw std::invalid_argument("unknown report schema_version");
  }
  if (!field("tool_version").is_string()) wrong_type("tool_version");
  if (!field("kind").is_string()) wrong_type("kind");
  if (!field("seed").is_number_unsigned()) wrong_type("seed");
  if (!field("config_hash").is_string()) wrong_type("config_hash");
}

}  // namespace rewire
