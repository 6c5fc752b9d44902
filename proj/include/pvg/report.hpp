#pragma once

// Scenario configuration and machine-readable reports. Structured output
// is byte-reproducible for a fixed seed and config: field order is pinned
// and no wall-clock data enters that format (elapsed is reported as 0
// there; text mode shows the measured time).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pvg {

struct ScenarioConfig {
  std::string scenario;
  uint64_t p = 3;
  uint32_t precision = 6;
  int64_t cutoff = 6;
  uint64_t samples = 500;
  uint64_t seed = 0;
  std::string format = "text";  // "text" | "structured"
  std::optional<std::string> spec_path;

  nlohmann::ordered_json to_json() const;
};

struct CheckLine {
  std::string anchor;   // the mathematical statement being checked
  bool pass = false;
  std::string details;
};

struct Report {
  std::string scenario;
  ScenarioConfig config;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;
  int64_t elapsed_ms = 0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void check(const std::string& anchor, bool pass, const std::string& details = "") {
    checks.push_back({anchor, pass, details});
  }

  nlohmann::ordered_json to_json() const;
  std::string render_structured() const;  // byte-stable for fixed seed/config
  std::string render_text() const;
};

}  // namespace pvg
