#pragma once

// Verification suites over the fixtures and the JSON report they produce.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tw/kahler.hpp"
#include "tw/sampling.hpp"

namespace tw {

inline constexpr const char* kVersion = "0.1.0";

struct FiberSpec {
  std::string profile = "cylinder";
  std::string branch = "quadrature";
  double c = 0.0;
  int sign = 1;
  std::string h_family = "power_pole";
  double p = 1.0;
  std::optional<std::string> h;  // expression in zeta, replaces h_family
  double a = 1.0;
  double b = 1.0;
};

struct SuiteConfig {
  std::string metric = "eguchi_hanson";
  FixtureParams params;
  std::string suite = "all";
  int sample_count = 0;  // 0: per-suite default
  std::uint64_t seed = 1;
  int jet_order = 4;
  std::string tol_tier = "strict";  // loose: upper thresholds x100
  std::map<std::string, double> tolerances;  // check_id -> threshold
  FiberSpec fiber;
  Execution execution = Execution::parallel;

  // Unknown keys and ill-typed values throw ConfigurationError.
  static SuiteConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // UsageError / ConfigurationError
};

std::vector<std::string> suite_names();

struct CheckRecord {
  std::string check_id;
  std::string anchor;
  int points_tested = 0;
  double max_residual = 0.0;  // for lower-bound checks: the observed extreme
  double threshold = 0.0;
  bool upper = true;  // pass iff max_residual < threshold; else iff > threshold
  bool pass = false;
  std::string note;
};

struct SkipRecord {
  std::string check_id;
  std::string reason;
};

struct VerificationReport {
  SuiteConfig config;
  std::vector<CheckRecord> checks;
  std::vector<SkipRecord> skipped;
  nlohmann::json classifications = nlohmann::json::array();

  bool pass() const;
  nlohmann::json to_json() const;
  // Sorted keys, two-space indent, trailing newline.
  std::string dump() const;
  const CheckRecord* find(const std::string& check_id) const;
};

// Runs the configured suite. Usage errors propagate; numeric failures inside
// a suite are recorded as failing "<suite>.error" records.
VerificationReport run_suite(const SuiteConfig& config);

}  // namespace tw
