#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"

namespace lightray::cli {

struct Check {
  std::string name;
  double max_residual = 0.0;  // for "above" checks: the smallest observed value
  double tolerance = 0.0;
  bool above = false;         // pass when max_residual > tolerance instead of <=
  bool pass() const { return above ? max_residual > tolerance : max_residual <= tolerance; }
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& verify_suites();

// Throws SchemaError for an unknown suite.
VerifyReport run_verify(const RunConfig& cfg, const std::string& suite);

}  // namespace lightray::cli
