#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blowup/config.hpp"
#include "blowup/report_io.hpp"

namespace blowup {

struct Check {
  std::string name;
  bool expected = true;  // false: reported for information, never fails the run
  bool passed = false;
  std::string detail;
};

struct PipelineResult {
  std::vector<Check> checks;
  KeyValues report;
  bool all_expected_pass() const;
  int exit_code() const { return all_expected_pass() ? 0 : 2; }
};

/// Each writes its files below `out` and returns the checks it ran.
PipelineResult run_solve(const RunConfig& cfg, const std::filesystem::path& out);
PipelineResult run_oracle(const RunConfig& cfg, const std::filesystem::path& out);
PipelineResult run_verify(const RunConfig& cfg, const std::filesystem::path& out);
PipelineResult run_compare(const RunConfig& cfg, const std::filesystem::path& out);
PipelineResult run_conditions(const RunConfig& cfg, const std::filesystem::path& out);

struct Scenario {
  std::string name;
  ProblemSpec problem;
};

/// Model-equation scenarios used for regression checks.
std::vector<Scenario> default_suite();

}  // namespace blowup
