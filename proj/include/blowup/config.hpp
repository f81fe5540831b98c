#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blowup/core.hpp"
#include "blowup/solver_nonlinear.hpp"
#include "blowup/solver_transform.hpp"

namespace blowup {

/// Flat `key = value` text with '#' comments. Keys are dotted (grid.N, solver.safety).
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in);
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> find(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// FNV-1a over the sorted entries, so formatting and order do not matter.
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> entries_;
};

struct EstimatesConfig {
  double alpha = 0.5;
  double exponent_delta = 0.5;
  std::vector<double> epsilon_list{10.0, 5.0, 2.0, 1.0, 0.5, 0.1, 0.01, 1e-3, 1e-4};
  double u_max = 30.0;
  double g_max = 10.0;
  int grid_density = 200;
};

struct AnalysisConfig {
  double r_min = 0.0;  // 0 selects 0.05 R
  double fit_window_lo = 10.0;
  double fit_window_hi = 2.0;
};

struct RunConfig {
  ProblemSpec problem;
  SolverConfig solver;
  OracleConfig oracle;
  EstimatesConfig estimates;
  AnalysisConfig analysis;
  std::filesystem::path output_dir;
  std::uint64_t hash = 0;
};

/// Builds the run; `refine` halves dr and dt that many times and keeps
/// snapshot times fixed. Throws Errc::Config naming the offending key.
RunConfig make_run_config(const KeyValueFile& file, int refine = 0);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace blowup
