#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "blowup/analysis.hpp"
#include "blowup/core.hpp"
#include "blowup/estimates.hpp"
#include "blowup/solver_nonlinear.hpp"
#include "blowup/solver_transform.hpp"

namespace blowup {

/// Written as '#' comment lines at the top of every output file.
struct FileHeader {
  std::uint64_t config_hash = 0;
  int N = 0;
  double R = 0.0;
  double dr = 0.0;
  std::string producer;
};

FileHeader make_header(std::uint64_t config_hash, const RadialGrid& grid, std::string producer);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits, so values round-trip.
std::string format_number(double x);
std::string format_bool(bool b);
std::string format_hash(std::uint64_t h);

/// Appends `prefix.key = value` entries.
void append(KeyValues& kv, const std::string& prefix, const RadialConditionsReport& r);
void append(KeyValues& kv, const std::string& prefix, const HHypothesesReport& r);
void append(KeyValues& kv, const std::string& prefix, const OracleResult& r);
void append(KeyValues& kv, const std::string& prefix, const FitResult& r);
void append(KeyValues& kv, const std::string& prefix, const BoundReport& r);
void append(KeyValues& kv, const std::string& prefix, const MarginReport& r);
void append(KeyValues& kv, const std::string& prefix, const RateResult& r);
void append(KeyValues& kv, const std::string& prefix, const PointwiseResult& r);
void append(KeyValues& kv, const std::string& prefix, const GradientComparison& r);

void write_key_values(const std::filesystem::path& path, const FileHeader& header,
                      const KeyValues& kv);
/// Columns t, U, dt.
void write_trace_csv(const std::filesystem::path& path, const FileHeader& header,
                     const Trace& trace);
/// Columns r, u; the snapshot time goes in the header.
void write_profile_csv(const std::filesystem::path& path, const FileHeader& header,
                       const Profile& profile, double t);
/// One file per snapshot, named snapshot_00000.csv and so on.
void write_snapshots(const std::filesystem::path& dir, const FileHeader& header,
                     const std::vector<Snapshot>& snapshots);

}  // namespace blowup
