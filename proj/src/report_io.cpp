#include "blowup/report_io.hpp"

#include <cstdio>
#include <fstream>

#include "blowup/error.hpp"

namespace blowup {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(Errc::Io, "cannot create '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
  return out;
}

void write_header(std::ostream& out, const FileHeader& h) {
  out << "# producer: " << h.producer << '\n'
      << "# config_hash: " << format_hash(h.config_hash) << '\n'
      << "# N: " << h.N << '\n'
      << "# R: " << format_number(h.R) << '\n'
      << "# dr: " << format_number(h.dr) << '\n';
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

FileHeader make_header(std::uint64_t config_hash, const RadialGrid& grid, std::string producer) {
  return {config_hash, grid.N(), grid.R(), grid.dr(), std::move(producer)};
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_hash(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void append(KeyValues& kv, const std::string& p, const RadialConditionsReport& r) {
  kv.emplace_back(p + ".nonincreasing", format_bool(r.nonincreasing));
  kv.emplace_back(p + ".boundary_zero", format_bool(r.boundary_zero));
  kv.emplace_back(p + ".slope_ok", format_bool(r.slope_ok));
  kv.emplace_back(p + ".worst_slope", format_number(r.worst_slope));
}

void append(KeyValues& kv, const std::string& p, const HHypothesesReport& r) {
  kv.emplace_back(p + ".m2_margin", format_number(r.m2_margin));
  kv.emplace_back(p + ".quadratic_growth_ok", format_bool(r.quadratic_growth_ok));
  kv.emplace_back(p + ".max_ratio", format_number(r.max_ratio));
}

void append(KeyValues& kv, const std::string& p, const OracleResult& r) {
  kv.emplace_back(p + ".T", format_number(r.T));
  kv.emplace_back(p + ".r_blow", format_number(r.r_blow));
  kv.emplace_back(p + ".global", format_bool(r.global));
  kv.emplace_back(p + ".N", std::to_string(r.N));
  kv.emplace_back(p + ".tol", format_number(r.tol));
  kv.emplace_back(p + ".steps", std::to_string(r.steps));
}

void append(KeyValues& kv, const std::string& p, const FitResult& r) {
  kv.emplace_back(p + ".T_hat", format_number(r.T_hat));
  kv.emplace_back(p + ".slope_m", format_number(r.slope_m));
  kv.emplace_back(p + ".intercept_k", format_number(r.intercept_k));
  kv.emplace_back(p + ".residual", format_number(r.residual));
  kv.emplace_back(p + ".window_lo", format_number(r.window.first));
  kv.emplace_back(p + ".window_hi", format_number(r.window.second));
  kv.emplace_back(p + ".points", std::to_string(r.points));
}

void append(KeyValues& kv, const std::string& p, const BoundReport& r) {
  kv.emplace_back(p + ".bound_name", r.bound_name);
  kv.emplace_back(p + ".violations", std::to_string(r.violations));
  kv.emplace_back(p + ".worst_gap", format_number(r.worst_gap));
  kv.emplace_back(p + ".points_checked", std::to_string(r.points_checked));
}

void append(KeyValues& kv, const std::string& p, const MarginReport& r) {
  kv.emplace_back(p + ".margin", format_number(r.margin));
  kv.emplace_back(p + ".u_at_min", format_number(r.u_at_min));
  kv.emplace_back(p + ".x_at_min", format_number(r.x_at_min));
  kv.emplace_back(p + ".points", std::to_string(r.points));
}

void append(KeyValues& kv, const std::string& p, const RateResult& r) {
  append(kv, p + ".upper", r.upper);
  append(kv, p + ".lower", r.lower);
  kv.emplace_back(p + ".C_hat", format_number(r.C_hat));
  kv.emplace_back(p + ".k_oscillation", format_number(r.k_oscillation));
  kv.emplace_back(p + ".bounded", format_bool(r.bounded));
  kv.emplace_back(p + ".skipped", std::to_string(r.skipped));
}

void append(KeyValues& kv, const std::string& p, const PointwiseResult& r) {
  kv.emplace_back(p + ".admissible", format_bool(r.admissible));
  kv.emplace_back(p + ".epsilon_star", format_number(r.epsilon_star));
  append(kv, p, r.report);
  for (std::size_t i = 0; i < r.scanned.size(); ++i) {
    const auto& s = r.scanned[i];
    std::string q = p + ".scan" + std::to_string(i);
    kv.emplace_back(q + ".epsilon", format_number(s.epsilon));
    kv.emplace_back(q + ".alpha_certified", format_bool(s.alpha_certified));
    kv.emplace_back(q + ".r_max_checked", format_number(s.r_max_checked));
    kv.emplace_back(q + ".violations", std::to_string(s.report.violations));
    kv.emplace_back(q + ".worst_gap", format_number(s.report.worst_gap));
  }
}

void append(KeyValues& kv, const std::string& p, const GradientComparison& r) {
  kv.emplace_back(p + ".blew_up_with", format_bool(r.blew_up_with));
  kv.emplace_back(p + ".blew_up_without", format_bool(r.blew_up_without));
  kv.emplace_back(p + ".T_with", format_number(r.T_with));
  kv.emplace_back(p + ".T_without", format_number(r.T_without));
  kv.emplace_back(p + ".slope_with", format_number(r.slope_with));
  kv.emplace_back(p + ".slope_without", format_number(r.slope_without));
  kv.emplace_back(p + ".dominance_ok", format_bool(r.dominance_ok));
  kv.emplace_back(p + ".worst_dominance_gap", format_number(r.worst_dominance_gap));
  kv.emplace_back(p + ".times_compared", std::to_string(r.times_compared));
}

void write_key_values(const std::filesystem::path& path, const FileHeader& header,
                      const KeyValues& kv) {
  auto out = open_out(path);
  write_header(out, header);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  finish(out, path);
}

void write_trace_csv(const std::filesystem::path& path, const FileHeader& header,
                     const Trace& trace) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# blew_up: " << format_bool(trace.blew_up) << '\n' << "t,U,dt\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k)
    out << format_number(trace.times[k]) << ',' << format_number(trace.center_values[k]) << ','
        << format_number(k < trace.dts.size() ? trace.dts[k] : 0.0) << '\n';
  finish(out, path);
}

void write_profile_csv(const std::filesystem::path& path, const FileHeader& header,
                       const Profile& profile, double t) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# t: " << format_number(t) << '\n' << "r,u\n";
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    out << format_number(profile.grid.node(static_cast<int>(i))) << ','
        << format_number(profile.values[i]) << '\n';
  finish(out, path);
}

void write_snapshots(const std::filesystem::path& dir, const FileHeader& header,
                     const std::vector<Snapshot>& snapshots) {
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", k);
    write_profile_csv(dir / name, header, snapshots[k].u, snapshots[k].t);
  }
}

}  // namespace blowup
