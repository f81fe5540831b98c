#pragma once

#include <vector>

#include "blowup/core.hpp"

namespace blowup {

struct SolverConfig {
  double dt0 = 1e-2;
  double u_cutoff = 20.0;  // max u at which the run is declared blown up
  double safety = 0.5;
  double t_max = 50.0;
  int snapshot_stride = 1000;
  // Extra snapshot times; steps are shortened to land on them exactly.
  std::vector<double> output_times;
};

struct Snapshot {
  double t;
  Profile u;
};

/// Solver history. center_values[k] = u(0, times[k]); dts[k] is the step that
/// produced entry k (0 for the initial entry).
struct Trace {
  std::vector<double> times;
  std::vector<double> center_values;
  std::vector<double> dts;
  std::vector<Snapshot> snapshots;
  bool blew_up = false;
  double t_end = 0.0;
  long step_count = 0;
  double u_cutoff = 20.0;
};

/// (n-1)/r-weighted second difference; the origin row is 2n(u_1 - u_0)/dr^2.
/// The boundary entry is left at zero.
Profile radial_laplacian(const Profile& p, int n);

/// Lap u - h(|u_r|) + f(u), zero at r = R.
Profile rhs(const Profile& p, const ProblemSpec& problem);

/// One explicit midpoint step with u(R) pinned to zero.
Profile step(const Profile& p, double dt, const ProblemSpec& problem);

double adaptive_dt(const Profile& p, const SolverConfig& config, const ProblemSpec& problem);

void validate(const SolverConfig& config, const ProblemSpec& problem);

Trace solve(const ProblemSpec& problem, const SolverConfig& config);

}  // namespace blowup
