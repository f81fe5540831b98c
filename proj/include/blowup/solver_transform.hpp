#pragma once

#include <vector>

#include "blowup/core.hpp"
#include "blowup/solver_nonlinear.hpp"

namespace blowup {

/// v = 1 - e^{-u}. For the model equation this turns
/// u_t = Lap u - |grad u|^2 + e^u into v_t = Lap v + 1, and blow-up at
/// (x0, T) is exactly v(x0, T) = 1.
double transform_forward(double u);
Profile transform_forward(const Profile& u);

/// u = -log(1 - v). Throws Errc::AtBlowup once v >= 1 - 1e-15.
double transform_inverse(double v);
Profile transform_inverse(const Profile& v);

struct TransformField {
  RadialGrid grid;
  std::vector<double> values;
  double t = 0.0;
};

struct OracleConfig {
  double dt_factor = 0.2;  // Crank-Nicolson step is dt_factor * dr
  double tol_T = 0.0;      // <= 0 selects 1e-10 * (1 + T)
  double horizon = 1e3;
  double u_cutoff = 20.0;          // tail of oracle_trace stops here
  int tail_samples_per_unit = 16;  // tail samples per unit increase of u(0, t)
  int snapshot_stride = 10;
};

struct OracleResult {
  double T = 0.0;  // +inf when global
  double r_blow = 0.0;
  bool global = false;
  int N = 0;
  double tol = 0.0;
  long steps = 0;
};

/// One Crank-Nicolson step of v_t = Lap v + 1, v(R) = 0.
TransformField linear_step(const TransformField& field, double dt, int n);

/// Solution of Lap_h w + 1 = 0, w(R) = 0, on the same stencil.
std::vector<double> discrete_steady_state(const RadialGrid& grid, int n);

OracleResult find_blowup(const ProblemSpec& problem, const OracleConfig& config = {});

/// u(., t) from the linear field; t must precede blow-up.
Profile oracle_profile(const ProblemSpec& problem, double t, const OracleConfig& config = {});

/// u at each of the (nondecreasing) times, from a single march.
std::vector<Profile> oracle_profiles(const ProblemSpec& problem, const std::vector<double>& times,
                                     const OracleConfig& config = {});

/// Center history u(0, t) and snapshots from the linear field. For blow-up
/// data the record is continued past the last full step with geometrically
/// shrinking T - t until u(0, t) reaches config.u_cutoff; the returned
/// OracleResult gives the T the tail is anchored to.
struct OracleTrace {
  Trace trace;
  OracleResult result;
};

OracleTrace oracle_trace(const ProblemSpec& problem, const OracleConfig& config = {});

}  // namespace blowup
