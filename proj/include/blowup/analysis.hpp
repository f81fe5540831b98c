#pragma once

#include <string>
#include <utility>
#include <vector>

#include "blowup/core.hpp"
#include "blowup/solver_nonlinear.hpp"

namespace blowup {

/// Model u(0, t) ~ -m log(T - t) + k fitted on a window of recorded times.
struct FitResult {
  double T_hat = 0.0;
  double slope_m = 0.0;
  double intercept_k = 0.0;
  double residual = 0.0;  // RMS
  std::pair<double, double> window{0.0, 0.0};
  int points = 0;
};

struct BoundReport {
  std::string bound_name;
  long violations = 0;
  double worst_gap = 0.0;  // min over checked points of (bound - value)
  long points_checked = 0;
};

/// Blow-up time from the final window where U >= u_cutoff - 4: the root of
/// the least-squares line through (t, e^{-U}) seeds a Gauss-Newton fit of
/// U = -m log(T - t) + k. Throws NoBlowup, WindowEmpty or PoorFit.
double estimate_T(const Trace& trace);

/// Same, returning the full three-parameter fit on the estimation window.
FitResult fit_blowup(const Trace& trace);

/// Least squares of U against -log(T - t) over
/// U in [u_cutoff - window_lo, u_cutoff - window_hi]. Throws WindowEmpty.
FitResult fit_rate(const Trace& trace, double T, double window_lo = 10.0,
                   double window_hi = 2.0);

struct EpsilonCheck {
  double epsilon = 0.0;
  bool alpha_certified = false;  // alpha <= alpha_validity for this epsilon
  double r_max_checked = 0.0;    // min(R, C^{1/m})
  BoundReport report;
};

struct PointwiseResult {
  BoundReport report;      // for epsilon_star, or the last candidate if none passed
  double epsilon_star = 0.0;  // 0 when no candidate is admissible
  bool admissible = false;
  std::vector<EpsilonCheck> scanned;
};

/// Checks u(r, t) <= (1/2alpha)[log C - m log r] on r in [r_min, min(R, C^{1/m})]
/// for each epsilon (scanned in descending order) and reports the largest
/// epsilon with zero violations.
PointwiseResult verify_pointwise(const std::vector<Profile>& profiles, double alpha,
                                 double exponent_delta, std::vector<double> epsilon_list,
                                 double r_min, double tol = 0.0);

struct RateResult {
  BoundReport upper;
  BoundReport lower;
  double C_hat = 0.0;
  double k_oscillation = 0.0;  // of alpha U + log(T - t) over the last decade of T - t
  bool bounded = false;        // k_oscillation <= 0.2
  long skipped = 0;            // recorded times at or past T
};

/// Lower bound with c = 1 and the upper-bound constant C_hat fitted as
/// exp(sup_t [alpha U(t) + log(T - t)]).
RateResult verify_rate(const Trace& trace, double T, double alpha, double tol = 1e-6);

struct MonotonicityTolerances {
  double negativity = 1e-10;
  double radial = 1e-8;  // scaled by (1 + max u)
  double temporal = 1e-8;
};

/// Counts u < 0, increasing radial steps and (if check_time) decreasing U(t).
BoundReport verify_monotonicity(const Trace& trace, bool check_time,
                                const MonotonicityTolerances& tol = {});
BoundReport verify_monotonicity(const std::vector<Profile>& profiles,
                                const std::vector<double>& center_values, bool check_time,
                                const MonotonicityTolerances& tol = {});

struct GradientComparison {
  bool blew_up_with = false;
  bool blew_up_without = false;
  double T_with = 0.0;  // +inf without blow-up
  double T_without = 0.0;
  double slope_with = 0.0;
  double slope_without = 0.0;
  bool dominance_ok = false;
  double worst_dominance_gap = 0.0;  // min of tolerance-scaled (u_without - u_with)
  long times_compared = 0;
};

/// Runs the problem with the two gradient terms on matched output times and
/// checks u_with <= u_without and T_with >= T_without.
GradientComparison compare_gradient_effect(const ProblemSpec& problem, const SolverConfig& config,
                                           const GradientTermSpec& with =
                                               GradientTermSpec::power(2.0, 1.0),
                                           const GradientTermSpec& without =
                                               GradientTermSpec::none());

/// Max over time-matched profiles of ||a - b||_inf / ||b||_inf, restricted to
/// profiles with max b <= u_limit and ||b|| > 0.
double relative_sup_deviation(const std::vector<Profile>& a, const std::vector<Profile>& b,
                              double u_limit);

}  // namespace blowup
