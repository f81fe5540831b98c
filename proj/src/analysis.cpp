#include "blowup/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "blowup/error.hpp"
#include "blowup/estimates.hpp"

namespace blowup {

namespace {

constexpr double kMinCorrelation = 0.999;
constexpr double kOscillationLimit = 0.2;

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double correlation = 0.0;
  double rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 1.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

struct Window {
  std::vector<double> t;
  std::vector<double> U;
};

Window select(const Trace& trace, double u_lo, double u_hi, double t_limit) {
  Window w;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    double U = trace.center_values[i];
    if (U >= u_lo && U <= u_hi && trace.times[i] < t_limit) {
      w.t.push_back(trace.times[i]);
      w.U.push_back(U);
    }
  }
  return w;
}

double sum_squares(const Window& w, double m, double k, double T) {
  double ss = 0.0;
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    double r = w.U[i] + m * std::log(T - w.t[i]) - k;
    ss += r * r;
  }
  return ss;
}

/// Levenberg-Marquardt on U = -m log(T - t) + k with T = t_hi + e^s.
void refine(const Window& w, double& m, double& k, double& T) {
  const double t_hi = w.t.back();
  double s = std::log(T - t_hi);
  double lambda = 1e-3;
  double cost = sum_squares(w, m, k, T);
  for (int iter = 0; iter < 200 && cost > 0.0; ++iter) {
    const double Tc = t_hi + std::exp(s);
    Eigen::MatrixXd J(w.t.size(), 3);
    Eigen::VectorXd r(w.t.size());
    for (std::size_t i = 0; i < w.t.size(); ++i) {
      double gap = Tc - w.t[i];
      r[i] = w.U[i] + m * std::log(gap) - k;
      J(i, 0) = std::log(gap);
      J(i, 1) = -1.0;
      J(i, 2) = m / gap * std::exp(s);
    }
    Eigen::Matrix3d H = J.transpose() * J;
    Eigen::Vector3d g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix3d A = H;
      A.diagonal() += lambda * H.diagonal();
      Eigen::Vector3d delta = A.ldlt().solve(-g);
      double m2 = m + delta[0], k2 = k + delta[1], s2 = s + delta[2];
      double T2 = t_hi + std::exp(s2);
      double c2 = std::isfinite(T2) && T2 > t_hi ? sum_squares(w, m2, k2, T2)
                                                 : std::numeric_limits<double>::infinity();
      if (c2 < cost) {
        bool tiny = std::abs(delta[2]) < 1e-15 && std::abs(delta[0]) < 1e-15 * (1 + std::abs(m));
        m = m2;
        k = k2;
        s = s2;
        cost = c2;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        if (tiny) iter = 1000;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  T = t_hi + std::exp(s);
}

/// Best (m, k) for fixed T and the resulting sum of squares.
double profile_cost(const Window& w, double T, double& m, double& k) {
  std::vector<double> x(w.t.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -std::log(T - w.t[i]);
  LineFit f = fit_line(x, w.U);
  m = f.slope;
  k = f.intercept;
  return sum_squares(w, m, k, T);
}

/// Moves T to neighbouring doubles while the profiled cost keeps dropping.
/// Near blow-up one ulp of T is resolved by the data, which LM in s can miss.
void polish(const Window& w, double& m, double& k, double& T) {
  double best = profile_cost(w, T, m, k);
  for (double dir : {1.0, -1.0}) {
    const double limit = dir > 0 ? std::numeric_limits<double>::infinity() : w.t.back();
    for (int i = 0; i < 256; ++i) {
      double T2 = std::nextafter(T, limit);
      if (!(T2 > w.t.back())) break;
      double m2, k2;
      double c2 = profile_cost(w, T2, m2, k2);
      if (!(c2 < best)) break;
      best = c2;
      T = T2;
      m = m2;
      k = k2;
    }
  }
}

}  // namespace

FitResult fit_blowup(const Trace& trace) {
  if (!trace.blew_up) throw Error(Errc::NoBlowup, "trace did not reach the blow-up cutoff");
  Window w = select(trace, trace.u_cutoff - 4.0, std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity());
  if (w.t.size() < 3)
    throw Error(Errc::WindowEmpty, "fewer than 3 samples with U >= u_cutoff - 4");

  std::vector<double> y(w.U.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::exp(-w.U[i]);
  LineFit line = fit_line(w.t, y);

  const double t_hi = w.t.back();
  const double span = std::max(t_hi - w.t.front(), 1e-300);
  double T = line.slope < 0.0 ? -line.intercept / line.slope : t_hi + span;
  if (!(T > t_hi)) T = t_hi + 1e-3 * span;

  std::vector<double> x(w.t.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -std::log(T - w.t[i]);
  LineFit start = fit_line(x, w.U);
  double m = start.slope, k = start.intercept;
  refine(w, m, k, T);
  polish(w, m, k, T);

  // Correlation between observed and fitted U on the window.
  std::vector<double> fitted(w.U.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) fitted[i] = -m * std::log(T - w.t[i]) + k;
  LineFit agreement = fit_line(fitted, w.U);
  if (std::max(std::abs(line.correlation), agreement.correlation) < kMinCorrelation)
    throw Error(Errc::PoorFit, "blow-up fit correlation below 0.999");

  FitResult fit;
  fit.T_hat = T;
  fit.slope_m = m;
  fit.intercept_k = k;
  fit.residual = std::sqrt(sum_squares(w, m, k, T) / w.t.size());
  fit.window = {w.t.front(), w.t.back()};
  fit.points = static_cast<int>(w.t.size());
  return fit;
}

double estimate_T(const Trace& trace) { return fit_blowup(trace).T_hat; }

FitResult fit_rate(const Trace& trace, double T, double window_lo, double window_hi) {
  Window w = select(trace, trace.u_cutoff - window_lo, trace.u_cutoff - window_hi, T);
  if (w.t.size() < 3) throw Error(Errc::WindowEmpty, "fewer than 3 samples in the rate window");
  std::vector<double> x(w.t.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -std::log(T - w.t[i]);
  LineFit line = fit_line(x, w.U);
  FitResult fit;
  fit.T_hat = T;
  fit.slope_m = line.slope;
  fit.intercept_k = line.intercept;
  fit.residual = line.rms;
  fit.window = {w.t.front(), w.t.back()};
  fit.points = static_cast<int>(w.t.size());
  return fit;
}

PointwiseResult verify_pointwise(const std::vector<Profile>& profiles, double alpha,
                                 double exponent_delta, std::vector<double> epsilon_list,
                                 double r_min, double tol) {
  if (profiles.empty()) throw Error(Errc::Config, "no profiles to check");
  if (epsilon_list.empty()) throw Error(Errc::Config, "empty epsilon list");
  std::sort(epsilon_list.begin(), epsilon_list.end(), std::greater<>());
  const RadialGrid& grid = profiles.front().grid;
  if (r_min < grid.dr() * (1.0 - 1e-12))
    throw Error(Errc::RadiusOutOfRange, "r_min must be at least one mesh cell");

  PointwiseResult result;
  for (double eps : epsilon_list) {
    CutoffSpec cutoff(eps, exponent_delta, grid.R());
    BoundParams b = pointwise_constants(cutoff, alpha);
    EpsilonCheck check;
    check.epsilon = eps;
    check.alpha_certified = alpha <= alpha_validity(cutoff);
    check.r_max_checked = std::min(grid.R(), std::pow(b.C, 1.0 / b.m));
    check.report.bound_name = "pointwise";
    check.report.worst_gap = std::numeric_limits<double>::infinity();
    for (const Profile& p : profiles) {
      for (int i = 1; i <= grid.N(); ++i) {
        double r = grid.node(i);
        if (r < r_min * (1.0 - 1e-12) || r > check.r_max_checked) continue;
        double gap = pointwise_bound_formula(r, cutoff, alpha) - p.values[i];
        ++check.report.points_checked;
        check.report.worst_gap = std::min(check.report.worst_gap, gap);
        if (gap < -tol) ++check.report.violations;
      }
    }
    result.scanned.push_back(check);
    if (!result.admissible && check.report.violations == 0 && check.report.points_checked > 0) {
      result.admissible = true;
      result.epsilon_star = eps;
      result.report = check.report;
    }
  }
  if (!result.admissible) result.report = result.scanned.back().report;
  return result;
}

RateResult verify_rate(const Trace& trace, double T, double alpha, double tol) {
  if (!trace.blew_up) throw Error(Errc::NoBlowup, "rate bounds need a blow-up trace");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::BadAlpha, "alpha must lie in (0, 1]");
  RateResult res;
  res.lower.bound_name = "lower_rate";
  res.upper.bound_name = "upper_rate";
  res.lower.worst_gap = std::numeric_limits<double>::infinity();
  res.upper.worst_gap = std::numeric_limits<double>::infinity();

  std::vector<double> ks;
  std::vector<double> taus;
  double k_sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    double t = trace.times[i];
    if (!(t < T)) {
      ++res.skipped;
      continue;
    }
    double U = trace.center_values[i];
    double gap = U - lower_rate_bound(t, T, 1.0);
    ++res.lower.points_checked;
    res.lower.worst_gap = std::min(res.lower.worst_gap, gap);
    if (gap < -tol) ++res.lower.violations;

    double k = alpha * U + std::log(T - t);
    ks.push_back(k);
    taus.push_back(T - t);
    k_sup = std::max(k_sup, k);
  }
  if (ks.empty()) throw Error(Errc::WindowEmpty, "no recorded time precedes T");

  res.C_hat = std::exp(k_sup);
  for (double k : ks) {
    res.upper.worst_gap = std::min(res.upper.worst_gap, (k_sup - k) / alpha);
    ++res.upper.points_checked;
  }

  const double tau_min = *std::min_element(taus.begin(), taus.end());
  double k_lo = std::numeric_limits<double>::infinity();
  double k_hi = -k_lo;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (taus[i] > 10.0 * tau_min) continue;
    k_lo = std::min(k_lo, ks[i]);
    k_hi = std::max(k_hi, ks[i]);
  }
  res.k_oscillation = k_hi - k_lo;
  res.bounded = res.k_oscillation <= kOscillationLimit;
  if (!res.bounded) res.upper.violations = 1;
  return res;
}

BoundReport verify_monotonicity(const std::vector<Profile>& profiles,
                                const std::vector<double>& center_values, bool check_time,
                                const MonotonicityTolerances& tol) {
  BoundReport rep;
  rep.bound_name = "monotonicity";
  rep.worst_gap = std::numeric_limits<double>::infinity();
  auto record = [&](double slack, double limit) {
    ++rep.points_checked;
    rep.worst_gap = std::min(rep.worst_gap, slack);
    if (slack < -limit) ++rep.violations;
  };
  for (const Profile& p : profiles) {
    const double scale = 1.0 + std::max(p.max(), 0.0);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      record(p.values[i], tol.negativity);
      if (i + 1 < p.values.size()) record(p.values[i] - p.values[i + 1], tol.radial * scale);
    }
  }
  if (check_time) {
    for (std::size_t k = 1; k < center_values.size(); ++k)
      record(center_values[k] - center_values[k - 1], tol.temporal);
  }
  return rep;
}

BoundReport verify_monotonicity(const Trace& trace, bool check_time,
                                const MonotonicityTolerances& tol) {
  std::vector<Profile> profiles;
  profiles.reserve(trace.snapshots.size());
  for (const auto& s : trace.snapshots) profiles.push_back(s.u);
  return verify_monotonicity(profiles, trace.center_values, check_time, tol);
}

GradientComparison compare_gradient_effect(const ProblemSpec& problem, const SolverConfig& config,
                                           const GradientTermSpec& with,
                                           const GradientTermSpec& without) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  GradientComparison cmp;

  ProblemSpec p_without = with_gradient(problem, without);
  Trace tr_without = solve(p_without, config);

  SolverConfig cfg_with = config;
  for (const auto& s : tr_without.snapshots) cfg_with.output_times.push_back(s.t);
  ProblemSpec p_with = with_gradient(problem, with);
  Trace tr_with = solve(p_with, cfg_with);

  cmp.blew_up_with = tr_with.blew_up;
  cmp.blew_up_without = tr_without.blew_up;
  cmp.T_with = tr_with.blew_up ? estimate_T(tr_with) : inf;
  cmp.T_without = tr_without.blew_up ? estimate_T(tr_without) : inf;
  if (tr_with.blew_up) cmp.slope_with = fit_rate(tr_with, cmp.T_with).slope_m;
  if (tr_without.blew_up) cmp.slope_without = fit_rate(tr_without, cmp.T_without).slope_m;

  bool dominated = true;
  cmp.worst_dominance_gap = inf;
  auto it = tr_with.snapshots.begin();
  for (const auto& s : tr_without.snapshots) {
    it = std::find_if(it, tr_with.snapshots.end(), [&](const Snapshot& x) { return x.t >= s.t; });
    if (it == tr_with.snapshots.end()) break;
    if (it->t != s.t) continue;
    const double tol = 1e-6 * (1.0 + s.u.max());
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
      double gap = s.u.values[i] - it->u.values[i];
      cmp.worst_dominance_gap = std::min(cmp.worst_dominance_gap, gap);
      if (gap < -tol) dominated = false;
    }
    ++cmp.times_compared;
  }
  cmp.dominance_ok = dominated && cmp.T_with >= cmp.T_without;
  return cmp;
}

double relative_sup_deviation(const std::vector<Profile>& a, const std::vector<Profile>& b,
                              double u_limit) {
  if (a.size() != b.size()) throw Error(Errc::Config, "profile lists differ in length");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double ref = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < b[k].values.size(); ++i) {
      ref = std::max(ref, std::abs(b[k].values[i]));
      diff = std::max(diff, std::abs(a[k].values[i] - b[k].values[i]));
    }
    if (ref == 0.0 || b[k].max() > u_limit) continue;
    worst = std::max(worst, diff / ref);
  }
  return worst;
}

}  // namespace blowup
