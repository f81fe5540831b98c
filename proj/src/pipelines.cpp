#include "blowup/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup {

namespace {

std::string describe(double x) { return format_number(x); }

bool near_integer(double m) { return std::abs(m - std::round(m)) <= 0.1; }

void add(PipelineResult& res, std::string name, bool expected, bool passed, std::string detail) {
  res.report.emplace_back("check." + name, passed ? "pass" : "fail");
  res.checks.push_back({std::move(name), expected, passed, std::move(detail)});
}

FileHeader header(const RunConfig& cfg, const std::string& producer) {
  return make_header(cfg.hash, cfg.problem.grid(), producer);
}

void write_summary(const RunConfig& cfg, const std::filesystem::path& out,
                   const std::string& producer, const PipelineResult& res) {
  KeyValues kv = res.report;
  kv.emplace_back("summary.all_expected_pass", format_bool(res.all_expected_pass()));
  write_key_values(out / (producer + "_report.txt"), header(cfg, producer), kv);
}

std::vector<Profile> profiles_of(const Trace& trace) {
  std::vector<Profile> ps;
  ps.reserve(trace.snapshots.size());
  for (const auto& s : trace.snapshots) ps.push_back(s.u);
  return ps;
}

void margin_02_for(const RunConfig& cfg, PipelineResult& res, double epsilon) {
  const auto& e = cfg.estimates;
  const auto& p = cfg.problem;
  const double K = p.gradient.kind == GradientTermSpec::Kind::None ? 0.0 : p.gradient.K;
  CutoffSpec cutoff(epsilon, e.exponent_delta, p.R);
  const double a_valid = alpha_validity(cutoff);
  FFamily F2(FFamily::Kind::Exp2Alpha, a_valid);
  auto u_grid = linspace(0.0, e.u_max, e.grid_density);
  auto r_grid = linspace(p.R / e.grid_density, p.R, e.grid_density);
  auto m02 = margin_condition_02(F2, cutoff, p.reaction, K, p.gradient.q, p.n, u_grid, r_grid);
  std::string name = "margin_02_eps_" + describe(epsilon);
  append(res.report, name, m02);
  res.report.emplace_back(name + ".alpha", describe(a_valid));
  add(res, name, true, m02.margin >= -1e-9,
      "min " + describe(m02.margin) + " at u=" + describe(m02.u_at_min) +
          " r=" + describe(m02.x_at_min));
}

void margin_poa_grid(const RunConfig& cfg, PipelineResult& res) {
  const auto& e = cfg.estimates;
  const auto& p = cfg.problem;
  auto u_grid = linspace(0.0, e.u_max, e.grid_density);
  auto g_grid = linspace(0.0, e.g_max, e.grid_density);
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    FFamily F1(FFamily::Kind::ExpAlpha, alpha);
    auto mp = margin_condition_poa(F1, p.reaction, p.gradient, u_grid, g_grid);
    std::string name = "margin_poa_alpha_" + describe(alpha);
    append(res.report, name, mp);
    add(res, name, true, mp.margin >= -1e-12,
        "min " + describe(mp.margin) + " at u=" + describe(mp.u_at_min) +
            " g=" + describe(mp.x_at_min));
  }
}

double smallest_epsilon(const RunConfig& cfg) {
  return *std::min_element(cfg.estimates.epsilon_list.begin(), cfg.estimates.epsilon_list.end());
}

}  // namespace

bool PipelineResult::all_expected_pass() const {
  for (const auto& c : checks)
    if (c.expected && !c.passed) return false;
  return true;
}

PipelineResult run_solve(const RunConfig& cfg, const std::filesystem::path& out) {
  PipelineResult res;
  Trace trace = solve(cfg.problem, cfg.solver);
  auto h = header(cfg, "solve");
  write_trace_csv(out / "trace.csv", h, trace);
  write_snapshots(out / "snapshots", h, trace.snapshots);
  res.report.emplace_back("solve.blew_up", format_bool(trace.blew_up));
  res.report.emplace_back("solve.t_end", describe(trace.t_end));
  res.report.emplace_back("solve.steps", std::to_string(trace.step_count));
  res.report.emplace_back("solve.u_cutoff", describe(trace.u_cutoff));
  res.report.emplace_back("solve.snapshots", std::to_string(trace.snapshots.size()));
  if (trace.blew_up) {
    auto fit = fit_blowup(trace);
    append(res.report, "fit", fit);
  }
  write_summary(cfg, out, "solve", res);
  return res;
}

PipelineResult run_oracle(const RunConfig& cfg, const std::filesystem::path& out) {
  PipelineResult res;
  auto ot = oracle_trace(cfg.problem, cfg.oracle);
  auto h = header(cfg, "oracle");
  write_trace_csv(out / "oracle_trace.csv", h, ot.trace);
  write_snapshots(out / "oracle_snapshots", h, ot.trace.snapshots);
  append(res.report, "oracle", ot.result);
  write_summary(cfg, out, "oracle", res);
  return res;
}

PipelineResult run_verify(const RunConfig& cfg, const std::filesystem::path& out) {
  PipelineResult res;
  const auto& p = cfg.problem;

  auto radial = check_radial_conditions(p);
  append(res.report, "radial", radial);
  add(res, "radial_conditions", true, radial.nonincreasing && radial.boundary_zero,
      "nonincreasing and zero at r = R");
  add(res, "initial_slope", false, radial.slope_ok, "worst slope " + describe(radial.worst_slope));

  const double compat = check_compatibility(p);
  res.report.emplace_back("compatibility.min", describe(compat));
  add(res, "compatibility", false, compat >= 0.0, "min " + describe(compat));

  if (p.gradient.kind != GradientTermSpec::Kind::None) {
    auto hh = check_h_hypotheses(p.gradient, cfg.estimates.g_max);
    append(res.report, "h", hh);
    add(res, "h_growth_bound", true, hh.m2_margin >= -1e-12, "margin " + describe(hh.m2_margin));
    add(res, "h_quadratic_growth", true, hh.quadratic_growth_ok, "max h/s^2 " + describe(hh.max_ratio));
  }

  Trace trace = solve(p, cfg.solver);
  res.report.emplace_back("solve.blew_up", format_bool(trace.blew_up));
  res.report.emplace_back("solve.t_end", describe(trace.t_end));
  res.report.emplace_back("solve.u_cutoff", describe(trace.u_cutoff));
  auto mono = verify_monotonicity(trace, compat >= 0.0);
  append(res.report, "monotonicity_solver", mono);
  add(res, "monotonicity_solver", true, mono.violations == 0,
      std::to_string(mono.violations) + " violations");

  double T_hat = std::numeric_limits<double>::infinity();
  double epsilon_star = 0.0;
  if (trace.blew_up) {
    auto fit = fit_blowup(trace);
    T_hat = fit.T_hat;
    append(res.report, "fit", fit);
    auto rate = fit_rate(trace, T_hat, cfg.analysis.fit_window_lo, cfg.analysis.fit_window_hi);
    append(res.report, "rate_solver", rate);
    add(res, "rate_slope_solver", false, std::abs(rate.slope_m - 1.0) <= 0.05,
        "slope " + describe(rate.slope_m));
    add(res, "rate_slope_solver_near_integer", false, near_integer(rate.slope_m),
        "distance to nearest integer " + describe(std::abs(rate.slope_m - std::round(rate.slope_m))));

    auto pw = verify_pointwise(profiles_of(trace), cfg.estimates.alpha,
                               cfg.estimates.exponent_delta, cfg.estimates.epsilon_list,
                               cfg.analysis.r_min);
    append(res.report, "pointwise", pw);
    epsilon_star = pw.epsilon_star;
    add(res, "pointwise_bound", true, pw.admissible,
        pw.admissible ? "epsilon* " + describe(pw.epsilon_star) : "no admissible epsilon");
  }

  if (p.is_model_case()) {
    auto ot = oracle_trace(p, cfg.oracle);
    append(res.report, "oracle", ot.result);
    auto omono = verify_monotonicity(ot.trace, true);
    append(res.report, "monotonicity_oracle", omono);
    add(res, "monotonicity_oracle", true, omono.violations == 0,
        std::to_string(omono.violations) + " violations");
    if (ot.result.global) {
      add(res, "global_agreement", true, !trace.blew_up, "oracle finds a global solution");
    } else {
      const double T = ot.result.T;
      if (trace.blew_up) {
        double rel = std::abs(T_hat - T) / T;
        res.report.emplace_back("T.relative_error", describe(rel));
        add(res, "blowup_time", true, rel <= 1e-2, "relative error " + describe(rel));
      } else {
        add(res, "blowup_time", true, false, "solver did not blow up");
      }
      auto rate = fit_rate(ot.trace, T, cfg.analysis.fit_window_lo, cfg.analysis.fit_window_hi);
      append(res.report, "rate_oracle", rate);
      add(res, "rate_slope_oracle", true, std::abs(rate.slope_m - 1.0) <= 0.05,
          "slope " + describe(rate.slope_m));
      add(res, "rate_slope_oracle_near_integer", false, near_integer(rate.slope_m),
          "distance to nearest integer " + describe(std::abs(rate.slope_m - std::round(rate.slope_m))));
      auto rb = verify_rate(ot.trace, T, 1.0);
      append(res.report, "rate_bounds", rb);
      add(res, "rate_lower_bound", true, rb.lower.violations == 0,
          "worst gap " + describe(rb.lower.worst_gap));
      add(res, "rate_bounded_k", true, rb.bounded, "oscillation " + describe(rb.k_oscillation));
    }
  }

  if (p.reaction.kind == ReactionSpec::Kind::Exponential) {
    margin_02_for(cfg, res, epsilon_star > 0.0 ? epsilon_star : smallest_epsilon(cfg));
    margin_poa_grid(cfg, res);
    if (trace.blew_up && !trace.snapshots.empty()) {
      std::vector<double> us, gs;
      for (const auto& s : trace.snapshots) {
        auto d = radial_derivative(s.u);
        for (std::size_t i = 0; i < d.size(); ++i) {
          us.push_back(s.u.values[i]);
          gs.push_back(std::abs(d[i]));
        }
      }
      FFamily F1(FFamily::Kind::ExpAlpha, cfg.estimates.alpha);
      auto along = margin_condition_poa_pairs(F1, p.reaction, p.gradient, us, gs);
      append(res.report, "margin_poa_along_solution", along);
      add(res, "margin_poa_along_solution", false, along.margin >= -1e-12,
          "min " + describe(along.margin));
    }
  }

  std::filesystem::create_directories(out);
  write_summary(cfg, out, "verify", res);
  return res;
}

PipelineResult run_compare(const RunConfig& cfg, const std::filesystem::path& out) {
  PipelineResult res;
  auto cmp = compare_gradient_effect(cfg.problem, cfg.solver);
  append(res.report, "compare", cmp);
  add(res, "dominance", true, cmp.dominance_ok,
      "worst gap " + describe(cmp.worst_dominance_gap));
  if (cmp.blew_up_with)
    add(res, "slope_with", true, std::abs(cmp.slope_with - 1.0) <= 0.05,
        "slope " + describe(cmp.slope_with));
  if (cmp.blew_up_without)
    add(res, "slope_without", true, std::abs(cmp.slope_without - 1.0) <= 0.05,
        "slope " + describe(cmp.slope_without));
  std::filesystem::create_directories(out);
  write_summary(cfg, out, "compare", res);
  return res;
}

PipelineResult run_conditions(const RunConfig& cfg, const std::filesystem::path& out) {
  PipelineResult res;
  const auto& p = cfg.problem;
  if (p.gradient.kind != GradientTermSpec::Kind::None) {
    auto hh = check_h_hypotheses(p.gradient, cfg.estimates.g_max);
    append(res.report, "h", hh);
    add(res, "h_growth_bound", true, hh.m2_margin >= -1e-12, "margin " + describe(hh.m2_margin));
    add(res, "h_quadratic_growth", true, hh.quadratic_growth_ok, "max h/s^2 " + describe(hh.max_ratio));
  }
  if (p.reaction.kind == ReactionSpec::Kind::Exponential) {
    for (double eps : cfg.estimates.epsilon_list) {
      CutoffSpec cutoff(eps, cfg.estimates.exponent_delta, p.R);
      std::string key = "alpha_validity.eps_" + describe(eps);
      res.report.emplace_back(key, describe(alpha_validity(cutoff)));
    }
    for (double eps : cfg.estimates.epsilon_list) margin_02_for(cfg, res, eps);
    margin_poa_grid(cfg, res);
  }
  std::filesystem::create_directories(out);
  write_summary(cfg, out, "conditions", res);
  return res;
}

std::vector<Scenario> default_suite() {
  auto exp = ReactionSpec::exponential();
  auto h = GradientTermSpec::power(2.0, 1.0);
  auto zero = [](double) { return 0.0; };
  std::vector<Scenario> s;
  s.push_back({"model_n1_R2", make_problem(1, 2.0, exp, h, zero, RadialGrid(2.0, 400))});
  s.push_back({"global_n1_R0.5", make_problem(1, 0.5, exp, h, zero, RadialGrid(0.5, 400))});
  s.push_back({"ball_n3_R3", make_problem(3, 3.0, exp, h,
                                          [](double r) { return 0.02 * (9.0 - r * r); },
                                          RadialGrid(3.0, 300))});
  s.push_back({"disk_n2_R2.5", make_problem(2, 2.5, exp, h, zero, RadialGrid(2.5, 250))});
  return s;
}

}  // namespace blowup
