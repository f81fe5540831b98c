#include <cmath>

#include "blowup/analysis.hpp"
#include "blowup/error.hpp"
#include "blowup/solver_transform.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace blowup;
using blowup::testing::synthetic_trace;

namespace {

ProblemSpec model(int N) {
  return make_problem(1, 2.0, ReactionSpec::exponential(), GradientTermSpec::power(2, 1),
                      [](double) { return 0.0; }, RadialGrid(2.0, N));
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Config;
}

}  // namespace

TEST_CASE("estimate_T on exact traces") {
  CHECK(estimate_T(synthetic_trace(1.0, 1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(estimate_T(synthetic_trace(2.0, 1.0, 0.3)) - 2.0) <= 1e-10);
  for (double T : {0.5, 1.0, 5.0})
    for (double k : {-1.0, 0.0, 2.0}) {
      auto fit = fit_blowup(synthetic_trace(T, 1.0, k));
      CHECK(std::abs(fit.T_hat - T) <= 1e-9);
      CHECK(fit.T_hat > fit.window.second);
      CHECK(fit.residual >= 0.0);
    }
  auto two = fit_blowup(synthetic_trace(1.0, 2.0, 1.0));
  CHECK(std::abs(two.T_hat - 1.0) <= 1e-9);
  CHECK(two.slope_m == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("estimate_T errors") {
  auto tr = synthetic_trace(1.0, 1.0, 0.0);
  tr.blew_up = false;
  CHECK(code_of([&] { estimate_T(tr); }) == Errc::NoBlowup);

  auto sparse = synthetic_trace(1.0, 1.0, 0.0, 20.0, 1);
  sparse.times.erase(sparse.times.end() - 3, sparse.times.end() - 1);
  sparse.center_values.erase(sparse.center_values.end() - 3, sparse.center_values.end() - 1);
  CHECK(code_of([&] { estimate_T(sparse); }) == Errc::WindowEmpty);

  auto noisy = synthetic_trace(1.0, 1.0, 0.0);
  for (std::size_t i = 0; i < noisy.center_values.size(); ++i)
    noisy.center_values[i] += (i % 2 ? 1.0 : -1.0);
  CHECK(code_of([&] { estimate_T(noisy); }) == Errc::PoorFit);
}

TEST_CASE("fit_rate on exact traces") {
  auto a = fit_rate(synthetic_trace(1.0, 1.0, 0.0), 1.0);
  CHECK(a.slope_m == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(a.intercept_k) <= 1e-9);
  CHECK(a.residual < 1e-10);
  auto b = fit_rate(synthetic_trace(0.7, 2.0, 3.0), 0.7);
  CHECK(b.slope_m == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(b.intercept_k == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(b.residual < 1e-10);
  CHECK(b.window.first >= 0.0);
  CHECK(code_of([] {
          auto t = synthetic_trace(1.0, 1.0, 0.0, 20.0, 16);
          fit_rate(t, 1.0, 0.5, 0.4);
        }) == Errc::WindowEmpty);
}

TEST_CASE("verify_rate on synthetic traces") {
  auto exact = verify_rate(synthetic_trace(1.0, 1.0, 0.0), 1.0, 1.0);
  CHECK(exact.lower.violations == 0);
  CHECK(std::abs(exact.lower.worst_gap) <= 1e-12);
  CHECK(exact.C_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.bounded);

  auto low = verify_rate(synthetic_trace(1.0, 1.0, -0.1), 1.0, 1.0);
  CHECK(low.lower.violations > 0);
  CHECK(low.lower.worst_gap == doctest::Approx(-0.1).epsilon(1e-9));
}

TEST_CASE("verify_pointwise") {
  RadialGrid g(2.0, 100);
  std::vector<Profile> zero{Profile::zeros(g)};
  auto res = verify_pointwise(zero, 0.5, 0.5, {0.01, 1.0, 0.1}, 0.1);
  CHECK(res.admissible);
  CHECK(res.epsilon_star == 1.0);
  CHECK(res.report.violations == 0);
  CHECK(res.scanned.front().epsilon == 1.0);

  // A profile of height M at r_min is admitted once log C >= 2 alpha M + m |log r_min|.
  const double M = 5.0, r_min = 0.1, alpha = 0.5, delta = 0.5;
  auto bump = Profile::sample(g, [&](double r) { return r <= r_min ? M : 0.0; });
  const double need = std::exp(2 * alpha * M + (2 + delta) * std::abs(std::log(r_min)));
  const double eps_ok = (2 + delta) / (2 * alpha * need);
  auto r2 = verify_pointwise({bump}, alpha, delta, {eps_ok * 0.99, 100.0}, r_min);
  CHECK(r2.admissible);
  CHECK(r2.epsilon_star == eps_ok * 0.99);
  CHECK(r2.scanned.front().report.violations > 0);

  auto none = verify_pointwise({bump}, alpha, delta, {100.0}, r_min);
  CHECK_FALSE(none.admissible);
  CHECK(none.epsilon_star == 0.0);
}

TEST_CASE("verify_monotonicity") {
  RadialGrid g(1.0, 20);
  std::vector<Profile> zero{Profile::zeros(g), Profile::zeros(g)};
  CHECK(verify_monotonicity(zero, {0.0, 0.0}, true).violations == 0);
  auto bump = Profile::sample(g, [](double r) { return std::abs(r - 0.5) < 0.1 ? 1.0 : 0.0; });
  CHECK(verify_monotonicity({bump}, {0.0}, false).violations > 0);
  auto neg = Profile::sample(g, [](double) { return -1e-6; });
  CHECK(verify_monotonicity({neg}, {-1e-6}, false).violations > 0);
  auto fine = Profile::sample(g, [](double r) { return 1 - r * r; });
  CHECK(verify_monotonicity({fine, fine}, {1.0, 0.5}, true).violations == 1);
  CHECK(verify_monotonicity({fine, fine}, {1.0, 0.5}, false).violations == 0);
}

TEST_CASE("oracle traces pass the rate and monotonicity checks") {
  auto ot = oracle_trace(model(200));
  auto rate = verify_rate(ot.trace, ot.result.T, 1.0);
  CHECK(rate.lower.violations == 0);
  CHECK(std::isfinite(rate.C_hat));
  CHECK(rate.bounded);
  CHECK(verify_monotonicity(ot.trace, true).violations == 0);
}

TEST_CASE("model scenario blow-up time from the solver") {
  SolverConfig cfg;
  auto tr = solve(model(200), cfg);
  double T = find_blowup(model(200)).T;
  CHECK(std::abs(estimate_T(tr) - T) / T <= 1e-2);
}

TEST_CASE("gradient comparison") {
  auto small = make_problem(1, 0.5, ReactionSpec::exponential(), GradientTermSpec::power(2, 1),
                            [](double) { return 0.0; }, RadialGrid(0.5, 30));
  SolverConfig cfg;
  cfg.t_max = 20;
  auto g = compare_gradient_effect(small, cfg);
  CHECK_FALSE(g.blew_up_with);
  CHECK_FALSE(g.blew_up_without);
  CHECK(g.dominance_ok);

  auto m = model(100);
  auto same = compare_gradient_effect(m, cfg, GradientTermSpec::power(2, 1),
                                      GradientTermSpec::power(2, 1));
  CHECK(same.T_with == same.T_without);
  CHECK(same.dominance_ok);

  auto diff = compare_gradient_effect(m, cfg);
  CHECK(diff.blew_up_with);
  CHECK(diff.blew_up_without);
  CHECK(diff.dominance_ok);
  CHECK(diff.T_with > diff.T_without);
  CHECK(diff.times_compared > 0);
}

TEST_CASE("relative sup deviation") {
  RadialGrid g(1.0, 10);
  auto a = Profile::sample(g, [](double r) { return 2 * (1 - r); });
  auto b = Profile::sample(g, [](double r) { return 2 * (1 - r) + 0.02 * (r < 0.5); });
  CHECK(relative_sup_deviation({a}, {b}, 10.0) == doctest::Approx(0.02 / 2.02));
  CHECK(relative_sup_deviation({a}, {b}, 1.0) == 0.0);
  CHECK(relative_sup_deviation({Profile::zeros(g)}, {Profile::zeros(g)}, 1.0) == 0.0);
}
