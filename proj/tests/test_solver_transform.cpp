#include <cmath>

#include "blowup/analysis.hpp"
#include "blowup/error.hpp"
#include "blowup/solver_transform.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

ProblemSpec zero_problem(int n, double R, int N) {
  return make_problem(n, R, ReactionSpec::exponential(), GradientTermSpec::power(2, 1),
                      [](double) { return 0.0; }, RadialGrid(R, N));
}

}  // namespace

TEST_CASE("transform examples") {
  CHECK(transform_forward(0.0) == 0.0);
  CHECK(transform_forward(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(1.0 - transform_forward(20.0) == doctest::Approx(std::exp(-20.0)).epsilon(1e-6));
  CHECK(transform_inverse(0.0) == 0.0);
  CHECK(transform_inverse(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(transform_inverse(1.0), Error);
}

namespace {

double worst_round_trip(double u_max) {
  double worst = 0.0;
  for (int k = 0; 0.01 * k <= u_max + 1e-9; ++k) {
    double u = 0.01 * k;
    double err = std::abs(transform_inverse(transform_forward(u)) - u) / std::max(1.0, u);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace

TEST_CASE("transform round trip for moderate u") { CHECK(worst_round_trip(11.0) <= 1e-12); }

// v = 1 - e^{-u} is stored next to 1, so 1 - v keeps only about 1e-16 e^{u} relative accuracy.
TEST_CASE("transform round trip on [0, 30]") {
  double worst = worst_round_trip(30.0);
  MESSAGE("worst relative round-trip error " << worst);
  CHECK(worst <= 1e-12);
}

TEST_CASE("discrete steady state is a fixed point of the step") {
  for (int n : {1, 2, 3}) {
    RadialGrid g(2.0, 50);
    auto w = discrete_steady_state(g, n);
    // This stencil is exact on quadratics, so w matches (R^2 - r^2)/2n.
    for (int i = 0; i <= g.N(); ++i)
      CHECK(w[i] == doctest::Approx((4.0 - g.node(i) * g.node(i)) / (2 * n)).epsilon(1e-12));
    TransformField f{g, w, 0.0};
    auto next = linear_step(f, 0.01, n);
    for (int i = 0; i <= g.N(); ++i) CHECK(std::abs(next.values[i] - w[i]) <= 1e-12);
    CHECK(next.t == doctest::Approx(0.01));
  }
}

TEST_CASE("one step from zero") {
  RadialGrid g(1.0, 40);
  TransformField f{g, std::vector<double>(g.size(), 0.0), 0.0};
  auto next = linear_step(f, 1e-3, 2);
  double mx = *std::max_element(next.values.begin(), next.values.end());
  CHECK(mx > 0.0);
  CHECK(mx <= 1e-3 + 1e-15);
  CHECK(next.values.back() == 0.0);
}

TEST_CASE("Crank-Nicolson local error is third order") {
  RadialGrid g(1.0, 20);
  // Steady state plus a smooth mode, so that Lap v + 1 vanishes at r = R.
  std::vector<double> v0 = discrete_steady_state(g, 1);
  for (int i = 0; i <= g.N(); ++i) v0[i] += 0.3 * std::cos(M_PI * g.node(i) / 2);
  auto err = [&](double dt) {
    TransformField f{g, v0, 0.0};
    auto one = linear_step(f, dt, 1);
    auto two = linear_step(linear_step(f, dt / 2, 1), dt / 2, 1);
    double e = 0;
    for (int i = 0; i <= g.N(); ++i) e = std::max(e, std::abs(one.values[i] - two.values[i]));
    return e;
  };
  CHECK(err(2e-4) / err(1e-4) == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("find_blowup examples") {
  auto global = find_blowup(zero_problem(1, 0.5, 100));
  CHECK(global.global);
  CHECK(std::isinf(global.T));

  auto model = find_blowup(zero_problem(1, 2.0, 400));
  CHECK_FALSE(model.global);
  CHECK(model.r_blow == 0.0);
  CHECK(model.N == 400);
  // Frozen reference from this implementation at N = 400.
  CHECK(model.T == doctest::Approx(1.1746477926078762).epsilon(1e-9));
  CHECK(model.tol <= 1e-10 * (1 + model.T));

  auto hot = make_problem(1, 1.0, ReactionSpec::exponential(), GradientTermSpec::power(2, 1),
                          [](double r) { return 40.0 * (1 - r); }, RadialGrid(1.0, 20));
  CHECK_THROWS_AS(find_blowup(hot), Error);

  auto damped_none = make_problem(1, 2.0, ReactionSpec::exponential(), GradientTermSpec::none(),
                                  [](double) { return 0.0; }, RadialGrid(2.0, 40));
  try {
    find_blowup(damped_none);
    FAIL("expected NotModelCase");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotModelCase);
  }
}

TEST_CASE("oracle blow-up time converges at second order") {
  double T1 = find_blowup(zero_problem(1, 2.0, 100)).T;
  double T2 = find_blowup(zero_problem(1, 2.0, 200)).T;
  double T3 = find_blowup(zero_problem(1, 2.0, 400)).T;
  double ratio = (T1 - T2) / (T2 - T3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("oracle profiles are monotone and peak at the origin") {
  for (int n : {1, 3}) {
    auto p = zero_problem(n, n == 1 ? 2.0 : 3.0, 150);
    auto T = find_blowup(p).T;
    std::vector<double> times;
    for (int k = 1; k <= 20; ++k) times.push_back(T * (1 - std::pow(0.6, k)));
    auto ps = oracle_profiles(p, times);
    double prev = -1;
    for (const auto& u : ps) {
      CHECK(u[0] == u.max());
      for (std::size_t i = 1; i < u.values.size(); ++i) CHECK(u[i] <= u[i - 1] + 1e-12);
      CHECK(u.max() >= prev - 1e-12);
      prev = u.max();
    }
  }
}

TEST_CASE("oracle trace reaches the cutoff with the expected rate") {
  auto ot = oracle_trace(zero_problem(1, 2.0, 200));
  REQUIRE(ot.trace.blew_up);
  CHECK(ot.trace.center_values.back() >= 20.0);
  for (std::size_t k = 1; k < ot.trace.times.size(); ++k) {
    CHECK(ot.trace.times[k] > ot.trace.times[k - 1]);
    CHECK(ot.trace.times[k] < ot.result.T);
    CHECK(ot.trace.center_values[k] >= ot.trace.center_values[k - 1] - 1e-12);
  }
  auto fit = fit_rate(ot.trace, ot.result.T);
  CHECK(fit.slope_m == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("single profile matches the batch march") {
  auto p = zero_problem(2, 2.5, 80);
  auto a = oracle_profile(p, 0.3);
  auto b = oracle_profiles(p, {0.1, 0.3});
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a[i] == doctest::Approx(b[1][i]).epsilon(1e-12));
}
