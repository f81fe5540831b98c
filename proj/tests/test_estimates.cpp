#include <cmath>

#include "blowup/error.hpp"
#include "blowup/estimates.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

using Kind = FFamily::Kind;

// Composite Simpson on [s, s + L] for int 1/F, L long enough for e^{-rate L} to vanish.
double G_quadrature(const FFamily& F, double s) {
  const double L = 60.0 / F.rate();
  const int M = 20000;
  const double h = L / M;
  double sum = 1.0 / F.F(s) + 1.0 / F.F(s + L);
  for (int i = 1; i < M; ++i) sum += (i % 2 ? 4.0 : 2.0) / F.F(s + i * h);
  return sum * h / 3.0;
}

// The cutoff condition with the cutoff derivatives taken from their definitions
// and F written out directly, for F = e^{2 alpha u}, f = e^u, h = s^q.
double lhs_02_by_hand(double alpha, double eps, double delta, double K, double q, int n,
                      double u, double r) {
  const double a = 2 * alpha;
  const double F = std::exp(a * u), F1 = a * F, F2 = a * a * F;
  const double c = eps * std::pow(r, 1 + delta);
  const double c1 = eps * (1 + delta) * std::pow(r, delta);
  const double c2 = eps * (1 + delta) * delta * std::pow(r, delta - 1);
  const double A = c2 / c + (n - 1) / r * c1 / c - (n - 1) / (r * r);
  const double f = std::exp(u);
  return f * F - f * F1 - 2 * c1 * F1 * F + c * c * F2 * F * F -
         std::pow(2.0, q - 1) * K * std::pow(c * F, q) * F1 + A * F;
}

}  // namespace

TEST_CASE("F family ranges") {
  CHECK_THROWS_AS(FFamily(Kind::Exp2Alpha, 0.6), Error);
  CHECK_THROWS_AS(FFamily(Kind::ExpAlpha, 1.5), Error);
  CHECK_THROWS_AS(FFamily(Kind::ExpAlpha, 0.0), Error);
  CHECK_NOTHROW(FFamily(Kind::Exp2Alpha, 0.5));
  FFamily F(Kind::ExpAlpha, 0.3);
  CHECK(F.F(2.0) == doctest::Approx(std::exp(0.6)));
  CHECK(F.dF(2.0) == doctest::Approx(0.3 * std::exp(0.6)));
  CHECK(F.d2F(2.0) == doctest::Approx(0.09 * std::exp(0.6)));
}

TEST_CASE("cutoff and A") {
  CutoffSpec c(0.3, 0.5, 2.0);
  CHECK(c.c(0.0) == 0.0);
  CHECK(c.integral(1.5) == doctest::Approx(0.3 * std::pow(1.5, 2.5) / 2.5));
  for (int n : {1, 2, 3})
    for (double r : {0.1, 0.7, 1.9}) {
      const double h = 1e-4;
      double d1 = (c.c(r + h) - c.c(r - h)) / (2 * h);
      double d2 = (c.c(r + h) - 2 * c.c(r) + c.c(r - h)) / (h * h);
      CHECK(c.dc(r) == doctest::Approx(d1).epsilon(1e-8));
      CHECK(c.d2c(r) == doctest::Approx(d2).epsilon(1e-5));
      double A = d2 / c.c(r) + (n - 1) / r * d1 / c.c(r) - (n - 1) / (r * r);
      CHECK(c.A(r, n) == doctest::Approx(A).epsilon(1e-5));
      CHECK(c.A(r, n) == doctest::Approx(0.5 * (n + 0.5) / (r * r)));
    }
}

TEST_CASE("G and its inverse") {
  CHECK(G_of(FFamily(Kind::ExpAlpha, 1.0), 0.0) == doctest::Approx(1.0));
  CHECK(G_of(FFamily(Kind::Exp2Alpha, 0.5), 0.0) == doctest::Approx(1.0));
  CHECK(G_of(FFamily(Kind::Exp2Alpha, 0.5), std::log(4.0)) == doctest::Approx(0.25));
  CHECK(G_inverse(FFamily(Kind::ExpAlpha, 1.0), 1.0) == doctest::Approx(0.0));
  CHECK(G_inverse(FFamily(Kind::Exp2Alpha, 0.5), 0.25) == doctest::Approx(std::log(4.0)));
  CHECK_THROWS_AS(G_inverse(FFamily(Kind::ExpAlpha, 1.0), 0.0), Error);

  for (Kind k : {Kind::Exp2Alpha, Kind::ExpAlpha})
    for (double alpha : {0.1, 0.25, 0.5}) {
      FFamily F(k, alpha);
      for (double s : {0.0, 0.1, 1.0, 3.0})
        CHECK(G_of(F, s) == doctest::Approx(G_quadrature(F, s)).epsilon(1e-10));
      double prev = INFINITY;
      for (int i = 0; i <= 100; ++i) {
        double s = 1e-3 + (30.0 - 1e-3) * i / 100;
        double g = G_of(F, s);
        CHECK(g < prev);
        prev = g;
        CHECK(std::abs(G_inverse(F, g) - s) <= 1e-12 * std::max(1.0, s));
      }
    }
}

TEST_CASE("alpha validity") {
  CHECK(alpha_validity(CutoffSpec(1e-12, 0.5, 2.0)) == doctest::Approx(0.5));
  CHECK(alpha_validity(CutoffSpec(1.0, 1.0, 1.0)) == doctest::Approx(0.1));
  CHECK(alpha_validity(CutoffSpec(0.01, 0.5, 2.0)) ==
        doctest::Approx(1 / (2 + 0.04 * std::sqrt(2.0) * 1.5)));
}

TEST_CASE("pointwise bound") {
  CutoffSpec c(0.01, 0.5, 2.0);
  CHECK(pointwise_bound_formula(1.0, c, 0.5) == doctest::Approx(std::log(250.0)));
  CHECK_THROWS_AS(pointwise_bound(1.0, c, 0.5), Error);  // 1/2 exceeds alpha_validity here
  double a = alpha_validity(c);
  auto k = pointwise_constants(c, a);
  double r0 = std::pow(k.C, 1 / k.m);
  if (r0 <= c.R) CHECK(pointwise_bound(r0, c, a) == doctest::Approx(0.0));
  CHECK_THROWS_AS(pointwise_bound(0.0, c, a), Error);
  CHECK_THROWS_AS(pointwise_bound(2.5, c, a), Error);

  double prev = INFINITY;
  for (int i = 1; i <= 200; ++i) {
    double r = 2.0 * i / 200;
    double b = pointwise_bound(r, c, a);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(pointwise_bound(1e-12, c, a) > pointwise_bound(1e-6, c, a));

  CutoffSpec smaller(0.001, 0.5, 2.0);
  for (double r : {0.1, 1.0, 2.0})
    CHECK(pointwise_bound_formula(r, smaller, 0.5) > pointwise_bound_formula(r, c, 0.5));

  for (double eps : {1e-3, 1e-2, 0.1})
    for (double delta : {0.25, 0.5, 1.0}) {
      CutoffSpec cs(eps, delta, 2.0);
      double al = alpha_validity(cs) * 0.9;
      for (double r : {0.05, 0.5, 1.3, 2.0})
        CHECK(std::abs(pointwise_bound(r, cs, al) -
                       G_inverse(FFamily(Kind::Exp2Alpha, al), cs.integral(r))) <=
              1e-12 * std::max(1.0, std::abs(pointwise_bound(r, cs, al))));
    }
}

TEST_CASE("rate bounds") {
  CHECK(upper_rate_bound(5.0 - 2.0, 5.0, 1.0, 2.0) == doctest::Approx(0.0));
  CHECK(lower_rate_bound(4.0, 5.0, 1.0) == doctest::Approx(0.0));
  double t = 1.0 - std::exp(-5.0);
  CHECK(upper_rate_bound(t, 1.0, 1.0, 1.0) == doctest::Approx(5.0));
  CHECK(lower_rate_bound(t, 1.0, 1.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(upper_rate_bound(1.0, 1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(lower_rate_bound(2.0, 1.0, 1.0), Error);
}

TEST_CASE("cutoff condition matches an independent evaluation") {
  for (double eps : {0.01, 0.1})
    for (double delta : {0.5, 1.0})
      for (int n : {1, 3}) {
        CutoffSpec c(eps, delta, 2.0);
        double a = alpha_validity(c);
        FFamily F(Kind::Exp2Alpha, a);
        for (double u : {0.0, 1.0, 5.0, 12.0})
          for (double r : {0.01, 0.5, 2.0}) {
            double got = condition_02_lhs(F, c, ReactionSpec::exponential(), 1.0, 2.0, n, u, r);
            double want = lhs_02_by_hand(a, eps, delta, 1.0, 2.0, n, u, r);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
          }
      }
}

TEST_CASE("cutoff condition margin bookkeeping") {
  CutoffSpec c(0.01, 0.5, 2.0);
  FFamily F(Kind::Exp2Alpha, alpha_validity(c));
  auto u = linspace(0.0, 30.0, 50);
  auto r = linspace(0.01, 2.0, 50);
  auto rep = margin_condition_02(F, c, ReactionSpec::exponential(), 1.0, 2.0, 1, u, r);
  CHECK(rep.points == 2500);
  double brute = INFINITY;
  for (double x : u)
    for (double y : r)
      brute = std::min(brute, condition_02_lhs(F, c, ReactionSpec::exponential(), 1, 2, 1, x, y));
  CHECK(rep.margin == brute);
  CHECK(condition_02_lhs(F, c, ReactionSpec::exponential(), 1, 2, 1, rep.u_at_min, rep.x_at_min) ==
        rep.margin);

  // As eps shrinks the margin approaches min of f'F - fF' + AF.
  CutoffSpec tiny(1e-8, 0.5, 2.0);
  FFamily Ft(Kind::Exp2Alpha, 0.4);
  auto near = margin_condition_02(Ft, tiny, ReactionSpec::exponential(), 1.0, 2.0, 1, u, r);
  double limit = INFINITY;
  for (double x : u)
    for (double y : r) {
      double F0 = Ft.F(x);
      limit = std::min(limit, std::exp(x) * F0 - std::exp(x) * Ft.dF(x) + tiny.A(y, 1) * F0);
    }
  CHECK(near.margin == doctest::Approx(limit).epsilon(1e-6));
  CHECK(near.margin >= 0.0);
}

TEST_CASE("gradient condition") {
  auto u = linspace(0.0, 30.0, 200);
  auto g = linspace(0.0, 10.0, 200);
  auto f = ReactionSpec::exponential();
  auto h = GradientTermSpec::power(2, 1);
  auto one = margin_condition_poa(FFamily(Kind::ExpAlpha, 1.0), f, h, u, g);
  CHECK(std::abs(one.margin) <= 1e-12);
  auto arbitrary = linspace(0.37, 13.1, 37);
  for (double x : arbitrary)
    for (double y : arbitrary)
      CHECK(condition_poa_lhs(FFamily(Kind::ExpAlpha, 1.0), f, h, x, y) == 0.0);

  // Closed form (1 - a) e^{(1+a)u} + (a^2 - a) e^{a u} g^2.
  for (double a : {0.25, 0.5, 0.75}) {
    FFamily F(Kind::ExpAlpha, a);
    for (double x : {0.0, 1.0, 4.0})
      for (double y : {0.0, 2.0, 10.0})
        CHECK(condition_poa_lhs(F, f, h, x, y) ==
              doctest::Approx((1 - a) * std::exp((1 + a) * x) + (a * a - a) * std::exp(a * x) * y * y));
  }

  // Brute-force scan at alpha = 1/2 over [0,10]^2 with the closed form.
  auto u10 = linspace(0.0, 10.0, 101);
  auto g10 = linspace(0.0, 10.0, 101);
  auto half = margin_condition_poa(FFamily(Kind::ExpAlpha, 0.5), f, h, u10, g10);
  double brute = INFINITY, bu = 0.0, bg = 0.0;
  for (double x : u10)
    for (double y : g10) {
      double v = 0.5 * std::exp(1.5 * x) - 0.25 * std::exp(0.5 * x) * y * y;
      if (v < brute) brute = v, bu = x, bg = y;
    }
  CHECK(half.margin == doctest::Approx(brute));
  CHECK(half.u_at_min == bu);
  CHECK(half.x_at_min == bg);
  CHECK(bg == 10.0);
  // The continuous minimizer in u at g = 10 solves e^u = 50/3.
  CHECK(std::abs(bu - std::log(50.0 / 3.0)) <= 0.05 + 1e-12);
  CHECK(condition_poa_lhs(FFamily(Kind::ExpAlpha, 0.5), f, h, 0.0, 10.0) == doctest::Approx(-24.5));

  std::vector<double> us{0.0, 1.0}, gs{0.0, 1.0};
  auto pairs = margin_condition_poa_pairs(FFamily(Kind::ExpAlpha, 0.5), f, h, us, gs);
  CHECK(pairs.points == 2);
  CHECK(pairs.margin == doctest::Approx(std::min(0.5, 0.5 * std::exp(1.5) - 0.25 * std::exp(0.5))));

  CHECK_THROWS_AS(FFamily(Kind::ExpAlpha, 1.5), Error);
}
