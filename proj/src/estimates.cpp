#include "blowup/estimates.hpp"

#include <cmath>
#include <limits>

#include "blowup/error.hpp"

namespace blowup {

FFamily::FFamily(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {
  double hi = kind == Kind::Exp2Alpha ? 0.5 : 1.0;
  if (!(alpha > 0.0 && alpha <= hi))
    throw Error(Errc::BadAlpha, "alpha = " + std::to_string(alpha) + " outside (0, " +
                                    std::to_string(hi) + "]");
}

double FFamily::F(double u) const { return std::exp(rate() * u); }
double FFamily::dF(double u) const { return rate() * std::exp(rate() * u); }
double FFamily::d2F(double u) const { return rate() * rate() * std::exp(rate() * u); }

CutoffSpec::CutoffSpec(double eps, double delta, double radius)
    : epsilon(eps), exponent_delta(delta), R(radius) {
  if (!(eps > 0.0)) throw Error(Errc::NonpositiveArgument, "cutoff epsilon must be positive");
  if (!(delta > 0.0)) throw Error(Errc::NonpositiveArgument, "cutoff exponent must be positive");
  if (!(radius > 0.0)) throw Error(Errc::NonpositiveRadius, "cutoff radius must be positive");
}

double CutoffSpec::c(double r) const { return epsilon * std::pow(r, 1.0 + exponent_delta); }

double CutoffSpec::dc(double r) const {
  return epsilon * (1.0 + exponent_delta) * std::pow(r, exponent_delta);
}

double CutoffSpec::d2c(double r) const {
  return epsilon * (1.0 + exponent_delta) * exponent_delta * std::pow(r, exponent_delta - 1.0);
}

double CutoffSpec::integral(double r) const {
  return epsilon * std::pow(r, 2.0 + exponent_delta) / (2.0 + exponent_delta);
}

double CutoffSpec::A(double r, int n) const {
  return exponent_delta * (n + exponent_delta) / (r * r);
}

double G_of(const FFamily& F, double s) {
  const double k = F.rate();
  return std::exp(-k * s) / k;
}

double G_inverse(const FFamily& F, double y) {
  if (!(y > 0.0)) throw Error(Errc::NonpositiveArgument, "G^{-1} needs a positive argument");
  const double k = F.rate();
  return -std::log(k * y) / k;
}

double alpha_validity(const CutoffSpec& cutoff) {
  const double d = cutoff.exponent_delta;
  return 1.0 / (2.0 + 4.0 * cutoff.epsilon * std::pow(cutoff.R, d) * (1.0 + d));
}

BoundParams pointwise_constants(const CutoffSpec& cutoff, double alpha) {
  if (!(alpha > 0.0)) throw Error(Errc::BadAlpha, "alpha must be positive");
  const double d = cutoff.exponent_delta;
  return {alpha, (2.0 + d) / (2.0 * cutoff.epsilon * alpha), 2.0 + d, 1.0};
}

double pointwise_bound_formula(double r, const CutoffSpec& cutoff, double alpha) {
  if (!(r > 0.0) || r > cutoff.R * (1.0 + 1e-14))
    throw Error(Errc::RadiusOutOfRange, "radius must lie in (0, R]");
  BoundParams b = pointwise_constants(cutoff, alpha);
  return (std::log(b.C) - b.m * std::log(r)) / (2.0 * alpha);
}

double pointwise_bound(double r, const CutoffSpec& cutoff, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw Error(Errc::BadAlpha, "alpha must lie in (0, 1/2]");
  if (alpha > alpha_validity(cutoff))
    throw Error(Errc::AlphaOutOfValidity,
                "alpha exceeds 1/(2 + 4 eps R^delta (1 + delta)) for this cutoff");
  return pointwise_bound_formula(r, cutoff, alpha);
}

double upper_rate_bound(double t, double T, double alpha, double C) {
  if (!(t < T)) throw Error(Errc::TimeAtOrPastT, "rate bound needs t < T");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::BadAlpha, "alpha must lie in (0, 1]");
  if (!(C > 0.0)) throw Error(Errc::NonpositiveArgument, "C must be positive");
  return (std::log(C) - std::log(T - t)) / alpha;
}

double lower_rate_bound(double t, double T, double c_lower) {
  if (!(t < T)) throw Error(Errc::TimeAtOrPastT, "rate bound needs t < T");
  if (!(c_lower > 0.0)) throw Error(Errc::NonpositiveArgument, "c must be positive");
  return std::log(c_lower) - std::log(T - t);
}

double condition_02_lhs(const FFamily& F, const CutoffSpec& cutoff, const ReactionSpec& f,
                        double K, double q, int n, double u, double r) {
  const double Fu = F.F(u);
  const double dF = F.dF(u);
  const double d2F = F.d2F(u);
  const double c = cutoff.c(r);
  const double dc = cutoff.dc(r);
  return f.derivative(u) * Fu - f.value(u) * dF - 2.0 * dc * dF * Fu + c * c * d2F * Fu * Fu -
         std::pow(2.0, q - 1.0) * K * std::pow(c, q) * std::pow(Fu, q) * dF +
         cutoff.A(r, n) * Fu;
}

MarginReport margin_condition_02(const FFamily& F, const CutoffSpec& cutoff,
                                 const ReactionSpec& f, double K, double q, int n,
                                 std::span<const double> u_grid, std::span<const double> r_grid) {
  MarginReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (double u : u_grid) {
    for (double r : r_grid) {
      double v = condition_02_lhs(F, cutoff, f, K, q, n, u, r);
      ++rep.points;
      if (v < rep.margin) rep = {v, u, r, rep.points};
    }
  }
  return rep;
}

double condition_poa_lhs(const FFamily& F, const ReactionSpec& f, const GradientTermSpec& h,
                         double u, double g) {
  return f.derivative(u) * F.F(u) - F.dF(u) * f.value(u) + F.d2F(u) * (g * g) -
         F.dF(u) * (h.derivative(g) * g - h.value(g));
}

MarginReport margin_condition_poa(const FFamily& F, const ReactionSpec& f,
                                  const GradientTermSpec& h, std::span<const double> u_grid,
                                  std::span<const double> g_grid) {
  MarginReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (double u : u_grid) {
    for (double g : g_grid) {
      double v = condition_poa_lhs(F, f, h, u, g);
      ++rep.points;
      if (v < rep.margin) rep = {v, u, g, rep.points};
    }
  }
  return rep;
}

MarginReport margin_condition_poa_pairs(const FFamily& F, const ReactionSpec& f,
                                        const GradientTermSpec& h, std::span<const double> u,
                                        std::span<const double> g) {
  if (u.size() != g.size()) throw Error(Errc::Config, "paired samples differ in length");
  MarginReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    double v = condition_poa_lhs(F, f, h, u[i], g[i]);
    ++rep.points;
    if (v < rep.margin) rep = {v, u[i], g[i], rep.points};
  }
  return rep;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) return {lo};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

}  // namespace blowup
