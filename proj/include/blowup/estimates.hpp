#pragma once

#include <span>
#include <vector>

#include "blowup/core.hpp"

namespace blowup {

/// Auxiliary function F of the maximum-principle arguments.
/// Exp2Alpha: F(u) = e^{2 alpha u}, alpha in (0, 1/2].
/// ExpAlpha:  F(u) = e^{alpha u},   alpha in (0, 1].
class FFamily {
 public:
  enum class Kind { Exp2Alpha, ExpAlpha };

  /// Throws Errc::BadAlpha outside the admissible range.
  FFamily(Kind kind, double alpha);

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  /// Exponent rate: 2 alpha or alpha.
  double rate() const noexcept { return kind_ == Kind::Exp2Alpha ? 2.0 * alpha_ : alpha_; }

  double F(double u) const;
  double dF(double u) const;
  double d2F(double u) const;

 private:
  Kind kind_;
  double alpha_;
};

/// c_eps(r) = eps r^{1 + delta} on [0, R].
struct CutoffSpec {
  double epsilon = 0.01;
  double exponent_delta = 0.5;
  double R = 1.0;

  CutoffSpec(double epsilon, double exponent_delta, double R);

  double c(double r) const;
  double dc(double r) const;
  double d2c(double r) const;
  /// int_0^r c(z) dz = eps r^{2+delta} / (2+delta).
  double integral(double r) const;
  /// c''/c + ((n-1)/r) c'/c - (n-1)/r^2, which reduces to delta(n+delta)/r^2.
  double A(double r, int n) const;
};

struct BoundParams {
  double alpha = 0.0;
  double C = 0.0;
  double m = 0.0;
  double c_lower = 1.0;
};

/// G(s) = int_s^inf du / F(u).
double G_of(const FFamily& F, double s);
/// Inverse of G_of; throws Errc::NonpositiveArgument for y <= 0.
double G_inverse(const FFamily& F, double y);

/// Largest alpha certified for the cutoff: 1 / (2 + 4 eps R^delta (1+delta)).
double alpha_validity(const CutoffSpec& cutoff);

/// C = (2+delta)/(2 eps alpha), m = 2 + delta.
BoundParams pointwise_constants(const CutoffSpec& cutoff, double alpha);

/// (1/2alpha)[log C - m log r] without the validity constraint on alpha.
double pointwise_bound_formula(double r, const CutoffSpec& cutoff, double alpha);

/// Same value, enforcing alpha <= alpha_validity(cutoff) and r in (0, R].
double pointwise_bound(double r, const CutoffSpec& cutoff, double alpha);

/// (1/alpha)[log C - log(T - t)].
double upper_rate_bound(double t, double T, double alpha, double C);
/// log c - log(T - t).
double lower_rate_bound(double t, double T, double c_lower);

struct MarginReport {
  double margin = 0.0;  // minimum over the scanned grid
  double u_at_min = 0.0;
  double x_at_min = 0.0;  // r for the cutoff condition, |grad u| for the gradient one
  long points = 0;
};

/// LHS of
///   f'F - fF' - 2c'F'F + c^2 F''F^2 - 2^{q-1} K c^q F^q F' + A F
/// at (u, r), with A = delta(n+delta)/r^2.
double condition_02_lhs(const FFamily& F, const CutoffSpec& cutoff, const ReactionSpec& f,
                        double K, double q, int n, double u, double r);

MarginReport margin_condition_02(const FFamily& F, const CutoffSpec& cutoff,
                                 const ReactionSpec& f, double K, double q, int n,
                                 std::span<const double> u_grid, std::span<const double> r_grid);

/// LHS of  f'F - F'f + F''g^2 - F'[h'(g) g - h(g)]  at (u, g = |grad u|).
double condition_poa_lhs(const FFamily& F, const ReactionSpec& f, const GradientTermSpec& h,
                         double u, double g);

/// Minimum over the product grid u_grid x g_grid.
MarginReport margin_condition_poa(const FFamily& F, const ReactionSpec& f,
                                  const GradientTermSpec& h, std::span<const double> u_grid,
                                  std::span<const double> g_grid);

/// Minimum over paired samples (u[i], g[i]), e.g. taken along a solution.
MarginReport margin_condition_poa_pairs(const FFamily& F, const ReactionSpec& f,
                                        const GradientTermSpec& h, std::span<const double> u,
                                        std::span<const double> g);

/// count points evenly spaced on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace blowup
