#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace blowup {

/// Reaction term f(u): e^u or u|u|^{p-1}.
struct ReactionSpec {
  enum class Kind { Exponential, PowerP };

  Kind kind = Kind::Exponential;
  double p = 2.0;

  static ReactionSpec exponential() { return {}; }
  static ReactionSpec power(double p);

  double value(double u) const;
  double derivative(double u) const;
};

/// Gradient damping term h(s) for s = |grad u|: h = 0 or h = s^q.
/// K is the constant certifying s h'(s) - h(s) <= K s^q.
struct GradientTermSpec {
  enum class Kind { None, PowerQ };

  Kind kind = Kind::None;
  double q = 2.0;
  double K = 1.0;

  static GradientTermSpec none() { return {}; }
  static GradientTermSpec power(double q, double K);

  double value(double s) const;
  double derivative(double s) const;
};

/// Uniform mesh r_i = i * R / N on [0, R].
class RadialGrid {
 public:
  RadialGrid(double R, int N);

  double R() const noexcept { return R_; }
  int N() const noexcept { return N_; }
  double dr() const noexcept { return R_ / N_; }
  double node(int i) const noexcept { return i == N_ ? R_ : i * dr(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(N_) + 1; }
  std::vector<double> nodes() const;

  bool operator==(const RadialGrid&) const = default;

 private:
  double R_;
  int N_;
};

/// Nodal values of a radial function.
struct Profile {
  RadialGrid grid;
  std::vector<double> values;

  Profile(RadialGrid grid, std::vector<double> values);

  static Profile sample(const RadialGrid& grid, const std::function<double(double)>& fn);
  static Profile zeros(const RadialGrid& grid);

  double max() const;
  double operator[](std::size_t i) const { return values[i]; }
};

struct InitialData {
  Profile values;
  double slope_delta = 0.0;  // lower bound on -u0_r away from the center
  double r_min_slope = 0.0;  // slope condition is checked on [r_min_slope, R]
};

struct ProblemSpec {
  int n = 1;
  double R = 1.0;
  ReactionSpec reaction;
  GradientTermSpec gradient;
  InitialData initial;

  const RadialGrid& grid() const noexcept { return initial.values.grid; }

  /// f = e^u and h = s^2, the case the transformation v = 1 - e^{-u} linearizes.
  bool is_model_case() const noexcept;
};

/// Samples u0 on the grid and validates the problem.
/// r_min_slope defaults to one mesh cell.
ProblemSpec make_problem(int n, double R, const ReactionSpec& reaction,
                         const GradientTermSpec& gradient,
                         const std::function<double(double)>& u0, const RadialGrid& grid,
                         double slope_delta = 0.0,
                         std::optional<double> r_min_slope = std::nullopt);

/// Same problem and data with a different gradient term.
ProblemSpec with_gradient(const ProblemSpec& problem, const GradientTermSpec& gradient);

/// Discrete u_r: central differences inside, one-sided second order at both ends.
std::vector<double> radial_derivative(const Profile& p);

struct RadialConditionsReport {
  bool nonincreasing = false;
  bool boundary_zero = false;
  bool slope_ok = false;
  double worst_slope = 0.0;
};

RadialConditionsReport check_radial_conditions(const ProblemSpec& problem, double tol = 1e-12);

/// min over the origin and interior nodes of  Lap u0 + f(u0) - h(|u0_r|).
double check_compatibility(const ProblemSpec& problem);

struct HHypothesesReport {
  double m2_margin = 0.0;
  bool quadratic_growth_ok = false;
  double max_ratio = 0.0;  // max sampled h(s)/s^2
};

HHypothesesReport check_h_hypotheses(const GradientTermSpec& gradient, double s_max,
                                     int samples = 1000);

}  // namespace blowup
