#include "blowup/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/error.hpp"
#include "blowup/solver_nonlinear.hpp"

namespace blowup {

namespace {
constexpr double kDataTol = 1e-12;
}

ReactionSpec ReactionSpec::power(double p) {
  if (!(p > 1.0)) throw Error(Errc::Config, "reaction exponent p must exceed 1");
  return {Kind::PowerP, p};
}

double ReactionSpec::value(double u) const {
  if (kind == Kind::Exponential) return std::exp(u);
  return u * std::pow(std::abs(u), p - 1.0);
}

double ReactionSpec::derivative(double u) const {
  if (kind == Kind::Exponential) return std::exp(u);
  return p * std::pow(std::abs(u), p - 1.0);
}

GradientTermSpec GradientTermSpec::power(double q, double K) {
  if (!(q > 1.0)) throw Error(Errc::Config, "gradient exponent q must exceed 1");
  if (!(K >= 0.0)) throw Error(Errc::Config, "gradient constant K must be nonnegative");
  return {Kind::PowerQ, q, K};
}

double GradientTermSpec::value(double s) const {
  if (kind == Kind::None) return 0.0;
  return q == 2.0 ? s * s : std::pow(s, q);
}

double GradientTermSpec::derivative(double s) const {
  if (kind == Kind::None) return 0.0;
  return q == 2.0 ? 2.0 * s : q * std::pow(s, q - 1.0);
}

RadialGrid::RadialGrid(double R, int N) : R_(R), N_(N) {
  if (!(R > 0.0)) throw Error(Errc::NonpositiveRadius, "grid radius must be positive");
  if (N < 3) throw Error(Errc::GridTooCoarse, "grid needs at least 3 intervals");
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(size());
  for (int i = 0; i <= N_; ++i) r[i] = node(i);
  return r;
}

Profile::Profile(RadialGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw Error(Errc::Config, "profile length does not match its grid");
}

Profile Profile::sample(const RadialGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (int i = 0; i <= grid.N(); ++i) v[i] = fn(grid.node(i));
  return {grid, std::move(v)};
}

Profile Profile::zeros(const RadialGrid& grid) { return {grid, std::vector<double>(grid.size())}; }

double Profile::max() const { return *std::max_element(values.begin(), values.end()); }

bool ProblemSpec::is_model_case() const noexcept {
  return reaction.kind == ReactionSpec::Kind::Exponential &&
         gradient.kind == GradientTermSpec::Kind::PowerQ && gradient.q == 2.0;
}

ProblemSpec make_problem(int n, double R, const ReactionSpec& reaction,
                         const GradientTermSpec& gradient,
                         const std::function<double(double)>& u0, const RadialGrid& grid,
                         double slope_delta, std::optional<double> r_min_slope) {
  if (!(R > 0.0)) throw Error(Errc::NonpositiveRadius, "ball radius must be positive");
  if (n < 1) throw Error(Errc::BadDimension, "space dimension must be at least 1");
  if (std::abs(grid.R() - R) > 1e-14 * R)
    throw Error(Errc::Config, "grid right endpoint differs from the ball radius");

  Profile values = Profile::sample(grid, u0);
  for (std::size_t i = 0; i < values.values.size(); ++i) {
    double u = values.values[i];
    if (!std::isfinite(u)) throw Error(Errc::NegativeInitialData, "initial data is not finite");
    if (u < 0.0)
      throw Error(Errc::NegativeInitialData,
                  "initial data negative at r = " + std::to_string(grid.node(int(i))));
  }
  if (std::abs(values.values.back()) > kDataTol)
    throw Error(Errc::BoundaryNonzero, "initial data must vanish at r = R");
  values.values.back() = 0.0;
  for (int i = 0; i < grid.N(); ++i) {
    if (values.values[i + 1] - values.values[i] > kDataTol)
      throw Error(Errc::NotNonincreasing,
                  "initial data increases at r = " + std::to_string(grid.node(i)));
  }

  double r_min = r_min_slope.value_or(grid.dr());
  if (!(r_min > 0.0) || r_min >= R)
    throw Error(Errc::Config, "slope-check radius must lie in (0, R)");
  if (!(slope_delta >= 0.0)) throw Error(Errc::Config, "slope delta must be nonnegative");

  return ProblemSpec{n, R, reaction, gradient, InitialData{std::move(values), slope_delta, r_min}};
}

ProblemSpec with_gradient(const ProblemSpec& problem, const GradientTermSpec& gradient) {
  ProblemSpec out = problem;
  out.gradient = gradient;
  return out;
}

std::vector<double> radial_derivative(const Profile& p) {
  const auto& u = p.values;
  const int N = p.grid.N();
  const double h = p.grid.dr();
  std::vector<double> d(u.size());
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  for (int i = 1; i < N; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  d[N] = (3.0 * u[N] - 4.0 * u[N - 1] + u[N - 2]) / (2.0 * h);
  return d;
}

RadialConditionsReport check_radial_conditions(const ProblemSpec& problem, double tol) {
  const Profile& u0 = problem.initial.values;
  const RadialGrid& grid = u0.grid;
  RadialConditionsReport rep;

  rep.nonincreasing = true;
  for (int i = 0; i < grid.N(); ++i)
    if (u0[i + 1] - u0[i] > tol) rep.nonincreasing = false;
  rep.boundary_zero = std::abs(u0.values.back()) <= tol;

  auto d = radial_derivative(u0);
  rep.worst_slope = -std::numeric_limits<double>::infinity();
  // Nodes within half a cell of r_min_slope count as inside the range.
  const double r_lo = problem.initial.r_min_slope - 1e-9 * grid.dr();
  for (int i = 1; i <= grid.N(); ++i) {
    if (grid.node(i) < r_lo) continue;
    rep.worst_slope = std::max(rep.worst_slope, d[i]);
  }
  rep.slope_ok = rep.worst_slope <= -problem.initial.slope_delta;
  return rep;
}

double check_compatibility(const ProblemSpec& problem) {
  Profile r = rhs(problem.initial.values, problem);
  return *std::min_element(r.values.begin(), r.values.end() - 1);
}

HHypothesesReport check_h_hypotheses(const GradientTermSpec& gradient, double s_max, int samples) {
  if (!(s_max > 0.0)) throw Error(Errc::NonpositiveArgument, "s_max must be positive");
  if (samples < 2) throw Error(Errc::Config, "need at least two samples");
  HHypothesesReport rep;
  rep.m2_margin = std::numeric_limits<double>::infinity();
  bool growth_ok = true;
  double prev_upper = -1.0;
  for (int j = 1; j <= samples; ++j) {
    double s = s_max * j / samples;
    double h = gradient.value(s);
    double lhs = s * gradient.derivative(s) - h;
    double bound = gradient.kind == GradientTermSpec::Kind::None ? 0.0
                                                                  : gradient.K * std::pow(s, gradient.q);
    rep.m2_margin = std::min(rep.m2_margin, bound - lhs);

    double ratio = h / (s * s);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    // Growth is judged on the upper half of the sample: h(s)/s^2 must not increase there.
    if (s >= 0.5 * s_max) {
      if (prev_upper >= 0.0 && ratio > prev_upper * (1.0 + 1e-12) + 1e-300) growth_ok = false;
      prev_upper = ratio;
    }
  }
  rep.quadratic_growth_ok = growth_ok;
  return rep;
}

}  // namespace blowup
