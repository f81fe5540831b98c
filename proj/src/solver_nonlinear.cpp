#include "blowup/solver_nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/error.hpp"
#include "vector_math.hpp"

namespace blowup {

namespace {

constexpr double kMinStep = 1e-15;

/// Precomputed stencil weights for the radial operator on one grid.
class RadialStencil {
 public:
  RadialStencil(const RadialGrid& grid, int n) : N_(grid.N()), n_(n), lo_(grid.size()), hi_(grid.size()) {
    const double h = grid.dr();
    inv_h2_ = 1.0 / (h * h);
    inv_2h_ = 1.0 / (2.0 * h);
    for (int i = 1; i < N_; ++i) {
      double drift = (n - 1) / (grid.node(i) * 2.0 * h);
      lo_[i] = inv_h2_ - drift;
      hi_[i] = inv_h2_ + drift;
    }
  }

  double laplacian(const std::vector<double>& u, int i) const {
    if (i == 0) return 2.0 * n_ * (u[1] - u[0]) * inv_h2_;
    return lo_[i] * u[i - 1] - 2.0 * inv_h2_ * u[i] + hi_[i] * u[i + 1];
  }

  void rhs(const std::vector<double>& u, const ProblemSpec& problem, std::vector<double>& out) const {
    const auto& f = problem.reaction;
    const auto& h = problem.gradient;
    // Reaction values are computed in bulk first.
    if (f.kind == ReactionSpec::Kind::Exponential) {
      detail::exp_into(u, out);
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = f.value(u[i]);
    }
    if (h.kind == GradientTermSpec::Kind::None)
      fill(u, out, [](double) { return 0.0; });
    else if (h.q == 2.0)
      fill(u, out, [](double s) { return s * s; });
    else
      fill(u, out, [&h](double s) { return h.value(std::abs(s)); });
  }

 private:
  /// out holds f(u) on entry.
  template <class Damping>
  void fill(const std::vector<double>& u, std::vector<double>& out, Damping h) const {
    const double* x = u.data();
    double* y = out.data();
    y[0] += 2.0 * n_ * (x[1] - x[0]) * inv_h2_;
    for (int i = 1; i < N_; ++i) {
      double ur = (x[i + 1] - x[i - 1]) * inv_2h_;
      y[i] += lo_[i] * x[i - 1] - 2.0 * inv_h2_ * x[i] + hi_[i] * x[i + 1] - h(ur);
    }
    y[N_] = 0.0;
  }

  int N_;
  int n_;
  double inv_h2_ = 0.0;
  double inv_2h_ = 0.0;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Explicit midpoint stepper with reusable buffers.
class MidpointStepper {
 public:
  MidpointStepper(const ProblemSpec& problem, const RadialGrid& grid)
      : problem_(problem), stencil_(grid, problem.n), k_(grid.size()), mid_(grid.size()) {}

  void advance(std::vector<double>& u, double dt) {
    stencil_.rhs(u, problem_, k_);
    for (std::size_t i = 0; i < u.size(); ++i) mid_[i] = u[i] + 0.5 * dt * k_[i];
    mid_.back() = 0.0;
    stencil_.rhs(mid_, problem_, k_);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += dt * k_[i];
      if (!std::isfinite(u[i]))
        throw Error(Errc::NonFiniteState, "non-finite value after time step");
    }
    u.back() = 0.0;
  }

 private:
  const ProblemSpec& problem_;
  RadialStencil stencil_;
  std::vector<double> k_;
  std::vector<double> mid_;
};

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double diffusion_limit(const RadialGrid& grid, int n) {
  const double h = grid.dr();
  // max over interior nodes of (n-1)/r_i is attained at r_1 = dr.
  double drift = (n - 1) / h;
  return h * h / (2.0 * n + h * drift);
}

double step_size(double u_max, const SolverConfig& config, const ProblemSpec& problem) {
  double reaction = 1.0 / (1.0 + problem.reaction.derivative(std::max(u_max, 0.0)));
  double dt = std::min({diffusion_limit(problem.grid(), problem.n), reaction, config.dt0});
  return config.safety * dt;
}

}  // namespace

Profile radial_laplacian(const Profile& p, int n) {
  if (p.grid.N() < 3) throw Error(Errc::GridTooCoarse, "radial Laplacian needs N >= 3");
  RadialStencil stencil(p.grid, n);
  Profile out = Profile::zeros(p.grid);
  for (int i = 0; i < p.grid.N(); ++i) out.values[i] = stencil.laplacian(p.values, i);
  return out;
}

Profile rhs(const Profile& p, const ProblemSpec& problem) {
  RadialStencil stencil(p.grid, problem.n);
  Profile out = Profile::zeros(p.grid);
  stencil.rhs(p.values, problem, out.values);
  return out;
}

Profile step(const Profile& p, double dt, const ProblemSpec& problem) {
  if (!(dt > 0.0)) throw Error(Errc::Config, "time step must be positive");
  MidpointStepper stepper(problem, p.grid);
  Profile out = p;
  stepper.advance(out.values, dt);
  return out;
}

double adaptive_dt(const Profile& p, const SolverConfig& config, const ProblemSpec& problem) {
  return step_size(p.max(), config, problem);
}

void validate(const SolverConfig& config, const ProblemSpec& problem) {
  if (!(config.dt0 > 0.0)) throw Error(Errc::Config, "solver.dt0 must be positive");
  if (!(config.safety > 0.0 && config.safety <= 1.0))
    throw Error(Errc::Config, "solver.safety must lie in (0, 1]");
  if (!(config.t_max > 0.0)) throw Error(Errc::Config, "solver.t_max must be positive");
  if (config.snapshot_stride < 1) throw Error(Errc::Config, "solver.snapshot_stride must be >= 1");
  if (!(config.u_cutoff > problem.initial.values.max()))
    throw Error(Errc::Config, "solver.u_cutoff must exceed max u0");
}

Trace solve(const ProblemSpec& problem, const SolverConfig& config) {
  validate(config, problem);

  std::vector<double> outputs = config.output_times;
  std::sort(outputs.begin(), outputs.end());
  auto next_output = std::upper_bound(outputs.begin(), outputs.end(), 0.0);

  Trace trace;
  trace.u_cutoff = config.u_cutoff;
  std::vector<double> u = problem.initial.values.values;
  const RadialGrid grid = problem.grid();
  MidpointStepper stepper(problem, grid);

  double t = 0.0;
  trace.times.push_back(t);
  trace.center_values.push_back(u[0]);
  trace.dts.push_back(0.0);
  trace.snapshots.push_back({t, Profile(grid, u)});
  bool last_snapshotted = true;

  while (true) {
    double u_max = max_of(u);
    if (u_max >= config.u_cutoff) {
      trace.blew_up = true;
      break;
    }
    if (t >= config.t_max) break;

    while (next_output != outputs.end() && *next_output <= t * (1.0 + 1e-14)) ++next_output;
    double dt = step_size(u_max, config, problem);
    if (dt < kMinStep) throw Error(Errc::StepUnderflow, "time step underflow before cutoff");
    bool hit_output = false;
    if (t + dt >= config.t_max) dt = config.t_max - t;
    if (next_output != outputs.end() && t + dt >= *next_output) {
      dt = *next_output - t;
      hit_output = true;
    }

    stepper.advance(u, dt);
    t = hit_output ? *next_output : t + dt;
    if (hit_output) {
      while (next_output != outputs.end() && *next_output <= t) ++next_output;
    }
    ++trace.step_count;

    trace.times.push_back(t);
    trace.center_values.push_back(u[0]);
    trace.dts.push_back(dt);
    last_snapshotted = hit_output || trace.step_count % config.snapshot_stride == 0;
    if (last_snapshotted) trace.snapshots.push_back({t, Profile(grid, u)});
  }

  if (!last_snapshotted) trace.snapshots.push_back({t, Profile(grid, u)});
  trace.t_end = t;
  return trace;
}

}  // namespace blowup
