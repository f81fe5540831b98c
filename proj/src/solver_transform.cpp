#include "blowup/solver_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/error.hpp"
#include "blowup/tridiagonal.hpp"

namespace blowup {

namespace {

constexpr double kSingularMargin = 1e-15;
constexpr double kSteadyRelChange = 1e-12;

/// The radial operator restricted to the unknowns 0..N-1 (v_N = 0).
struct RadialOperator {
  std::vector<double> lower, diag, upper;

  RadialOperator(const RadialGrid& grid, int n)
      : lower(grid.N()), diag(grid.N()), upper(grid.N()) {
    const double h = grid.dr();
    const double inv_h2 = 1.0 / (h * h);
    diag[0] = -2.0 * n * inv_h2;
    upper[0] = 2.0 * n * inv_h2;
    for (int i = 1; i < grid.N(); ++i) {
      double drift = (n - 1) / (grid.node(i) * 2.0 * h);
      lower[i] = inv_h2 - drift;
      diag[i] = -2.0 * inv_h2;
      upper[i] = inv_h2 + drift;
    }
    upper.back() = 0.0;
  }

  double apply(const std::vector<double>& v, std::size_t i) const {
    double out = diag[i] * v[i];
    if (i > 0) out += lower[i] * v[i - 1];
    if (i + 1 < diag.size()) out += upper[i] * v[i + 1];
    return out;
  }
};

/// Crank-Nicolson for v_t = L v + 1 on the full nodal vector (v_N kept at 0).
class CrankNicolson {
 public:
  CrankNicolson(const RadialGrid& grid, int n) : op_(grid, n) {}

  std::vector<double> step(const std::vector<double>& v, double dt) const {
    const std::size_t m = op_.diag.size();
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = -0.5 * dt * op_.lower[i];
      di[i] = 1.0 - 0.5 * dt * op_.diag[i];
      up[i] = -0.5 * dt * op_.upper[i];
      rhs[i] = v[i] + 0.5 * dt * op_.apply(v, i) + dt;
    }
    std::vector<double> x = TridiagonalSystem(std::move(lo), std::move(di), std::move(up)).solve(rhs);
    x.push_back(0.0);
    return x;
  }

 private:
  RadialOperator op_;
};

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::size_t argmax_of(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void require_model_case(const ProblemSpec& problem) {
  if (!problem.is_model_case())
    throw Error(Errc::NotModelCase,
                "the linearizing transform needs f(u) = e^u and h(s) = s^2");
}

void validate(const OracleConfig& config) {
  if (!(config.dt_factor > 0.0)) throw Error(Errc::Config, "oracle.dt_factor must be positive");
  if (!(config.horizon > 0.0)) throw Error(Errc::Config, "oracle.horizon must be positive");
  if (config.tail_samples_per_unit < 1 || config.snapshot_stride < 1)
    throw Error(Errc::Config, "oracle sampling parameters must be >= 1");
}

std::vector<double> initial_field(const ProblemSpec& problem) {
  std::vector<double> v = transform_forward(problem.initial.values).values;
  if (max_of(v) >= 1.0 - kSingularMargin)
    throw Error(Errc::AtBlowup, "initial data already at the singularity");
  return v;
}

bool below_steady(const std::vector<double>& v, const std::vector<double>& w) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > w[i] + 1e-15) return false;
  return true;
}

bool converged(const std::vector<double>& prev, const std::vector<double>& next) {
  double change = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    change = std::max(change, std::abs(next[i] - prev[i]));
    scale = std::max(scale, std::abs(next[i]));
  }
  return change <= kSteadyRelChange * scale;
}

/// Event sink for the shared march.
struct MarchObserver {
  virtual ~MarchObserver() = default;
  virtual void on_step(double /*t*/, const std::vector<double>& /*v*/) {}
};

struct MarchOutcome {
  OracleResult result;
  std::vector<double> base;  // state at the start of the crossing step
  double t_base = 0.0;
  double s_star = 0.0;  // partial step from base to T
};

/// Advances v until max v crosses 1 or the field provably stays below 1.
/// Bisection on the crossing step stops when the bracket is below tol
/// (tol <= 0: full double precision).
MarchOutcome march(const ProblemSpec& problem, const OracleConfig& config, double tol,
                   MarchObserver& observer, bool allow_shortcut) {
  require_model_case(problem);
  validate(config);
  const RadialGrid& grid = problem.grid();
  CrankNicolson cn(grid, problem.n);

  MarchOutcome out;
  out.result.N = grid.N();
  std::vector<double> v = initial_field(problem);
  const std::vector<double> w = discrete_steady_state(grid, problem.n);
  const bool steady_below_one = max_of(w) < 1.0;

  auto finish_global = [&](double t) {
    out.result.global = true;
    out.result.T = std::numeric_limits<double>::infinity();
    out.result.r_blow = 0.0;
    out.t_base = t;
    out.base = v;
    return out;
  };

  if (allow_shortcut && steady_below_one && below_steady(v, w)) return finish_global(0.0);

  const double dt = config.dt_factor * grid.dr();
  double t = 0.0;
  observer.on_step(t, v);
  while (true) {
    if (t > config.horizon) {
      if (max_of(w) < 1.0 - 1e-9) return finish_global(t);
      throw Error(Errc::Inconclusive, "field still approaching 1 at the oracle horizon");
    }
    std::vector<double> next = cn.step(v, dt);
    ++out.result.steps;
    if (max_of(next) >= 1.0) {
      double lo = 0.0;
      double hi = dt;
      const double target = tol > 0.0 ? tol : 0.0;
      while (hi - lo > target) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (max_of(cn.step(v, mid)) >= 1.0)
          hi = mid;
        else
          lo = mid;
      }
      std::vector<double> at_T = cn.step(v, hi);
      out.result.T = t + hi;
      out.result.r_blow = grid.node(static_cast<int>(argmax_of(at_T)));
      out.result.tol = tol;
      out.base = v;
      out.t_base = t;
      out.s_star = hi;
      return out;
    }
    bool done = steady_below_one && converged(v, next);
    v = std::move(next);
    t += dt;
    observer.on_step(t, v);
    if (done) return finish_global(t);
  }
}

}  // namespace

double transform_forward(double u) { return -std::expm1(-u); }

Profile transform_forward(const Profile& u) {
  Profile v = u;
  for (double& x : v.values) x = transform_forward(x);
  return v;
}

double transform_inverse(double v) {
  if (!(v < 1.0 - kSingularMargin))
    throw Error(Errc::AtBlowup, "v = " + std::to_string(v) + " is at the singularity");
  return -std::log1p(-v);
}

Profile transform_inverse(const Profile& v) {
  Profile u = v;
  for (double& x : u.values) x = transform_inverse(x);
  return u;
}

TransformField linear_step(const TransformField& field, double dt, int n) {
  if (!(dt > 0.0)) throw Error(Errc::Config, "time step must be positive");
  if (field.values.size() != field.grid.size())
    throw Error(Errc::Config, "field length does not match its grid");
  CrankNicolson cn(field.grid, n);
  return {field.grid, cn.step(field.values, dt), field.t + dt};
}

std::vector<double> discrete_steady_state(const RadialGrid& grid, int n) {
  RadialOperator op(grid, n);
  std::vector<double> rhs(op.diag.size(), -1.0);
  std::vector<double> w = TridiagonalSystem(op.lower, op.diag, op.upper).solve(rhs);
  w.push_back(0.0);
  return w;
}

OracleResult find_blowup(const ProblemSpec& problem, const OracleConfig& config) {
  MarchObserver none;
  // The bracket tolerance depends on T; bisect fully, then report the requested bound.
  MarchOutcome out = march(problem, config, 0.0, none, true);
  if (!out.result.global)
    out.result.tol = config.tol_T > 0.0 ? config.tol_T : 1e-10 * (1.0 + out.result.T);
  return out.result;
}

std::vector<Profile> oracle_profiles(const ProblemSpec& problem, const std::vector<double>& times,
                                     const OracleConfig& config) {
  require_model_case(problem);
  validate(config);
  if (!std::is_sorted(times.begin(), times.end()))
    throw Error(Errc::Config, "oracle profile times must be nondecreasing");
  const RadialGrid& grid = problem.grid();
  CrankNicolson cn(grid, problem.n);
  const double dt = config.dt_factor * grid.dr();

  std::vector<double> v = initial_field(problem);
  double t = 0.0;
  std::vector<Profile> out;
  out.reserve(times.size());
  for (double target : times) {
    if (target < 0.0) throw Error(Errc::Config, "oracle profile time must be nonnegative");
    while (t < target) {
      double s = target - t;
      if (s > dt) {
        v = cn.step(v, dt);
        t += dt;
      } else {
        v = cn.step(v, s);
        t = target;
      }
    }
    out.push_back(transform_inverse(Profile(grid, v)));
  }
  return out;
}

Profile oracle_profile(const ProblemSpec& problem, double t, const OracleConfig& config) {
  return oracle_profiles(problem, {t}, config).front();
}

OracleTrace oracle_trace(const ProblemSpec& problem, const OracleConfig& config) {
  struct Recorder : MarchObserver {
    const RadialGrid* grid = nullptr;
    int stride = 1;
    long count = 0;
    Trace trace;
    void on_step(double t, const std::vector<double>& v) override {
      trace.times.push_back(t);
      trace.center_values.push_back(transform_inverse(v[0]));
      trace.dts.push_back(trace.times.size() > 1 ? t - trace.times[trace.times.size() - 2] : 0.0);
      if (count++ % stride == 0) trace.snapshots.push_back({t, transform_inverse(Profile(*grid, v))});
    }
  } rec;
  rec.grid = &problem.grid();
  rec.stride = config.snapshot_stride;
  rec.trace.u_cutoff = config.u_cutoff;

  MarchOutcome out = march(problem, config, 0.0, rec, false);
  Trace& trace = rec.trace;
  const RadialGrid& grid = problem.grid();

  if (out.result.global) {
    trace.blew_up = false;
    trace.t_end = trace.times.back();
    trace.step_count = out.result.steps;
    if (trace.snapshots.back().t != trace.t_end)
      trace.snapshots.push_back({trace.t_end, transform_inverse(Profile(grid, out.base))});
    return {std::move(trace), out.result};
  }

  // Tail: T - t shrinks geometrically so that u(0, t) rises by about
  // 1 / tail_samples_per_unit per sample.
  CrankNicolson cn(grid, problem.n);
  const double T = out.result.T;
  const double ratio = std::exp(-1.0 / config.tail_samples_per_unit);
  double tau = out.s_star;
  for (int j = 1;; ++j) {
    tau *= ratio;
    double s = out.s_star - tau;
    double t = out.t_base + s;
    if (tau <= 4.0 * std::numeric_limits<double>::epsilon() * T || t <= trace.times.back()) break;
    std::vector<double> v = cn.step(out.base, s);
    if (max_of(v) >= 1.0 - kSingularMargin) break;
    double U = transform_inverse(v[0]);
    trace.times.push_back(t);
    trace.center_values.push_back(U);
    trace.dts.push_back(t - trace.times[trace.times.size() - 2]);
    bool reached = U >= config.u_cutoff;
    if (j % config.tail_samples_per_unit == 0 || reached)
      trace.snapshots.push_back({t, transform_inverse(Profile(grid, v))});
    if (reached) {
      trace.blew_up = true;
      break;
    }
  }
  trace.t_end = trace.times.back();
  trace.step_count = out.result.steps;
  out.result.tol = std::numeric_limits<double>::epsilon() * T;
  return {std::move(trace), out.result};
}

}  // namespace blowup
