#include "rsum/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rsum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta out of (0,1)");
}

[[noreturn]] void fail_nonfinite(const char* method, std::size_t k, const Vector& x) {
  std::ostringstream os;
  os << method << ": non-finite iterate at k=" << k << " (norm " << x.norm()
     << "); the resolvent of A+B at z may not exist";
  throw NumericalError(os.str());
}

bool converged(const Vector& current, const Vector& previous, double tol, double& residual) {
  residual = (current - previous).norm();
  return residual <= tol * std::max(1.0, current.norm());
}

void require_tol(double tol, std::size_t max_iter) {
  if (!(tol >= 0.0)) throw ConfigError("tol must be nonnegative");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

}  // namespace

double r0_cap(double beta) {
  check_beta(beta);
  return 2.0 * (1.0 - beta) / beta;
}

double default_r0(double beta) { return 0.99 * r0_cap(beta); }

StepSchedule StepSchedule::make(double beta, double r0) {
  check_beta(beta);
  if (!(r0 > 0.0) || !(r0 < r0_cap(beta))) throw ConfigError("r0 violates (C1) bound");
  return StepSchedule{beta, r0, r0, 0};
}

StepSchedule next_r(const StepSchedule& s) {
  StepSchedule out = s;
  out.current_r = s.current_r / std::sqrt(1.0 + 2.0 * s.current_r * (1.0 - s.beta) / s.beta);
  ++out.k;
  return out;
}

LyapunovWitness witness_from_fixed_point(const StrengthenedOperator& a_side, double r,
                                         const Vector& u) {
  LyapunovWitness w;
  w.r = r;
  w.v = strengthened_resolvent(a_side, r, u);
  w.v_A = (u - w.v) / r;
  return w;
}

LyapunovWitness witness_from_selection(double beta, const Vector& z, const Vector& u_star,
                                       const Vector& a_selection, double r) {
  check_beta(beta);
  require_same_dim(z, u_star, "witness_from_selection");
  require_same_dim(z, a_selection, "witness_from_selection");
  if (!(r > 0.0)) throw ConfigError("witness_from_selection: r must be positive");
  LyapunovWitness w;
  w.r = r;
  w.v = beta * (u_star - z);
  w.v_A = 2.0 * (1.0 - beta) * a_selection + ((1.0 - beta) / beta) * w.v;
  return w;
}

Vector fixed_point_from_witness(const LyapunovWitness& w) { return w.v + w.r * w.v_A; }

SolverState init_state(const MonotoneOperator& a, double beta, double r0, const Vector& z,
                       const Vector& z0) {
  require_same_dim(z, z0, "init_state");
  SolverState s;
  s.schedule = StepSchedule::make(beta, r0);
  const StrengthenedOperator a_s(a, beta, z);
  s.x = strengthened_resolvent(a_s, r0, z0);
  s.y = (z0 - s.x) / r0;
  s.k = 0;
  return s;
}

SolverState step(const SolverState& state, const MonotoneOperator& a, const MonotoneOperator& b,
                 const Vector& z) {
  const double beta = state.schedule.beta;
  const StrengthenedOperator a_s(a, beta, z);
  const StrengthenedOperator b_s(b, beta, z);

  SolverState out;
  const double r_prev = state.schedule.current_r;
  const Vector z_prev = state.zv ? *state.zv
                                 : strengthened_resolvent(b_s, r_prev, state.x - r_prev * state.y);
  const Vector arg = z_prev + r_prev * state.y;
  out.x = strengthened_resolvent(a_s, r_prev, arg);
  out.y = (arg - out.x) / r_prev;
  out.schedule = next_r(state.schedule);
  const double r = out.schedule.current_r;
  out.zv = strengthened_resolvent(b_s, r, out.x - r * out.y);
  out.k = state.k + 1;
  return out;
}

Vector recover(const SolverState& state, const Vector& z) {
  return state.x / state.schedule.beta + z;
}

double lyapunov(const SolverState& state, const LyapunovWitness& w) {
  const double r = state.schedule.current_r;
  return (state.x - w.v).squaredNorm() / (r * r) + (state.y - w.v_A).squaredNorm();
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

SolveReport solve(const MonotoneOperator& a, const MonotoneOperator& b, const Vector& z,
                  const SolveConfig& config) {
  check_beta(config.beta);
  require_tol(config.tol, config.max_iter);
  if (z.size() == 0 || !z.allFinite()) throw ConfigError("solve: z must be a nonempty finite vector");
  const double r0 = config.r0.value_or(default_r0(config.beta));
  const Vector z0 = config.z0.value_or(Vector::Zero(z.size()));
  if (config.known_solution) require_same_dim(z, *config.known_solution, "solve: known_solution");

  SolveReport report;
  report.method = "strengthened";
  SolverState state = init_state(a, config.beta, r0, z, z0);
  if (!state.x.allFinite()) fail_nonfinite("solve", 0, state.x);

  double lyap0 = 0.0;
  auto record = [&](const SolverState& s, double residual) {
    report.r_trace.push_back(s.schedule.current_r);
    report.residual_trace.push_back(residual);
    if (config.known_solution) {
      report.error_trace.push_back((recover(s, z) - *config.known_solution).norm());
    }
    if (config.witness) {
      const double value = lyapunov(s, *config.witness);
      if (s.k == 0) lyap0 = value;
      report.lyapunov_trace.push_back(value);
      report.bound_trace.push_back(s.schedule.current_r * std::sqrt(lyap0));
    }
  };
  record(state, kNaN);

  for (std::size_t k = 1; k <= config.max_iter; ++k) {
    SolverState next = step(state, a, b, z);
    if (!next.x.allFinite() || !next.y.allFinite() || !next.zv->allFinite()) {
      fail_nonfinite("solve", k, next.x);
    }
    // x alone can stall while y drifts (no solution), so the y move counts too.
    const double residual =
        (next.x - state.x).norm() + state.schedule.current_r * (next.y - state.y).norm();
    const bool done = residual <= config.tol * std::max(1.0, next.x.norm());
    state = std::move(next);
    record(state, residual);
    report.iterations = k;
    if (done) {
      report.stop_reason = StopReason::Converged;
      break;
    }
  }
  report.solution = recover(state, z);
  return report;
}

Vector dr_step(const StrengthenedOperator& a_s, const StrengthenedOperator& b_s, double gamma,
               double lambda, const Vector& w) {
  if (!(gamma > 0.0)) throw ConfigError("dr_step: gamma must be positive");
  if (!(lambda > 0.0 && lambda <= 2.0)) throw ConfigError("dr_step: lambda out of (0,2]");
  const Vector ja = strengthened_resolvent(a_s, gamma, w);
  const Vector jb = strengthened_resolvent(b_s, gamma, 2.0 * ja - w);
  return w + lambda * (jb - ja);
}

double aamr_parameter(double beta, double gamma) {
  check_beta(beta);
  if (!(gamma > 0.0)) throw ConfigError("aamr: gamma must be positive");
  return gamma / (2.0 * (1.0 - beta));
}

Vector aamr_step(const StrengthenedOperator& a_s, const StrengthenedOperator& b_s, double gamma,
                 double lambda, const Vector& v) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("aamr_step: lambda out of [0,1]");
  const double r = aamr_parameter(a_s.beta(), gamma);
  const Vector ja = strengthened_resolvent(a_s, r, v);
  const Vector jb = strengthened_resolvent(b_s, r, 2.0 * ja - v);
  return v + 2.0 * lambda * (jb - ja);
}

namespace {

template <class StepFn>
SolveReport run_baseline(const char* method, const StrengthenedOperator& a_s, double r,
                         const Vector& z, const BaselineConfig& config, StepFn&& advance) {
  require_tol(config.tol, config.max_iter);
  if (config.known_solution) require_same_dim(z, *config.known_solution, method);
  SolveReport report;
  report.method = method;
  Vector w = config.w0.value_or(Vector::Zero(z.size()));
  require_same_dim(z, w, method);

  auto recovered = [&](const Vector& iterate) -> Vector {
    return strengthened_resolvent(a_s, r, iterate) / a_s.beta() + z;
  };
  auto record = [&](const Vector& iterate, double residual) {
    report.r_trace.push_back(r);
    report.residual_trace.push_back(residual);
    if (config.known_solution) {
      report.error_trace.push_back((recovered(iterate) - *config.known_solution).norm());
    }
  };
  record(w, kNaN);
  for (std::size_t k = 1; k <= config.max_iter; ++k) {
    Vector next = advance(w);
    if (!next.allFinite()) fail_nonfinite(method, k, next);
    double residual = 0.0;
    const bool done = converged(next, w, config.tol, residual);
    w = std::move(next);
    record(w, residual);
    report.iterations = k;
    if (done) {
      report.stop_reason = StopReason::Converged;
      break;
    }
  }
  report.solution = recovered(w);
  return report;
}

}  // namespace

SolveReport solve_dr(const MonotoneOperator& a, const MonotoneOperator& b, const Vector& z,
                     const BaselineConfig& config) {
  const StrengthenedOperator a_s(a, config.beta, z);
  const StrengthenedOperator b_s(b, config.beta, z);
  const double gamma = config.gamma.value_or(1.0);
  const double lambda = config.lambda.value_or(1.0);
  if (!(gamma > 0.0)) throw ConfigError("dr: gamma must be positive");
  if (!(lambda > 0.0 && lambda <= 2.0)) throw ConfigError("dr: lambda out of (0,2]");
  return run_baseline("dr", a_s, gamma, z, config, [&](const Vector& w) {
    return dr_step(a_s, b_s, gamma, lambda, w);
  });
}

SolveReport solve_aamr(const MonotoneOperator& a, const MonotoneOperator& b, const Vector& z,
                       const BaselineConfig& config) {
  const StrengthenedOperator a_s(a, config.beta, z);
  const StrengthenedOperator b_s(b, config.beta, z);
  const double gamma = config.gamma.value_or(2.0 * (1.0 - config.beta));
  const double lambda = config.lambda.value_or(0.5);
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("aamr: lambda out of (0,1)");
  const double r = aamr_parameter(config.beta, gamma);
  return run_baseline("aamr", a_s, r, z, config, [&](const Vector& v) {
    return aamr_step(a_s, b_s, gamma, lambda, v);
  });
}

}  // namespace rsum
