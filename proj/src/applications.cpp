#include "rsum/applications.hpp"

namespace rsum {

namespace {

SolveReport solve_with_probe(const MonotoneOperator& a, const MonotoneOperator& b,
                             const Vector& z, const ApplicationOptions& options) {
  SolveReport report = solve(a, b, z, options.solve);
  if (options.probe_on_stall && report.stop_reason == StopReason::MaxIterations) {
    const double beta = options.solve.beta;
    const double r0 = options.solve.r0.value_or(default_r0(beta));
    const ComposedReflector t(StrengthenedOperator(a, beta, z), StrengthenedOperator(b, beta, z),
                              r0);
    report.probe = trajectory_probe(t, options.solve.z0.value_or(Vector::Zero(z.size())),
                                    options.probe);
  }
  return report;
}

}  // namespace

SolveReport prox_of_sum(const ProxFunction& f, const ProxFunction& g, const Vector& z,
                        const ApplicationOptions& options) {
  SolveReport report = solve_with_probe(as_operator(f), as_operator(g), z, options);
  report.method = "strengthened/prox_of_sum";
  return report;
}

double StrongWeakProblem::objective(const Vector& x) const {
  const double sq = x.squaredNorm();
  return f_core.value(x) + 0.5 * gamma * sq + g_core.value(x) - 0.5 * omega * sq;
}

std::pair<ProxFunction, ProxFunction> strong_weak_split(const StrongWeakProblem& p) {
  if (!(p.gamma > p.omega)) throw ConfigError("strong_weak: need gamma > omega");
  if (!(p.omega > 0.0)) throw ConfigError("strong_weak: omega must be positive");
  const double scale = 1.0 / (p.gamma - p.omega);
  return {scaled_plus_quadratic(p.f_core, scale, 0.0), scaled_plus_quadratic(p.g_core, scale, 0.0)};
}

SolveReport strong_weak_minimize(const StrongWeakProblem& p, const ApplicationOptions& options) {
  if (p.dim < 1) throw ConfigError("strong_weak: dimension must be >= 1");
  auto [f, g] = strong_weak_split(p);
  SolveReport report = prox_of_sum(f, g, Vector::Zero(p.dim), options);
  report.method = "strengthened/strong_weak";
  return report;
}

SolveReport best_approximation(const BestApproxProblem& p, const ApplicationOptions& options) {
  if (p.c.dim() != p.z.size() || p.d.dim() != p.z.size()) {
    throw DimensionError("best_approximation: set and anchor dimensions differ");
  }
  SolveReport report = solve_with_probe(normal_cone(p.c), normal_cone(p.d), p.z, options);
  report.method = "strengthened/best_approximation";
  return report;
}

}  // namespace rsum
