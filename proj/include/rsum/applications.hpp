#pragma once

#include "rsum/core.hpp"
#include "rsum/operators.hpp"
#include "rsum/solver.hpp"

namespace rsum {

/// Options shared by the application solvers.
struct ApplicationOptions {
  SolveConfig solve;
  /// On MaxIterations, probe {T^k z0} and attach the verdict to the report.
  bool probe_on_stall = true;
  ProbeOptions probe;
};

/**
 * prox_{f+g}(z), i.e. the minimizer of 1/2||x - z||^2 + f(x) + g(x), computed
 * with A = df and B = dg. A "diverging" probe verdict on the report means
 * J_{df+dg}(z) likely does not exist.
 */
SolveReport prox_of_sum(const ProxFunction& f, const ProxFunction& g, const Vector& z,
                        const ApplicationOptions& options = {});

/**
 * minimize f~(x) + g~(x) with f~ gamma-strongly convex and g~ omega-weakly
 * convex, gamma > omega. The caller supplies the splits
 *   f~ = f_core + (gamma/2)||.||^2,   g~ = g_core - (omega/2)||.||^2
 * with convex cores that have proxes.
 */
struct StrongWeakProblem {
  ProxFunction f_core;
  ProxFunction g_core;
  double gamma = 1.0;
  double omega = 0.5;
  Eigen::Index dim = 1;

  /// f~(x) + g~(x); needs value callables on both cores.
  double objective(const Vector& x) const;
};

/// The recovered solution approximates the unique minimizer x*. z is fixed to 0
/// and options.solve.known_solution, if set, is compared against x*.
SolveReport strong_weak_minimize(const StrongWeakProblem& p,
                                 const ApplicationOptions& options = {});

/// The convex pieces f = h_f/(gamma-omega), g = h_g/(gamma-omega).
std::pair<ProxFunction, ProxFunction> strong_weak_split(const StrongWeakProblem& p);

struct BestApproxProblem {
  ConvexSet c;
  ConvexSet d;
  Vector z;
};

/// P_{C cap D}(z) using only P_C and P_D.
SolveReport best_approximation(const BestApproxProblem& p,
                               const ApplicationOptions& options = {});

}  // namespace rsum
