#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rsum/core.hpp"
#include "rsum/strengthening.hpp"

namespace rsum {

/// Upper limit 2(1-beta)/beta on the initial step r0.
double r0_cap(double beta);
/// 0.99 * r0_cap(beta).
double default_r0(double beta);

/// Decreasing step sizes r_{k+1} = r_k / sqrt(1 + 2 r_k (1-beta)/beta).
struct StepSchedule {
  double beta = 0.5;
  double r0 = 1.0;
  double current_r = 1.0;
  std::size_t k = 0;

  /// Throws ConfigError unless beta in (0,1) and r0 in (0, r0_cap(beta)).
  static StepSchedule make(double beta, double r0);
};

StepSchedule next_r(const StepSchedule& s);

struct SolverState {
  Vector x;
  Vector y;
  /// z_k of the iteration. Empty after init_state: the first step fills it
  /// with J_{r_0 G_B}(x_0 - r_0 y_0) so that z_0 is a B-resolvent output.
  std::optional<Vector> zv;
  StepSchedule schedule;
  std::size_t k = 0;
};

/**
 * Limit point v and a selection v_A of G_A at v, with -v_A a selection of G_B
 * at v. Any such pair makes the Lyapunov value below nonincreasing.
 */
struct LyapunovWitness {
  Vector v;
  Vector v_A;
  double r = 1.0;
};

/// v = J_{rG_A}(u), v_A = (u - v)/r for a fixed point u of T at parameter r.
LyapunovWitness witness_from_fixed_point(const StrengthenedOperator& a_side, double r,
                                         const Vector& u);

/**
 * Witness from the known solution u* = J_{A+B}(z) and a selection a in A(u*)
 * such that z - u* - a lies in B(u*):
 *   v = beta (u* - z),  v_A = 2(1-beta) a + ((1-beta)/beta) v.
 */
LyapunovWitness witness_from_selection(double beta, const Vector& z, const Vector& u_star,
                                       const Vector& a_selection, double r = 1.0);

/// u = v + r v_A; a fixed point of T at parameter w.r.
Vector fixed_point_from_witness(const LyapunovWitness& w);

/// x0 = J_{r0 G_A}(z0), y0 = (z0 - x0)/r0.
SolverState init_state(const MonotoneOperator& a, double beta, double r0, const Vector& z,
                       const Vector& z0);

/// One (x_k, y_k, z_k) update; the schedule advances between the A and B halves.
/// On a freshly initialized state z_0 is first computed from x_0, y_0 at r_0.
SolverState step(const SolverState& state, const MonotoneOperator& a, const MonotoneOperator& b,
                 const Vector& z);

/// (1/beta) x + z.
Vector recover(const SolverState& state, const Vector& z);

/// (1/r_k^2) ||x_k - v||^2 + ||y_k - v_A||^2.
double lyapunov(const SolverState& state, const LyapunovWitness& w);

enum class StopReason { Converged, MaxIterations };
std::string to_string(StopReason r);

struct SolveConfig {
  double beta = 0.5;
  /// Defaults to default_r0(beta).
  std::optional<double> r0;
  /// Defaults to the zero vector.
  std::optional<Vector> z0;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  std::optional<LyapunovWitness> witness;
  /// When present, error_trace is filled with ||recovered - known||.
  std::optional<Vector> known_solution;
};

struct SolveReport {
  std::string method;
  Vector solution;
  std::size_t iterations = 0;
  StopReason stop_reason = StopReason::MaxIterations;
  // All traces have iterations + 1 entries (k = 0..iterations). residual[0]
  // is NaN; optional traces are empty when their input was not supplied.
  std::vector<double> r_trace;
  std::vector<double> residual_trace;
  std::vector<double> error_trace;
  std::vector<double> lyapunov_trace;
  /// b_k = r_k sqrt(lyapunov_0): a-priori bound on ||x_k - v||.
  std::vector<double> bound_trace;
  /// Optional existence evidence attached by the application layer.
  std::optional<ProbeReport> probe;
};

/**
 * Computes J_{A+B}(z) with the strengthened splitting iteration.
 *
 * Stops when ||x_k - x_{k-1}|| + r_{k-1} ||y_k - y_{k-1}|| <= tol * max(1, ||x_k||)
 * or after max_iter steps. Throws ConfigError for invalid beta/r0 and NumericalError when an
 * iterate becomes non-finite.
 */
SolveReport solve(const MonotoneOperator& a, const MonotoneOperator& b, const Vector& z,
                  const SolveConfig& config = {});

// Fixed-parameter baselines on the strengthened pair.

/// w + lambda (J_{gB}(2 J_{gA} w - w) - J_{gA} w) with g = gamma.
Vector dr_step(const StrengthenedOperator& a_s, const StrengthenedOperator& b_s, double gamma,
               double lambda, const Vector& w);

/// AAMR resolvent parameter gamma / (2(1-beta)).
double aamr_parameter(double beta, double gamma);

/// (1-lambda) v + lambda R_B R_A v with reflections at r = aamr_parameter.
Vector aamr_step(const StrengthenedOperator& a_s, const StrengthenedOperator& b_s, double gamma,
                 double lambda, const Vector& v);

struct BaselineConfig {
  double beta = 0.5;
  /// Defaults: 1 for DR, 2(1-beta) for AAMR.
  std::optional<double> gamma;
  /// Defaults: 1 for DR, 0.5 for AAMR.
  std::optional<double> lambda;
  std::optional<Vector> w0;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  std::optional<Vector> known_solution;
};

/// The recovered point is J_{rG_A}(w)/beta + z with the method's r.
SolveReport solve_dr(const MonotoneOperator& a, const MonotoneOperator& b, const Vector& z,
                     const BaselineConfig& config = {});
SolveReport solve_aamr(const MonotoneOperator& a, const MonotoneOperator& b, const Vector& z,
                       const BaselineConfig& config = {});

}  // namespace rsum
