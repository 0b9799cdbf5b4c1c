#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsum/core.hpp"

namespace rsum {

/**
 * The strengthened, anchor-shifted operator
 *
 *   G = 2(1-beta) A((1/beta) I + z) + ((1-beta)/beta) I,
 *
 * which is ((1-beta)/beta)-strongly monotone. Zeros of G_A + G_B are exactly
 * the points v with J_{A+B}(z) = v/beta + z.
 */
class StrengthenedOperator {
 public:
  /// Throws ConfigError unless 0 < beta < 1 and the anchor is finite.
  StrengthenedOperator(MonotoneOperator base, double beta, Vector anchor);

  const MonotoneOperator& base() const { return base_; }
  double beta() const { return beta_; }
  const Vector& anchor() const { return anchor_; }
  Eigen::Index dim() const { return anchor_.size(); }

  /// Modulus of strong monotonicity, (1-beta)/beta.
  double modulus() const { return (1.0 - beta_) / beta_; }

 private:
  MonotoneOperator base_;
  double beta_;
  Vector anchor_;
};

/// Parameter s = 2r(1-beta)/(beta + r(1-beta)) of the base resolvent.
double base_resolvent_parameter(double beta, double r);

/// J_{rG}(x) = beta * J_{sA}(x/(beta + r(1-beta)) + z) - beta z.
Vector strengthened_resolvent(const StrengthenedOperator& s, double r, const Vector& x);

/// 2 J_{rG}(x) - x.
Vector reflected_resolvent(const StrengthenedOperator& s, double r, const Vector& x);

/// T = (2J_{rG_B} - I) o (2J_{rG_A} - I), with the A side applied first.
class ComposedReflector {
 public:
  /// Throws ConfigError if beta or anchor differ between the sides or r <= 0.
  ComposedReflector(StrengthenedOperator first, StrengthenedOperator second, double r);

  const StrengthenedOperator& first() const { return first_; }
  const StrengthenedOperator& second() const { return second_; }
  double r() const { return r_; }

 private:
  StrengthenedOperator first_;
  StrengthenedOperator second_;
  double r_;
};

Vector apply_T(const ComposedReflector& t, const Vector& x);

enum class ProbeVerdict { Bounded, Diverging, Inconclusive };
std::string to_string(ProbeVerdict v);

struct ProbeOptions {
  std::size_t max_iter = 100000;
  double blowup = 1e12;
  std::size_t window = 100;
  /// Relative change in the per-window peak norm tolerated as "no growth".
  double plateau = 1e-9;
  /// Consecutive windows without growth needed for a Bounded verdict.
  std::size_t stable_windows = 10;
  /// Consecutive windows of steady linear drift needed for a Diverging verdict.
  std::size_t drift_windows = 10;
  /// Relative variation allowed between successive window increments.
  double drift_tolerance = 1e-4;
};

struct ProbeReport {
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  std::size_t iterations = 0;
  /// ||T^k x0|| for k = 0..iterations.
  std::vector<double> norm_trace;
  std::string detail;
};

/**
 * Iterates x <- T(x) and reports evidence about boundedness of {T^k x0},
 * which holds iff J_{A+B}(z) exists. This is a heuristic, not a decision
 * procedure.
 *
 * Diverging: the norm exceeds `blowup`, or it grows by a steady positive
 * amount per window that matches the step length ||T x - x|| (a
 * nonexpansive map without fixed points drifts linearly).
 * Bounded: the per-window peak norm stops growing for `stable_windows`
 * consecutive windows.
 */
ProbeReport trajectory_probe(const ComposedReflector& t, const Vector& x0,
                             const ProbeOptions& opts = {});

}  // namespace rsum
