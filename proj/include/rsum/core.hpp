#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rsum {

/// Element of the model Hilbert space R^n with the standard inner product.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid problem or solver configuration (bad beta, r0, set parameters...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterate stops being finite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double inner(const Vector& a, const Vector& b);
double norm(const Vector& a);

void require_same_dim(const Vector& a, const Vector& b, const char* what);
bool all_finite(const Vector& v);

/// Resolvent map (r, x) -> J_{rA}(x).
using ResolventFn = std::function<Vector(double, const Vector&)>;
/// Proximal map (t, x) -> prox_{tf}(x).
using ProxFn = std::function<Vector(double, const Vector&)>;
/// Function value; may return +inf outside the domain.
using ValueFn = std::function<double(const Vector&)>;

/**
 * Maximal monotone operator, known only through its resolvent.
 *
 * The resolvent must be defined for every r > 0 and every x, and be firmly
 * nonexpansive for fixed r. Instances are immutable and safe to share across
 * threads as long as the wrapped callable is.
 */
class MonotoneOperator {
 public:
  MonotoneOperator(ResolventFn resolvent, std::string label);

  /// J_{rA}(x). Throws ConfigError when r <= 0.
  Vector resolvent(double r, const Vector& x) const;
  const std::string& label() const { return label_; }

 private:
  ResolventFn resolvent_;
  std::string label_;
};

/// Proper lsc convex function given by its prox and, optionally, its value.
class ProxFunction {
 public:
  ProxFunction(ProxFn prox, std::string label, ValueFn value = {});

  Vector prox(double t, const Vector& x) const;
  bool has_value() const { return static_cast<bool>(value_); }
  /// Throws std::logic_error when no value callable was supplied.
  double value(const Vector& x) const;
  std::optional<ValueFn> value_fn() const;
  const std::string& label() const { return label_; }

 private:
  ProxFn prox_;
  ValueFn value_;
  std::string label_;
};

/// The subdifferential of f as an operator: J_{r df} = prox_{rf}.
MonotoneOperator as_operator(const ProxFunction& f);

}  // namespace rsum
