#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "rsum/core.hpp"

namespace rsum {

/// A(x) = Mx with M + M^T positive semidefinite.
class LinearMonotoneOperator {
 public:
  /// Throws ConfigError if M is not square or its symmetric part has an
  /// eigenvalue below -1e-12.
  explicit LinearMonotoneOperator(Matrix m);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  Vector apply(const Vector& x) const;

  /// Solves (I + rM) w = x.
  Vector resolvent(double r, const Vector& x) const;
  MonotoneOperator as_operator(std::string label = "linear") const;

 private:
  Matrix m_;
};

Vector resolvent_linear(const LinearMonotoneOperator& m, double r, const Vector& x);

MonotoneOperator zero_operator();

// Closed-form proxes used by the applications and tests.

/// prox of t*||.||_1: componentwise soft threshold.
Vector prox_l1(double t, const Vector& x);
ProxFunction l1_norm(double scale = 1.0);
ProxFunction zero_function();
/// (scale/2)||x||^2
ProxFunction half_squared_norm(double scale = 1.0);
/// <c, x> + offset
ProxFunction linear_function(Vector c, double offset = 0.0);

class ConvexSet {
 public:
  enum class Kind { Box, Ball, Halfspace, Hyperplane, AffineSubspace, Singleton };

  /// lower <= x <= upper componentwise (entries may be +-inf).
  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet ball(Vector center, double radius);
  /// { x : <normal, x> <= offset }
  static ConvexSet halfspace(Vector normal, double offset);
  /// { x : <normal, x> = offset }
  static ConvexSet hyperplane(Vector normal, double offset);
  /// offset + span(columns of basis). The basis may be rank deficient.
  static ConvexSet affine_subspace(Matrix basis, Vector offset);
  static ConvexSet singleton(Vector point);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  std::string describe() const;

  Vector project(const Vector& x) const;
  double distance(const Vector& x) const;
  bool contains(const Vector& x, double tol = 1e-10) const;

  /// Orthonormal basis of the direction space (AffineSubspace only).
  const Matrix& orthonormal_basis() const;

  /// For affine kinds (AffineSubspace, Hyperplane, Singleton): E with
  /// orthonormal rows and f such that the set is { x : E x = f }.
  std::optional<std::pair<Matrix, Vector>> affine_constraints() const;

 private:
  struct BoxData { Vector lower, upper; };
  struct BallData { Vector center; double radius; };
  struct PlaneData { Vector normal; double offset; };  // normal has unit norm
  struct AffineData { Matrix q; Vector offset; };
  struct PointData { Vector point; };

  using Data = std::variant<BoxData, BallData, PlaneData, AffineData, PointData>;

  ConvexSet(Kind kind, Eigen::Index dim, Data data)
      : kind_(kind), dim_(dim), data_(std::move(data)) {}

  Kind kind_;
  Eigen::Index dim_;
  Data data_;
};

Vector project(const ConvexSet& s, const Vector& x);

/// Indicator i_S; its prox is the metric projection for every t.
ProxFunction indicator(const ConvexSet& s);

/// N_S, whose resolvent is P_S for every r.
MonotoneOperator normal_cone(const ConvexSet& s);

/**
 * prox_{t phi}(x) for phi(y) = a*h(y) + (b/2)||y||^2, a, b >= 0, a + b > 0.
 *
 * Completing the square gives h.prox(t*a/(1+t*b), x/(1+t*b)); with a = 0 the
 * h term vanishes and the result is x/(1+t*b).
 */
Vector prox_scaled_plus_quadratic(const ProxFunction& h, double a, double b,
                                  double t, const Vector& x);

/// The function a*h + (b/2)||.||^2 packaged as a ProxFunction.
ProxFunction scaled_plus_quadratic(const ProxFunction& h, double a, double b);

}  // namespace rsum
