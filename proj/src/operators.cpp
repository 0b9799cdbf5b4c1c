#include "rsum/operators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rsum {

namespace {

constexpr double kMonotoneEigTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ConfigError(std::string(what) + ": non-finite entry");
}

}  // namespace

LinearMonotoneOperator::LinearMonotoneOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw ConfigError("LinearMonotoneOperator: matrix must be square and nonempty");
  }
  if (!m_.allFinite()) throw ConfigError("LinearMonotoneOperator: non-finite entry");
  const Matrix sym = 0.5 * (m_ + m_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kMonotoneEigTol) {
    throw ConfigError("LinearMonotoneOperator: symmetric part is not positive semidefinite");
  }
}

Vector LinearMonotoneOperator::apply(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("LinearMonotoneOperator::apply: dimension mismatch");
  return m_ * x;
}

Vector LinearMonotoneOperator::resolvent(double r, const Vector& x) const {
  if (!(r > 0.0)) throw ConfigError("resolvent_linear: r must be positive");
  if (x.size() != dim()) throw DimensionError("resolvent_linear: dimension mismatch");
  Matrix system = r * m_;
  system.diagonal().array() += 1.0;
  // I + rM is invertible for monotone M; LU with partial pivoting suffices.
  return system.partialPivLu().solve(x);
}

MonotoneOperator LinearMonotoneOperator::as_operator(std::string label) const {
  auto self = *this;
  return MonotoneOperator(
      [self](double r, const Vector& x) { return self.resolvent(r, x); }, std::move(label));
}

Vector resolvent_linear(const LinearMonotoneOperator& m, double r, const Vector& x) {
  return m.resolvent(r, x);
}

MonotoneOperator zero_operator() {
  return MonotoneOperator([](double, const Vector& x) { return x; }, "zero");
}

Vector prox_l1(double t, const Vector& x) {
  if (!(t > 0.0)) throw ConfigError("prox_l1: t must be positive");
  return x.array().sign() * (x.array().abs() - t).max(0.0);
}

ProxFunction l1_norm(double scale) {
  if (!(scale > 0.0)) throw ConfigError("l1_norm: scale must be positive");
  return ProxFunction([scale](double t, const Vector& x) { return prox_l1(t * scale, x); },
                      "l1", [scale](const Vector& x) { return scale * x.lpNorm<1>(); });
}

ProxFunction zero_function() {
  return ProxFunction([](double, const Vector& x) { return x; }, "zero",
                      [](const Vector&) { return 0.0; });
}

ProxFunction half_squared_norm(double scale) {
  if (!(scale >= 0.0)) throw ConfigError("half_squared_norm: scale must be nonnegative");
  return ProxFunction([scale](double t, const Vector& x) -> Vector { return x / (1.0 + t * scale); },
                      "half_sq", [scale](const Vector& x) { return 0.5 * scale * x.squaredNorm(); });
}

ProxFunction linear_function(Vector c, double offset) {
  require_finite(c, "linear_function");
  return ProxFunction(
      [c](double t, const Vector& x) -> Vector {
        require_same_dim(x, c, "linear_function prox");
        return x - t * c;
      },
      "linear", [c, offset](const Vector& x) { return inner(c, x) + offset; });
}

// ConvexSet

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw ConfigError("box: bounds must have equal, positive dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == std::numeric_limits<double>::infinity() ||
        upper[i] == -std::numeric_limits<double>::infinity()) {
      throw ConfigError("box: inconsistent bounds at index " + std::to_string(i));
    }
  }
  const auto n = lower.size();
  return ConvexSet(Kind::Box, n, BoxData{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  require_finite(center, "ball");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("ball: radius must be positive");
  const auto n = center.size();
  return ConvexSet(Kind::Ball, n, BallData{std::move(center), radius});
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_finite(normal, "halfspace");
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(offset)) throw ConfigError("halfspace: zero normal");
  const auto n = normal.size();
  return ConvexSet(Kind::Halfspace, n, PlaneData{normal / len, offset / len});
}

ConvexSet ConvexSet::hyperplane(Vector normal, double offset) {
  require_finite(normal, "hyperplane");
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(offset)) throw ConfigError("hyperplane: zero normal");
  const auto n = normal.size();
  return ConvexSet(Kind::Hyperplane, n, PlaneData{normal / len, offset / len});
}

ConvexSet ConvexSet::affine_subspace(Matrix basis, Vector offset) {
  if (basis.rows() != offset.size() || offset.size() == 0) {
    throw ConfigError("affine_subspace: basis rows must match offset dimension");
  }
  if (!basis.allFinite()) throw ConfigError("affine_subspace: non-finite basis");
  require_finite(offset, "affine_subspace");
  const auto n = offset.size();
  Matrix q(n, 0);
  if (basis.cols() > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    Matrix full = qr.householderQ();
    q = full.leftCols(rank);
  }
  return ConvexSet(Kind::AffineSubspace, n, AffineData{std::move(q), std::move(offset)});
}

ConvexSet ConvexSet::singleton(Vector point) {
  require_finite(point, "singleton");
  if (point.size() == 0) throw ConfigError("singleton: empty point");
  const auto n = point.size();
  return ConvexSet(Kind::Singleton, n, PointData{std::move(point)});
}

const Matrix& ConvexSet::orthonormal_basis() const {
  if (kind_ != Kind::AffineSubspace) throw std::logic_error("orthonormal_basis: not an affine subspace");
  return std::get<AffineData>(data_).q;
}

std::optional<std::pair<Matrix, Vector>> ConvexSet::affine_constraints() const {
  switch (kind_) {
    case Kind::Hyperplane: {
      const auto& p = std::get<PlaneData>(data_);
      Vector f(1);
      f << p.offset;
      return std::pair<Matrix, Vector>{p.normal.transpose(), f};
    }
    case Kind::Singleton: {
      const auto& p = std::get<PointData>(data_);
      return std::pair<Matrix, Vector>{Matrix::Identity(dim_, dim_), p.point};
    }
    case Kind::AffineSubspace: {
      const auto& a = std::get<AffineData>(data_);
      Matrix complement;
      if (a.q.cols() == 0) {
        complement = Matrix::Identity(dim_, dim_);
      } else {
        Eigen::HouseholderQR<Matrix> qr(a.q);
        Matrix full = qr.householderQ();
        complement = full.rightCols(dim_ - a.q.cols());
      }
      Matrix e = complement.transpose();
      Vector f = e * a.offset;
      return std::pair<Matrix, Vector>{std::move(e), std::move(f)};
    }
    default:
      return std::nullopt;
  }
}

Vector ConvexSet::project(const Vector& x) const {
  if (x.size() != dim_) throw DimensionError("project: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const BoxData& b) -> Vector { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const BallData& b) -> Vector {
            const Vector d = x - b.center;
            const double len = d.norm();
            if (len <= b.radius) return x;
            return b.center + (b.radius / len) * d;
          },
          [&](const PlaneData& p) -> Vector {
            const double excess = p.normal.dot(x) - p.offset;
            if (kind_ == Kind::Halfspace && excess <= 0.0) return x;
            return x - excess * p.normal;
          },
          [&](const AffineData& a) -> Vector {
            const Vector d = x - a.offset;
            return a.offset + a.q * (a.q.transpose() * d);
          },
          [&](const PointData& p) -> Vector { return p.point; },
      },
      data_);
}

double ConvexSet::distance(const Vector& x) const { return (x - project(x)).norm(); }

bool ConvexSet::contains(const Vector& x, double tol) const { return distance(x) <= tol; }

std::string ConvexSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Box: os << "box"; break;
    case Kind::Ball: os << "ball(r=" << std::get<BallData>(data_).radius << ")"; break;
    case Kind::Halfspace: os << "halfspace"; break;
    case Kind::Hyperplane: os << "hyperplane"; break;
    case Kind::AffineSubspace:
      os << "affine(dim=" << std::get<AffineData>(data_).q.cols() << ")";
      break;
    case Kind::Singleton: os << "singleton"; break;
  }
  os << " in R^" << dim_;
  return os.str();
}

Vector project(const ConvexSet& s, const Vector& x) { return s.project(x); }

ProxFunction indicator(const ConvexSet& s) {
  return ProxFunction([s](double, const Vector& x) { return s.project(x); },
                      "indicator(" + s.describe() + ")",
                      [s](const Vector& x) {
                        return s.contains(x, 1e-9) ? 0.0 : std::numeric_limits<double>::infinity();
                      });
}

MonotoneOperator normal_cone(const ConvexSet& s) {
  return MonotoneOperator([s](double, const Vector& x) { return s.project(x); },
                          "normal_cone(" + s.describe() + ")");
}

Vector prox_scaled_plus_quadratic(const ProxFunction& h, double a, double b, double t,
                                  const Vector& x) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0)) {
    throw ConfigError("prox_scaled_plus_quadratic: need a >= 0, b >= 0, a + b > 0");
  }
  if (!(t > 0.0)) throw ConfigError("prox_scaled_plus_quadratic: t must be positive");
  const double shrink = 1.0 + t * b;
  if (a == 0.0) return x / shrink;
  return h.prox(t * a / shrink, x / shrink);
}

ProxFunction scaled_plus_quadratic(const ProxFunction& h, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0)) {
    throw ConfigError("scaled_plus_quadratic: need a >= 0, b >= 0, a + b > 0");
  }
  ValueFn value;
  if (h.has_value() || a == 0.0) {
    value = [h, a, b](const Vector& y) {
      const double hv = a == 0.0 ? 0.0 : a * h.value(y);
      return hv + 0.5 * b * y.squaredNorm();
    };
  }
  std::ostringstream label;
  label << a << "*" << h.label() << "+" << b << "/2|.|^2";
  return ProxFunction(
      [h, a, b](double t, const Vector& x) { return prox_scaled_plus_quadratic(h, a, b, t, x); },
      label.str(), std::move(value));
}

}  // namespace rsum
