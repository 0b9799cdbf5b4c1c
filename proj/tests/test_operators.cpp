#include <doctest.h>

#include <cmath>
#include <vector>

#include "rsum/operators.hpp"
#include "support.hpp"

using namespace rsum;
using testing_support::Gen;
using testing_support::grid_argmin;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }
Vector v2(double a, double b) { Vector v(2); v << a, b; return v; }

/// One random set of each kind in R^n, plus a point sampler for it.
struct SampledSet {
  ConvexSet set;
  std::function<Vector(Gen&)> sample;
};

std::vector<SampledSet> catalog(Gen& g, Eigen::Index n) {
  std::vector<SampledSet> out;
  const Vector lo = -g.vec(n).cwiseAbs(), hi = g.vec(n).cwiseAbs();
  out.push_back({ConvexSet::box(lo, hi), [lo, hi](Gen& r) {
                   Vector s(lo.size());
                   for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = r.uniform(lo[i], hi[i]);
                   return s;
                 }});
  const Vector c = g.vec(n);
  out.push_back({ConvexSet::ball(c, 1.3), [c](Gen& r) {
                   Vector d = r.vec(c.size());
                   return Vector(c + r.uniform(0.0, 1.3) * d / d.norm());
                 }});
  const Vector a = g.vec(n);
  out.push_back({ConvexSet::halfspace(a, 0.5), [a](Gen& r) {
                   const Vector y = r.vec(a.size(), 3.0);
                   const double ex = a.dot(y) - 0.5;
                   return ex <= 0 ? y : Vector(y - (ex / a.squaredNorm() + r.uniform(0, 1)) * a);
                 }});
  out.push_back({ConvexSet::hyperplane(a, 0.5), [a](Gen& r) {
                   const Vector y = r.vec(a.size(), 3.0);
                   return Vector(y - ((a.dot(y) - 0.5) / a.squaredNorm()) * a);
                 }});
  const Matrix b = g.mat(n, 2);
  const Vector off = g.vec(n);
  out.push_back({ConvexSet::affine_subspace(b, off),
                 [b, off](Gen& r) { return Vector(off + b * r.vec(2, 3.0)); }});
  const Vector p = g.vec(n);
  out.push_back({ConvexSet::singleton(p), [p](Gen&) { return p; }});
  return out;
}

}  // namespace

TEST_CASE("resolvent_linear examples") {
  const LinearMonotoneOperator id(Matrix::Identity(2, 2));
  CHECK((resolvent_linear(id, 1.0, v2(2, 2)) - v2(1, 1)).norm() <= 1e-15);
  const LinearMonotoneOperator zero(Matrix::Zero(2, 2));
  CHECK(resolvent_linear(zero, 3.7, v2(-1, 5)) == v2(-1, 5));
  Matrix d(2, 2);
  d << 2, 0, 0, 4;
  // (I + 0.5 diag(2,4)) w = (4,6): w = (4/2, 6/3).
  CHECK((resolvent_linear(LinearMonotoneOperator(d), 0.5, v2(4, 6)) - v2(2, 2)).norm() <= 1e-15);
}

TEST_CASE("resolvent_linear satisfies its defining equation") {
  Gen g(21);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = g.integer(1, 12);
    const Matrix m = g.monotone(n, i % 2 == 0);
    const double r = g.uniform(0.01, 10.0);
    const Vector x = g.vec(n);
    const Vector w = resolvent_linear(LinearMonotoneOperator(m), r, x);
    CHECK((w + r * m * w - x).norm() <= 1e-10 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("LinearMonotoneOperator validation") {
  Matrix bad(2, 2);
  bad << -1, 0, 0, 1;
  CHECK_THROWS_AS(LinearMonotoneOperator{bad}, ConfigError);
  CHECK_THROWS_AS(LinearMonotoneOperator{Matrix(2, 3)}, ConfigError);
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;  // skew: monotone but not symmetric
  CHECK_NOTHROW(LinearMonotoneOperator{rot});
  CHECK_THROWS_AS(LinearMonotoneOperator(rot).resolvent(-1.0, v2(0, 0)), ConfigError);
  CHECK_THROWS_AS(LinearMonotoneOperator(rot).resolvent(1.0, v1(0)), DimensionError);
}

TEST_CASE("prox_l1 examples") {
  CHECK(prox_l1(1.0, v1(2))[0] == 1.0);
  CHECK(prox_l1(1.0, v1(0.5))[0] == 0.0);
  const double grid = grid_argmin([](double y) { return std::abs(y) + (y + 1) * (y + 1) / 0.6; }, -3, 3);
  CHECK(prox_l1(0.3, v1(-1))[0] == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(prox_l1(0.3, v1(-1))[0] == doctest::Approx(grid).epsilon(1e-7));
  CHECK_THROWS_AS(prox_l1(0.0, v1(1)), ConfigError);
}

TEST_CASE("project examples") {
  CHECK((project(ConvexSet::ball(v2(0, 0), 1.0), v2(3, 4)) - v2(0.6, 0.8)).norm() <= 1e-15);
  CHECK((project(ConvexSet::halfspace(v2(1, 0), 0.0), v2(2, 3)) - v2(0, 3)).norm() == 0.0);
  // b^T x / b^T b * b with b = (1,1), x = (3,1).
  const Vector span = project(ConvexSet::affine_subspace(v2(1, 1), v2(0, 0)), v2(3, 1));
  CHECK((span - v2(2, 2)).norm() <= 1e-14);
}

TEST_CASE("set validation") {
  CHECK_THROWS_AS(ConvexSet::ball(v2(0, 0), 0.0), ConfigError);
  CHECK_THROWS_AS(ConvexSet::box(v2(1, 0), v2(0, 0)), ConfigError);
  CHECK_THROWS_AS(ConvexSet::halfspace(v2(0, 0), 1.0), ConfigError);
  CHECK_THROWS_AS(ConvexSet::singleton(v2(0, 0)).project(v1(0)), DimensionError);
}

TEST_CASE("projection is idempotent and a nearest point") {
  Gen g(22);
  for (const Eigen::Index n : {1, 3, 6}) {
    for (auto& [set, sample] : catalog(g, n)) {
      INFO(set.describe());
      double worst_idem = 0.0, worst_min = -1e300;
      for (int i = 0; i < 1000; ++i) {
        const Vector x = g.vec(n, 4.0);
        const Vector p = set.project(x);
        worst_idem = std::max(worst_idem, (set.project(p) - p).norm());
        if (i < 10) {
          for (int j = 0; j < 100; ++j) {
            const Vector s = sample(g);
            worst_min = std::max(worst_min, (x - p).norm() - (x - s).norm());
          }
        }
      }
      CHECK(worst_idem <= 1e-12);
      CHECK(worst_min <= 1e-9);
    }
  }
}

TEST_CASE("affine_constraints describe the same set") {
  Gen g(23);
  const Eigen::Index n = 5;
  const std::vector<ConvexSet> sets = {ConvexSet::hyperplane(g.vec(n), 0.7), ConvexSet::singleton(g.vec(n)),
                                       ConvexSet::affine_subspace(g.mat(n, 3), g.vec(n)),
                                       ConvexSet::affine_subspace(Matrix(n, 0), g.vec(n))};
  for (const auto& s : sets) {
    const auto ef = s.affine_constraints();
    REQUIRE(ef.has_value());
    const auto& [e, f] = *ef;
    CHECK((e * e.transpose() - Matrix::Identity(e.rows(), e.rows())).norm() <= 1e-12);
    for (int i = 0; i < 50; ++i) {
      const Vector p = s.project(g.vec(n, 3.0));
      CHECK((e * p - f).norm() <= 1e-10);
    }
  }
  CHECK_FALSE(ConvexSet::ball(g.vec(n), 1.0).affine_constraints().has_value());
}

TEST_CASE("prox_scaled_plus_quadratic examples") {
  const ProxFunction l1 = l1_norm();
  CHECK(prox_scaled_plus_quadratic(l1, 0.0, 1.0, 1.0, v1(4))[0] == 2.0);
  Gen g(24);
  for (int i = 0; i < 50; ++i) {
    const Vector x = g.vec(3, 2.0);
    const double t = g.uniform(0.1, 2.0);
    CHECK(prox_scaled_plus_quadratic(l1, 1.0, 0.0, t, x) == prox_l1(t, x));
  }
  const double grid = grid_argmin([](double y) { return std::abs(y) + 0.5 * y * y + 0.5 * (y - 3) * (y - 3); }, -5, 5);
  CHECK(prox_scaled_plus_quadratic(l1, 1.0, 1.0, 1.0, v1(3))[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(grid == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(prox_scaled_plus_quadratic(l1, 0.0, 0.0, 1.0, v1(3)), ConfigError);
}

TEST_CASE("prox_scaled_plus_quadratic matches a grid minimizer on random instances") {
  Gen g(25);
  const std::vector<ProxFunction> hs = {l1_norm(), half_squared_norm(1.5), linear_function(v1(0.8)),
                                        indicator(ConvexSet::box(v1(-0.5), v1(1.0)))};
  for (const auto& h : hs) {
    for (int i = 0; i < 20; ++i) {
      const double a = g.uniform(0.0, 2.0), b = g.uniform(0.0, 2.0), t = g.uniform(0.1, 2.0);
      const double x = g.uniform(-4.0, 4.0);
      auto phi = [&](double y) {
        const double hv = h.value(v1(y));
        if (std::isinf(hv)) return hv;
        return t * (a * hv + 0.5 * b * y * y) + 0.5 * (y - x) * (y - x);
      };
      INFO(h.label() << " a=" << a << " b=" << b << " t=" << t << " x=" << x);
      CHECK(prox_scaled_plus_quadratic(h, a, b, t, v1(x))[0] == doctest::Approx(grid_argmin(phi, -10, 10)).epsilon(1e-6));
    }
  }
  // 2-D check on a coarser grid.
  const Vector x = v2(1.7, -0.4);
  const Vector p = prox_scaled_plus_quadratic(l1_norm(), 0.6, 0.9, 1.1, x);
  double best = 1e300;
  Vector arg(2);
  for (double u = -3; u <= 3; u += 0.002) {
    for (double w = -3; w <= 3; w += 0.002) {
      const double val = 1.1 * (0.6 * (std::abs(u) + std::abs(w)) + 0.45 * (u * u + w * w)) +
                         0.5 * ((u - x[0]) * (u - x[0]) + (w - x[1]) * (w - x[1]));
      if (val < best) { best = val; arg << u, w; }
    }
  }
  CHECK((p - arg).norm() <= 0.003);
}

TEST_CASE("indicator and normal cone") {
  const ConvexSet s = ConvexSet::ball(v2(0, 0), 1.0);
  CHECK(indicator(s).value(v2(0.5, 0)) == 0.0);
  CHECK(std::isinf(indicator(s).value(v2(2, 0))));
  CHECK((normal_cone(s).resolvent(9.0, v2(0, 3)) - v2(0, 1)).norm() == 0.0);
}
