#include <doctest.h>

#include <cmath>
#include <vector>

#include "rsum/core.hpp"
#include "rsum/operators.hpp"
#include "rsum/strengthening.hpp"
#include "support.hpp"

using namespace rsum;
using testing_support::Gen;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }
Vector v2(double a, double b) { Vector v(2); v << a, b; return v; }

/// Max violation of ||J x - J y||^2 <= <x - y, J x - J y> over random pairs.
double firm_violation(const std::function<Vector(const Vector&)>& j, Eigen::Index n, int pairs,
                      std::uint64_t seed) {
  Gen g(seed);
  double worst = -1e300;
  for (int i = 0; i < pairs; ++i) {
    const Vector x = g.vec(n, 3.0), y = g.vec(n, 3.0);
    const Vector jx = j(x), jy = j(y);
    worst = std::max(worst, (jx - jy).squaredNorm() - (x - y).dot(jx - jy));
  }
  return worst;
}

}  // namespace

TEST_CASE("inner and norm") {
  CHECK(inner(v2(1, 0), v2(0, 1)) == 0.0);
  CHECK(norm(v2(3, 4)) == doctest::Approx(5.0).epsilon(1e-15));
  Gen g(1);
  for (int i = 0; i < 100; ++i) {
    const Vector a = g.vec(7);
    CHECK(inner(a, a) >= 0.0);
  }
  CHECK_THROWS_AS(inner(v1(1), v2(1, 2)), DimensionError);
}

TEST_CASE("as_operator examples") {
  const ConvexSet c = ConvexSet::box(v2(-1, -1), v2(1, 1));
  const MonotoneOperator nc = as_operator(indicator(c));
  for (double r : {0.1, 1.0, 7.5}) {
    CHECK((nc.resolvent(r, v2(3, -0.5)) - v2(1, -0.5)).norm() == 0.0);
  }
  CHECK(as_operator(zero_function()).resolvent(2.0, v2(3, 4)) == v2(3, 4));
  // minimize 1/2 (y - 4)^2 + 1/2 y^2: stationarity gives y = 2.
  CHECK(as_operator(half_squared_norm()).resolvent(1.0, v1(4))[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(nc.resolvent(0.0, v2(0, 0)), ConfigError);
}

TEST_CASE("as_operator reproduces the prox output exactly") {
  Gen g(2);
  const ProxFunction f = l1_norm(0.7);
  const MonotoneOperator a = as_operator(f);
  for (int i = 0; i < 200; ++i) {
    const Vector x = g.vec(5, 2.0);
    const double t = g.uniform(0.01, 3.0);
    CHECK(a.resolvent(t, x) == f.prox(t, x));
  }
}

TEST_CASE("ProxFunction value is optional") {
  const ProxFunction bare([](double, const Vector& x) { return x; }, "bare");
  CHECK_FALSE(bare.has_value());
  CHECK_FALSE(bare.value_fn().has_value());
  CHECK_THROWS_AS(bare.value(v1(0)), std::logic_error);
  CHECK(l1_norm().value(v2(-1, 2)) == 3.0);
}

TEST_CASE("prox minimizes the Moreau objective against sampled points") {
  Gen g(3);
  const std::vector<ProxFunction> fs = {l1_norm(1.3), half_squared_norm(0.4),
                                        linear_function(g.vec(4)), zero_function()};
  for (const auto& f : fs) {
    for (int i = 0; i < 100; ++i) {
      const Vector x = g.vec(4, 2.0);
      const double t = g.uniform(0.05, 2.0);
      const Vector p = f.prox(t, x);
      const double at_p = f.value(p) + (p - x).squaredNorm() / (2 * t);
      for (int j = 0; j < 20; ++j) {
        const Vector y = p + g.vec(4, g.uniform(1e-3, 1.0));
        CHECK(at_p <= f.value(y) + (y - x).squaredNorm() / (2 * t) + 1e-10);
      }
    }
  }
}

TEST_CASE("sampled firm nonexpansiveness of every operator family") {
  Gen g(4);
  const Eigen::Index n = 5;
  const Matrix m = g.monotone(n, true);
  const LinearMonotoneOperator lin(m);
  std::vector<MonotoneOperator> ops = {
      lin.as_operator(),
      zero_operator(),
      as_operator(l1_norm(0.8)),
      as_operator(half_squared_norm(2.0)),
      as_operator(linear_function(g.vec(n))),
      normal_cone(ConvexSet::box(-Vector::Ones(n), Vector::Ones(n))),
      normal_cone(ConvexSet::ball(g.vec(n), 1.5)),
      normal_cone(ConvexSet::halfspace(g.vec(n), 0.3)),
      normal_cone(ConvexSet::hyperplane(g.vec(n), -0.2)),
      normal_cone(ConvexSet::affine_subspace(g.mat(n, 2), g.vec(n))),
      normal_cone(ConvexSet::singleton(g.vec(n))),
  };
  for (const auto& op : ops) {
    for (double r : {0.1, 1.0, 5.0}) {
      INFO(op.label() << " r=" << r);
      CHECK(firm_violation([&](const Vector& x) { return op.resolvent(r, x); }, n, 1000, 11) <= 1e-10);
    }
  }
  // Strengthened resolvents are firmly nonexpansive too.
  for (double beta : {0.3, 0.5, 0.7}) {
    const StrengthenedOperator s(lin.as_operator(), beta, g.vec(n));
    CHECK(firm_violation([&](const Vector& x) { return strengthened_resolvent(s, 0.8, x); }, n, 1000, 12) <=
          1e-10);
  }
}
