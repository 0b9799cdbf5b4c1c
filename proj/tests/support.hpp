#pragma once

// Shared helpers for the test binaries: seeded generators and brute-force
// oracles that do not go through the library code under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>

#include "rsum/core.hpp"

namespace testing_support {

using rsum::Matrix;
using rsum::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

  Vector vec(Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }
  Matrix mat(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal();
    return m;
  }
  /// PSD part plus optional skew part: a monotone, generally nonsymmetric matrix.
  Matrix monotone(Eigen::Index n, bool skew) {
    const Matrix g = mat(n, n);
    Matrix m = g * g.transpose() / static_cast<double>(n);
    if (skew) {
      const Matrix k = mat(n, n);
      m += 0.5 * (k - k.transpose());
    }
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

/// argmin of phi over [lo, hi] by a uniform grid followed by golden-section
/// refinement around the best grid point (phi assumed unimodal near it).
inline double grid_argmin(const std::function<double(double)>& phi, double lo, double hi,
                          int points = 20001) {
  double best = lo;
  double best_val = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double t = lo + h * i;
    const double v = phi(t);
    if (v < best_val) {
      best_val = v;
      best = t;
    }
  }
  double a = best - h, b = best + h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (phi(c) < phi(d)) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

/// Orthonormal basis of the intersection of two subspaces given by spanning
/// columns, via the null space of [Bc, -Bd].
inline Matrix intersection_basis(const Matrix& bc, const Matrix& bd) {
  Matrix stacked(bc.rows(), bc.cols() + bd.cols());
  stacked << bc, -bd;
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * s.maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > tol;
  const Matrix null = svd.matrixV().rightCols(stacked.cols() - rank);
  const Matrix span = bc * null.topRows(bc.cols());
  if (span.cols() == 0) return Matrix(bc.rows(), 0);
  Eigen::JacobiSVD<Matrix> s2(span, Eigen::ComputeThinU);
  Eigen::Index r2 = 0;
  for (Eigen::Index i = 0; i < s2.singularValues().size(); ++i) r2 += s2.singularValues()[i] > 1e-10;
  return s2.matrixU().leftCols(r2);
}

inline double rel_err(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace testing_support
