#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsum/config.hpp"
#include "rsum/solver.hpp"

namespace rsum {

/// Deterministic source for random problems: std::mt19937_64 seeded with the
/// spec seed, standard normal entries drawn in row-major order.
class ProblemRng {
 public:
  explicit ProblemRng(std::uint64_t seed) : engine_(seed) {}
  Matrix gaussian(Eigen::Index rows, Eigen::Index cols);
  Vector gaussian(Eigen::Index n) { return gaussian(n, 1); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Random PSD matrix G G^T / n, plus a random skew part (K - K^T)/n when requested.
Matrix random_monotone_matrix(ProblemRng& rng, Eigen::Index n, bool skew, double scale = 1.0);

/// A problem ready to solve: operators, anchor and, when computable, ground truth.
struct Problem {
  MonotoneOperator a;
  MonotoneOperator b;
  Vector z;
  std::optional<Vector> known_solution;
  /// Selection a* in A(u*) with z - u* - a* in B(u*); feeds the Lyapunov witness.
  std::optional<Vector> a_selection;
  std::optional<ConvexSet> set_c;
  std::optional<ConvexSet> set_d;
};

/// Materializes the spec; every random draw comes from ProblemRng(spec.seed).
Problem build_problem(const ProblemSpec& spec);

/**
 * P_{C cap D}(z) for affine sets (affine, hyperplane, singleton), together with
 * normal-cone selections n_C, n_D with z - P(z) = n_C + n_D. Returns nullopt
 * for other set kinds. Throws ConfigError when the intersection is empty.
 */
struct AffineIntersection {
  Vector projection;
  Vector normal_c;
  Vector normal_d;
};
std::optional<AffineIntersection> project_affine_intersection(const ConvexSet& c,
                                                              const ConvexSet& d,
                                                              const Vector& z);

struct IterationRecord {
  std::size_t k = 0;
  double r = 0.0;
  double residual = 0.0;
  double error = 0.0;
  double lyapunov = 0.0;
  double bound = 0.0;
};

struct ExperimentSummary {
  std::string method;
  /// converged | max_iterations | diverging
  std::string stop_reason;
  std::size_t iterations = 0;
  Vector solution;
  std::optional<double> final_error;
  std::optional<double> rate_exponent;
  std::string rate_note;
  std::optional<ProbeVerdict> probe;
  std::string probe_detail;
};

struct ExperimentResult {
  std::vector<IterationRecord> records;
  ExperimentSummary summary;
};

/// Runs the spec. Deterministic for a fixed spec (including its seed).
ExperimentResult run(const ProblemSpec& spec);

/// Existence evidence for the spec's operator pair at r = spec.r0, started at z0.
ProbeReport probe(const ProblemSpec& spec);

/// Raised by fit_rate when the window holds fewer than two errors above the floor.
class NumericalFloorError : public std::runtime_error {
 public:
  NumericalFloorError() : std::runtime_error("at numerical floor") {}
};

/**
 * Least-squares slope of log(error) against log(k) over records with
 * k_from <= k <= k_to and error > floor. NaN errors (no ground truth) raise
 * ConfigError.
 */
double fit_rate(const ExperimentResult& result, std::size_t k_from, std::size_t k_to,
                double floor = 1e-14);

/// Number of records fit_rate would use for the same arguments.
std::size_t fit_rate_points(const ExperimentResult& result, std::size_t k_from, std::size_t k_to,
                            double floor = 1e-14);

inline constexpr const char* kCsvHeader = "k,r,residual,error,lyapunov,bound";

/// Header plus one row per record; doubles as shortest round-trip decimals and
/// "nan" for absent values. Written to a temporary file, then renamed.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);
std::string to_csv(const ExperimentResult& result);

/// Reads records back from emit_csv output (summary is left empty).
ExperimentResult read_csv(const std::filesystem::path& path);
ExperimentResult parse_csv(const std::string& text);

}  // namespace rsum
