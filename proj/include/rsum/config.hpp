#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rsum/core.hpp"
#include "rsum/operators.hpp"

namespace rsum {

/// Syntax error in a config file; what() starts with "line N:".
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

enum class ProblemKind { ProxSum, StrongWeak, BestApprox, LinearPair, Custom };
enum class Method { Strengthened, DR, AAMR };

std::string to_string(ProblemKind k);
std::string to_string(Method m);
Method parse_method(const std::string& name);

/// One operator/set/function section of a config file, e.g. [C] or [A].
struct OperandSpec {
  enum class Category { Linear, Set, Function };

  std::string section;
  int line = 0;
  std::string type;
  Category category = Category::Linear;

  // Linear: explicit matrix (matrix/identity/zero) or a seeded random one.
  std::optional<Matrix> matrix;
  bool random_psd = false;
  bool skew = false;
  double scale = 1.0;

  // Set: a fixed set, or a seeded random linear subspace.
  std::optional<ConvexSet> set;
  int subspace_dim = 0;

  // Function (l1/half_sq/linear/zero).
  std::optional<ProxFunction> function;

  bool is_random() const { return random_psd || subspace_dim > 0; }
};

/**
 * Declarative description of one solve. Produced by parse_config with every
 * default filled in and every constraint checked.
 */
struct ProblemSpec {
  ProblemKind kind = ProblemKind::Custom;
  Method method = Method::Strengthened;
  Eigen::Index dimension = 0;

  /// Empty when the config says "z = random".
  std::optional<Vector> z;
  Vector z0;

  double beta = 0.5;
  double r0 = 0.0;
  double tol = 1e-8;
  std::size_t max_iter = 100000;

  // Baselines; empty means the method default.
  std::optional<double> gamma;
  std::optional<double> lambda;

  std::uint64_t seed = 0;
  std::optional<Vector> known_solution;

  // strong_weak only.
  double strong_convexity = 0.0;
  double weak_convexity = 0.0;

  /// Dimension of the subspace planted in every random_subspace set.
  int shared_dim = 3;

  bool probe = true;
  std::size_t probe_max_iter = 100000;

  std::size_t rate_from = 100;
  std::size_t rate_to = 10000;

  OperandSpec first;
  OperandSpec second;
};

ProblemSpec parse_config_text(const std::string& text);
/// Reads and parses a config file. Throws ConfigError (ParseError for
/// syntax problems) and std::runtime_error when the file cannot be read.
ProblemSpec parse_config(const std::filesystem::path& path);

}  // namespace rsum
