#include "rsum/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "rsum/operators.hpp"
#include "rsum/strengthening.hpp"

namespace rsum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Matrix ProblemRng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal_(engine_);
  }
  return m;
}

Matrix random_monotone_matrix(ProblemRng& rng, Eigen::Index n, bool skew, double scale) {
  const Matrix g = rng.gaussian(n, n);
  Matrix m = g * g.transpose() / static_cast<double>(n);
  if (skew) {
    const Matrix k = rng.gaussian(n, n);
    m += (k - k.transpose()) / static_cast<double>(n);
  }
  return scale * m;
}

std::optional<AffineIntersection> project_affine_intersection(const ConvexSet& c,
                                                              const ConvexSet& d,
                                                              const Vector& z) {
  const auto ec = c.affine_constraints();
  const auto ed = d.affine_constraints();
  if (!ec || !ed) return std::nullopt;
  const Eigen::Index mc = ec->first.rows();
  const Eigen::Index md = ed->first.rows();
  const Eigen::Index n = z.size();
  Matrix e(mc + md, n);
  e << ec->first, ed->first;
  Vector f(mc + md);
  f << ec->second, ed->second;

  // x = z - E^T lambda with (E E^T) lambda = E z - f; min-norm lambda when E is
  // rank deficient.
  const Matrix gram = e * e.transpose();
  const Vector lambda = gram.completeOrthogonalDecomposition().solve(e * z - f);
  AffineIntersection out;
  out.projection = z - e.transpose() * lambda;
  const double violation = (e * out.projection - f).norm();
  if (violation > 1e-9 * (1.0 + f.norm() + z.norm())) {
    throw ConfigError("affine sets do not intersect");
  }
  out.normal_c = ec->first.transpose() * lambda.head(mc);
  out.normal_d = ed->first.transpose() * lambda.tail(md);
  return out;
}

namespace {

struct Materialized {
  MonotoneOperator op;
  std::optional<Matrix> matrix;
  std::optional<ConvexSet> set;
};

Materialized materialize(const OperandSpec& spec, Eigen::Index n, ProblemRng& rng,
                         const Matrix& shared) {
  switch (spec.category) {
    case OperandSpec::Category::Linear: {
      Matrix m = spec.random_psd ? random_monotone_matrix(rng, n, spec.skew, spec.scale)
                                 : *spec.matrix;
      LinearMonotoneOperator lin(m);
      return {lin.as_operator(spec.section + ":" + spec.type), std::move(m), std::nullopt};
    }
    case OperandSpec::Category::Set: {
      ConvexSet s = spec.set ? *spec.set : [&] {
        const auto extra = spec.subspace_dim - shared.cols();
        Matrix basis(n, spec.subspace_dim);
        basis << shared, rng.gaussian(n, extra);
        return ConvexSet::affine_subspace(std::move(basis), Vector::Zero(n));
      }();
      return {normal_cone(s), std::nullopt, s};
    }
    case OperandSpec::Category::Function:
      return {as_operator(*spec.function), std::nullopt, std::nullopt};
  }
  throw std::logic_error("materialize: unknown category");
}

}  // namespace

Problem build_problem(const ProblemSpec& spec) {
  const Eigen::Index n = spec.dimension;
  ProblemRng rng(spec.seed);
  // Draw order is fixed: z, shared subspace, first operand, second operand.
  Vector z = spec.z ? *spec.z : rng.gaussian(n);
  const bool any_subspace = spec.first.subspace_dim > 0 || spec.second.subspace_dim > 0;
  const Matrix shared = any_subspace ? rng.gaussian(n, spec.shared_dim) : Matrix(n, 0);

  Materialized first = materialize(spec.first, n, rng, shared);
  Materialized second = materialize(spec.second, n, rng, shared);

  if (spec.kind == ProblemKind::StrongWeak) {
    const double scale = 1.0 / (spec.strong_convexity - spec.weak_convexity);
    const ProxFunction f = scaled_plus_quadratic(*spec.first.function, scale, 0.0);
    const ProxFunction g = scaled_plus_quadratic(*spec.second.function, scale, 0.0);
    first.op = as_operator(f);
    second.op = as_operator(g);
  }

  Problem p{first.op, second.op, std::move(z), std::nullopt, std::nullopt, first.set, second.set};
  if (first.matrix && second.matrix) {
    Matrix system = *first.matrix + *second.matrix;
    system.diagonal().array() += 1.0;
    const Vector u = system.partialPivLu().solve(p.z);
    p.known_solution = u;
    p.a_selection = *first.matrix * u;
  } else if (first.set && second.set) {
    if (auto hit = project_affine_intersection(*first.set, *second.set, p.z)) {
      p.known_solution = hit->projection;
      p.a_selection = hit->normal_c;
    }
  }
  if (spec.known_solution) {
    // A user-supplied ground truth replaces the computed one; the selection
    // only stays valid when both agree.
    if (!p.known_solution || (*p.known_solution - *spec.known_solution).norm() > 1e-9) {
      p.a_selection.reset();
    }
    p.known_solution = spec.known_solution;
  }
  return p;
}

namespace {

double probe_parameter(const ProblemSpec& spec) {
  switch (spec.method) {
    case Method::Strengthened: return spec.r0;
    case Method::DR: return spec.gamma.value_or(1.0);
    case Method::AAMR: return aamr_parameter(spec.beta, spec.gamma.value_or(2.0 * (1.0 - spec.beta)));
  }
  return spec.r0;
}

ProbeReport probe_problem(const ProblemSpec& spec, const Problem& p, double r) {
  const ComposedReflector t(StrengthenedOperator(p.a, spec.beta, p.z),
                            StrengthenedOperator(p.b, spec.beta, p.z), r);
  ProbeOptions opts;
  opts.max_iter = spec.probe_max_iter;
  return trajectory_probe(t, spec.z0, opts);
}

double at(const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : kNaN; }

}  // namespace

ProbeReport probe(const ProblemSpec& spec) {
  const Problem p = build_problem(spec);
  return probe_problem(spec, p, spec.r0);
}

ExperimentResult run(const ProblemSpec& spec) {
  const Problem p = build_problem(spec);
  ExperimentResult result;
  ExperimentSummary& summary = result.summary;
  summary.method = to_string(spec.method);

  if (spec.probe) {
    const ProbeReport report = probe_problem(spec, p, probe_parameter(spec));
    summary.probe = report.verdict;
    summary.probe_detail = report.detail;
    if (report.verdict == ProbeVerdict::Diverging) {
      summary.stop_reason = "diverging";
      summary.solution = Vector::Constant(p.z.size(), kNaN);
      return result;
    }
  }

  SolveReport report;
  if (spec.method == Method::Strengthened) {
    SolveConfig cfg;
    cfg.beta = spec.beta;
    cfg.r0 = spec.r0;
    cfg.z0 = spec.z0;
    cfg.tol = spec.tol;
    cfg.max_iter = spec.max_iter;
    cfg.known_solution = p.known_solution;
    if (p.known_solution && p.a_selection) {
      cfg.witness = witness_from_selection(spec.beta, p.z, *p.known_solution, *p.a_selection);
    }
    report = solve(p.a, p.b, p.z, cfg);
  } else {
    BaselineConfig cfg;
    cfg.beta = spec.beta;
    cfg.gamma = spec.gamma;
    cfg.lambda = spec.lambda;
    cfg.w0 = spec.z0;
    cfg.tol = spec.tol;
    cfg.max_iter = spec.max_iter;
    cfg.known_solution = p.known_solution;
    report = spec.method == Method::DR ? solve_dr(p.a, p.b, p.z, cfg) : solve_aamr(p.a, p.b, p.z, cfg);
  }

  result.records.reserve(report.r_trace.size());
  for (std::size_t k = 0; k < report.r_trace.size(); ++k) {
    result.records.push_back(IterationRecord{k, report.r_trace[k], report.residual_trace[k],
                                             at(report.error_trace, k),
                                             at(report.lyapunov_trace, k),
                                             at(report.bound_trace, k)});
  }
  summary.stop_reason = to_string(report.stop_reason);
  summary.iterations = report.iterations;
  summary.solution = report.solution;
  if (p.known_solution) {
    summary.final_error = report.error_trace.back();
    const std::size_t to = std::min(spec.rate_to, report.iterations);
    if (to <= spec.rate_from) {
      summary.rate_note = "run too short for the rate window";
    } else {
      try {
        summary.rate_exponent = fit_rate(result, spec.rate_from, to);
      } catch (const NumericalFloorError& e) {
        summary.rate_note = e.what();
      }
    }
  }
  return result;
}

namespace {

void rate_inputs(const ExperimentResult& result, std::size_t k_from, std::size_t k_to, double floor,
                 std::vector<double>& lx, std::vector<double>& ly) {
  if (k_from < 1 || k_to < k_from) throw ConfigError("fit_rate: need 1 <= k_from <= k_to");
  for (const auto& rec : result.records) {
    if (rec.k < k_from || rec.k > k_to) continue;
    if (std::isnan(rec.error)) throw ConfigError("fit_rate: no error column (known solution absent)");
    if (!(rec.error > floor)) continue;
    lx.push_back(std::log(static_cast<double>(rec.k)));
    ly.push_back(std::log(rec.error));
  }
}

}  // namespace

std::size_t fit_rate_points(const ExperimentResult& result, std::size_t k_from, std::size_t k_to,
                            double floor) {
  std::vector<double> lx, ly;
  rate_inputs(result, k_from, k_to, floor, lx, ly);
  return lx.size();
}

double fit_rate(const ExperimentResult& result, std::size_t k_from, std::size_t k_to, double floor) {
  std::vector<double> lx, ly;
  rate_inputs(result, k_from, k_to, floor, lx, ly);
  if (lx.size() < 2) throw NumericalFloorError();
  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw NumericalFloorError();
  return sxy / sxx;
}

namespace {

void append_double(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  out.append(buf, ptr);
}

double parse_double(std::string_view s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, "csv: bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string to_csv(const ExperimentResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& rec : result.records) {
    out += std::to_string(rec.k);
    for (double v : {rec.r, rec.residual, rec.error, rec.lyapunov, rec.bound}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  const std::string text = to_csv(result);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename to '" + path.string() + "': " + ec.message());
  }
}

ExperimentResult parse_csv(const std::string& text) {
  ExperimentResult result;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError(1, std::string("csv: expected header '") + kCsvHeader + "'");
  }
  ++number;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 6) throw ParseError(number, "csv: expected 6 columns");
    IterationRecord rec;
    const auto [ptr, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), rec.k);
    if (ec != std::errc() || ptr != cells[0].data() + cells[0].size()) {
      throw ParseError(number, "csv: bad iteration index");
    }
    rec.r = parse_double(cells[1], number);
    rec.residual = parse_double(cells[2], number);
    rec.error = parse_double(cells[3], number);
    rec.lyapunov = parse_double(cells[4], number);
    rec.bound = parse_double(cells[5], number);
    result.records.push_back(rec);
  }
  return result;
}

ExperimentResult read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace rsum
