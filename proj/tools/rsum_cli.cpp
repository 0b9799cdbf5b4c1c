// rsum: command-line harness around the library.
//
//   rsum solve --config spec.ini [--method strengthened|dr|aamr] --out trace.csv
//   rsum probe --config spec.ini
//   rsum rate --in trace.csv --from 100 --to 10000 [--floor 1e-14]
//
// Exit status: 0 converged/completed, 2 divergence evidence, 1 error.
// RSUM_LOG=quiet|info|debug sets stderr verbosity (default info).

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rsum/config.hpp"
#include "rsum/experiment.hpp"

namespace {

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("RSUM_LOG");
  if (!env) return LogLevel::Info;
  const std::string v = env;
  if (v == "quiet" || v == "0") return LogLevel::Quiet;
  if (v == "debug" || v == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

void log(LogLevel at, const std::string& msg) {
  if (log_level() >= at) std::cerr << "rsum: " << msg << '\n';
}

std::string format_vector(const rsum::Vector& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

int cmd_solve(const std::string& config, const std::string& method, const std::string& out) {
  rsum::ProblemSpec spec = rsum::parse_config(config);
  if (!method.empty()) spec.method = rsum::parse_method(method);
  if (spec.method == rsum::Method::AAMR && spec.lambda && !(*spec.lambda > 0.0 && *spec.lambda < 1.0)) {
    throw rsum::ConfigError("lambda out of (0,1) for aamr");
  }
  log(LogLevel::Debug, "kind=" + rsum::to_string(spec.kind) + " method=" + rsum::to_string(spec.method) +
                           " n=" + std::to_string(spec.dimension));
  const rsum::ExperimentResult result = rsum::run(spec);
  const auto& s = result.summary;
  if (!out.empty()) {
    rsum::emit_csv(result, out);
    log(LogLevel::Debug, "wrote " + std::to_string(result.records.size()) + " rows to " + out);
  }
  std::cout << std::setprecision(17);
  std::cout << "method: " << s.method << '\n';
  std::cout << "stop_reason: " << s.stop_reason << '\n';
  if (s.probe) std::cout << "probe: " << rsum::to_string(*s.probe) << " (" << s.probe_detail << ")\n";
  if (s.stop_reason == "diverging") {
    log(LogLevel::Info, "no solution: trajectory probe reports divergence");
    return 2;
  }
  std::cout << "iterations: " << s.iterations << '\n';
  std::cout << "solution: " << format_vector(s.solution) << '\n';
  if (s.final_error) std::cout << "final_error: " << *s.final_error << '\n';
  if (s.rate_exponent) std::cout << "rate_exponent: " << *s.rate_exponent << '\n';
  if (!s.rate_note.empty()) std::cout << "rate_note: " << s.rate_note << '\n';
  if (s.stop_reason == "max_iterations") log(LogLevel::Info, "stopped at max_iter before tolerance");
  return 0;
}

int cmd_probe(const std::string& config) {
  const rsum::ProblemSpec spec = rsum::parse_config(config);
  const rsum::ProbeReport report = rsum::probe(spec);
  std::cout << "verdict: " << rsum::to_string(report.verdict) << '\n';
  std::cout << "iterations: " << report.iterations << '\n';
  std::cout << "detail: " << report.detail << '\n';
  return report.verdict == rsum::ProbeVerdict::Diverging ? 2 : 0;
}

int cmd_rate(const std::string& in, std::size_t from, std::size_t to, double floor) {
  const rsum::ExperimentResult result = rsum::read_csv(in);
  try {
    const double slope = rsum::fit_rate(result, from, to, floor);
    std::cout << std::setprecision(17) << "rate_exponent: " << slope << '\n';
    std::cout << "points: " << rsum::fit_rate_points(result, from, to, floor) << '\n';
    return 0;
  } catch (const rsum::NumericalFloorError& e) {
    std::cout << "rate: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolvent-of-sum solver and benchmark harness"};
  app.require_subcommand(1);

  std::string config, method, out, in;
  std::size_t from = 100, to = 10000;
  double floor = 1e-14;

  auto* solve = app.add_subcommand("solve", "run a config and optionally write the trace CSV");
  solve->add_option("--config", config, "problem config file")->required()->check(CLI::ExistingFile);
  solve->add_option("--method", method, "override the config method")
      ->check(CLI::IsMember({"strengthened", "dr", "aamr"}));
  solve->add_option("--out", out, "trace CSV path");

  auto* probe = app.add_subcommand("probe", "trajectory probe for existence of a solution");
  probe->add_option("--config", config, "problem config file")->required()->check(CLI::ExistingFile);

  auto* rate = app.add_subcommand("rate", "fit log-log error slope over a k window");
  rate->add_option("--in", in, "trace CSV from solve")->required()->check(CLI::ExistingFile);
  rate->add_option("--from", from, "first k")->required();
  rate->add_option("--to", to, "last k")->required();
  rate->add_option("--floor", floor, "ignore errors at or below this value")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(config, method, out);
    if (*probe) return cmd_probe(config);
    if (*rate) return cmd_rate(in, from, to, floor);
  } catch (const std::exception& e) {
    std::cerr << "rsum: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
