#include "rsum/strengthening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rsum {

StrengthenedOperator::StrengthenedOperator(MonotoneOperator base, double beta, Vector anchor)
    : base_(std::move(base)), beta_(beta), anchor_(std::move(anchor)) {
  if (!(beta_ > 0.0 && beta_ < 1.0)) throw ConfigError("beta out of (0,1)");
  if (anchor_.size() == 0 || !anchor_.allFinite()) {
    throw ConfigError("StrengthenedOperator: anchor must be a nonempty finite vector");
  }
}

double base_resolvent_parameter(double beta, double r) {
  return 2.0 * r * (1.0 - beta) / (beta + r * (1.0 - beta));
}

Vector strengthened_resolvent(const StrengthenedOperator& s, double r, const Vector& x) {
  if (!(r > 0.0)) throw ConfigError("strengthened_resolvent: r must be positive");
  require_same_dim(x, s.anchor(), "strengthened_resolvent");
  const double beta = s.beta();
  const double denom = beta + r * (1.0 - beta);
  const double param = 2.0 * r * (1.0 - beta) / denom;
  const Vector shifted = x / denom + s.anchor();
  return beta * (s.base().resolvent(param, shifted) - s.anchor());
}

Vector reflected_resolvent(const StrengthenedOperator& s, double r, const Vector& x) {
  return 2.0 * strengthened_resolvent(s, r, x) - x;
}

ComposedReflector::ComposedReflector(StrengthenedOperator first, StrengthenedOperator second,
                                     double r)
    : first_(std::move(first)), second_(std::move(second)), r_(r) {
  if (first_.beta() != second_.beta()) throw ConfigError("ComposedReflector: beta differs");
  if (first_.anchor().size() != second_.anchor().size() || first_.anchor() != second_.anchor()) {
    throw ConfigError("ComposedReflector: anchors differ");
  }
  if (!(r_ > 0.0)) throw ConfigError("ComposedReflector: r must be positive");
}

Vector apply_T(const ComposedReflector& t, const Vector& x) {
  return reflected_resolvent(t.second(), t.r(), reflected_resolvent(t.first(), t.r(), x));
}

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::Bounded: return "bounded";
    case ProbeVerdict::Diverging: return "diverging";
    case ProbeVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ProbeReport trajectory_probe(const ComposedReflector& t, const Vector& x0,
                             const ProbeOptions& opts) {
  if (opts.max_iter < 1) throw ConfigError("trajectory_probe: max_iter must be >= 1");
  if (opts.window < 1) throw ConfigError("trajectory_probe: window must be >= 1");
  require_same_dim(x0, t.first().anchor(), "trajectory_probe");

  ProbeReport report;
  report.norm_trace.reserve(std::min<std::size_t>(opts.max_iter, 1 << 20) + 1);
  Vector x = x0;
  double current = x.norm();
  report.norm_trace.push_back(current);

  double window_start = current;
  double window_peak = current;
  double prev_peak = current;
  double prev_increment = 0.0;
  bool have_prev_increment = false;
  std::size_t stable = 0;
  std::size_t drifting = 0;
  double step_len = 0.0;

  auto finish = [&](ProbeVerdict v, std::string detail) {
    report.verdict = v;
    report.detail = std::move(detail);
    return report;
  };

  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    Vector next = apply_T(t, x);
    if (!next.allFinite()) {
      report.iterations = k;
      return finish(ProbeVerdict::Diverging, "non-finite iterate");
    }
    step_len = (next - x).norm();
    x = std::move(next);
    current = x.norm();
    report.norm_trace.push_back(current);
    report.iterations = k;
    window_peak = std::max(window_peak, current);

    if (current > opts.blowup) {
      std::ostringstream os;
      os << "norm " << current << " exceeded blowup " << opts.blowup << " at k=" << k;
      return finish(ProbeVerdict::Diverging, os.str());
    }
    if (k % opts.window != 0) continue;

    // Window boundary.
    const double increment = current - window_start;
    const double scale = std::max(1.0, prev_peak);
    if (window_peak <= prev_peak + opts.plateau * scale) {
      ++stable;
    } else {
      stable = 0;
    }

    const bool steady = have_prev_increment && increment > 0.0 &&
                        std::abs(increment - prev_increment) <= opts.drift_tolerance * increment;
    const bool matches_step =
        step_len > 0.0 && increment / static_cast<double>(opts.window) >= 0.5 * step_len;
    drifting = (steady && matches_step) ? drifting + 1 : 0;

    if (stable >= opts.stable_windows) {
      std::ostringstream os;
      os << "peak norm plateaued at " << window_peak << " by k=" << k;
      return finish(ProbeVerdict::Bounded, os.str());
    }
    if (drifting >= opts.drift_windows) {
      std::ostringstream os;
      os << "norm drifts linearly by " << increment / static_cast<double>(opts.window)
         << " per step (step length " << step_len << ") at k=" << k;
      return finish(ProbeVerdict::Diverging, os.str());
    }

    prev_peak = window_peak;
    prev_increment = increment;
    have_prev_increment = true;
    window_start = current;
    window_peak = current;
  }
  return finish(ProbeVerdict::Inconclusive, "no plateau or drift detected within max_iter");
}

}  // namespace rsum
