#include "tracklab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tracklab {

namespace {

double settle_key(const Metrics& m) {
  return m.settle_time.value_or(std::numeric_limits<double>::infinity());
}

bool profiles_equal(const ReferenceProfile& a, const ReferenceProfile& b) {
  if (a.initial_pose.x != b.initial_pose.x || a.initial_pose.y != b.initial_pose.y ||
      a.initial_pose.theta != b.initial_pose.theta) {
    return false;
  }
  if (a.segments.size() != b.segments.size()) return false;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    if (a.segments[i].duration != b.segments[i].duration || a.segments[i].v != b.segments[i].v ||
        a.segments[i].w != b.segments[i].w) {
      return false;
    }
  }
  return true;
}

double ratio(double b, double a) {
  if (a == 0.0 && b == 0.0) return 1.0;
  return b / a;
}

}  // namespace

std::vector<SweepRow> gain_sweep(const ScenarioConfig& base, std::span<const double> k1s,
                                 std::span<const double> k2s, std::span<const double> k3s) {
  if (k1s.empty() || k2s.empty() || k3s.empty()) {
    throw ConfigError("gain sweep: every gain grid needs at least one value");
  }
  for (const auto grid : {k1s, k2s, k3s}) {
    for (double v : grid) {
      if (!(v > 0.0)) throw ConfigError("gain sweep: grid gains must be > 0");
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(k1s.size() * k2s.size() * k3s.size());
  for (double k1 : k1s) {
    for (double k2 : k2s) {
      for (double k3 : k3s) {
        ScenarioConfig cfg = base;
        cfg.gains = {k1, k2, k3};
        rows.push_back({cfg.gains, compute_metrics(run_scenario(cfg), cfg.metrics)});
      }
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const double sa = settle_key(a.metrics);
    const double sb = settle_key(b.metrics);
    if (sa != sb) return sa < sb;
    if (a.metrics.final_error_norm != b.metrics.final_error_norm) {
      return a.metrics.final_error_norm < b.metrics.final_error_norm;
    }
    if (a.gains.k1 != b.gains.k1) return a.gains.k1 < b.gains.k1;
    if (a.gains.k2 != b.gains.k2) return a.gains.k2 < b.gains.k2;
    return a.gains.k3 < b.gains.k3;
  });
  return rows;
}

ControllerComparison compare_controllers(const ScenarioConfig& a, const ScenarioConfig& b) {
  if (!profiles_equal(a.reference, b.reference)) {
    throw ConfigError("compare: scenarios must share the reference profile");
  }
  if (a.duration != b.duration || a.dt != b.dt) {
    throw ConfigError("compare: scenarios must share duration and dt");
  }

  ControllerComparison cmp;
  cmp.a = compute_metrics(run_scenario(a), a.metrics);
  cmp.b = compute_metrics(run_scenario(b), b.metrics);
  cmp.rms_ev_ratio = ratio(cmp.b.rms_ev, cmp.a.rms_ev);
  cmp.rms_ew_ratio = ratio(cmp.b.rms_ew, cmp.a.rms_ew);
  cmp.rms_ec_ratio = ratio(cmp.b.rms_ec, cmp.a.rms_ec);
  cmp.sup_ec_ratio = ratio(cmp.b.sup_ec, cmp.a.sup_ec);
  cmp.final_error_ratio = ratio(cmp.b.final_error_norm, cmp.a.final_error_norm);
  return cmp;
}

}  // namespace tracklab
