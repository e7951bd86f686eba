#pragma once

#include <span>
#include <vector>

#include "tracklab/scenario.hpp"

namespace tracklab {

struct SweepRow {
  TrackingGains gains;
  Metrics metrics;
};

/// Runs the base scenario over the Cartesian product of the gain grids
/// and ranks rows by (settle time, final error norm), never-settling
/// last, ties broken lexicographically on (k1, k2, k3). Throws
/// ConfigError on an empty or nonpositive grid.
std::vector<SweepRow> gain_sweep(const ScenarioConfig& base, std::span<const double> k1s,
                                 std::span<const double> k2s, std::span<const double> k3s);

/// Paired metrics for two scenarios sharing a reference and duration;
/// ratios are B over A, with 0/0 reported as 1.
struct ControllerComparison {
  Metrics a;
  Metrics b;
  double rms_ev_ratio = 1.0;
  double rms_ew_ratio = 1.0;
  double rms_ec_ratio = 1.0;
  double sup_ec_ratio = 1.0;
  double final_error_ratio = 1.0;
};

/// Throws ConfigError when the references, durations, or dt differ.
ControllerComparison compare_controllers(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace tracklab
