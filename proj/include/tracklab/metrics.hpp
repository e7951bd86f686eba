#pragma once

#include <optional>

namespace tracklab {

struct SimLog;

struct MetricThresholds {
  double settle_norm = 1e-3;                 // m-equivalent, rad weighted 1 m/rad
  double ec_transient = 10.0;                // s skipped before sup ||e_c||
  std::optional<double> rms_window_start;    // s; default last 25% of the log
  std::optional<double> rms_window_end;      // s; default end of log
  double lyapunov_tolerance = 1e-8;
};

struct Metrics {
  std::optional<double> settle_time;     // first t after which ||e_p|| stays below
  std::optional<double> ex_settle_time;  // same for |e_x| alone
  double rms_ev = 0.0;                   // RMS of v_c - v over the window
  double rms_ew = 0.0;                   // RMS of w_c - w over the window
  double rms_ec = 0.0;                   // RMS of ||e_c|| over the window
  double sup_ec = 0.0;                   // sup ||e_c|| over the whole run
  double sup_ec_after_transient = 0.0;
  double final_error_norm = 0.0;
  long lyapunov_increase_count = 0;      // steps with V rising above tolerance
};

/// Throws std::invalid_argument on an empty log or a window outside the
/// log duration. A never-settling log reports settle_time as nullopt.
Metrics compute_metrics(const SimLog& log, const MetricThresholds& thresholds = {});

}  // namespace tracklab
