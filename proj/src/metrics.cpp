#include "tracklab/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "tracklab/scenario.hpp"

namespace tracklab {

Metrics compute_metrics(const SimLog& log, const MetricThresholds& th) {
  if (log.records.empty()) throw std::invalid_argument("compute_metrics: empty log");
  const double duration = log.records.back().t;

  const double window_start = th.rms_window_start.value_or(0.75 * duration);
  const double window_end = th.rms_window_end.value_or(duration);
  if (window_start < 0.0 || window_end > duration + 1e-12 || window_start >= window_end) {
    throw std::invalid_argument("compute_metrics: RMS window outside the log");
  }

  Metrics m;

  // Settling: first time after which the norm stays below the threshold.
  // Tracked via the last sample at or above it.
  std::optional<double> last_above;
  std::optional<double> last_above_ex;
  double sum_ev2 = 0.0, sum_ew2 = 0.0, sum_ec2 = 0.0;
  std::size_t window_count = 0;

  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const SimRecord& rec = log.records[i];
    if (rec.error_norm() >= th.settle_norm) last_above = rec.t;
    if (std::abs(rec.e.ex) >= th.settle_norm) last_above_ex = rec.t;

    const double ec = rec.ec_norm();
    m.sup_ec = std::max(m.sup_ec, ec);
    if (rec.t >= th.ec_transient) {
      m.sup_ec_after_transient = std::max(m.sup_ec_after_transient, ec);
    }

    if (rec.t >= window_start && rec.t <= window_end) {
      const double ev = rec.ec_v();
      const double ew = rec.ec_w();
      sum_ev2 += ev * ev;
      sum_ew2 += ew * ew;
      sum_ec2 += ev * ev + ew * ew;
      ++window_count;
    }

    if (i + 1 < log.records.size()) {
      const double v_next = log.records[i + 1].lyapunov;
      if (v_next > rec.lyapunov + th.lyapunov_tolerance) ++m.lyapunov_increase_count;
    }
  }

  const auto settle_from = [&](const std::optional<double>& last) -> std::optional<double> {
    if (!last) return 0.0;                     // never above: settled from the start
    if (*last >= duration) return std::nullopt;  // still above at the end
    return *last + log.dt;
  };
  m.settle_time = settle_from(last_above);
  m.ex_settle_time = settle_from(last_above_ex);

  if (window_count > 0) {
    m.rms_ev = std::sqrt(sum_ev2 / static_cast<double>(window_count));
    m.rms_ew = std::sqrt(sum_ew2 / static_cast<double>(window_count));
    m.rms_ec = std::sqrt(sum_ec2 / static_cast<double>(window_count));
  }
  m.final_error_norm = log.records.back().error_norm();
  return m;
}

}  // namespace tracklab
