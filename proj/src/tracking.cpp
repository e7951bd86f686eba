#include "tracklab/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracklab/rng.hpp"

namespace tracklab {

void validate(const TrackingGains& gains) {
  if (!(gains.k1 > 0.0)) throw std::invalid_argument("tracking.k1 must be > 0");
  if (!(gains.k2 > 0.0)) throw std::invalid_argument("tracking.k2 must be > 0");
  if (!(gains.k3 > 0.0)) throw std::invalid_argument("tracking.k3 must be > 0");
}

VelocityPair tracking_control(const PostureError& e, const VelocityPair& eta_ref,
                              const TrackingGains& gains) {
  if (gains.k3 == 0.0) {
    throw std::domain_error("tracking_control: k3 must be nonzero");
  }
  const double v_cmd = gains.k1 * e.ex + eta_ref.v * std::cos(e.etheta);
  const double w_cmd = eta_ref.w +
                       0.5 * eta_ref.v * gains.k2 * (e.ey + gains.k3 * e.etheta) +
                       eta_ref.v / (2.0 * gains.k3) * std::sin(e.etheta);
  return {v_cmd, w_cmd};
}

VelocityPair kanayama_control(const PostureError& e, const VelocityPair& eta_ref,
                              const TrackingGains& gains) {
  const double v_cmd = gains.k1 * e.ex + eta_ref.v * std::cos(e.etheta);
  const double w_cmd = eta_ref.w + eta_ref.v * (gains.k2 * e.ey + gains.k3 * std::sin(e.etheta));
  return {v_cmd, w_cmd};
}

VelocityPair control_command(ControllerVariant variant, const PostureError& e,
                             const VelocityPair& eta_ref, const TrackingGains& gains) {
  switch (variant) {
    case ControllerVariant::kKanayama:
      return kanayama_control(e, eta_ref, gains);
    case ControllerVariant::kDefault:
      break;
  }
  return tracking_control(e, eta_ref, gains);
}

ErrorRate error_dynamics(const PostureError& e, const VelocityPair& eta_ref,
                         const VelocityPair& eta_cmd) {
  // f(e) + g(e) * eta_cmd with
  //   f = (v_r cos etheta, v_r sin etheta, w_r)
  //   g = [[-1, ey], [0, -ex], [0, -1]]
  return {eta_ref.v * std::cos(e.etheta) - eta_cmd.v + e.ey * eta_cmd.w,
          eta_ref.v * std::sin(e.etheta) - e.ex * eta_cmd.w,
          eta_ref.w - eta_cmd.w};
}

double lyapunov_value(const PostureError& e, const TrackingGains& gains,
                      ControllerVariant variant) {
  if (variant == ControllerVariant::kKanayama) {
    return 0.5 * (e.ex * e.ex + e.ey * e.ey) + (1.0 - std::cos(e.etheta)) / gains.k2;
  }
  const double combined = e.ey + gains.k3 * e.etheta;
  return 0.5 * e.ex * e.ex + 0.5 * combined * combined +
         (1.0 - std::cos(e.etheta)) / gains.k2;
}

std::array<double, 3> lyapunov_gradient(const PostureError& e, const TrackingGains& gains,
                                        ControllerVariant variant) {
  if (variant == ControllerVariant::kKanayama) {
    return {e.ex, e.ey, std::sin(e.etheta) / gains.k2};
  }
  const double combined = e.ey + gains.k3 * e.etheta;
  return {e.ex, combined, gains.k3 * combined + std::sin(e.etheta) / gains.k2};
}

double lyapunov_rate(const PostureError& e, const VelocityPair& eta_ref,
                     const TrackingGains& gains, ControllerVariant variant) {
  const VelocityPair cmd = control_command(variant, e, eta_ref, gains);
  const ErrorRate rate = error_dynamics(e, eta_ref, cmd);
  const auto grad = lyapunov_gradient(e, gains, variant);
  return grad[0] * rate.dex + grad[1] * rate.dey + grad[2] * rate.detheta;
}

ScanReport lyapunov_sign_scan(const VelocityPair& eta_ref, const TrackingGains& gains,
                              double bound, std::size_t samples, std::uint64_t seed,
                              ControllerVariant variant, std::size_t worst_keep) {
  if (bound < 0.0) throw std::domain_error("lyapunov_sign_scan: bound must be >= 0");
  if (samples == 0) throw std::domain_error("lyapunov_sign_scan: samples must be > 0");

  Rng rng(seed);
  ScanReport report;
  report.samples = samples;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    PostureError e{rng.uniform(-bound, bound), rng.uniform(-bound, bound),
                   rng.uniform(-bound, bound)};
    const double rate = lyapunov_rate(e, eta_ref, gains, variant);
    if (i == 0) {
      report.min_rate = report.max_rate = rate;
    } else {
      report.min_rate = std::min(report.min_rate, rate);
      report.max_rate = std::max(report.max_rate, rate);
    }
    if (rate > 0.0) ++positive;

    // Keep the worst_keep largest rates, insertion-sorted descending.
    if (worst_keep > 0) {
      if (report.worst.size() < worst_keep) {
        report.worst.push_back({e, rate});
        std::sort(report.worst.begin(), report.worst.end(),
                  [](const ScanSample& a, const ScanSample& b) { return a.rate > b.rate; });
      } else if (rate > report.worst.back().rate) {
        report.worst.back() = {e, rate};
        std::sort(report.worst.begin(), report.worst.end(),
                  [](const ScanSample& a, const ScanSample& b) { return a.rate > b.rate; });
      }
    }
  }
  report.positive_fraction = static_cast<double>(positive) / static_cast<double>(samples);
  return report;
}

}  // namespace tracklab
