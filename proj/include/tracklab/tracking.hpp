#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tracklab/kinematics.hpp"

namespace tracklab {

/// Outer-loop tracking gains. All strictly positive.
struct TrackingGains {
  double k1 = 2.3;
  double k2 = 0.3;
  double k3 = 3.8;
};

/// Throws std::invalid_argument if any gain is not strictly positive.
void validate(const TrackingGains& gains);

/// Which outer-loop control law (and matching Lyapunov function) to use.
/// kDefault couples the lateral and heading errors through k3 inside the
/// k2 term; kKanayama is the classic Kanayama (1990) law kept as a
/// known-good baseline.
enum class ControllerVariant {
  kDefault,
  kKanayama,
};

/// Default tracking law:
///   v_c = k1*ex + v_r*cos(etheta)
///   w_c = w_r + (v_r/2)*k2*(ey + k3*etheta) + (v_r/(2*k3))*sin(etheta)
/// Throws std::domain_error if k3 == 0.
VelocityPair tracking_control(const PostureError& e, const VelocityPair& eta_ref,
                              const TrackingGains& gains);

/// Kanayama (1990) baseline:
///   v_c = k1*ex + v_r*cos(etheta)
///   w_c = w_r + v_r*(k2*ey + k3*sin(etheta))
VelocityPair kanayama_control(const PostureError& e, const VelocityPair& eta_ref,
                              const TrackingGains& gains);

VelocityPair control_command(ControllerVariant variant, const PostureError& e,
                             const VelocityPair& eta_ref, const TrackingGains& gains);

struct ErrorRate {
  double dex = 0.0;
  double dey = 0.0;
  double detheta = 0.0;
};

/// Tracking-error dynamics under commanded velocities eta_cmd, assuming
/// the body follows the command exactly:
///   dex     = v_r*cos(etheta) - v_c + ey*w_c
///   dey     = v_r*sin(etheta) - ex*w_c
///   detheta = w_r - w_c
ErrorRate error_dynamics(const PostureError& e, const VelocityPair& eta_ref,
                         const VelocityPair& eta_cmd);

/// Lyapunov candidate for the selected variant. kDefault:
///   V = ex^2/2 + (ey + k3*etheta)^2/2 + (1 - cos etheta)/k2
/// kKanayama (textbook form): V = (ex^2 + ey^2)/2 + (1 - cos etheta)/k2.
double lyapunov_value(const PostureError& e, const TrackingGains& gains,
                      ControllerVariant variant = ControllerVariant::kDefault);

/// Analytic gradient of lyapunov_value wrt (ex, ey, etheta).
std::array<double, 3> lyapunov_gradient(const PostureError& e, const TrackingGains& gains,
                                        ControllerVariant variant = ControllerVariant::kDefault);

/// dV/dt along the closed loop, computed by the chain rule: the analytic
/// gradient dotted with error_dynamics under the variant's own control
/// command. Requires eta_ref.v > 0 and valid gains.
double lyapunov_rate(const PostureError& e, const VelocityPair& eta_ref,
                     const TrackingGains& gains,
                     ControllerVariant variant = ControllerVariant::kDefault);

struct ScanSample {
  PostureError e;
  double rate = 0.0;
};

/// Result of sampling lyapunov_rate over a box of error states.
struct ScanReport {
  std::size_t samples = 0;
  double min_rate = 0.0;
  double max_rate = 0.0;
  double positive_fraction = 0.0;       // fraction of samples with rate > 0
  std::vector<ScanSample> worst;        // largest rates first
};

/// Samples lyapunov_rate at `samples` uniform points with
/// |ex|,|ey|,|etheta| <= bound. Deterministic for a fixed seed; reports,
/// never asserts. Throws std::domain_error if bound < 0 or samples == 0.
ScanReport lyapunov_sign_scan(const VelocityPair& eta_ref, const TrackingGains& gains,
                              double bound, std::size_t samples, std::uint64_t seed,
                              ControllerVariant variant = ControllerVariant::kDefault,
                              std::size_t worst_keep = 5);

}  // namespace tracklab
