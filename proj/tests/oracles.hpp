// Test-only reference computations, kept independent of the library
// code paths they are used to check.
#pragma once

#include <cmath>
#include <functional>

#include "tracklab/kinematics.hpp"
#include "tracklab/plant.hpp"
#include "tracklab/tracking.hpp"

namespace oracles {

// Exact pose after holding (v, w) for time t: straight line or circular
// arc, derived by direct integration of the unicycle model.
inline tracklab::Pose arc_pose(const tracklab::Pose& q0, double v, double w, double t) {
  if (w == 0.0) {
    return {q0.x + v * t * std::cos(q0.theta), q0.y + v * t * std::sin(q0.theta), q0.theta};
  }
  const double theta1 = q0.theta + w * t;
  return {q0.x + (v / w) * (std::sin(theta1) - std::sin(q0.theta)),
          q0.y - (v / w) * (std::cos(theta1) - std::cos(q0.theta)), theta1};
}

// Central difference of the Lyapunov value along the closed-loop error
// field: (V(e + eps*de) - V(e - eps*de)) / (2 eps).
inline double lyapunov_rate_fd(const tracklab::PostureError& e, const tracklab::VelocityPair& eta_ref,
                               const tracklab::TrackingGains& gains, double eps,
                               tracklab::ControllerVariant variant =
                                   tracklab::ControllerVariant::kDefault) {
  const auto cmd = tracklab::control_command(variant, e, eta_ref, gains);
  const auto rate = tracklab::error_dynamics(e, eta_ref, cmd);
  const tracklab::PostureError plus{e.ex + eps * rate.dex, e.ey + eps * rate.dey,
                                    e.etheta + eps * rate.detheta};
  const tracklab::PostureError minus{e.ex - eps * rate.dex, e.ey - eps * rate.dey,
                                     e.etheta - eps * rate.detheta};
  return (tracklab::lyapunov_value(plus, gains, variant) -
          tracklab::lyapunov_value(minus, gains, variant)) /
         (2.0 * eps);
}

// Relative-or-absolute deviation used by the gradient and rate checks.
inline double rel_dev(double a, double b) {
  const double denom = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / denom;
}

// First-order linear response v(t) of the drive under equal constant
// voltages from rest, from the same parameter interpretation as the
// plant model but integrated in closed form.
struct LinearStepResponse {
  double gain;  // steady-state v per volt pair
  double rate;  // 1/s

  double value(double u, double t) const { return gain * u * (1.0 - std::exp(-rate * t)); }
};

inline LinearStepResponse linear_response(const tracklab::PlantParams& p) {
  const double force_per_volt = 2.0 * p.motor.gear_ratio * p.motor.torque_constant /
                                (p.motor.resistance * p.wheel_radius);
  const double damping = 2.0 * p.motor.gear_ratio * p.motor.gear_ratio *
                             p.motor.torque_constant * p.motor.back_emf_constant /
                             (p.motor.resistance * p.wheel_radius * p.wheel_radius) +
                         p.friction_linear;
  const double rate = damping / p.effective_mass();
  return {force_per_volt / damping, rate};
}

}  // namespace oracles
