#pragma once

#include <optional>
#include <utility>

#include "tracklab/kinematics.hpp"

namespace tracklab {

/// DC drive motor, armature inductance neglected. Wheel-side quantities:
/// torque at the wheel is gear_ratio * kt * i with armature current
/// i = (u - gear_ratio * ke * wheel_speed) / resistance.
struct MotorParams {
  double torque_constant = 0.05;    // N*m/A
  double back_emf_constant = 0.05;  // V*s/rad
  double resistance = 1.0;          // ohm
  double gear_ratio = 10.0;
  double rotor_inertia = 1e-3;      // kg*m^2, rotor + wheel lumped at the axle
};

struct PlantParams {
  double mass = 10.0;             // kg
  double inertia_z = 0.5;         // kg*m^2
  double wheel_radius = 0.05;     // m
  double half_track = 0.20;       // m
  MotorParams motor;
  double friction_linear = 2.0;   // N*s/m
  double friction_angular = 0.4;  // N*m*s/rad
  double command_limit = 12.0;    // V

  // Wheels are rigidly coupled to the body (no slip), so rotor + wheel
  // inertia appears as extra translational mass and yaw inertia.
  double effective_mass() const;
  double effective_inertia() const;
};

/// Throws std::invalid_argument naming the first nonpositive parameter.
void validate(const PlantParams& params);

/// Body state; wheel speeds are derived from (v, w) and stay consistent
/// with them by construction.
struct PlantState {
  Pose pose;
  double v = 0.0;  // m/s
  double w = 0.0;  // rad/s
};

/// (right, left) wheel angular speeds for the given body velocities.
std::pair<double, double> wheel_speeds(const PlantState& state, const PlantParams& params);

/// Motor terminal voltages, right then left.
struct CommandPair {
  double u_right = 0.0;  // V
  double u_left = 0.0;   // V
};

struct TimeWindow {
  double start = 0.0;  // s
  double end = 0.0;    // s
};

/// Additive torque bias at each wheel, optionally limited to a time
/// window. plant_derivative applies the torques unconditionally; callers
/// resolve the window with at().
struct Disturbance {
  double torque_right = 0.0;  // N*m
  double torque_left = 0.0;   // N*m
  std::optional<TimeWindow> window;

  /// The disturbance as seen at time t: unchanged inside the window (or
  /// when no window is set), zero torques outside.
  Disturbance at(double t) const;
};

struct PlantRate {
  PoseRate pose;
  double dv = 0.0;  // m/s^2
  double dw = 0.0;  // rad/s^2
};

/// Continuous-time plant model:
///   tau_i = n*kt*(u_i - n*ke*wheel_speed_i)/R + disturbance torque
///   m_eff*dv = (tau_r + tau_l)/r - f_v*v
///   I_eff*dw = b*(tau_r - tau_l)/r - f_w*w
/// plus unicycle pose rates.
PlantRate plant_derivative(const PlantState& state, const CommandPair& u,
                           const Disturbance& d, const PlantParams& params);

/// One RK4 step with commands and disturbance held constant; the pose
/// angle is re-wrapped. Requires dt > 0.
PlantState step_plant(const PlantState& state, const CommandPair& u, const Disturbance& d,
                      const PlantParams& params, double dt);

/// v = r*(w_r + w_l)/2, w = r*(w_r - w_l)/(2b).
VelocityPair wheel_to_body(double wheel_right, double wheel_left, const PlantParams& params);

/// Exact inverse of wheel_to_body; returns (right, left).
std::pair<double, double> body_to_wheel(const VelocityPair& eta, const PlantParams& params);

/// Multiplicative perturbation factors, one per parameter; 1 = nominal.
struct PerturbSpec {
  double mass = 1.0;
  double inertia_z = 1.0;
  double wheel_radius = 1.0;
  double half_track = 1.0;
  double torque_constant = 1.0;
  double back_emf_constant = 1.0;
  double resistance = 1.0;
  double gear_ratio = 1.0;
  double rotor_inertia = 1.0;
  double friction_linear = 1.0;
  double friction_angular = 1.0;
  double command_limit = 1.0;
};

/// Scaled copy of params. Throws std::domain_error if the result fails
/// validate().
PlantParams perturb_params(const PlantParams& params, const PerturbSpec& spec);

}  // namespace tracklab
