#include "tracklab/plant.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace tracklab {

double PlantParams::effective_mass() const {
  return mass + 2.0 * motor.rotor_inertia / (wheel_radius * wheel_radius);
}

double PlantParams::effective_inertia() const {
  return inertia_z +
         2.0 * motor.rotor_inertia * half_track * half_track / (wheel_radius * wheel_radius);
}

void validate(const PlantParams& p) {
  const auto require_positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string("plant parameter must be > 0: ") + name);
    }
  };
  require_positive(p.mass, "mass");
  require_positive(p.inertia_z, "inertia_z");
  require_positive(p.wheel_radius, "wheel_radius");
  require_positive(p.half_track, "half_track");
  require_positive(p.motor.torque_constant, "motor.torque_constant");
  require_positive(p.motor.back_emf_constant, "motor.back_emf_constant");
  require_positive(p.motor.resistance, "motor.resistance");
  require_positive(p.motor.gear_ratio, "motor.gear_ratio");
  require_positive(p.motor.rotor_inertia, "motor.rotor_inertia");
  require_positive(p.friction_linear, "friction_linear");
  require_positive(p.friction_angular, "friction_angular");
  require_positive(p.command_limit, "command_limit");
}

std::pair<double, double> wheel_speeds(const PlantState& s, const PlantParams& p) {
  return {(s.v + p.half_track * s.w) / p.wheel_radius,
          (s.v - p.half_track * s.w) / p.wheel_radius};
}

Disturbance Disturbance::at(double t) const {
  if (!window || (t >= window->start && t < window->end)) {
    return {torque_right, torque_left, std::nullopt};
  }
  return {};
}

namespace {

// Wheel-side drive torque for one motor at terminal voltage u.
double motor_torque(double u, double wheel_speed, const MotorParams& m) {
  const double back_emf = m.gear_ratio * m.back_emf_constant * wheel_speed;
  const double current = (u - back_emf) / m.resistance;
  return m.gear_ratio * m.torque_constant * current;
}

struct BodyRate {
  double dv, dw;
};

BodyRate body_accel(double v, double w, const CommandPair& u, const Disturbance& d,
                    const PlantParams& p) {
  const double wheel_right = (v + p.half_track * w) / p.wheel_radius;
  const double wheel_left = (v - p.half_track * w) / p.wheel_radius;
  const double tau_right = motor_torque(u.u_right, wheel_right, p.motor) + d.torque_right;
  const double tau_left = motor_torque(u.u_left, wheel_left, p.motor) + d.torque_left;
  const double dv =
      ((tau_right + tau_left) / p.wheel_radius - p.friction_linear * v) / p.effective_mass();
  const double dw = (p.half_track * (tau_right - tau_left) / p.wheel_radius -
                     p.friction_angular * w) /
                    p.effective_inertia();
  return {dv, dw};
}

}  // namespace

PlantRate plant_derivative(const PlantState& s, const CommandPair& u, const Disturbance& d,
                           const PlantParams& p) {
  const auto accel = body_accel(s.v, s.w, u, d, p);
  return {unicycle_derivative(s.pose, {s.v, s.w}), accel.dv, accel.dw};
}

PlantState step_plant(const PlantState& s, const CommandPair& u, const Disturbance& d,
                      const PlantParams& p, double dt) {
  assert(dt > 0.0);
  const auto deriv = [&](const PlantState& state) { return plant_derivative(state, u, d, p); };
  const auto advance = [](const PlantState& state, const PlantRate& r, double h) {
    return PlantState{{state.pose.x + h * r.pose.dx, state.pose.y + h * r.pose.dy,
                       state.pose.theta + h * r.pose.dtheta},
                      state.v + h * r.dv, state.w + h * r.dw};
  };
  const PlantRate k1 = deriv(s);
  const PlantRate k2 = deriv(advance(s, k1, 0.5 * dt));
  const PlantRate k3 = deriv(advance(s, k2, 0.5 * dt));
  const PlantRate k4 = deriv(advance(s, k3, dt));
  PlantState out{{s.pose.x + dt / 6.0 * (k1.pose.dx + 2.0 * k2.pose.dx + 2.0 * k3.pose.dx +
                                         k4.pose.dx),
                  s.pose.y + dt / 6.0 * (k1.pose.dy + 2.0 * k2.pose.dy + 2.0 * k3.pose.dy +
                                         k4.pose.dy),
                  wrap_angle(s.pose.theta + dt / 6.0 * (k1.pose.dtheta + 2.0 * k2.pose.dtheta +
                                                        2.0 * k3.pose.dtheta + k4.pose.dtheta))},
                 s.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
                 s.w + dt / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw)};
  return out;
}

VelocityPair wheel_to_body(double wheel_right, double wheel_left, const PlantParams& p) {
  return {p.wheel_radius * (wheel_right + wheel_left) / 2.0,
          p.wheel_radius * (wheel_right - wheel_left) / (2.0 * p.half_track)};
}

std::pair<double, double> body_to_wheel(const VelocityPair& eta, const PlantParams& p) {
  return {(eta.v + p.half_track * eta.w) / p.wheel_radius,
          (eta.v - p.half_track * eta.w) / p.wheel_radius};
}

PlantParams perturb_params(const PlantParams& p, const PerturbSpec& spec) {
  PlantParams out = p;
  out.mass *= spec.mass;
  out.inertia_z *= spec.inertia_z;
  out.wheel_radius *= spec.wheel_radius;
  out.half_track *= spec.half_track;
  out.motor.torque_constant *= spec.torque_constant;
  out.motor.back_emf_constant *= spec.back_emf_constant;
  out.motor.resistance *= spec.resistance;
  out.motor.gear_ratio *= spec.gear_ratio;
  out.motor.rotor_inertia *= spec.rotor_inertia;
  out.friction_linear *= spec.friction_linear;
  out.friction_angular *= spec.friction_angular;
  out.command_limit *= spec.command_limit;
  try {
    validate(out);
  } catch (const std::invalid_argument& err) {
    throw std::domain_error(std::string("perturb_params: ") + err.what());
  }
  return out;
}

}  // namespace tracklab
