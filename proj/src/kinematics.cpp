#include "tracklab/kinematics.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tracklab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double ReferenceProfile::total_duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

void validate_profile(const ReferenceProfile& profile) {
  if (profile.segments.empty()) {
    throw std::invalid_argument("reference profile has no segments");
  }
  for (std::size_t i = 0; i < profile.segments.size(); ++i) {
    const auto& s = profile.segments[i];
    if (!(s.duration > 0.0)) {
      throw std::invalid_argument("reference segment " + std::to_string(i) +
                                  ": duration must be > 0");
    }
    if (!(s.v > 0.0)) {
      throw std::invalid_argument("reference segment " + std::to_string(i) +
                                  ": v must be > 0");
    }
  }
}

double wrap_angle(double a) {
  if (!std::isfinite(a)) {
    throw std::domain_error("wrap_angle: non-finite angle");
  }
  // Exact no-op when already in range; the fmod path re-rounds and would
  // inject ~ulp(pi) of noise on every integration step.
  if (a > -kPi && a <= kPi) return a;
  double r = std::fmod(a + kPi, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r - kPi;
}

PoseRate unicycle_derivative(const Pose& q, const VelocityPair& eta) {
  return {eta.v * std::cos(q.theta), eta.v * std::sin(q.theta), eta.w};
}

PostureError pose_error(const Pose& q_ref, const Pose& q) {
  const double c = std::cos(q.theta);
  const double s = std::sin(q.theta);
  const double dx = q_ref.x - q.x;
  const double dy = q_ref.y - q.y;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(q_ref.theta - q.theta)};
}

namespace {

// Exact pose reached from q after holding (v, w) for time t.
Pose advance_exact(const Pose& q, double v, double w, double t) {
  if (w == 0.0) {
    return {q.x + v * t * std::cos(q.theta), q.y + v * t * std::sin(q.theta), q.theta};
  }
  const double radius = v / w;
  const double theta1 = q.theta + w * t;
  return {q.x + radius * (std::sin(theta1) - std::sin(q.theta)),
          q.y - radius * (std::cos(theta1) - std::cos(q.theta)), wrap_angle(theta1)};
}

}  // namespace

std::pair<Pose, VelocityPair> reference_state(const ReferenceProfile& profile, double t) {
  const double total = profile.total_duration();
  if (!(t >= 0.0) || t > total) {
    throw std::range_error("reference_state: t = " + std::to_string(t) +
                           " outside [0, " + std::to_string(total) + "]");
  }
  Pose q{profile.initial_pose.x, profile.initial_pose.y,
         wrap_angle(profile.initial_pose.theta)};
  double remaining = t;
  for (std::size_t i = 0; i < profile.segments.size(); ++i) {
    const auto& s = profile.segments[i];
    const bool last = i + 1 == profile.segments.size();
    if (remaining < s.duration || (last && remaining <= s.duration)) {
      return {advance_exact(q, s.v, s.w, remaining), {s.v, s.w}};
    }
    q = advance_exact(q, s.v, s.w, s.duration);
    remaining -= s.duration;
  }
  // Unreachable given the range check; keeps -Wreturn-type quiet.
  return {q, {profile.segments.back().v, profile.segments.back().w}};
}

Pose integrate_pose(const Pose& q, const VelocityPair& eta, double dt) {
  assert(dt > 0.0);
  const auto deriv = [&eta](const Pose& p) { return unicycle_derivative(p, eta); };
  const PoseRate k1 = deriv(q);
  const PoseRate k2 = deriv({q.x + 0.5 * dt * k1.dx, q.y + 0.5 * dt * k1.dy,
                             q.theta + 0.5 * dt * k1.dtheta});
  const PoseRate k3 = deriv({q.x + 0.5 * dt * k2.dx, q.y + 0.5 * dt * k2.dy,
                             q.theta + 0.5 * dt * k2.dtheta});
  const PoseRate k4 = deriv({q.x + dt * k3.dx, q.y + dt * k3.dy, q.theta + dt * k3.dtheta});
  return {q.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          q.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy),
          wrap_angle(q.theta + dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta +
                                           k4.dtheta))};
}

}  // namespace tracklab
