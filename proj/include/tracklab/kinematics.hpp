#pragma once

#include <utility>
#include <vector>

namespace tracklab {

/// Planar robot posture. Every operation that returns a Pose leaves
/// theta wrapped to (-pi, pi].
struct Pose {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad
};

/// Body-frame velocity: forward speed along the main axis and yaw rate.
struct VelocityPair {
  double v = 0.0;  // m/s
  double w = 0.0;  // rad/s
};

struct PoseRate {
  double dx = 0.0;      // m/s
  double dy = 0.0;      // m/s
  double dtheta = 0.0;  // rad/s
};

/// Tracking error expressed in the robot frame: the reference-pose
/// offset rotated by the current heading.
struct PostureError {
  double ex = 0.0;      // m, along the heading
  double ey = 0.0;      // m, lateral
  double etheta = 0.0;  // rad, in (-pi, pi]
};

/// One piece of a piecewise-constant velocity reference.
struct ProfileSegment {
  double duration = 0.0;  // s, > 0
  double v = 0.0;         // m/s, > 0
  double w = 0.0;         // rad/s
};

/// Reference trajectory: constant-(v, w) segments integrated in closed
/// form from initial_pose (straight lines and circular arcs).
struct ReferenceProfile {
  Pose initial_pose;
  std::vector<ProfileSegment> segments;

  double total_duration() const;
};

/// Throws std::invalid_argument naming the offending segment if any
/// duration is <= 0 or any v is <= 0.
void validate_profile(const ReferenceProfile& profile);

/// Maps a to the equivalent angle in (-pi, pi].
/// Throws std::domain_error on non-finite input.
double wrap_angle(double a);

/// Unicycle kinematics: (v cos theta, v sin theta, w).
PoseRate unicycle_derivative(const Pose& q, const VelocityPair& eta);

/// Reference-pose error in the robot frame. The angle component is
/// wrap_angle(theta_ref - theta).
PostureError pose_error(const Pose& q_ref, const Pose& q);

/// Pose and segment velocity at time t, by exact piecewise integration.
/// Throws std::range_error if t is outside [0, total_duration()].
std::pair<Pose, VelocityPair> reference_state(const ReferenceProfile& profile, double t);

/// One fixed-step RK4 step of the unicycle model with eta held constant
/// over the step. Requires dt > 0.
Pose integrate_pose(const Pose& q, const VelocityPair& eta, double dt);

}  // namespace tracklab
