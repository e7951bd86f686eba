#pragma once

#include <array>
#include <cstdint>

#include "tracklab/kinematics.hpp"
#include "tracklab/mlp.hpp"
#include "tracklab/plant.hpp"

namespace tracklab {

/// Per-channel PID gains, all >= 0.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct PidState {
  double integral = 0.0;    // integral contribution, command units, clamped
  double prev_error = 0.0;
};

/// One discrete PID update. The integral contribution advances by
/// ki * dt * (3*e - e_prev)/2 (two-point rule over the upcoming step)
/// and is clamped to +-windup_limit. Requires dt > 0.
double pid_step(PidState& state, const PidGains& gains, double error, double dt,
                double windup_limit);

/// Normalization constants for the learner input features, all > 0.
struct FeatureScales {
  double v = 1.0;   // m/s
  double w = 1.0;   // rad/s
  double dv = 1.0;  // m/s^2
  double dw = 1.0;  // rad/s^2
};

struct AccelPair {
  double dv = 0.0;  // m/s^2
  double dw = 0.0;  // rad/s^2
};

/// Inverse-dynamics regressor: commanded velocities, their backward-
/// difference rates, and measured velocities, each divided by its scale.
std::array<double, 6> build_features(const VelocityPair& commanded, const AccelPair& commanded_rate,
                                     const VelocityPair& measured, const FeatureScales& scales);

/// Channel commands (linear, angular) mixed into motor voltages
/// (u_v + u_w, u_v - u_w), each clamped to +-limit. `saturated` is set
/// when either motor hit the clamp.
struct ComposedCommand {
  CommandPair command;
  bool saturated = false;
};
ComposedCommand compose_command_ex(const std::array<double, 2>& u_fb,
                                   const std::array<double, 2>& u_ff, double limit);
CommandPair compose_command(const std::array<double, 2>& u_fb,
                            const std::array<double, 2>& u_ff, double limit);

/// One feedback-error learning update: backprop seeded with the feedback
/// command (the residual the net has not yet absorbed), applied as an
/// sgd_update with rate lr. Callers skip this while saturated.
MlpNet feedback_error_learning_step(MlpNet net, std::span<const double> features,
                                    const std::array<double, 2>& u_fb_channels, double lr);

struct LoopConfig {
  PidGains pid_linear{5.0, 100.0, 0.0};
  PidGains pid_angular{5.0, 50.0, 0.0};
  double windup_limit = 12.0;        // V, integral clamp
  FeatureScales scales;
  double learning_rate = 1e-3;
  bool learning_enabled = true;
  double command_limit = 12.0;       // V
  int hidden_size = 12;
  double init_weight_scale = 0.1;    // 0 gives an exactly-zero net
};

/// Throws std::invalid_argument on violated invariants (nonpositive
/// limits or scales, negative gains, all-zero PID gains, ...).
void validate(const LoopConfig& config);

/// Inner velocity loop: per-channel PID feedback plus neural feedforward
/// with online feedback-error learning. Owns its PID states and net;
/// step() is sequential by contract.
class VelocityLoop {
 public:
  VelocityLoop(const LoopConfig& config, MlpNet net);

  /// Config-driven construction: a hidden_size net seeded from `seed`
  /// with init_weight_scale (exactly zero when the scale is 0).
  VelocityLoop(const LoopConfig& config, std::uint64_t seed);

  struct Output {
    CommandPair command;
    std::array<double, 2> u_fb{};  // (linear, angular) channels, V
    std::array<double, 2> u_ff{};  // net output, V
    bool saturated = false;
  };

  /// Runs both PIDs on eta_cmd - eta_meas, evaluates the feedforward,
  /// composes the motor command, then (when enabled and not saturated)
  /// performs one learning step. Requires dt > 0.
  Output step(const VelocityPair& eta_cmd, const VelocityPair& eta_meas, double dt);

  const MlpNet& net() const { return net_; }
  const LoopConfig& config() const { return config_; }
  std::int64_t learning_steps() const { return learning_steps_; }
  std::int64_t skipped_saturated() const { return skipped_saturated_; }

 private:
  LoopConfig config_;
  MlpNet net_;
  PidState pid_linear_;
  PidState pid_angular_;
  VelocityPair prev_cmd_;
  bool have_prev_cmd_ = false;
  std::int64_t learning_steps_ = 0;
  std::int64_t skipped_saturated_ = 0;
};

}  // namespace tracklab
