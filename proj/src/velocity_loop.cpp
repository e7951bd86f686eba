#include "tracklab/velocity_loop.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace tracklab {

double pid_step(PidState& state, const PidGains& gains, double error, double dt,
                double windup_limit) {
  assert(dt > 0.0);
  state.integral += gains.ki * dt * (3.0 * error - state.prev_error) / 2.0;
  state.integral = std::clamp(state.integral, -windup_limit, windup_limit);
  const double derivative = (error - state.prev_error) / dt;
  const double out = gains.kp * error + state.integral + gains.kd * derivative;
  state.prev_error = error;
  return out;
}

std::array<double, 6> build_features(const VelocityPair& commanded, const AccelPair& commanded_rate,
                                     const VelocityPair& measured, const FeatureScales& scales) {
  return {commanded.v / scales.v,      commanded.w / scales.w,
          commanded_rate.dv / scales.dv, commanded_rate.dw / scales.dw,
          measured.v / scales.v,       measured.w / scales.w};
}

ComposedCommand compose_command_ex(const std::array<double, 2>& u_fb,
                                   const std::array<double, 2>& u_ff, double limit) {
  if (!(limit > 0.0)) throw std::invalid_argument("compose_command: limit must be > 0");
  const double u_v = u_fb[0] + u_ff[0];
  const double u_w = u_fb[1] + u_ff[1];
  const double raw_right = u_v + u_w;
  const double raw_left = u_v - u_w;
  ComposedCommand out;
  out.saturated = std::abs(raw_right) > limit || std::abs(raw_left) > limit;
  out.command = {std::clamp(raw_right, -limit, limit), std::clamp(raw_left, -limit, limit)};
  return out;
}

CommandPair compose_command(const std::array<double, 2>& u_fb, const std::array<double, 2>& u_ff,
                            double limit) {
  return compose_command_ex(u_fb, u_ff, limit).command;
}

MlpNet feedback_error_learning_step(MlpNet net, std::span<const double> features,
                                    const std::array<double, 2>& u_fb_channels, double lr) {
  const auto grads = mlp_gradient(net, features, u_fb_channels);
  return sgd_update(std::move(net), grads, lr);
}

void validate(const LoopConfig& c) {
  const auto check_gains = [](const PidGains& g, const char* name) {
    if (g.kp < 0.0 || g.ki < 0.0 || g.kd < 0.0) {
      throw std::invalid_argument(std::string("pid gains must be >= 0: ") + name);
    }
    if (g.kp == 0.0 && g.ki == 0.0 && g.kd == 0.0) {
      throw std::invalid_argument(std::string("pid gains are all zero: ") + name);
    }
  };
  check_gains(c.pid_linear, "pid.linear");
  check_gains(c.pid_angular, "pid.angular");
  if (!(c.windup_limit > 0.0)) throw std::invalid_argument("pid.windup must be > 0");
  if (!(c.command_limit > 0.0)) throw std::invalid_argument("command_limit must be > 0");
  if (!(c.scales.v > 0.0 && c.scales.w > 0.0 && c.scales.dv > 0.0 && c.scales.dw > 0.0)) {
    throw std::invalid_argument("feature scales must be > 0");
  }
  if (c.learning_rate < 0.0) throw std::invalid_argument("learning.rate must be >= 0");
  if (c.hidden_size <= 0) throw std::invalid_argument("learning.hidden must be > 0");
  if (c.init_weight_scale < 0.0) {
    throw std::invalid_argument("learning.init_scale must be >= 0");
  }
}

namespace {

MlpNet make_loop_net(const LoopConfig& config, std::uint64_t seed) {
  const std::vector<int> sizes{6, config.hidden_size, 2};
  if (config.init_weight_scale == 0.0) return zero_mlp(sizes);
  return random_mlp(sizes, seed, config.init_weight_scale);
}

}  // namespace

VelocityLoop::VelocityLoop(const LoopConfig& config, MlpNet net)
    : config_(config), net_(std::move(net)) {
  validate(config_);
  if (net_.input_size() != 6 || net_.output_size() != 2) {
    throw std::invalid_argument("velocity loop net must map 6 features to 2 channels");
  }
}

VelocityLoop::VelocityLoop(const LoopConfig& config, std::uint64_t seed)
    : VelocityLoop(config, make_loop_net(config, seed)) {}

VelocityLoop::Output VelocityLoop::step(const VelocityPair& eta_cmd,
                                        const VelocityPair& eta_meas, double dt) {
  assert(dt > 0.0);
  Output out;

  const double error_v = eta_cmd.v - eta_meas.v;
  const double error_w = eta_cmd.w - eta_meas.w;
  out.u_fb = {pid_step(pid_linear_, config_.pid_linear, error_v, dt, config_.windup_limit),
              pid_step(pid_angular_, config_.pid_angular, error_w, dt, config_.windup_limit)};

  const AccelPair cmd_rate = have_prev_cmd_
                                 ? AccelPair{(eta_cmd.v - prev_cmd_.v) / dt,
                                             (eta_cmd.w - prev_cmd_.w) / dt}
                                 : AccelPair{};
  prev_cmd_ = eta_cmd;
  have_prev_cmd_ = true;

  const auto features = build_features(eta_cmd, cmd_rate, eta_meas, config_.scales);
  const auto ff = mlp_forward(net_, features);
  out.u_ff = {ff[0], ff[1]};

  const auto composed = compose_command_ex(out.u_fb, out.u_ff, config_.command_limit);
  out.command = composed.command;
  out.saturated = composed.saturated;

  if (config_.learning_enabled && config_.learning_rate > 0.0) {
    if (composed.saturated) {
      ++skipped_saturated_;
    } else {
      net_ = feedback_error_learning_step(std::move(net_), features, out.u_fb,
                                          config_.learning_rate);
      ++learning_steps_;
    }
  }
  return out;
}

}  // namespace tracklab
