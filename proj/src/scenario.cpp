#include "tracklab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace tracklab {

double SimRecord::ec_norm() const { return std::hypot(ec_v(), ec_w()); }

double SimRecord::error_norm() const {
  return std::sqrt(e.ex * e.ex + e.ey * e.ey + e.etheta * e.etheta);
}

ScenarioConfig default_scenario(double duration) {
  ScenarioConfig cfg;
  cfg.duration = duration;
  cfg.reference.segments = {{duration, 0.75, 0.25}};
  return cfg;
}

void ScenarioConfig::validate() const {
  try {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(duration >= dt)) throw std::invalid_argument("duration must be >= dt");
    const double steps = duration / dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
      throw std::invalid_argument("duration must be an integer multiple of dt");
    }
    validate_profile(reference);
    if (reference.total_duration() + 1e-9 < duration) {
      throw std::invalid_argument("reference profile ends before the scenario duration");
    }
    tracklab::validate(gains);
    if (mode == LoopMode::kFullDynamics) {
      tracklab::validate(plant);
      perturb_params(plant, perturb);  // throws if a factor breaks an invariant
      tracklab::validate(loop);
    }
    if (!(metrics.settle_norm > 0.0)) {
      throw std::invalid_argument("metrics.settle_threshold must be > 0");
    }
    if (metrics.ec_transient < 0.0) {
      throw std::invalid_argument("metrics.transient must be >= 0");
    }
  } catch (const std::exception& err) {
    throw ConfigError(err.what());
  }
}

SimLog run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  const long steps = std::lround(cfg.duration / cfg.dt);
  const double profile_end = cfg.reference.total_duration();

  SimLog log;
  log.dt = cfg.dt;
  log.records.reserve(static_cast<std::size_t>(steps) + 1);

  PlantState body;
  body.pose = {cfg.initial_pose.x, cfg.initial_pose.y, wrap_angle(cfg.initial_pose.theta)};

  const bool dynamic = cfg.mode == LoopMode::kFullDynamics;
  const PlantParams params = dynamic ? perturb_params(cfg.plant, cfg.perturb) : cfg.plant;
  std::optional<VelocityLoop> loop;
  if (dynamic) loop.emplace(cfg.loop, cfg.seed);

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const auto [q_ref, eta_ref] = reference_state(cfg.reference, std::min(t, profile_end));
    const PostureError e = pose_error(q_ref, body.pose);
    const VelocityPair eta_cmd = control_command(cfg.variant, e, eta_ref, cfg.gains);

    SimRecord rec;
    rec.t = t;
    rec.q = body.pose;
    rec.q_ref = q_ref;
    rec.e = e;
    rec.eta_ref = eta_ref;
    rec.eta_cmd = eta_cmd;
    rec.lyapunov = lyapunov_value(e, cfg.gains, cfg.variant);
    rec.lyapunov_rate = lyapunov_rate(e, eta_ref, cfg.gains, cfg.variant);

    if (dynamic) {
      const VelocityPair measured{body.v, body.w};
      rec.eta = measured;
      const auto out = loop->step(eta_cmd, measured, cfg.dt);
      rec.u_fb = out.u_fb;
      rec.u_ff = out.u_ff;
      rec.u = out.command;
      log.records.push_back(rec);
      if (k < steps) {
        body = step_plant(body, out.command, cfg.disturbance.at(t), params, cfg.dt);
      }
    } else {
      // Ideal velocity mode: the body realizes the command exactly.
      rec.eta = eta_cmd;
      log.records.push_back(rec);
      if (k < steps) {
        body.pose = integrate_pose(body.pose, eta_cmd, cfg.dt);
        body.v = eta_cmd.v;
        body.w = eta_cmd.w;
      }
    }
  }
  return log;
}

}  // namespace tracklab
