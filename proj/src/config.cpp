#include "tracklab/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

namespace tracklab {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double parse_number(const std::string& value, int line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + value + "'");
  }
  if (trim(value.substr(used)) != "") fail(line, "trailing characters in '" + value + "'");
  return out;
}

// Angles accept an optional `deg` suffix, e.g. `-5 deg`.
double parse_angle(const std::string& value, int line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    fail(line, "expected an angle, got '" + value + "'");
  }
  const std::string rest = trim(value.substr(used));
  if (rest == "deg") return out * std::numbers::pi / 180.0;
  if (!rest.empty()) fail(line, "trailing characters in '" + value + "'");
  return out;
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(line, "expected true or false, got '" + value + "'");
}

std::uint64_t parse_seed(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const std::uint64_t out = std::stoull(value, &used);
    if (trim(value.substr(used)) != "") fail(line, "trailing characters in '" + value + "'");
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected an unsigned integer, got '" + value + "'");
  }
}

std::vector<double> parse_numbers(const std::string& value, std::size_t count, int line) {
  std::istringstream ss(value);
  std::vector<double> out;
  std::string token;
  while (ss >> token) out.push_back(parse_number(token, line));
  if (out.size() != count) {
    fail(line, "expected " + std::to_string(count) + " numbers, got '" + value + "'");
  }
  return out;
}

struct ParseContext {
  ScenarioConfig cfg;
  bool saw_segment = false;
  bool saw_initial = false;
  bool saw_windup = false;
  double initial_x = 0.0, initial_y = 0.0, initial_theta = 0.0;
};

using Handler = std::function<void(ParseContext&, const std::string&, int)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = [] {
    std::map<std::string, Handler> h;

    const auto number = [](double ScenarioConfig::* field) {
      return [field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.*field = parse_number(v, line);
      };
    };
    h["dt"] = number(&ScenarioConfig::dt);
    h["duration"] = number(&ScenarioConfig::duration);
    h["seed"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.seed = parse_seed(v, line);
    };
    h["mode"] = [](ParseContext& ctx, const std::string& v, int line) {
      if (v == "kinematic-ideal") ctx.cfg.mode = LoopMode::kKinematicIdeal;
      else if (v == "full-dynamics") ctx.cfg.mode = LoopMode::kFullDynamics;
      else fail(line, "mode must be kinematic-ideal or full-dynamics");
    };
    h["controller"] = [](ParseContext& ctx, const std::string& v, int line) {
      if (v == "default") ctx.cfg.variant = ControllerVariant::kDefault;
      else if (v == "kanayama" || v == "kanayama-baseline") {
        ctx.cfg.variant = ControllerVariant::kKanayama;
      } else {
        fail(line, "controller must be default or kanayama");
      }
    };

    h["initial.x"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.initial_x = parse_number(v, line);
      ctx.saw_initial = true;
    };
    h["initial.y"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.initial_y = parse_number(v, line);
      ctx.saw_initial = true;
    };
    h["initial.theta"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.initial_theta = parse_angle(v, line);
      ctx.saw_initial = true;
    };

    h["reference.initial.x"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.reference.initial_pose.x = parse_number(v, line);
    };
    h["reference.initial.y"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.reference.initial_pose.y = parse_number(v, line);
    };
    h["reference.initial.theta"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.reference.initial_pose.theta = parse_angle(v, line);
    };
    h["reference.segment"] = [](ParseContext& ctx, const std::string& v, int line) {
      const auto nums = parse_numbers(v, 3, line);
      if (!ctx.saw_segment) ctx.cfg.reference.segments.clear();
      ctx.cfg.reference.segments.push_back({nums[0], nums[1], nums[2]});
      ctx.saw_segment = true;
    };

    const auto gain = [](double TrackingGains::* field) {
      return [field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.gains.*field = parse_number(v, line);
      };
    };
    h["tracking.k1"] = gain(&TrackingGains::k1);
    h["tracking.k2"] = gain(&TrackingGains::k2);
    h["tracking.k3"] = gain(&TrackingGains::k3);

    const auto pid = [](PidGains LoopConfig::* channel, double PidGains::* field) {
      return [channel, field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.loop.*channel.*field = parse_number(v, line);
      };
    };
    h["pid.linear.kp"] = pid(&LoopConfig::pid_linear, &PidGains::kp);
    h["pid.linear.ki"] = pid(&LoopConfig::pid_linear, &PidGains::ki);
    h["pid.linear.kd"] = pid(&LoopConfig::pid_linear, &PidGains::kd);
    h["pid.angular.kp"] = pid(&LoopConfig::pid_angular, &PidGains::kp);
    h["pid.angular.ki"] = pid(&LoopConfig::pid_angular, &PidGains::ki);
    h["pid.angular.kd"] = pid(&LoopConfig::pid_angular, &PidGains::kd);
    h["pid.windup"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.loop.windup_limit = parse_number(v, line);
      ctx.saw_windup = true;
    };

    h["learning.enabled"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.loop.learning_enabled = parse_bool(v, line);
    };
    h["learning.rate"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.loop.learning_rate = parse_number(v, line);
    };
    h["learning.init_scale"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.loop.init_weight_scale = parse_number(v, line);
    };
    h["learning.hidden"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.loop.hidden_size = static_cast<int>(parse_number(v, line));
    };

    const auto scale = [](double FeatureScales::* field) {
      return [field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.loop.scales.*field = parse_number(v, line);
      };
    };
    h["features.scale.v"] = scale(&FeatureScales::v);
    h["features.scale.w"] = scale(&FeatureScales::w);
    h["features.scale.dv"] = scale(&FeatureScales::dv);
    h["features.scale.dw"] = scale(&FeatureScales::dw);

    const auto plant = [](double PlantParams::* field) {
      return [field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.plant.*field = parse_number(v, line);
      };
    };
    const auto motor = [](double MotorParams::* field) {
      return [field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.plant.motor.*field = parse_number(v, line);
      };
    };
    h["plant.mass"] = plant(&PlantParams::mass);
    h["plant.inertia"] = plant(&PlantParams::inertia_z);
    h["plant.wheel_radius"] = plant(&PlantParams::wheel_radius);
    h["plant.half_track"] = plant(&PlantParams::half_track);
    h["plant.motor.kt"] = motor(&MotorParams::torque_constant);
    h["plant.motor.ke"] = motor(&MotorParams::back_emf_constant);
    h["plant.motor.resistance"] = motor(&MotorParams::resistance);
    h["plant.motor.gear_ratio"] = motor(&MotorParams::gear_ratio);
    h["plant.motor.rotor_inertia"] = motor(&MotorParams::rotor_inertia);
    h["plant.friction.linear"] = plant(&PlantParams::friction_linear);
    h["plant.friction.angular"] = plant(&PlantParams::friction_angular);
    h["plant.command_limit"] = plant(&PlantParams::command_limit);

    const auto perturb = [](double PerturbSpec::* field) {
      return [field](ParseContext& ctx, const std::string& v, int line) {
        ctx.cfg.perturb.*field = parse_number(v, line);
      };
    };
    h["perturb.mass"] = perturb(&PerturbSpec::mass);
    h["perturb.inertia"] = perturb(&PerturbSpec::inertia_z);
    h["perturb.wheel_radius"] = perturb(&PerturbSpec::wheel_radius);
    h["perturb.half_track"] = perturb(&PerturbSpec::half_track);
    h["perturb.motor.kt"] = perturb(&PerturbSpec::torque_constant);
    h["perturb.motor.ke"] = perturb(&PerturbSpec::back_emf_constant);
    h["perturb.motor.resistance"] = perturb(&PerturbSpec::resistance);
    h["perturb.motor.gear_ratio"] = perturb(&PerturbSpec::gear_ratio);
    h["perturb.motor.rotor_inertia"] = perturb(&PerturbSpec::rotor_inertia);
    h["perturb.friction.linear"] = perturb(&PerturbSpec::friction_linear);
    h["perturb.friction.angular"] = perturb(&PerturbSpec::friction_angular);
    h["perturb.command_limit"] = perturb(&PerturbSpec::command_limit);

    h["disturbance.torque_right"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.disturbance.torque_right = parse_number(v, line);
    };
    h["disturbance.torque_left"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.disturbance.torque_left = parse_number(v, line);
    };
    h["disturbance.window"] = [](ParseContext& ctx, const std::string& v, int line) {
      const auto nums = parse_numbers(v, 2, line);
      ctx.cfg.disturbance.window = TimeWindow{nums[0], nums[1]};
    };

    h["metrics.settle_threshold"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.metrics.settle_norm = parse_number(v, line);
    };
    h["metrics.transient"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.metrics.ec_transient = parse_number(v, line);
    };
    h["metrics.window_start"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.metrics.rms_window_start = parse_number(v, line);
    };
    h["metrics.window_end"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.metrics.rms_window_end = parse_number(v, line);
    };
    h["metrics.lyap_tolerance"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.metrics.lyapunov_tolerance = parse_number(v, line);
    };

    h["scan.bound"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.scan.bound = parse_number(v, line);
    };
    h["scan.samples"] = [](ParseContext& ctx, const std::string& v, int line) {
      const double n = parse_number(v, line);
      if (n < 1) fail(line, "scan.samples must be >= 1");
      ctx.cfg.scan.samples = static_cast<std::size_t>(n);
    };
    h["scan.keep"] = [](ParseContext& ctx, const std::string& v, int line) {
      ctx.cfg.scan.worst_keep = static_cast<std::size_t>(parse_number(v, line));
    };
    return h;
  }();
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  ParseContext ctx;
  ctx.cfg = ScenarioConfig{};
  ctx.cfg.reference.segments.clear();

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                          : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string line(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");

    const auto& table = handlers();
    const auto it = table.find(key);
    if (it == table.end()) fail(line_no, "unknown key '" + key + "'");
    it->second(ctx, value, line_no);
  }

  // Defaults that depend on other keys.
  if (!ctx.saw_segment) {
    ctx.cfg.reference.segments = {{std::max(ctx.cfg.duration, ctx.cfg.dt), 0.75, 0.25}};
  }
  if (ctx.saw_initial) {
    ctx.cfg.initial_pose = {ctx.initial_x, ctx.initial_y, ctx.initial_theta};
  } else {
    ctx.cfg.initial_pose = ctx.cfg.reference.initial_pose;
  }
  if (!ctx.saw_windup) ctx.cfg.loop.windup_limit = ctx.cfg.plant.command_limit;
  ctx.cfg.loop.command_limit = ctx.cfg.plant.command_limit;

  ctx.cfg.validate();
  return ctx.cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace tracklab
