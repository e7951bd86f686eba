#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tracklab/kinematics.hpp"
#include "tracklab/metrics.hpp"
#include "tracklab/plant.hpp"
#include "tracklab/tracking.hpp"
#include "tracklab/velocity_loop.hpp"

namespace tracklab {

/// Invalid scenario description (bad key, violated invariant, mismatched
/// comparison, ...). CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LoopMode {
  kKinematicIdeal,  // body follows the commanded velocities exactly
  kFullDynamics,    // velocity loop + plant in the path
};

struct ScanOptions {
  double bound = 0.2;
  std::size_t samples = 100000;
  std::size_t worst_keep = 5;
};

struct ScenarioConfig {
  ReferenceProfile reference;   // default: one circle segment over `duration`
  Pose initial_pose;            // robot start; default = reference start
  TrackingGains gains;
  LoopConfig loop;
  PlantParams plant;
  PerturbSpec perturb;
  Disturbance disturbance;
  LoopMode mode = LoopMode::kKinematicIdeal;
  ControllerVariant variant = ControllerVariant::kDefault;
  double dt = 1e-3;             // s
  double duration = 30.0;       // s
  std::uint64_t seed = 1;
  MetricThresholds metrics;
  ScanOptions scan;

  /// Throws ConfigError before any stepping: dt/duration bounds, gain
  /// and plant invariants, profile coverage of [0, duration].
  void validate() const;
};

/// Default config whose reference is a single circle segment
/// (v = 0.75 m/s, w = 0.25 rad/s) covering `duration`.
ScenarioConfig default_scenario(double duration = 30.0);

struct SimRecord {
  double t = 0.0;
  Pose q;
  Pose q_ref;
  PostureError e;
  VelocityPair eta_ref;
  VelocityPair eta_cmd;
  VelocityPair eta;              // measured body velocities
  std::array<double, 2> u_fb{};  // (linear, angular) channels, V
  std::array<double, 2> u_ff{};
  CommandPair u;                 // motor voltages
  double lyapunov = 0.0;
  double lyapunov_rate = 0.0;

  double ec_v() const { return eta_cmd.v - eta.v; }
  double ec_w() const { return eta_cmd.w - eta.w; }
  double ec_norm() const;
  double error_norm() const;     // mixed-unit ||e_p||, rad weighted 1 m/rad
};

struct SimLog {
  double dt = 0.0;
  std::vector<SimRecord> records;
};

/// Runs the two-level loop over duration/dt steps and records every
/// step, including t = 0 and the final state. Deterministic for a fixed
/// config.
SimLog run_scenario(const ScenarioConfig& config);

}  // namespace tracklab
