#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "tracklab/config.hpp"
#include "tracklab/csv.hpp"
#include "tracklab/metrics.hpp"
#include "tracklab/scenario.hpp"
#include "tracklab/sweep.hpp"

using namespace tracklab;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("empty config text yields the documented defaults") {
  const ScenarioConfig cfg = parse_config("");
  CHECK(cfg.dt == 1e-3);
  CHECK(cfg.duration == 30.0);
  CHECK(cfg.mode == LoopMode::kKinematicIdeal);
  CHECK(cfg.variant == ControllerVariant::kDefault);
  CHECK(cfg.gains.k1 == 2.3);
  CHECK(cfg.gains.k2 == 0.3);
  CHECK(cfg.gains.k3 == 3.8);
  REQUIRE(cfg.reference.segments.size() == 1);
  CHECK(cfg.reference.segments[0].duration == 30.0);
  CHECK(cfg.reference.segments[0].v == 0.75);
  CHECK(cfg.reference.segments[0].w == 0.25);
  CHECK(cfg.initial_pose.x == 0.0);
  CHECK(cfg.plant.command_limit == cfg.loop.command_limit);
  CHECK(cfg.loop.windup_limit == cfg.plant.command_limit);
}

TEST_CASE("config parses keys, comments, and degree suffixes") {
  const ScenarioConfig cfg = parse_config(R"(
# scenario with an offset start
tracking.k1 = 2.3
tracking.k2 = 0.3
tracking.k3 = 3.8
initial.x = 0.3
initial.y = 0
initial.theta = -5 deg   # degrees get converted
duration = 40
reference.segment = 40 0.75 0.15
mode = kinematic-ideal
)");
  CHECK(cfg.gains.k1 == 2.3);
  CHECK(cfg.initial_pose.x == 0.3);
  CHECK(cfg.initial_pose.theta == Approx(-5.0 * kPi / 180.0));
  CHECK(cfg.duration == 40.0);
  REQUIRE(cfg.reference.segments.size() == 1);
  CHECK(cfg.reference.segments[0].v == 0.75);
}

TEST_CASE("config errors are specific") {
  // Invariant violation names the key.
  try {
    parse_config("tracking.k1 = -1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tracking.k1") != std::string::npos);
  }

  // Unknown key, with its line number.
  try {
    parse_config("\n\nnope.key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("nope.key") != std::string::npos);
  }

  // Syntax error, with its line number.
  try {
    parse_config("duration 40\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config("duration = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = sideways\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("reference.segment = 1 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt = 0\n"), ConfigError);
}

TEST_CASE("unset initial pose follows the reference start") {
  const ScenarioConfig cfg = parse_config("reference.initial.x = 1.5\n");
  CHECK(cfg.initial_pose.x == 1.5);
  const ScenarioConfig offset = parse_config("reference.initial.x = 1.5\ninitial.x = 0.2\n");
  CHECK(offset.initial_pose.x == 0.2);
  CHECK(offset.initial_pose.y == 0.0);
}

TEST_CASE("zero-error kinematic run stays at equilibrium") {
  ScenarioConfig cfg = default_scenario(10.0);
  const SimLog log = run_scenario(cfg);
  CHECK(log.records.size() == 10001);
  for (const auto& rec : log.records) {
    CHECK(rec.error_norm() < 1e-12);
    CHECK(rec.ec_norm() == 0.0);
    CHECK(rec.u.u_right == 0.0);
    CHECK(rec.u.u_left == 0.0);
    CHECK(rec.u_fb[0] == 0.0);
    CHECK(rec.u_ff[0] == 0.0);
  }
  // Uniform spacing, first and last stamps.
  CHECK(log.records.front().t == 0.0);
  CHECK(log.records.back().t == Approx(10.0).epsilon(1e-12));
  CHECK(log.records[1].t - log.records[0].t == Approx(1e-3));
}

TEST_CASE("runs are deterministic") {
  ScenarioConfig cfg = default_scenario(2.0);
  cfg.mode = LoopMode::kFullDynamics;
  cfg.initial_pose = {0.1, -0.05, 0.2};
  const SimLog a = run_scenario(cfg);
  const SimLog b = run_scenario(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].q.x == b.records[i].q.x);
    CHECK(a.records[i].u.u_right == b.records[i].u.u_right);
    CHECK(a.records[i].lyapunov == b.records[i].lyapunov);
  }
}

TEST_CASE("invalid scenario configs are rejected before stepping") {
  ScenarioConfig cfg = default_scenario(10.0);
  cfg.gains.k2 = 0.0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);

  ScenarioConfig bad_dt = default_scenario(10.0);
  bad_dt.dt = -1e-3;
  CHECK_THROWS_AS(run_scenario(bad_dt), ConfigError);

  ScenarioConfig short_ref = default_scenario(10.0);
  short_ref.reference.segments[0].duration = 5.0;
  CHECK_THROWS_AS(run_scenario(short_ref), ConfigError);

  ScenarioConfig bad_perturb = default_scenario(10.0);
  bad_perturb.mode = LoopMode::kFullDynamics;
  bad_perturb.perturb.mass = 0.0;
  CHECK_THROWS_AS(run_scenario(bad_perturb), ConfigError);
}

namespace {

// Synthetic log with a prescribed error-norm trace, everything else zero.
SimLog synthetic_log(const std::vector<double>& norms, double dt) {
  SimLog log;
  log.dt = dt;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    SimRecord rec;
    rec.t = static_cast<double>(i) * dt;
    rec.e.ex = norms[i];  // put the whole norm on one axis
    log.records.push_back(rec);
  }
  return log;
}

}  // namespace

TEST_CASE("metrics on an all-zero log") {
  const SimLog log = synthetic_log(std::vector<double>(101, 0.0), 0.01);
  const Metrics m = compute_metrics(log);
  REQUIRE(m.settle_time.has_value());
  CHECK(*m.settle_time == 0.0);
  CHECK(m.rms_ev == 0.0);
  CHECK(m.sup_ec == 0.0);
  CHECK(m.final_error_norm == 0.0);
  CHECK(m.lyapunov_increase_count == 0);
}

TEST_CASE("settling time of an exponential decay is ln(100)") {
  const double dt = 1e-3;
  std::vector<double> norms;
  for (int k = 0; k <= 8000; ++k) norms.push_back(std::exp(-k * dt));
  MetricThresholds th;
  th.settle_norm = 0.01;
  const Metrics m = compute_metrics(synthetic_log(norms, dt), th);
  REQUIRE(m.settle_time.has_value());
  CHECK(std::abs(*m.settle_time - std::log(100.0)) <= dt + 1e-12);
}

TEST_CASE("a never-settling log reports no settling time") {
  const SimLog log = synthetic_log(std::vector<double>(100, 1.0), 0.01);
  const Metrics m = compute_metrics(log);
  CHECK_FALSE(m.settle_time.has_value());
}

TEST_CASE("lyapunov increases above tolerance are counted") {
  SimLog log = synthetic_log(std::vector<double>(10, 0.0), 0.01);
  for (auto& rec : log.records) rec.lyapunov = 1.0;
  log.records[5].lyapunov = 1.0 + 1e-3;  // one injected rise at step 4->5
  const Metrics m = compute_metrics(log);
  CHECK(m.lyapunov_increase_count == 1);
}

TEST_CASE("compare of a config against itself gives unit ratios") {
  ScenarioConfig cfg = default_scenario(5.0);
  cfg.mode = LoopMode::kFullDynamics;
  const auto cmp = compare_controllers(cfg, cfg);
  CHECK(cmp.rms_ev_ratio == 1.0);
  CHECK(cmp.rms_ew_ratio == 1.0);
  CHECK(cmp.rms_ec_ratio == 1.0);
  CHECK(cmp.sup_ec_ratio == 1.0);
  CHECK(cmp.final_error_ratio == 1.0);
}

TEST_CASE("compare rejects mismatched scenarios") {
  const ScenarioConfig a = default_scenario(5.0);
  ScenarioConfig b = default_scenario(6.0);
  CHECK_THROWS_AS(compare_controllers(a, b), ConfigError);

  ScenarioConfig c = default_scenario(5.0);
  c.reference.segments[0].v = 0.5;
  CHECK_THROWS_AS(compare_controllers(a, c), ConfigError);
}

TEST_CASE("gain sweep basics") {
  ScenarioConfig base = default_scenario(5.0);
  base.initial_pose = {0.1, 0.0, 0.0};

  const std::vector<double> k1{2.3};
  const std::vector<double> k2{0.3};
  const std::vector<double> k3{3.8};
  const auto rows = gain_sweep(base, k1, k2, k3);
  REQUIRE(rows.size() == 1);
  const Metrics direct = compute_metrics(run_scenario(base), base.metrics);
  CHECK(rows[0].metrics.final_error_norm == direct.final_error_norm);
  CHECK(rows[0].metrics.settle_time == direct.settle_time);

  const std::vector<double> twice{2.3, 2.3};
  const auto tied = gain_sweep(base, twice, k2, k3);
  REQUIRE(tied.size() == 2);
  CHECK(tied[0].gains.k1 == tied[1].gains.k1);  // stable under exact ties

  CHECK_THROWS_AS(gain_sweep(base, {}, k2, k3), ConfigError);
  const std::vector<double> bad{-1.0};
  CHECK_THROWS_AS(gain_sweep(base, bad, k2, k3), ConfigError);
}

TEST_CASE("sweep orders the larger k1 first on the offset-start scenario") {
  ScenarioConfig base = default_scenario(40.0);
  base.initial_pose = {0.3, 0.0, -5.0 * kPi / 180.0};
  const std::vector<double> k1{1.0, 3.0};
  const std::vector<double> k2{0.3};
  const std::vector<double> k3{3.8};
  const auto rows = gain_sweep(base, k1, k2, k3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].gains.k1 == 3.0);  // faster convergence ranks first
  REQUIRE(rows[0].metrics.settle_time.has_value());
  REQUIRE(rows[1].metrics.settle_time.has_value());
  CHECK(*rows[0].metrics.settle_time < *rows[1].metrics.settle_time);
}

TEST_CASE("csv schema and roundtrip") {
  ScenarioConfig cfg = default_scenario(1.0);
  cfg.mode = LoopMode::kFullDynamics;
  cfg.initial_pose = {0.05, 0.0, 0.1};
  const SimLog log = run_scenario(cfg);

  std::stringstream out;
  emit_csv(log, out);
  std::string line;
  REQUIRE(std::getline(out, line));
  CHECK(line == kCsvHeader);

  std::size_t rows = 0;
  while (std::getline(out, line)) {
    const std::size_t commas = static_cast<std::size_t>(
        std::count(line.begin(), line.end(), ','));
    CHECK(commas == 24);  // 25 columns
    ++rows;
  }
  CHECK(rows == log.records.size());

  // Numeric roundtrip within 1e-8 relative on a sample of columns.
  std::stringstream again;
  emit_csv(log, again);
  std::getline(again, line);
  for (const auto& rec : log.records) {
    REQUIRE(std::getline(again, line));
    std::stringstream cells(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
    REQUIRE(values.size() == 25);
    const auto close = [](double parsed, double truth) {
      return std::abs(parsed - truth) <= 1e-8 * std::max(1.0, std::abs(truth));
    };
    CHECK(close(values[0], rec.t));
    CHECK(close(values[1], rec.q.x));
    CHECK(close(values[13], rec.eta_cmd.w));
    CHECK(close(values[23], rec.lyapunov));
    CHECK(close(values[24], rec.lyapunov_rate));
  }

  const SimLog one{1e-3, {log.records.front()}};
  std::stringstream single;
  emit_csv(one, single);
  std::size_t lines = 0;
  while (std::getline(single, line)) ++lines;
  CHECK(lines == 2);

  CHECK_THROWS_AS(emit_csv(SimLog{}, out), std::invalid_argument);
}

TEST_CASE("kinematic final error is insensitive to dt refinement") {
  // Run to steady state: mid-transient the sampled controller shifts the
  // trajectory by O(dt), which is not what this invariant is about.
  ScenarioConfig coarse = default_scenario(40.0);
  coarse.initial_pose = {0.3, 0.0, -5.0 * kPi / 180.0};
  ScenarioConfig fine = coarse;
  fine.dt = coarse.dt / 2.0;
  const double e_coarse = compute_metrics(run_scenario(coarse)).final_error_norm;
  const double e_fine = compute_metrics(run_scenario(fine)).final_error_norm;
  CHECK(std::abs(e_coarse - e_fine) < 1e-6);
}

TEST_CASE("lyapunov value is monotone along a short offset-start run") {
  ScenarioConfig cfg = default_scenario(5.0);
  cfg.initial_pose = {0.3, 0.0, -5.0 * kPi / 180.0};
  const SimLog log = run_scenario(cfg);
  const Metrics m = compute_metrics(log);
  CHECK(m.lyapunov_increase_count == 0);
}

TEST_CASE("full-dynamics logs respect the command limit") {
  ScenarioConfig cfg = default_scenario(3.0);
  cfg.mode = LoopMode::kFullDynamics;
  cfg.initial_pose = {0.4, 0.2, 0.5};
  const SimLog log = run_scenario(cfg);
  for (const auto& rec : log.records) {
    CHECK(std::abs(rec.u.u_right) <= cfg.plant.command_limit);
    CHECK(std::abs(rec.u.u_left) <= cfg.plant.command_limit);
  }
}
