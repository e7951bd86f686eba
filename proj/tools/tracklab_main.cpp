#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include "tracklab/config.hpp"
#include "tracklab/csv.hpp"
#include "tracklab/metrics.hpp"
#include "tracklab/mlp.hpp"
#include "tracklab/rng.hpp"
#include "tracklab/scenario.hpp"
#include "tracklab/sweep.hpp"

namespace {

using namespace tracklab;

void print_metrics(const char* label, const Metrics& m) {
  std::printf("%s\n", label);
  if (m.settle_time) {
    std::printf("  settle time (||e_p|| < thr)   %.4f s\n", *m.settle_time);
  } else {
    std::printf("  settle time (||e_p|| < thr)   never\n");
  }
  if (m.ex_settle_time) {
    std::printf("  settle time (|e_x| < thr)     %.4f s\n", *m.ex_settle_time);
  } else {
    std::printf("  settle time (|e_x| < thr)     never\n");
  }
  std::printf("  final ||e_p||                 %.6g\n", m.final_error_norm);
  std::printf("  RMS e_c (v, w, norm)          %.6g  %.6g  %.6g\n", m.rms_ev, m.rms_ew,
              m.rms_ec);
  std::printf("  sup ||e_c|| (all, post-trans) %.6g  %.6g\n", m.sup_ec,
              m.sup_ec_after_transient);
  std::printf("  lyapunov increases            %ld\n", m.lyapunov_increase_count);
}

int do_run(const std::string& config_path, const std::string& out_path) {
  const ScenarioConfig cfg = load_config(config_path);
  const SimLog log = run_scenario(cfg);
  const Metrics m = compute_metrics(log, cfg.metrics);
  std::printf("%zu records at dt = %g s\n", log.records.size(), log.dt);
  print_metrics("metrics:", m);
  if (!out_path.empty()) {
    emit_csv(log, std::filesystem::path(out_path));
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

int do_sweep(const std::string& config_path, const std::vector<double>& k1s,
             const std::vector<double>& k2s, const std::vector<double>& k3s,
             const std::string& out_path) {
  const ScenarioConfig base = load_config(config_path);
  const auto rows = gain_sweep(base, k1s, k2s, k3s);
  std::printf("%-8s %-8s %-8s %-12s %-12s %-12s\n", "k1", "k2", "k3", "settle[s]",
              "ex_settle[s]", "final||e||");
  for (const auto& row : rows) {
    const auto settle = [](const std::optional<double>& t) {
      return t ? *t : std::numeric_limits<double>::infinity();
    };
    std::printf("%-8g %-8g %-8g %-12.4f %-12.4f %-12.6g\n", row.gains.k1, row.gains.k2,
                row.gains.k3, settle(row.metrics.settle_time),
                settle(row.metrics.ex_settle_time), row.metrics.final_error_norm);
  }
  if (!out_path.empty()) {
    emit_sweep_csv(rows, std::filesystem::path(out_path));
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

int do_compare(const std::string& path_a, const std::string& path_b) {
  const ScenarioConfig a = load_config(path_a);
  const ScenarioConfig b = load_config(path_b);
  const auto cmp = compare_controllers(a, b);
  print_metrics("A:", cmp.a);
  print_metrics("B:", cmp.b);
  std::printf("ratios (B / A):\n");
  std::printf("  RMS e_v        %.6g\n", cmp.rms_ev_ratio);
  std::printf("  RMS e_w        %.6g\n", cmp.rms_ew_ratio);
  std::printf("  RMS ||e_c||    %.6g\n", cmp.rms_ec_ratio);
  std::printf("  sup ||e_c||    %.6g\n", cmp.sup_ec_ratio);
  std::printf("  final ||e_p||  %.6g\n", cmp.final_error_ratio);
  return 0;
}

int do_gradcheck(std::uint64_t seed, int trials, double eps) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const MlpNet net = random_mlp({6, 12, 2}, rng.next_u64(), 0.1);
    std::vector<double> x(6), err(2);
    for (double& v : x) v = rng.uniform(-1, 1);
    for (double& v : err) v = rng.uniform(-1, 1);
    worst = std::max(worst, grad_check(net, x, err, eps));
  }
  std::printf("gradcheck: %d trials, eps = %g, max relative deviation = %.3e\n", trials, eps,
              worst);
  return 0;
}

int do_scan(const std::string& config_path) {
  const ScenarioConfig cfg = load_config(config_path);
  const auto [q0, eta_ref] = reference_state(cfg.reference, 0.0);
  (void)q0;
  const auto report = lyapunov_sign_scan(eta_ref, cfg.gains, cfg.scan.bound, cfg.scan.samples,
                                         cfg.seed, cfg.variant, cfg.scan.worst_keep);
  std::printf("lyapunov sign scan: %zu samples, |e|_inf <= %g, eta_ref = (%g, %g), seed %" PRIu64
              "\n",
              report.samples, cfg.scan.bound, eta_ref.v, eta_ref.w, cfg.seed);
  std::printf("  min dV/dt          %.6e\n", report.min_rate);
  std::printf("  max dV/dt          %.6e\n", report.max_rate);
  std::printf("  fraction dV/dt > 0 %.6g\n", report.positive_fraction);
  if (!report.worst.empty()) {
    std::printf("  worst offenders (e_x, e_y, e_theta -> dV/dt):\n");
    for (const auto& s : report.worst) {
      std::printf("    (% .6f, % .6f, % .6f) -> %.6e\n", s.e.ex, s.e.ey, s.e.etheta, s.rate);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level tracking control simulation lab for a differential-drive robot"};
  app.require_subcommand(1);

  std::string config_path, config_path_b, out_path;
  std::vector<double> k1s, k2s, k3s;
  std::uint64_t seed = 1;
  int trials = 100;
  double eps = 1e-6;

  auto* run = app.add_subcommand("run", "simulate one scenario, print metrics");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--out", out_path, "write the per-step CSV here");

  auto* sweep = app.add_subcommand("sweep", "grid search over tracking gains");
  sweep->add_option("config", config_path, "base scenario config file")->required();
  sweep->add_option("--k1", k1s, "k1 grid values")->required()->delimiter(',');
  sweep->add_option("--k2", k2s, "k2 grid values")->required()->delimiter(',');
  sweep->add_option("--k3", k3s, "k3 grid values")->required()->delimiter(',');
  sweep->add_option("--out", out_path, "write the ranked table CSV here");

  auto* compare = app.add_subcommand("compare", "run two scenarios, report metric ratios");
  compare->add_option("configA", config_path, "baseline scenario")->required();
  compare->add_option("configB", config_path_b, "candidate scenario")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the learner");
  gradcheck->add_option("--seed", seed, "rng seed");
  gradcheck->add_option("--trials", trials, "number of random (net, input, error) triples");
  gradcheck->add_option("--eps", eps, "finite-difference step");

  auto* scan = app.add_subcommand("scan", "sample the sign of dV/dt over an error box");
  scan->add_option("config", config_path, "scenario config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are config errors
  }

  try {
    if (*run) return do_run(config_path, out_path);
    if (*sweep) return do_sweep(config_path, k1s, k2s, k3s, out_path);
    if (*compare) return do_compare(config_path, config_path_b);
    if (*gradcheck) return do_gradcheck(seed, trials, eps);
    if (*scan) return do_scan(config_path);
  } catch (const tracklab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
