#include "tracklab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tracklab {

namespace {

// 9 significant digits, matching the documented CSV contract.
void put(std::ostream& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  out << buf;
}

void put_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    put(out, v);
    first = false;
  }
  out << '\n';
}

}  // namespace

void emit_csv(const SimLog& log, std::ostream& out) {
  if (log.records.empty()) throw std::invalid_argument("emit_csv: empty log");
  out << kCsvHeader << '\n';
  for (const SimRecord& r : log.records) {
    put_row(out, {r.t,
                  r.q.x, r.q.y, r.q.theta,
                  r.q_ref.x, r.q_ref.y, r.q_ref.theta,
                  r.e.ex, r.e.ey, r.e.etheta,
                  r.eta_ref.v, r.eta_ref.w,
                  r.eta_cmd.v, r.eta_cmd.w,
                  r.eta.v, r.eta.w,
                  r.ec_norm(),
                  r.u_fb[0], r.u_fb[1],
                  r.u_ff[0], r.u_ff[1],
                  r.u.u_right, r.u.u_left,
                  r.lyapunov, r.lyapunov_rate});
  }
}

void emit_csv(const SimLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path.string());
  emit_csv(log, out);
  out.flush();
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

void emit_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "k1,k2,k3,settle_time,ex_settle_time,final_e_norm,rms_ev,rms_ew,rms_ec,"
         "sup_ec,lyap_increases\n";
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (const SweepRow& r : rows) {
    put_row(out, {r.gains.k1, r.gains.k2, r.gains.k3,
                  r.metrics.settle_time.value_or(kInf),
                  r.metrics.ex_settle_time.value_or(kInf),
                  r.metrics.final_error_norm,
                  r.metrics.rms_ev, r.metrics.rms_ew, r.metrics.rms_ec,
                  r.metrics.sup_ec,
                  static_cast<double>(r.metrics.lyapunov_increase_count)});
  }
}

void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_sweep_csv: cannot open " + path.string());
  emit_sweep_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("emit_sweep_csv: write failed for " + path.string());
}

}  // namespace tracklab
