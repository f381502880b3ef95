// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "ilc/harness/experiment.hpp"
#include "ilc/harness/presets.hpp"
#include "ilc/harness/validate.hpp"

using namespace ilc;
using namespace ilc::harness;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int digits = 4) {
  char b[64];
  std::snprintf(b, sizeof b, "%.*g", digits, v);
  return b;
}

LinkScenario scenario_at(double v, double p_max) {
  return preset_config("fig3").cell(v, p_max);
}

// PTR change if every frame lost one data symbol: the quantization step.
double ptr_step(const Evaluation& e) {
  const double k = static_cast<double>(e.total_pilots()), n = static_cast<double>(e.total_data());
  return k / (n - static_cast<double>(e.plans.size())) - k / n;
}

void convergence() {
  bool ok = true;
  std::string detail;
  for (double p : {2.0, 4.0, 8.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = optimize(scenario_at(50, p));
    const double secs = seconds_since(t0);
    const int it = r.trace.iterations();
    const bool cell_ok = r.trace.termination == "converged" && it <= 10 && (p != 8.0 || it <= 3) && secs <= 60;
    ok = ok && cell_ok;
    detail += "P=" + num(p) + "W:" + std::to_string(it) + " it/" + num(secs, 2) + "s ";
  }
  report(ok, "convergence (N=100, v=50 m/s; <=10 sweeps, <=3 at 8 W, <=60 s)", detail);
}

void benchmark_gap() {
  const auto s = scenario_at(50, 4);
  const auto prop = optimize(s);
  const auto ub = upper_bound(s);
  const auto b1 = benchmark_no_localization(s);
  const auto b2 = benchmark_fixed_frame(s);
  const auto b3 = benchmark_pso(s);
  // One grid cell: largest SE change from moving one frame's n by one symbol at the proposed solution.
  double cell = 0.0;
  for (const auto& p : prop.eval.plans) {
    const double here = frame_se_direct(p.k, static_cast<double>(p.n), p.snr, s.doppler(), s.radio);
    for (long dn : {-1L, 1L})
      if (p.n + dn >= 1)
        cell = std::max(cell, std::abs(frame_se_direct(p.k, static_cast<double>(p.n + dn), p.snr, s.doppler(), s.radio) - here));
  }
  cell /= static_cast<double>(s.frames);
  const double ratio = prop.eval.average_se / b1.eval.average_se;
  const bool order = ub.eval.average_se >= prop.eval.average_se - cell && prop.eval.average_se >= b1.eval.average_se &&
                     prop.eval.average_se >= b2.eval.average_se && prop.eval.average_se >= b3.eval.average_se;
  const bool feasible = prop.eval.feasible() && ub.eval.feasible() && b1.eval.feasible() && b2.eval.feasible() &&
                        b3.eval.feasible();
  report(ratio >= 1.5 && order && feasible, "benchmark gap and ordering (P=4 W, v=50 m/s)",
         "ratio=" + num(ratio) + " ub=" + num(ub.eval.average_se, 6) + " proposed=" + num(prop.eval.average_se, 6) +
             " b1=" + num(b1.eval.average_se, 6) + " b2=" + num(b2.eval.average_se, 6) +
             " pso=" + num(b3.eval.average_se, 6) + " cell=" + num(cell, 3));
}

void unimodality() {
  const auto cfg = preset_config("fig4");
  bool ok = true;
  std::string detail;
  for (double v : cfg.velocities) {
    double prev_peak = -1.0;
    for (double p : cfg.p_max) {
      const auto rows = data_duration_curve(cfg.cell(v, p), *cfg.data_sweep);
      std::size_t arg = 0;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].average_se > rows[arg].average_se) arg = i;
      bool single = arg > 0 && arg + 1 < rows.size() && rows.size() == 200;
      for (std::size_t i = 1; i <= arg; ++i) single = single && rows[i].average_se >= rows[i - 1].average_se - 1e-12;
      for (std::size_t i = arg + 1; i < rows.size(); ++i)
        single = single && rows[i].average_se <= rows[i - 1].average_se + 1e-12;
      const double peak = rows[arg].average_se;
      ok = ok && single && peak > prev_peak;
      prev_peak = peak;
      detail += "v=" + num(v) + ",P=" + num(p) + ":n*=" + std::to_string(rows[arg].n) + (single ? "" : "(multi)") + " ";
    }
  }
  report(ok, "unimodal SE in data duration with k=5 and peak rising with P_max", detail);
}

void ptr_trend() {
  bool ok = true;
  std::string detail = "velocity:";
  Evaluation prev;
  bool first = true;
  for (double v : {10.0, 20.0, 30.0, 40.0, 50.0}) {
    const auto r = optimize(scenario_at(v, 4));
    if (!first) ok = ok && r.eval.ptr() >= prev.ptr() - ptr_step(prev);
    detail += " " + num(r.eval.ptr());
    prev = r.eval;
    first = false;
  }
  detail += " | power:";
  first = true;
  for (double p : {1.0, 2.0, 4.0, 6.0, 8.0}) {
    const auto r = optimize(scenario_at(10, p));
    if (!first) ok = ok && r.eval.ptr() >= prev.ptr() - ptr_step(prev);
    detail += " " + num(r.eval.ptr());
    prev = r.eval;
    first = false;
  }
  // Exhaustive optimum at the same power points, shown for reference.
  detail += " | upper bound:";
  BaselineConfig bc;
  bc.grid_k_max = 20;
  bc.grid_n_max = 200;
  for (double p : {1.0, 2.0, 4.0, 6.0, 8.0}) detail += " " + num(upper_bound(scenario_at(10, p), bc, {}).eval.ptr());
  report(ok, "PTR nondecreasing in velocity (P=4 W) and in P_max (v=10 m/s)", detail);
}

void oracle_checks() {
  ValidationOptions o;
  const auto mc = check_markov_mse(o);
  report(mc.passed && mc.seconds <= 120, "Monte-Carlo MSE vs closed form (3x3x3 grid, 1e6 trials, 2%)",
         "worst=" + num(mc.measured) + " time=" + num(mc.seconds, 3) + "s " + mc.detail);

  const auto [fd, psd] = check_direction_vectors(o);
  report(fd.passed && psd.passed, "direction vectors vs finite differences (1000 geometries, 1e-6) and FIM PSD",
         "worst_rel=" + num(fd.measured) + " min_eig_ratio=" + num(psd.measured) + " " + fd.detail + psd.detail);

  const auto sca = check_sca(o);
  const auto pil = check_pilots(o);
  const auto kkt = check_kkt(o);
  const auto beam = check_beamwidth(o);
  report(sca.passed && pil.passed && kkt.passed && beam.passed, "sub-solver oracles (SCA, pilots, KKT, beamwidth)",
         "sca_max_gap=" + num(sca.measured) + "sym pilot_deficit=" + num(pil.measured) +
             " kkt_gap=" + num(kkt.measured) + " beam_cells=" + num(beam.measured) + " " + sca.detail + pil.detail +
             kkt.detail + beam.detail);

  const auto [se, bound] = check_identities(o);
  report(se.passed && bound.passed, "SE route identity (1e-9) and error bound at longest data duration (1e-6)",
         "identity=" + num(se.measured) + " bound=" + num(bound.measured) + " " + se.detail + bound.detail);
}

}  // namespace

int main() {
  convergence();
  benchmark_gap();
  unimodality();
  ptr_trend();
  oracle_checks();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
