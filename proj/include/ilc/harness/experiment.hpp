#pragma once

// Sweep orchestration: one cell per (velocity, P_max, method), executed in a
// small work pool with results collected by cell index.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "ilc/baselines.hpp"
#include "ilc/harness/config.hpp"
#include "ilc/harness/results.hpp"

namespace ilc::harness {

struct CellOutput {
  ResultRow row;
  SolveTrace trace;
};

struct DataSweepRow {
  double velocity = 0.0;
  double p_max = 0.0;
  int k = 0;
  long n = 0;
  double average_se = 0.0;
  int violations = 0;
};

struct ExperimentOutput {
  std::vector<CellOutput> cells;
  std::vector<DataSweepRow> data_sweep;

  std::vector<ResultRow> rows() const {
    std::vector<ResultRow> r;
    for (const auto& c : cells) r.push_back(c.row);
    return r;
  }
};

inline std::string status_of(const Evaluation& e) {
  if (e.feasible()) return "ok";
  return "infeasible:" + e.first_constraint + "@frame" + std::to_string(e.first_violation);
}

// Runs one method on one scenario. Failures become the row status.
inline CellOutput run_method(const std::string& method, const LinkScenario& s, const ExperimentConfig& cfg,
                             std::uint64_t cell_seed) {
  CellOutput out;
  out.row.method = method;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SolveResult r;
    if (method == "proposed") {
      r = solve(s, cfg.optimizer, SolverStrategy{});
    } else if (method == "upper_bound") {
      r = upper_bound(s, cfg.baselines, cfg.optimizer);
    } else if (method == "benchmark1") {
      r = benchmark_no_localization(s, cfg.optimizer);
    } else if (method == "benchmark2") {
      r = benchmark_fixed_frame(s, cfg.baselines, cfg.optimizer);
    } else if (method == "benchmark3") {
      BaselineConfig bc = cfg.baselines;
      bc.seed = cell_seed;
      r = benchmark_pso(s, bc, cfg.optimizer);
    } else {
      throw InvalidInput("unknown method '" + method + "'");
    }
    out.row.average_se = r.eval.average_se;
    out.row.ptr = r.eval.ptr();
    out.row.iterations = r.trace.iterations();
    out.row.status = status_of(r.eval);
    out.trace = std::move(r.trace);
  } catch (const Error& e) {
    out.row.status = std::string("error:") + e.what();
  }
  out.row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// Average SE of a uniform plan (k, n) over the data-duration grid, with the
// closed-form beamwidth and KKT power applied to each point.
inline std::vector<DataSweepRow> data_duration_curve(const LinkScenario& s, const DataSweep& d) {
  std::vector<DataSweepRow> rows;
  long last = -1;
  for (int i = 0; i < d.points; ++i) {
    const double t = static_cast<double>(i) / (d.points - 1);
    const long n = std::lround(static_cast<double>(d.n_min) + t * static_cast<double>(d.n_max - d.n_min));
    if (n == last) continue;
    last = n;
    FramePlan p;
    p.k = d.k;
    p.n = n;
    p.beamwidth = s.limits.phi_max;
    p.power = s.p_max / s.frames;
    const Evaluation e = closed_form_evaluation(s, std::vector<FramePlan>(static_cast<std::size_t>(s.frames), p), {});
    rows.push_back({s.relative_speed(), s.p_max, d.k, n, e.average_se, e.violations});
  }
  return rows;
}

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline ExperimentOutput run_cells(const ExperimentConfig& cfg, int jobs = 1) {
  cfg.validate();
  struct Cell {
    double v, p;
    std::string method;
  };
  std::vector<Cell> cells;
  for (double v : cfg.velocities)
    for (double p : cfg.p_max)
      for (const auto& m : cfg.methods) cells.push_back({v, p, m});

  ExperimentOutput out;
  out.cells.resize(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const Cell& c = cells[i];
    CellOutput r = run_method(c.method, cfg.cell(c.v, c.p), cfg, mix_seed(cfg.seed, i));
    r.row.scenario_id = cfg.id;
    r.row.velocity = c.v;
    r.row.p_max = c.p;
    out.cells[i] = std::move(r);
  });

  if (cfg.data_sweep) {
    std::vector<std::pair<double, double>> grid;
    for (double v : cfg.velocities)
      for (double p : cfg.p_max) grid.emplace_back(v, p);
    std::vector<std::vector<DataSweepRow>> parts(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
      parts[i] = data_duration_curve(cfg.cell(grid[i].first, grid[i].second), *cfg.data_sweep);
      for (auto& r : parts[i]) r.velocity = grid[i].first;
    });
    for (auto& p : parts) out.data_sweep.insert(out.data_sweep.end(), p.begin(), p.end());
  }
  return out;
}

inline std::string traces_csv(const ExperimentOutput& o) {
  std::string s = "scenario_id,method,velocity_mps,p_max_w,iteration,objective\n";
  for (const auto& c : o.cells) {
    const auto& r = c.row;
    const std::string key = csv_field(r.scenario_id) + "," + csv_field(r.method) + "," + fmt17(r.velocity) + "," +
                            fmt17(r.p_max) + ",";
    s += key + "0," + fmt17(c.trace.initial_objective) + "\n";
    for (std::size_t i = 0; i < c.trace.objectives.size(); ++i)
      s += key + std::to_string(i + 1) + "," + fmt17(c.trace.objectives[i]) + "\n";
  }
  return s;
}

inline std::string decisions_csv(const ExperimentOutput& o) {
  std::string s = "scenario_id,method,velocity_mps,p_max_w,iteration,frame,k,n,beamwidth_rad,power_w\n";
  for (const auto& c : o.cells) {
    const auto& r = c.row;
    const std::string key = csv_field(r.scenario_id) + "," + csv_field(r.method) + "," + fmt17(r.velocity) + "," +
                            fmt17(r.p_max) + ",";
    for (std::size_t it = 0; it < c.trace.history.size(); ++it)
      for (std::size_t f = 0; f < c.trace.history[it].size(); ++f) {
        const auto& p = c.trace.history[it][f];
        s += key + std::to_string(it + 1) + "," + std::to_string(f) + "," + std::to_string(p.k) + "," +
             std::to_string(p.n) + "," + fmt17(p.beamwidth) + "," + fmt17(p.power) + "\n";
      }
  }
  return s;
}

inline std::string data_sweep_csv(const std::string& id, const std::vector<DataSweepRow>& rows, double T0) {
  std::string s = "scenario_id,velocity_mps,p_max_w,k,n,t_d_s,average_se,violations\n";
  for (const auto& r : rows)
    s += csv_field(id) + "," + fmt17(r.velocity) + "," + fmt17(r.p_max) + "," + std::to_string(r.k) + "," +
         std::to_string(r.n) + "," + fmt17(static_cast<double>(r.n) * T0) + "," + fmt17(r.average_se) + "," +
         std::to_string(r.violations) + "\n";
  return s;
}

struct RunOptions {
  OutputFormat format = OutputFormat::kCsv;
  int jobs = 1;
};

// Runs the sweep and writes results.{csv,json}, traces.csv, decisions.csv,
// timings.csv and, when configured, data_sweep.csv into `outdir`.
inline ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& outdir,
                                       const RunOptions& opt = {}) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create output directory '" + outdir.string() + "': " + ec.message());
  ExperimentOutput out = run_cells(cfg, opt.jobs);
  const auto rows = out.rows();
  emit_results(rows, outdir, opt.format);
  write_text(outdir / "traces.csv", traces_csv(out));
  write_text(outdir / "decisions.csv", decisions_csv(out));
  write_timings(rows, outdir / "timings.csv");
  if (cfg.data_sweep) write_text(outdir / "data_sweep.csv", data_sweep_csv(cfg.id, out.data_sweep, cfg.scenario.radio.T0));
  return out;
}

}  // namespace ilc::harness
