#pragma once

// Comparison schemes: exhaustive frame search, a communication-only scheme
// with the beam held wide, a fixed frame structure, and particle swarm search
// over the frame structure.

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "ilc/optimizer.hpp"

namespace ilc {

class ResourceLimit : public Error {
 public:
  ResourceLimit(double required, double budget, const std::string& what)
      : Error(what), required_(required), budget_(budget) {}
  double required() const { return required_; }
  double budget() const { return budget_; }

 private:
  double required_;
  double budget_;
};

struct BaselineConfig {
  // exhaustive grid
  int grid_k_max = 64;
  long grid_n_max = 2000;
  long grid_n_step = 1;
  double grid_budget = 2e9;  // frame-SE evaluations per sweep
  // benchmark 2
  double fixed_ptr = 1.0 / 30.0;
  int fixed_k = 5;
  // PSO
  int pso_particles = 200;
  int pso_iterations = 30;
  double pso_inertia = 0.7;
  double pso_cognitive = 1.5;
  double pso_social = 1.5;
  int pso_k_max = 20;
  long pso_n_max = 300;
  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const {
    require(grid_k_max >= 1 && grid_n_max >= 1 && grid_n_step >= 1, "grid resolutions must be >= 1");
    require(grid_budget > 0, "grid_budget must be > 0");
    require(fixed_ptr > 0 && std::isfinite(fixed_ptr), "fixed_ptr must be > 0");
    require(fixed_k >= 1, "fixed_k must be >= 1");
    require(pso_particles >= 1 && pso_iterations >= 0, "PSO needs >= 1 particle and >= 0 iterations");
    require(pso_inertia >= 0 && pso_inertia < 1, "PSO inertia must lie in [0,1)");
    require(pso_cognitive >= 0 && pso_social >= 0, "PSO acceleration weights must be >= 0");
    require(pso_k_max >= 1 && pso_n_max >= 1, "PSO bounds must be >= 1");
    require(workers >= 1, "workers must be >= 1");
  }
};

inline SolveResult upper_bound(const LinkScenario& s, const BaselineConfig& bc = {},
                               const OptimizerConfig& cfg = {}) {
  bc.validate();
  const double per_sweep = static_cast<double>(s.frames) * bc.grid_k_max *
                           std::ceil(static_cast<double>(bc.grid_n_max) / static_cast<double>(bc.grid_n_step));
  if (per_sweep > bc.grid_budget)
    throw ResourceLimit(per_sweep, bc.grid_budget,
                        "upper_bound: grid needs " + std::to_string(per_sweep) +
                            " frame evaluations per sweep, budget is " + std::to_string(bc.grid_budget));
  SolverStrategy st;
  st.frame_step = FrameStructureStep::kExhaustive;
  st.grid_k_max = bc.grid_k_max;
  st.grid_n_max = bc.grid_n_max;
  st.grid_n_step = bc.grid_n_step;
  return solve(s, cfg, st);
}

// Benchmark 1: no location prediction, so the beam stays at phi_max.
inline SolveResult benchmark_no_localization(const LinkScenario& s, const OptimizerConfig& cfg = {}) {
  SolverStrategy st;
  st.optimize_beamwidth = false;
  st.initial_beamwidth = s.limits.phi_max;
  return solve(s, cfg, st);
}

// Benchmark 2: (k, n) held fixed; beamwidth and power still optimized.
inline SolveResult benchmark_fixed_frame(const LinkScenario& s, int k, long n, const OptimizerConfig& cfg = {}) {
  require(k >= 1 && n >= 1, "benchmark_fixed_frame: k and n must be >= 1");
  SolverStrategy st;
  st.frame_step = FrameStructureStep::kFixed;
  st.initial_k = k;
  st.initial_n = n;
  return solve(s, cfg, st);
}

inline SolveResult benchmark_fixed_frame(const LinkScenario& s, const BaselineConfig& bc = {},
                                         const OptimizerConfig& cfg = {}) {
  bc.validate();
  const long n = std::max(1L, std::lround(bc.fixed_k / bc.fixed_ptr));
  return benchmark_fixed_frame(s, bc.fixed_k, n, cfg);
}

// Evaluates a frame structure with the closed-form beamwidth (at the powers
// the frames carry) followed by KKT power; PSO scores particles this way.
inline Evaluation closed_form_evaluation(const LinkScenario& s, const std::vector<FramePlan>& frames,
                                       const OptimizerConfig& cfg) {
  Timeline tl(s);
  for (int i = 0; i < s.frames; ++i) {
    const FrameEnv env = tl.next_env();
    FramePlan p = frames[static_cast<std::size_t>(i)];
    p.beamwidth = optimal_beamwidth(env.geom, env.l_u, env.l_n, s.limits.phi_min, s.limits.phi_max);
    tl.commit(p, env);
  }
  Evaluation e = std::move(tl).finish();
  std::vector<PowerFrame> pf(e.plans.size());
  for (std::size_t i = 0; i < pf.size(); ++i) {
    const auto& p = e.plans[i];
    pf[i] = {p.k, p.n, e.env[i].covers(p.beamwidth) ? snr_per_watt(p.beamwidth, e.env[i].geom.d, s.radio) : 0.0,
             e.env[i].doppler};
  }
  try {
    const PowerAllocation a = allocate_power(pf, s.p_max, s.radio, s.limits.gamma_th, cfg.mu_bisection_tol);
    std::vector<FramePlan> next = e.plans;
    for (std::size_t i = 0; i < next.size(); ++i) next[i].power = a.power[i];
    Evaluation powered = evaluate_plan(s, next);
    if (powered.violations < e.violations ||
        (powered.violations == e.violations && powered.average_se >= e.average_se))
      return powered;
  } catch (const Infeasible&) {
  }
  return e;
}

// Fitness: average SE, with each violating frame costing more than any SE gain.
inline double pso_fitness(const Evaluation& e) { return e.average_se - 100.0 * e.violations; }

// Benchmark 3: global-best PSO over the relaxed per-frame (k, n), rounded
// before evaluation. Particle 0 starts at the optimizer's initial frame.
inline SolveResult benchmark_pso(const LinkScenario& s, const BaselineConfig& bc = {},
                                 const OptimizerConfig& cfg = {}) {
  s.validate();
  bc.validate();
  cfg.validate();
  const std::size_t dims = 2 * static_cast<std::size_t>(s.frames);
  const std::size_t swarm = static_cast<std::size_t>(bc.pso_particles);
  std::vector<double> lo(dims), hi(dims);
  for (std::size_t i = 0; i < dims; i += 2) {
    lo[i] = 1;
    hi[i] = bc.pso_k_max;
    lo[i + 1] = 1;
    hi[i + 1] = static_cast<double>(bc.pso_n_max);
  }

  Rng rng(bc.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> x(swarm, std::vector<double>(dims)), vel(swarm, std::vector<double>(dims, 0.0));
  for (std::size_t p = 0; p < swarm; ++p)
    for (std::size_t d = 0; d < dims; ++d) {
      if (p == 0)
        x[p][d] = std::clamp(d % 2 == 0 ? static_cast<double>(cfg.init_k) : static_cast<double>(cfg.init_n), lo[d], hi[d]);
      else
        x[p][d] = lo[d] + unit(rng) * (hi[d] - lo[d]);
      vel[p][d] = p == 0 ? 0.0 : (unit(rng) - 0.5) * 0.2 * (hi[d] - lo[d]);
    }

  const double phi0 = s.limits.phi_max;
  auto to_plan = [&](const std::vector<double>& pos) {
    std::vector<FramePlan> plans(static_cast<std::size_t>(s.frames));
    for (std::size_t i = 0; i < plans.size(); ++i) {
      plans[i].k = static_cast<int>(std::lround(pos[2 * i]));
      plans[i].n = std::lround(pos[2 * i + 1]);
      plans[i].beamwidth = phi0;
      plans[i].power = s.p_max / s.frames;
    }
    return plans;
  };

  std::vector<Evaluation> evals(swarm);
  auto evaluate_all = [&] {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(bc.workers), swarm);
    auto run = [&](std::size_t w) {
      for (std::size_t p = w; p < swarm; p += workers) evals[p] = closed_form_evaluation(s, to_plan(x[p]), cfg);
    };
    if (workers <= 1) {
      run(0);
      return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  };

  SolveResult res;
  evaluate_all();
  std::vector<std::vector<double>> best_x = x;
  std::vector<double> best_f(swarm);
  std::size_t g = 0;
  Evaluation g_eval;
  for (std::size_t p = 0; p < swarm; ++p) {
    best_f[p] = pso_fitness(evals[p]);
    if (best_f[p] > best_f[g]) g = p;
  }
  g_eval = evals[g];
  std::vector<double> g_x = x[g];
  double g_f = best_f[g];
  res.trace.initial_objective = evals[0].average_se;

  for (int it = 0; it < bc.pso_iterations; ++it) {
    for (std::size_t p = 0; p < swarm; ++p)
      for (std::size_t d = 0; d < dims; ++d) {
        const double r1 = unit(rng), r2 = unit(rng);
        double v = bc.pso_inertia * vel[p][d] + bc.pso_cognitive * r1 * (best_x[p][d] - x[p][d]) +
                   bc.pso_social * r2 * (g_x[d] - x[p][d]);
        const double vmax = 0.2 * (hi[d] - lo[d]);
        vel[p][d] = std::clamp(v, -vmax, vmax);
        x[p][d] = std::clamp(x[p][d] + vel[p][d], lo[d], hi[d]);
      }
    evaluate_all();
    for (std::size_t p = 0; p < swarm; ++p) {
      const double f = pso_fitness(evals[p]);
      if (f > best_f[p]) {
        best_f[p] = f;
        best_x[p] = x[p];
      }
      if (f > g_f) {
        g_f = f;
        g_x = x[p];
        g_eval = evals[p];
      }
    }
    res.trace.objectives.push_back(g_eval.average_se);
    res.trace.history.push_back(g_eval.plans);
  }
  res.trace.termination = "iteration_cap";
  res.eval = std::move(g_eval);
  return res;
}

}  // namespace ilc
