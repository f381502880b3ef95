#pragma once

// Block-coordinate ascent over frame structure, beamwidth and power:
// data duration by successive convex approximation, pilot length by
// enumeration, beamwidth in closed form, and power from the KKT system.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ilc/link.hpp"
#include "ilc/problem.hpp"

namespace ilc {

struct OptimizerConfig {
  int max_outer_iterations = 50;
  double convergence_tol = 1e-4;   // relative change of the average SE
  int sca_max_steps = 30;
  double sca_tol = 66.7e-6 / 10;   // s
  int pilot_k_max = 200;
  double mu_bisection_tol = 1e-9;  // relative budget tolerance
  int init_k = 5;
  long init_n = 95;

  void validate() const {
    require(max_outer_iterations >= 1, "max_outer_iterations must be >= 1");
    require(convergence_tol > 0 && convergence_tol < 1, "convergence_tol must lie in (0,1)");
    require(sca_max_steps >= 1 && sca_tol > 0, "sca settings must be positive");
    require(pilot_k_max >= 1, "pilot_k_max must be >= 1");
    require(mu_bisection_tol > 0 && mu_bisection_tol < 1, "mu_bisection_tol must lie in (0,1)");
    require(init_k >= 1 && init_n >= 1, "initial frame must have k, n >= 1");
  }
};

// ---------------------------------------------------------------------------
// Data duration (SCA)

// d eta / d n for fixed k, snr and Doppler, on the region where the
// estimation error stays below 1.
inline double se_data_gradient(int pilots, double data, double snr, double doppler, const RadioParams& p) {
  const double k = pilots, g = snr;
  const double a1 = 1 + k * g + g + k * g * g;
  const double a2 = 1 + k * g + g + 2 * k * g * g;
  const double rate = correlation_rate(doppler, p) * std::log(p.kappa);  // d/dn of ln alpha
  const double decay = 2 * k * g * g * std::exp(data * rate);
  const double log_term = std::log2(a1 / (a2 - decay));
  const double dlog = decay * rate / ((a2 - decay) * std::numbers::ln2);
  return k / ((k + data) * (k + data)) * log_term + data / (k + data) * dlog;
}

struct ScaResult {
  long n = 1;
  int steps = 0;
};

// Proximal-linear SCA on the continuous relaxation of n over [1, n_max],
// followed by n* = floor(x). Each step maximizes the first-order expansion
// minus (rho/2)(x - x_r)^2; rho starts at the local curvature and doubles
// until the step ascends. Never returns a point worse than `n_start`.
inline ScaResult sca_data_symbols(int pilots, double snr, double doppler, const RadioParams& p,
                                  const LinkLimits& lim, long n_start, const OptimizerConfig& cfg) {
  const long n_max = max_data_symbols(pilots, snr, lim.gamma_th, doppler, p, lim.td_cap_symbols);
  if (n_max < 1) throw Infeasible("C1", -1, "sca: no data duration satisfies the SNR threshold");

  auto se = [&](double x) { return frame_se_direct(pilots, x, snr, doppler, p); };
  auto grad = [&](double x) { return se_data_gradient(pilots, x, snr, doppler, p); };
  const double lo = 1.0, hi = static_cast<double>(n_max);
  const double tol_symbols = cfg.sca_tol / p.T0;

  double x = std::clamp(static_cast<double>(n_start), lo, hi);
  ScaResult out;
  for (int r = 0; r < cfg.sca_max_steps && hi > lo; ++r) {
    ++out.steps;
    const double g = grad(x);
    const double h_step = 1e-4 * std::max(1.0, x);
    const double curvature = -(grad(x + h_step) - grad(std::max(lo, x - h_step))) / (x + h_step - std::max(lo, x - h_step));
    double rho = std::max({curvature, std::abs(g) / (hi - lo), 1e-300});
    const double f0 = se(x);
    double next = x;
    for (int tries = 0; tries < 80; ++tries) {
      const double cand = std::clamp(x + g / rho, lo, hi);
      if (se(cand) >= f0) {
        next = cand;
        break;
      }
      rho *= 2;
    }
    const double moved = std::abs(next - x);
    x = next;
    if (moved < tol_symbols) break;
  }

  out.n = std::clamp(static_cast<long>(std::floor(x)), 1L, n_max);
  if (n_start >= 1 && n_start <= n_max && se(static_cast<double>(n_start)) > se(static_cast<double>(out.n)))
    out.n = n_start;
  return out;
}

// Seconds wrapper: T_d* = T0 floor(T_d / T0).
inline double sca_transmission_step(int pilots, double snr, double doppler, const RadioParams& p,
                                    const LinkLimits& lim, double td_start, const OptimizerConfig& cfg) {
  const long n0 = std::max(1L, static_cast<long>(std::floor(td_start / p.T0 * (1 + 1e-12))));
  return static_cast<double>(sca_data_symbols(pilots, snr, doppler, p, lim, n0, cfg).n) * p.T0;
}

// ---------------------------------------------------------------------------
// Pilot length (enumeration)

// Exact maximizer of the frame SE over k in [1, k_max] among k meeting C1;
// ties go to the smaller k.
inline int pilot_length_step(long data, double snr, double doppler, const RadioParams& p,
                             const LinkLimits& lim, int k_max) {
  require(data >= 1 && k_max >= 1, "pilot_length_step: need n >= 1 and k_max >= 1");
  int best_k = 0;
  double best = -1.0;
  const double alpha = correlation(static_cast<double>(data), doppler, p);
  for (int k = 1; k <= k_max; ++k) {
    const double ge = effective_snr(snr, estimation_mse(k, snr, alpha).total);
    if (ge < lim.gamma_th) continue;
    const double v = static_cast<double>(data) / (k + data) * std::log2(1.0 + ge);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  if (best_k == 0) throw Infeasible("C1", -1, "pilot_length_step: no pilot length meets the SNR threshold");
  return best_k;
}

// ---------------------------------------------------------------------------
// Power allocation (KKT)

struct PowerFrame {
  int k = 1;
  long n = 1;
  double gain = 0.0;     // SNR per watt
  double doppler = 0.0;  // Hz
};

namespace detail {

struct SeShape {
  double weight;  // n / (k + n)
  double k;
  double b2;      // 1 - alpha at frame end
};

inline SeShape se_shape(const PowerFrame& f, const RadioParams& p) {
  return {static_cast<double>(f.n) / (f.k + f.n), static_cast<double>(f.k),
          1.0 - correlation(static_cast<double>(f.n), f.doppler, p)};
}

// eta(g) = w [log2(1+g) + log2(1+kg) - log2(1 + (k+1) g + 2 k B2 g^2)]
inline double se_of_snr(const SeShape& s, double g) {
  const double q = 1 + (s.k + 1) * g + 2 * s.k * s.b2 * g * g;
  return s.weight * std::log2((1 + g) * (1 + s.k * g) / q);
}

inline double dse_dsnr(const SeShape& s, double g) {
  const double q = 1 + (s.k + 1) * g + 2 * s.k * s.b2 * g * g;
  const double dq = (s.k + 1) + 4 * s.k * s.b2 * g;
  return s.weight / std::numbers::ln2 * (1 / (1 + g) + s.k / (1 + s.k * g) - dq / q);
}

inline double d2se_dsnr2(const SeShape& s, double g) {
  const double q = 1 + (s.k + 1) * g + 2 * s.k * s.b2 * g * g;
  const double dq = (s.k + 1) + 4 * s.k * s.b2 * g;
  const double ddq = 4 * s.k * s.b2;
  return s.weight / std::numbers::ln2 *
         (-1 / ((1 + g) * (1 + g)) - s.k * s.k / ((1 + s.k * g) * (1 + s.k * g)) - (ddq * q - dq * dq) / (q * q));
}

}  // namespace detail

// eta(P) of one frame and its derivative with respect to P.
inline double frame_se_at_power(const PowerFrame& f, double power, const RadioParams& p) {
  return detail::se_of_snr(detail::se_shape(f, p), f.gain * power);
}
inline double frame_se_power_derivative(const PowerFrame& f, double power, const RadioParams& p) {
  return f.gain * detail::dse_dsnr(detail::se_shape(f, p), f.gain * power);
}

inline double frame_min_power(const PowerFrame& f, const RadioParams& p, double gamma_th) {
  require(f.gain > 0, "frame_min_power: frame has no link gain");
  const double b2 = 1.0 - correlation(static_cast<double>(f.n), f.doppler, p);
  return min_snr(f.k, b2, gamma_th) / f.gain;
}

struct PowerAllocation {
  std::vector<double> power;
  std::vector<double> p_min;
  double mu = 0.0;
  int iterations = 0;
};

// Solves eta_i'(P_i) = mu on the unconstrained frames, P_i = max(P_i(mu),
// P_min(i)), with mu found by bisection so that sum P_i = P_max.
inline PowerAllocation allocate_power(std::span<const PowerFrame> frames, double p_max, const RadioParams& p,
                                      double gamma_th, double tol = 1e-9) {
  require(!frames.empty(), "allocate_power: need at least one frame");
  require(p_max > 0 && std::isfinite(p_max), "allocate_power: p_max must be > 0");
  const std::size_t n = frames.size();
  PowerAllocation out;
  out.p_min.resize(n);
  out.power.resize(n);
  std::vector<detail::SeShape> shape(n);
  double min_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(frames[i].gain > 0))
      throw Infeasible("C1", static_cast<int>(i), "allocate_power: frame " + std::to_string(i) + " has no link gain");
    try {
      out.p_min[i] = frame_min_power(frames[i], p, gamma_th);
    } catch (const Infeasible& e) {
      throw Infeasible(e.constraint(), static_cast<int>(i),
                       "allocate_power: frame " + std::to_string(i) + ": " + e.what());
    }
    shape[i] = detail::se_shape(frames[i], p);
    min_total += out.p_min[i];
  }
  if (min_total > p_max * (1 + 1e-12))
    throw Infeasible("C5", -1, "allocate_power: budget below the sum of per-frame minimum powers");

  // Power of frame i at multiplier mu: Newton on eta'(P) = mu, kept inside a bisection bracket.
  auto power_at = [&](std::size_t i, double mu) {
    const double g = frames[i].gain;
    auto deriv = [&](double P) { return g * detail::dse_dsnr(shape[i], g * P); };
    double lo = out.p_min[i];
    if (deriv(lo) <= mu) return lo;
    double hi = std::max(2 * lo, 1e-12);
    while (deriv(hi) > mu && hi < 1e12 * p_max) hi *= 2;
    double P = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const double f = deriv(P) - mu;
      if (f > 0) lo = P; else hi = P;
      const double slope = g * g * detail::d2se_dsnr2(shape[i], g * P);
      double next = slope < 0 ? P - f / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - P) <= 1e-15 * P || hi - lo <= 1e-15 * hi) {
        P = next;
        break;
      }
      P = next;
    }
    return P;
  };
  auto total_at = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += out.power[i] = power_at(i, mu);
    return s;
  };

  double mu_hi = 0.0, mu_lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = frames[i].gain * detail::dse_dsnr(shape[i], frames[i].gain * out.p_min[i]);
    mu_hi = std::max(mu_hi, d);
    mu_lo = std::min(mu_lo, d);
  }
  // At mu_hi every frame sits at P_min; shrink mu_lo until the budget is exceeded.
  mu_lo = std::min(mu_lo, mu_hi) * 0.5;
  while (total_at(mu_lo) < p_max && mu_lo > 1e-300) mu_lo *= 0.25;

  double mu = mu_lo;
  for (int it = 0; it < 200; ++it) {
    ++out.iterations;
    mu = std::sqrt(mu_lo * mu_hi);
    if (!(mu > mu_lo && mu < mu_hi)) mu = 0.5 * (mu_lo + mu_hi);
    const double total = total_at(mu);
    if (std::abs(total - p_max) <= 0.1 * tol * p_max) break;
    if (total > p_max) mu_lo = mu; else mu_hi = mu;
    if (mu_hi - mu_lo <= 1e-15 * mu_hi) break;
  }
  out.mu = mu;

  // Spread the residual over frames above their minimum so the budget holds with equality.
  double total = 0.0, free_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += out.power[i];
    if (out.power[i] > out.p_min[i]) free_total += out.power[i];
  }
  const double residual = p_max - total;
  if (free_total > 0) {
    for (std::size_t i = 0; i < n; ++i)
      if (out.power[i] > out.p_min[i]) out.power[i] += residual * out.power[i] / free_total;
  } else {
    for (std::size_t i = 0; i < n; ++i) out.power[i] += residual / static_cast<double>(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Outer loop

enum class FrameStructureStep {
  kScaThenPilot,  // data duration by SCA, then pilot length by enumeration
  kExhaustive,    // joint (k, n) grid per frame
  kFixed,         // frame structure held at the initial plan
};

struct SolverStrategy {
  FrameStructureStep frame_step = FrameStructureStep::kScaThenPilot;
  bool optimize_beamwidth = true;
  std::optional<double> initial_beamwidth;  // defaults to the closed form on the initial frames
  std::optional<int> initial_k;
  std::optional<long> initial_n;
  // kExhaustive grid
  int grid_k_max = 64;
  long grid_n_max = 10000;
  long grid_n_step = 1;
};

struct SolveTrace {
  double initial_objective = 0.0;
  std::vector<double> objectives;                  // after each outer iteration
  std::vector<std::array<double, 4>> block_objectives;  // after each block of each iteration
  std::vector<std::vector<FramePlan>> history;     // decisions after each iteration
  std::string termination;

  int iterations() const { return static_cast<int>(objectives.size()); }
};

struct SolveResult {
  Evaluation eval;
  SolveTrace trace;
};

namespace detail {

// Candidate `cand` replaces `cur` if it has fewer violated frames, or as many
// and an objective that does not decrease.
inline bool improves(const Evaluation& cand, const Evaluation& cur) {
  if (cand.violations != cur.violations) return cand.violations < cur.violations;
  return cand.average_se >= cur.average_se;
}

inline std::vector<FramePlan> decisions(const Evaluation& e) { return e.plans; }

inline std::optional<double> aligned_snr(const FrameEnv& env, const FramePlan& p, const RadioParams& radio) {
  if (!env.covers(p.beamwidth)) return std::nullopt;
  return instantaneous_snr(p.power, p.beamwidth, env.geom.d, radio);
}

// Best (k, n) on the grid for a frame with fixed SNR; nullopt if none meets C1.
inline std::optional<std::pair<int, long>> exhaustive_frame(double snr, double doppler, const RadioParams& p,
                                                            const LinkLimits& lim, const SolverStrategy& st) {
  std::optional<std::pair<int, long>> best;
  double best_se = -1.0;
  for (int k = 1; k <= st.grid_k_max; ++k) {
    long n_max = 0;
    try {
      n_max = max_data_symbols(k, snr, lim.gamma_th, doppler, p, lim.td_cap_symbols);
    } catch (const Infeasible&) {
      continue;
    }
    n_max = std::min(n_max, st.grid_n_max);
    auto visit = [&](long n) {
      const double v = frame_se_direct(k, static_cast<double>(n), snr, doppler, p);
      if (v > best_se) {
        best_se = v;
        best = std::make_pair(k, n);
      }
    };
    for (long n = 1; n <= n_max; n += st.grid_n_step) visit(n);
    if (n_max >= 1 && (n_max - 1) % st.grid_n_step != 0) visit(n_max);
  }
  return best;
}

}  // namespace detail

inline std::vector<FramePlan> initial_plan(const LinkScenario& s, const OptimizerConfig& cfg,
                                           const SolverStrategy& st) {
  FramePlan p;
  p.k = st.initial_k.value_or(cfg.init_k);
  p.n = st.initial_n.value_or(cfg.init_n);
  p.beamwidth = st.initial_beamwidth.value_or(s.limits.phi_max);  // refined in solve() when unset
  p.power = s.p_max / s.frames;
  return std::vector<FramePlan>(static_cast<std::size_t>(s.frames), p);
}

// Generic block-coordinate loop; the proposed method and the baselines differ
// only in `strategy`.
inline SolveResult solve(const LinkScenario& s, const OptimizerConfig& cfg, const SolverStrategy& st) {
  s.validate();
  cfg.validate();
  const RadioParams& radio = s.radio;
  const LinkLimits& lim = s.limits;

  SolveResult res;
  Evaluation cur = evaluate_plan(s, initial_plan(s, cfg, st));

  // Forward pass applying `update` to each frame in time order.
  auto forward = [&](auto&& update) {
    Timeline tl(s);
    for (int i = 0; i < s.frames; ++i) {
      const FrameEnv env = tl.next_env();
      FramePlan p = cur.plans[static_cast<std::size_t>(i)];
      update(p, env);
      tl.commit(p, env);
    }
    return std::move(tl).finish();
  };
  auto closed_form_beam = [&](FramePlan& p, const FrameEnv& env) {
    p.beamwidth = optimal_beamwidth(env.geom, env.l_u, env.l_n, lim.phi_min, lim.phi_max);
  };
  if (!st.initial_beamwidth) cur = forward(closed_form_beam);
  res.trace.initial_objective = cur.average_se;

  auto offer = [&](Evaluation cand) {
    if (detail::improves(cand, cur)) cur = std::move(cand);
  };

  auto data_block = [&] {
    offer(forward([&](FramePlan& p, const FrameEnv& env) {
      const auto g = detail::aligned_snr(env, p, radio);
      if (!g || *g <= lim.gamma_th) return;
      try {
        p.n = sca_data_symbols(p.k, *g, env.doppler, radio, lim, p.n, cfg).n;
      } catch (const Infeasible&) {
      }
    }));
  };
  auto pilot_block = [&] {
    offer(forward([&](FramePlan& p, const FrameEnv& env) {
      const auto g = detail::aligned_snr(env, p, radio);
      if (!g) return;
      try {
        p.k = pilot_length_step(p.n, *g, env.doppler, radio, lim, cfg.pilot_k_max);
      } catch (const Infeasible&) {
      }
    }));
  };
  auto exhaustive_block = [&] {
    offer(forward([&](FramePlan& p, const FrameEnv& env) {
      const auto g = detail::aligned_snr(env, p, radio);
      if (!g || *g <= lim.gamma_th) return;
      if (const auto kn = detail::exhaustive_frame(*g, env.doppler, radio, lim, st)) {
        p.k = kn->first;
        p.n = kn->second;
      }
    }));
  };
  auto beam_block = [&] {
    offer(forward(closed_form_beam));
  };
  auto power_block = [&] {
    std::vector<PowerFrame> frames(cur.plans.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& p = cur.plans[i];
      const auto& env = cur.env[i];
      frames[i] = {p.k, p.n, env.covers(p.beamwidth) ? snr_per_watt(p.beamwidth, env.geom.d, radio) : 0.0,
                   env.doppler};
    }
    try {
      const PowerAllocation a = allocate_power(frames, s.p_max, radio, lim.gamma_th, cfg.mu_bisection_tol);
      std::vector<FramePlan> next = cur.plans;
      for (std::size_t i = 0; i < next.size(); ++i) next[i].power = a.power[i];
      offer(evaluate_plan(s, next));
    } catch (const Infeasible&) {
    }
  };

  res.trace.termination = "max_outer_iterations";
  for (int it = 0; it < cfg.max_outer_iterations; ++it) {
    const double before = cur.average_se;
    std::array<double, 4> blocks{};
    switch (st.frame_step) {
      case FrameStructureStep::kScaThenPilot:
        data_block();
        blocks[0] = cur.average_se;
        pilot_block();
        blocks[1] = cur.average_se;
        break;
      case FrameStructureStep::kExhaustive:
        exhaustive_block();
        blocks[0] = blocks[1] = cur.average_se;
        break;
      case FrameStructureStep::kFixed:
        blocks[0] = blocks[1] = cur.average_se;
        break;
    }
    if (st.optimize_beamwidth) beam_block();
    blocks[2] = cur.average_se;
    power_block();
    blocks[3] = cur.average_se;

    res.trace.objectives.push_back(cur.average_se);
    res.trace.block_objectives.push_back(blocks);
    res.trace.history.push_back(detail::decisions(cur));
    const double change = std::abs(cur.average_se - before) / std::max(std::abs(before), 1e-12);
    if (cur.feasible() && change < cfg.convergence_tol) {
      res.trace.termination = "converged";
      break;
    }
  }
  res.eval = std::move(cur);
  return res;
}

inline void require_feasible(const Evaluation& e) {
  if (!e.feasible())
    throw Infeasible(e.first_constraint, e.first_violation,
                     "frame " + std::to_string(e.first_violation) + " violates " + e.first_constraint);
}

// The proposed iterative method. Throws Infeasible naming the first violating
// frame when the converged plan does not meet every constraint.
inline SolveResult optimize(const LinkScenario& s, const OptimizerConfig& cfg = {}) {
  SolveResult r = solve(s, cfg, SolverStrategy{});
  require_feasible(r.eval);
  return r;
}

}  // namespace ilc
