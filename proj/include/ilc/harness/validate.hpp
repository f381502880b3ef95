#pragma once

// Oracle suite: each check compares a closed form or sub-solver with an
// independent reference on randomized instances and reports the worst error.

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ilc/baselines.hpp"
#include "ilc/harness/results.hpp"
#include "ilc/oracles.hpp"

namespace ilc::harness {

enum class Fault {
  kNone,
  kLambdaThetaSign,  // elevation information enters the pilot FIM with the wrong sign
};

struct ValidationOptions {
  std::size_t mc_trials = 1'000'000;
  int mc_gap = 8;
  int fd_geometries = 1000;
  int sca_frames = 100;
  int pilot_configs = 100;
  int kkt_instances = 50;
  int beam_geometries = 100;
  int identity_plans = 1000;
  std::uint64_t seed = 7;
  unsigned workers = 1;
  Fault fault = Fault::kNone;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst error or ratio, check specific
  double threshold = 0.0;
  std::string detail;      // offending configuration when failed
  double seconds = 0.0;
};

namespace detail {

inline double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline std::string fmt(double v) { return fmt17(v); }

template <class Fn>
CheckResult timed(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r = fn();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Random UAV/GN pair in the 1000 x 200 x 100 m box, UAV above the GN.
inline std::pair<Vec3, Vec3> random_pair(Rng& rng) {
  std::uniform_real_distribution<double> x(0, 1000), y(0, 200), zu(20, 100), zg(0, 10);
  return {{x(rng), y(rng), zu(rng)}, {x(rng), y(rng), zg(rng)}};
}

}  // namespace detail

// Empirical MSE of the Markov-channel simulation against the closed form,
// over k in {1, 4, 16}, snr in {0.5, 5, 50}, end-of-gap alpha in {0.99, 0.9, 0.6}.
inline CheckResult check_markov_mse(const ValidationOptions& o) {
  return detail::timed([&] {
    CheckResult r{"markov-mse", true, 0.0, 0.02, "", 0};
    std::uint64_t idx = 0;
    for (int k : {1, 4, 16})
      for (double g : {0.5, 5.0, 50.0})
        for (double alpha : {0.99, 0.9, 0.6}) {
          const double step = std::pow(alpha, 1.0 / o.mc_gap);
          const auto mc = simulate_markov_channel(k, o.mc_gap, g, step, o.mc_trials, mix_seed(o.seed, idx++), o.workers);
          const double ref = estimation_mse(k, g, alpha).total;
          const double err = std::abs(mc.mean - ref) / ref;
          if (err > r.measured) r.measured = err;
          if (err > r.threshold && r.passed) {
            r.passed = false;
            r.detail = "k=" + std::to_string(k) + " snr=" + detail::fmt(g) + " alpha=" + detail::fmt(alpha) +
                       " empirical=" + detail::fmt(mc.mean) + " closed_form=" + detail::fmt(ref);
          }
        }
    return r;
  });
}

// Direction vectors against central differences; pilot FIM eigenvalues >= 0.
inline std::pair<CheckResult, CheckResult> check_direction_vectors(const ValidationOptions& o) {
  CheckResult fd{"direction-vectors-fd", true, 0.0, 1e-6, "", 0};
  CheckResult psd{"pilot-fim-psd", true, 0.0, 0.0, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(mix_seed(o.seed, 1001));
  const RadioParams radio;
  double worst_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.fd_geometries; ++i) {
    const auto [uav, gn] = detail::random_pair(rng);
    const LinkGeometry g = link_geometry({uav, {}, 0}, {gn, {}, 0});
    const DirectionVectors q = direction_vectors(g);
    const double step = 1e-5 * std::min({g.d, g.d_h, g.d_z}) / g.d;
    const DirectionVectors ref = oracle::finite_difference_directions(uav, gn, step);
    const std::array<std::pair<Vec3, Vec3>, 3> pairs{{{q.q_r, ref.q_r}, {q.q_theta, ref.q_theta}, {q.q_phi, ref.q_phi}}};
    for (const auto& [a, b] : pairs) {
      const double err = (a - b).norm() / a.norm();
      fd.measured = std::max(fd.measured, err);
      if (err > fd.threshold && fd.passed) {
        fd.passed = false;
        fd.detail = "uav=(" + detail::fmt(uav.x) + "," + detail::fmt(uav.y) + "," + detail::fmt(uav.z) + ") gn=(" +
                    detail::fmt(gn.x) + "," + detail::fmt(gn.y) + "," + detail::fmt(gn.z) + ")";
      }
    }
    RangingIntensities li = ranging_intensities(detail::log_uniform(rng, 1e-2, 1e6), radio);
    if (o.fault == Fault::kLambdaThetaSign) li.lambda_theta = -li.lambda_theta;
    const Fim3 J = pilot_fim(g, li);
    const auto ev = J.eigenvalues();
    const double rel = ev[0] / std::max(ev[2], 1e-300);
    worst_eig = std::min(worst_eig, rel);
    if (!J.is_psd(1e-10 * std::max(1.0, ev[2])) && psd.passed) {
      psd.passed = false;
      psd.detail = "geometry " + std::to_string(i) + ": smallest eigenvalue " + detail::fmt(ev[0]);
    }
  }
  psd.measured = worst_eig;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fd.seconds = psd.seconds = secs;
  return {fd, psd};
}

// SCA data duration within one symbol of the grid-search optimum.
inline CheckResult check_sca(const ValidationOptions& o) {
  return detail::timed([&] {
    CheckResult r{"sca-data-duration", true, 0.0, 1.0, "", 0};
    Rng rng(mix_seed(o.seed, 2002));
    const RadioParams p;
    const LinkLimits lim;
    const OptimizerConfig cfg;
    std::uniform_int_distribution<int> kd(1, 10);
    std::uniform_real_distribution<double> fd(0.0, 1000.0);
    int done = 0;
    for (int attempt = 0; done < o.sca_frames && attempt < 100 * o.sca_frames; ++attempt) {
      const int k = kd(rng);
      const double snr = detail::log_uniform(rng, 1.5 * lim.gamma_th, 1e4);
      const double dop = attempt % 10 == 0 ? 0.0 : fd(rng);
      long n_max = 0;
      try {
        n_max = max_data_symbols(k, snr, lim.gamma_th, dop, p, lim.td_cap_symbols);
      } catch (const Infeasible&) {
        continue;
      }
      if (n_max < 1) continue;
      ++done;
      std::uniform_int_distribution<long> start(1, std::max(1L, n_max));
      const long n0 = start(rng);
      const long got = sca_data_symbols(k, snr, dop, p, lim, n0, cfg).n;
      const long ref = oracle::grid_best_data_symbols(k, snr, dop, p, lim);
      const double gap = std::abs(static_cast<double>(got - ref));
      r.measured = std::max(r.measured, gap);
      if (gap > r.threshold && r.passed) {
        r.passed = false;
        r.detail = "k=" + std::to_string(k) + " snr=" + detail::fmt(snr) + " f_d=" + detail::fmt(dop) +
                   " start=" + std::to_string(n0) + " sca=" + std::to_string(got) + " grid=" + std::to_string(ref);
      }
    }
    if (done < o.sca_frames) {
      r.passed = false;
      r.detail = "only " + std::to_string(done) + " feasible frames generated";
    }
    return r;
  });
}

// Pilot enumeration against brute force and against 5-start local search.
inline CheckResult check_pilots(const ValidationOptions& o) {
  return detail::timed([&] {
    CheckResult r{"pilot-enumeration", true, 0.0, 0.0, "", 0};
    Rng rng(mix_seed(o.seed, 3003));
    const RadioParams p;
    const LinkLimits lim;
    const int k_max = OptimizerConfig{}.pilot_k_max;
    std::uniform_int_distribution<long> nd(1, 400);
    std::uniform_real_distribution<double> fd(0.0, 1000.0);
    for (int i = 0; i < o.pilot_configs; ++i) {
      const long n = nd(rng);
      const double snr = detail::log_uniform(rng, 1.0, 1e4);
      const double dop = fd(rng);
      int got = 0;
      try {
        got = pilot_length_step(n, snr, dop, p, lim, k_max);
      } catch (const Infeasible&) {
        got = 0;
      }
      int brute = 0;
      double best = -1.0;
      for (int k = 1; k <= k_max; ++k) {
        const double v = oracle::pilot_objective(k, n, snr, dop, p, lim);
        if (v >= 0 && v > best) {
          best = v;
          brute = k;
        }
      }
      const int local = oracle::local_search_pilots(n, snr, dop, p, lim, k_max, 5, rng);
      const double f_got = got ? oracle::pilot_objective(got, n, snr, dop, p, lim) : -1.0;
      const double f_local = local ? oracle::pilot_objective(local, n, snr, dop, p, lim) : -1.0;
      const double deficit = std::max(0.0, f_local - f_got);
      r.measured = std::max(r.measured, deficit);
      if ((got != brute || deficit > 0) && r.passed) {
        r.passed = false;
        r.detail = "n=" + std::to_string(n) + " snr=" + detail::fmt(snr) + " f_d=" + detail::fmt(dop) +
                   " enumeration=" + std::to_string(got) + " brute=" + std::to_string(brute) +
                   " local=" + std::to_string(local);
      }
    }
    return r;
  });
}

// KKT power allocation against projected gradient ascent on 3-10 frames.
inline CheckResult check_kkt(const ValidationOptions& o) {
  return detail::timed([&] {
    CheckResult r{"kkt-power", true, 0.0, 1e-3, "", 0};
    Rng rng(mix_seed(o.seed, 4004));
    const RadioParams p;
    const LinkLimits lim;
    std::uniform_int_distribution<int> nf(3, 10), kd(1, 8);
    std::uniform_int_distribution<long> nd(5, 200);
    std::uniform_real_distribution<double> fd(0.0, 1000.0), slack(1.2, 5.0);
    int done = 0;
    for (int attempt = 0; done < o.kkt_instances && attempt < 100 * o.kkt_instances; ++attempt) {
      std::vector<PowerFrame> frames(static_cast<std::size_t>(nf(rng)));
      for (auto& f : frames) f = {kd(rng), nd(rng), detail::log_uniform(rng, 1e2, 1e5), fd(rng)};
      double need = 0.0;
      try {
        for (const auto& f : frames) need += frame_min_power(f, p, lim.gamma_th);
      } catch (const Infeasible&) {
        continue;
      }
      const double budget = need * slack(rng);
      const auto kkt = allocate_power(frames, budget, p, lim.gamma_th);
      const auto pg = oracle::projected_gradient_power(frames, budget, p, lim.gamma_th);
      const double f_kkt = oracle::total_se(frames, kkt.power, p);
      const double f_pg = oracle::total_se(frames, pg, p);
      const double gap = (f_pg - f_kkt) / f_pg;
      r.measured = std::max(r.measured, gap);
      if (gap > r.threshold && r.passed) {
        r.passed = false;
        r.detail = "instance " + std::to_string(done) + ": kkt=" + detail::fmt(f_kkt) + " projected=" + detail::fmt(f_pg);
      }
      ++done;
    }
    if (done < o.kkt_instances) {
      r.passed = false;
      r.detail = "only " + std::to_string(done) + " feasible instances generated";
    }
    return r;
  });
}

// Closed-form beamwidth against a grid search maximizing the frame SE, with
// radii taken from the predicted location bound after a random pilot history.
inline CheckResult check_beamwidth(const ValidationOptions& o) {
  return detail::timed([&] {
    CheckResult r{"beamwidth-grid", true, 0.0, 1.0, "", 0};  // measured in grid cells
    Rng rng(mix_seed(o.seed, 5005));
    const RadioParams radio;
    const LinkLimits lim;
    std::uniform_int_distribution<int> kd(1, 8), slots(1, 400);
    std::uniform_real_distribution<double> fd(0.0, 1000.0);
    for (int i = 0; i < o.beam_geometries; ++i) {
      const auto [uav, gn] = detail::random_pair(rng);
      const LinkGeometry g = link_geometry({uav, {}, 0}, {gn, {}, 0});
      const double sigma = detail::log_uniform(rng, 0.005, 1.0);
      const MotionNoise noise{sigma, sigma, sigma};
      FramePlan plan;
      plan.k = kd(rng);
      plan.n = 50;
      plan.power = detail::log_uniform(rng, 0.01, 0.1);
      plan.beamwidth = lim.phi_min;
      const double snr = instantaneous_snr(plan.power, lim.phi_min, g.d, radio);
      const Fim3 jp = pilot_fim(g, ranging_intensities(snr, radio));
      InformationTrack uav_track(noise), gn_track(noise);
      const int history = slots(rng);
      for (int s = 0; s < history; ++s) {
        const bool pilot = s % 50 < plan.k;
        uav_track.step(pilot ? std::optional<Fim3>(jp) : std::nullopt);
        gn_track.step(pilot ? std::optional<Fim3>(jp) : std::nullopt);
      }
      const double l_u = uncertainty_radius(uav_track.predicted()).l;
      const double l_n = uncertainty_radius(gn_track.predicted()).l;
      const double closed = optimal_beamwidth(g, l_u, l_n, lim.phi_min, lim.phi_max);
      const auto grid = oracle::beamwidth_grid_search(g, l_u, l_n, plan, fd(rng), radio, lim);
      const double cells = std::abs(closed - grid.beamwidth) / grid.cell;
      r.measured = std::max(r.measured, cells);
      if (cells > r.threshold && r.passed) {
        r.passed = false;
        r.detail = "d_h=" + detail::fmt(g.d_h) + " d_z=" + detail::fmt(g.d_z) + " l_u=" + detail::fmt(l_u) +
                   " l_n=" + detail::fmt(l_n) + " closed=" + detail::fmt(closed) + " grid=" + detail::fmt(grid.beamwidth);
      }
    }
    return r;
  });
}

// The two SE routes agree; the error at the longest data duration sits on the bound.
inline std::pair<CheckResult, CheckResult> check_identities(const ValidationOptions& o) {
  CheckResult se{"se-identity", true, 0.0, 1e-9, "", 0};
  CheckResult bound{"delta-bound", true, 0.0, 1e-6, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(mix_seed(o.seed, 6006));
  const RadioParams p;
  const LinkLimits lim;
  std::uniform_int_distribution<int> kd(1, 50);
  std::uniform_real_distribution<double> fd(1.0, 1000.0), frac(0.0, 1.0);
  int plans = 0, bounded = 0;
  for (int attempt = 0; plans < o.identity_plans && attempt < 100 * o.identity_plans; ++attempt) {
    const int k = kd(rng);
    const double snr = detail::log_uniform(rng, 1.01 * lim.gamma_th, 1e5);
    const double dop = fd(rng);
    double td_max = 0.0;
    try {
      td_max = max_transmission_duration(k, snr, lim.gamma_th, dop, p, lim.td_cap_symbols * p.T0);
    } catch (const Infeasible&) {
      continue;
    }
    const double n_max = td_max / p.T0;
    if (n_max < 1) continue;
    const long n = 1 + static_cast<long>(frac(rng) * (n_max - 1));
    const double a = frame_se_direct(k, static_cast<double>(n), snr, dop, p);
    const double b = frame_se_closed_form(k, static_cast<double>(n), snr, dop, p);
    const double err = std::abs(a - b) / std::max(1.0, std::abs(a));
    se.measured = std::max(se.measured, err);
    if (err > se.threshold && se.passed) {
      se.passed = false;
      se.detail = "k=" + std::to_string(k) + " n=" + std::to_string(n) + " snr=" + detail::fmt(snr) + " f_d=" + detail::fmt(dop);
    }
    ++plans;
    if (n_max < static_cast<double>(lim.td_cap_symbols)) {
      const double d2 = frame_delta_sq(k, n_max, snr, dop, p);
      const double gap = std::abs(d2 - delta_sq_bound(snr, lim.gamma_th));
      bound.measured = std::max(bound.measured, gap);
      ++bounded;
      if (gap > bound.threshold && bound.passed) {
        bound.passed = false;
        bound.detail = "k=" + std::to_string(k) + " snr=" + detail::fmt(snr) + " f_d=" + detail::fmt(dop);
      }
    }
  }
  if (plans < o.identity_plans) {
    se.passed = false;
    se.detail = "only " + std::to_string(plans) + " feasible plans generated";
  }
  if (bounded == 0) {
    bound.passed = false;
    bound.detail = "no unclamped instance generated";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  se.seconds = bound.seconds = secs;
  return {se, bound};
}

inline std::vector<CheckResult> validate_oracles(const ValidationOptions& o = {}) {
  if (o.mc_trials == 0) throw InvalidInput("validate_oracles: Monte-Carlo trial count must be >= 1");
  std::vector<CheckResult> out;
  out.push_back(check_markov_mse(o));
  auto [fd, psd] = check_direction_vectors(o);
  out.push_back(fd);
  out.push_back(psd);
  out.push_back(check_sca(o));
  out.push_back(check_pilots(o));
  out.push_back(check_kkt(o));
  out.push_back(check_beamwidth(o));
  auto [se, bound] = check_identities(o);
  out.push_back(se);
  out.push_back(bound);
  return out;
}

}  // namespace ilc::harness
