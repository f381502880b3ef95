#pragma once

// Independent reference computations used to cross-check the closed forms
// and sub-solvers. They favour brute force over speed and share no code path
// with the quantities they check beyond the scalar frame objective.

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "ilc/link.hpp"
#include "ilc/localization.hpp"
#include "ilc/optimizer.hpp"
#include "ilc/scenario.hpp"

namespace ilc::oracle {

// Central-difference gradients of (distance, elevation, azimuth) with respect
// to the GN position, computed from raw coordinates.
inline DirectionVectors finite_difference_directions(const Vec3& uav, const Vec3& gn, double rel_step = 1e-5) {
  auto angles = [&](const Vec3& g) {
    const Vec3 d = uav - g;
    return std::array<double, 3>{d.norm(), std::atan2(d.z, std::hypot(d.x, d.y)), std::atan2(d.y, d.x)};
  };
  const double h = rel_step * (uav - gn).norm();
  std::array<Vec3, 3> grad{};
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 e{};
    (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = h;
    const auto plus = angles(gn + e), minus = angles(gn - e);
    for (int q = 0; q < 3; ++q) {
      double diff = plus[q] - minus[q];
      if (q == 2) diff = std::remainder(diff, 2 * kPi);
      double& slot = axis == 0 ? grad[q].x : axis == 1 ? grad[q].y : grad[q].z;
      slot = diff / (2 * h);
    }
  }
  return {grad[0], grad[1], grad[2]};
}

// Largest continuous data duration (symbols) keeping the effective SNR at
// threshold, by bisection on the frame error.
inline double bisect_max_data_symbols(int pilots, double snr, double gamma_th, double doppler,
                                      const RadioParams& p, double cap_symbols) {
  auto ok = [&](double n) { return effective_snr(snr, frame_delta_sq(pilots, n, snr, doppler, p)) >= gamma_th; };
  if (!ok(0.0)) return 0.0;
  if (ok(cap_symbols)) return cap_symbols;
  double lo = 0.0, hi = cap_symbols;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Best integer n by scanning every n up to the C1 limit.
inline long grid_best_data_symbols(int pilots, double snr, double doppler, const RadioParams& p,
                                   const LinkLimits& lim) {
  const long n_max = static_cast<long>(
      std::floor(bisect_max_data_symbols(pilots, snr, lim.gamma_th, doppler, p, static_cast<double>(lim.td_cap_symbols))));
  long best = 0;
  double best_se = -1.0;
  for (long n = 1; n <= n_max; ++n) {
    const double v = frame_se_direct(pilots, static_cast<double>(n), snr, doppler, p);
    if (v > best_se) {
      best_se = v;
      best = n;
    }
  }
  return best;
}

inline double pilot_objective(int k, long n, double snr, double doppler, const RadioParams& p, const LinkLimits& lim) {
  const double ge = effective_snr(snr, frame_delta_sq(k, static_cast<double>(n), snr, doppler, p));
  if (ge < lim.gamma_th) return -1.0;
  return static_cast<double>(n) / (k + n) * std::log2(1.0 + ge);
}

// Best pilot length found by +-1 hill climbing from `starts` random points.
inline int local_search_pilots(long n, double snr, double doppler, const RadioParams& p, const LinkLimits& lim,
                               int k_max, int starts, Rng& rng) {
  std::uniform_int_distribution<int> pick(1, k_max);
  int best_k = 0;
  double best = -1.0;
  for (int s = 0; s < starts; ++s) {
    int k = pick(rng);
    double f = pilot_objective(k, n, snr, doppler, p, lim);
    for (;;) {
      int next = k;
      double fn = f;
      for (int cand : {k - 1, k + 1}) {
        if (cand < 1 || cand > k_max) continue;
        const double fc = pilot_objective(cand, n, snr, doppler, p, lim);
        if (fc > fn) {
          fn = fc;
          next = cand;
        }
      }
      if (next == k) break;
      k = next;
      f = fn;
    }
    if (f > best || (f == best && k < best_k)) {
      best = f;
      best_k = k;
    }
  }
  return best_k;
}

inline double total_se(std::span<const PowerFrame> frames, std::span<const double> power, const RadioParams& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) s += frame_se_at_power(frames[i], power[i], p);
  return s;
}

// Euclidean projection onto {x >= lower, sum x = budget}.
inline std::vector<double> project_budget(std::span<const double> y, std::span<const double> lower, double budget) {
  auto excess = [&](double tau) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::max(lower[i], y[i] - tau);
    return s - budget;
  };
  double lo = -1.0, hi = 1.0;
  while (excess(lo) < 0) lo *= 2;
  while (excess(hi) > 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? lo : hi) = mid;
  }
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::max(lower[i], y[i] - 0.5 * (lo + hi));
  return x;
}

// Projected gradient ascent with backtracking on sum_i eta_i(P_i).
inline std::vector<double> projected_gradient_power(std::span<const PowerFrame> frames, double p_max,
                                                    const RadioParams& p, double gamma_th, int iterations = 20000) {
  const std::size_t n = frames.size();
  std::vector<double> lower(n);
  for (std::size_t i = 0; i < n; ++i) lower[i] = frame_min_power(frames[i], p, gamma_th);
  std::vector<double> x = project_budget(std::vector<double>(n, p_max / static_cast<double>(n)), lower, p_max);
  double f = total_se(frames, x, p);
  double step = p_max;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> g(n), y(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = frame_se_power_derivative(frames[i], x[i], p);
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + step * g[i];
      const auto cand = project_budget(y, lower, p_max);
      const double fc = total_se(frames, cand, p);
      if (fc > f) {
        x = cand;
        f = fc;
        moved = true;
        step *= 2;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

// Smallest half-beamwidth whose cone covers the GN footprint (radius 2 l_n)
// from every UAV position within l_u, found by sampling offsets and
// footprint points in the vertical plane through both nodes.
inline double sampled_required_beamwidth(const LinkGeometry& g, double l_u, double l_n, int samples = 401) {
  double need = 0.0;
  for (int a = 0; a < samples; ++a) {
    const double u = l_u * (2.0 * a / (samples - 1) - 1.0);  // UAV offset toward (+) or away from (-) the GN
    const double centre = g.d_h - u;
    double lo = kPi, hi = -kPi;
    for (int b = 0; b < samples; ++b) {
      const double x = centre + 2 * l_n * (2.0 * b / (samples - 1) - 1.0);
      const double ang = std::atan2(x, g.d_z);
      lo = std::min(lo, ang);
      hi = std::max(hi, ang);
    }
    need = std::max(need, hi - lo);
  }
  return need;
}

struct BeamGridResult {
  double beamwidth = 0.0;
  double cell = 0.0;
  double se = 0.0;
};

// Grid search over [phi_min, phi_max] maximizing the frame SE, with zero SE
// whenever the sampled footprint is not covered.
inline BeamGridResult beamwidth_grid_search(const LinkGeometry& g, double l_u, double l_n, const FramePlan& plan,
                                            double doppler, const RadioParams& p, const LinkLimits& lim,
                                            int points = 2000) {
  const double need = sampled_required_beamwidth(g, l_u, l_n);
  BeamGridResult best;
  best.cell = (lim.phi_max - lim.phi_min) / (points - 1);
  best.se = -1.0;
  for (int i = 0; i < points; ++i) {
    const double phi = lim.phi_min + best.cell * i;
    double se = 0.0;
    if (phi >= need) {
      const double snr = instantaneous_snr(plan.power, phi, g.d, p);
      se = frame_se_direct(plan.k, static_cast<double>(plan.n), snr, doppler, p);
    }
    if (se > best.se) {
      best.se = se;
      best.beamwidth = phi;
    }
  }
  return best;
}

}  // namespace ilc::oracle
