#pragma once

// Per-frame spectral efficiency, its feasibility limits, and the minimum
// power that keeps the effective SNR at threshold.

#include <span>
#include <string>

#include "ilc/channel.hpp"
#include "ilc/common.hpp"

namespace ilc {

struct LinkLimits {
  double gamma_th = db_to_linear(3.0);   // linear
  double phi_min = deg_to_rad(5.0);      // rad
  double phi_max = deg_to_rad(30.0);     // rad
  long td_cap_symbols = 10000;           // ceiling on data symbols when C1 does not bind

  void validate() const {
    require(std::isfinite(gamma_th) && gamma_th > 0, "gamma_th must be > 0");
    require(phi_min > 0 && phi_min <= phi_max && phi_max < kPi / 2, "need 0 < phi_min <= phi_max < pi/2");
    require(td_cap_symbols >= 1, "td_cap_symbols must be >= 1");
  }
};

// gamma (1 - delta^2) / (1 + gamma delta^2), floored at 0.
inline double effective_snr(double snr, double delta_sq) {
  require(snr >= 0 && delta_sq >= 0, "effective_snr: snr and delta^2 must be >= 0");
  if (delta_sq >= 1.0) return 0.0;
  return snr * (1.0 - delta_sq) / (1.0 + snr * delta_sq);
}

// Channel estimation error at the end of a frame with `pilots` pilot and
// `data` data symbols (correlation gap = data symbols).
inline double frame_delta_sq(int pilots, double data, double snr, double doppler, const RadioParams& p) {
  return estimation_mse(pilots, snr, correlation(data, doppler, p)).total;
}

// (n / (k + n)) log2(1 + gamma_e): the direct route through the MSE.
inline double frame_se_direct(int pilots, double data, double snr, double doppler, const RadioParams& p) {
  const double ge = effective_snr(snr, frame_delta_sq(pilots, data, snr, doppler, p));
  return data / (pilots + data) * std::log2(1.0 + ge);
}

// Closed-form route: (T_d / (T_s + T_d)) log2(A1 / (A2 - 2 k gamma^2 kappa^(T_d A3))).
// Unlike the direct route it is not floored, so it can go negative when the
// estimate is worse than useless.
inline double frame_se_closed_form(int pilots, double data, double snr, double doppler,
                                   const RadioParams& p) {
  const double k = pilots, g = snr;
  const double a1 = 1 + k * g + g + k * g * g;
  const double a2 = 1 + k * g + g + 2 * k * g * g;
  const double a3 = doppler / (0.423 * p.bandwidth * p.T0);
  const double ts = k * p.T0, td = data * p.T0;
  return td / (ts + td) * std::log2(a1 / (a2 - 2 * k * g * g * std::pow(p.kappa, td * a3)));
}

// Frame decision variables and their cached evaluation.
struct FramePlan {
  int k = 1;                // pilot symbols
  long n = 1;               // data symbols
  double beamwidth = 0.0;   // half-angle, rad
  double power = 0.0;       // W

  // Derived by evaluate_frame.
  double snr = 0.0;
  double delta_sq = 1.0;
  double snr_eff = 0.0;
  double se = 0.0;
  bool covered = true;      // beam spans the location uncertainty footprint

  double pilot_duration(double T0) const { return k * T0; }
  double data_duration(double T0) const { return static_cast<double>(n) * T0; }
  long symbols() const { return k + n; }
};

// Environment a frame is evaluated in.
struct FrameLink {
  double distance = 0.0;  // m
  double doppler = 0.0;   // Hz
  bool covered = true;    // false -> antenna gain 0 toward the GN
};

inline FramePlan evaluate_frame(FramePlan plan, const FrameLink& link, const RadioParams& p) {
  require(plan.k >= 1 && plan.n >= 1, "evaluate_frame: k and n must be >= 1");
  require(plan.power > 0 && plan.beamwidth > 0, "evaluate_frame: power and beamwidth must be > 0");
  plan.covered = link.covered;
  plan.snr = link.covered ? instantaneous_snr(plan.power, plan.beamwidth, link.distance, p) : 0.0;
  plan.delta_sq = frame_delta_sq(plan.k, static_cast<double>(plan.n), plan.snr, link.doppler, p);
  plan.snr_eff = effective_snr(plan.snr, plan.delta_sq);
  plan.se = static_cast<double>(plan.n) / (plan.k + plan.n) * std::log2(1.0 + plan.snr_eff);
  return plan;
}

// Empty string when the plan satisfies C1-C5 (per frame), else the constraint name.
inline std::string frame_violation(const FramePlan& plan, const LinkLimits& lim) {
  if (plan.k < 1 || plan.n < 1) return "C2";
  if (plan.beamwidth < lim.phi_min * (1 - 1e-12) || plan.beamwidth > lim.phi_max * (1 + 1e-12)) return "C4";
  if (!(plan.power > 0)) return "C5";
  if (!plan.covered) return "C1 (beam misses uncertainty footprint)";
  if (plan.snr_eff < lim.gamma_th * (1 - 1e-9)) return "C1";
  return {};
}

// Checked SE of one frame; throws Infeasible when C1 fails.
inline double frame_se(const FramePlan& plan, const FrameLink& link, const RadioParams& p,
                       const LinkLimits& lim, int frame_index = -1) {
  const FramePlan e = evaluate_frame(plan, link, p);
  const std::string v = frame_violation(e, lim);
  if (!v.empty())
    throw Infeasible(v, frame_index, "frame " + std::to_string(frame_index) + " violates " + v);
  return e.se;
}

// Mean of the cached per-frame SE. With `checked`, any infeasible frame throws.
inline double average_se(std::span<const FramePlan> plans, const LinkLimits& lim, bool checked = true) {
  require(!plans.empty(), "average_se: need at least one frame");
  double sum = 0.0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (checked) {
      const std::string v = frame_violation(plans[i], lim);
      if (!v.empty()) throw Infeasible(v, static_cast<int>(i), "frame " + std::to_string(i) + " violates " + v);
    }
    sum += plans[i].se;
  }
  return sum / static_cast<double>(plans.size());
}

// Upper bound on delta^2 implied by gamma_e >= gamma_th.
inline double delta_sq_bound(double snr, double gamma_th) {
  return (snr - gamma_th) / (snr + snr * gamma_th);
}

// Longest data duration (s) keeping gamma_e >= gamma_th with k pilots:
// solves delta^2(T_d) = bound exactly; `cap_seconds` when f_d = 0.
inline double max_transmission_duration(int pilots, double snr, double gamma_th, double doppler,
                                        const RadioParams& p, double cap_seconds) {
  require(pilots >= 1, "max_transmission_duration: pilots must be >= 1");
  require(doppler >= 0 && cap_seconds > 0, "max_transmission_duration: bad Doppler or cap");
  if (!(snr > gamma_th))
    throw Infeasible("C1", -1, "max_transmission_duration: snr does not exceed the threshold");
  const double kg = pilots * snr;
  const double bound = delta_sq_bound(snr, gamma_th);
  // delta^2 = (1 + 2 kg (1 - alpha)) / (1 + kg) <= bound  <=>  alpha >= alpha_min
  const double alpha_min = 1.0 - (bound * (1.0 + kg) - 1.0) / (2.0 * kg);
  if (alpha_min >= 1.0)
    throw Infeasible("C1", -1, "max_transmission_duration: noise alone exceeds the error bound for this k");
  if (doppler == 0.0) return cap_seconds;
  const double symbols = std::log(alpha_min) / (correlation_rate(doppler, p) * std::log(p.kappa));
  return std::min(cap_seconds, symbols * p.T0);
}

// Integer data-symbol version of max_transmission_duration (floor of T_d^max / T0).
inline long max_data_symbols(int pilots, double snr, double gamma_th, double doppler, const RadioParams& p,
                             long cap_symbols) {
  const double t = max_transmission_duration(pilots, snr, gamma_th, doppler, p, cap_symbols * p.T0);
  return std::min(cap_symbols, static_cast<long>(std::floor(t / p.T0 * (1 + 1e-12))));
}

// Positive root of D1 g^2 + gamma_th (k+1) g + gamma_th = 0 with
// D1 = 2 k B2 gamma_th + 2 k B2 - k, where B2 = 1 - alpha at frame end.
inline double min_snr(int pilots, double one_minus_alpha, double gamma_th) {
  require(pilots >= 1, "min_snr: pilots must be >= 1");
  require(one_minus_alpha >= 0 && gamma_th >= 0, "min_snr: bad inputs");
  const double k = pilots;
  const double d1 = 2 * k * one_minus_alpha * gamma_th + 2 * k * one_minus_alpha - k;
  if (!(d1 < 0))
    throw Infeasible("C1", -1, "min_snr: Doppler decorrelation makes the threshold unreachable at any power");
  if (gamma_th == 0) return 0.0;
  const double b = gamma_th * (k + 1);
  double disc = b * b - 4 * d1 * gamma_th;
  if (disc < 0 && disc > -1e-12) disc = 0;
  const double q = -0.5 * (b + std::sqrt(disc));
  return q / d1;
}

inline double min_power(int pilots, double one_minus_alpha, double gamma_th, double half_beamwidth,
                        double distance, const RadioParams& p) {
  return min_snr(pilots, one_minus_alpha, gamma_th) / snr_per_watt(half_beamwidth, distance, p);
}

}  // namespace ilc
