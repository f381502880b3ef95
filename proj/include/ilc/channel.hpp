#pragma once

// Directional antenna gain, link SNR, temporal channel correlation and the
// pilot-based channel estimation error model.

#include <complex>
#include <cstddef>
#include <random>
#include <thread>
#include <vector>

#include "ilc/common.hpp"

namespace ilc {

struct RadioParams {
  double G0 = 2.28;                   // antenna gain constant
  double beta0 = 1e-8;                // channel power at 1 m (-80 dB)
  double sigma0_sq = 1e-14;           // noise power, W (-110 dBm)
  double f_c = 4.9e9;                 // carrier, Hz
  double bandwidth = 1e6;             // B in the correlation exponent, Hz
  double zeta = 1e6;                  // effective bandwidth, Hz
  double chi = std::sqrt(0.32);       // baseband-carrier correlation
  double kappa = 0.8;                 // channel correlation level
  double T0 = 66.7e-6;                // symbol period, s

  void validate() const {
    const double pos[] = {G0, beta0, sigma0_sq, f_c, bandwidth, zeta, T0};
    for (double v : pos) require(std::isfinite(v) && v > 0, "radio parameters must be positive and finite");
    require(kappa > 0 && kappa < 1, "kappa must lie in (0,1)");
    require(chi >= 0 && chi < 1, "chi must lie in [0,1)");
  }
};

// G0 / Phi^2 when both offsets are strictly inside (-Phi, Phi), else 0.
inline double antenna_gain(double half_beamwidth, double offset_theta, double offset_phi,
                           const RadioParams& p) {
  require(half_beamwidth > 0 && half_beamwidth < kPi / 2, "antenna_gain: beamwidth must be in (0, pi/2)");
  if (std::abs(offset_theta) < half_beamwidth && std::abs(offset_phi) < half_beamwidth)
    return p.G0 / (half_beamwidth * half_beamwidth);
  return 0.0;
}

// Linear SNR per watt of transmit power for an aligned beam.
inline double snr_per_watt(double half_beamwidth, double distance, const RadioParams& p) {
  require(half_beamwidth > 0 && distance > 0, "snr_per_watt: beamwidth and distance must be > 0");
  return p.G0 * p.beta0 / (half_beamwidth * half_beamwidth * distance * distance * p.sigma0_sq);
}

inline double instantaneous_snr(double power, double half_beamwidth, double distance,
                                const RadioParams& p) {
  require(power > 0, "instantaneous_snr: power must be > 0");
  return power * snr_per_watt(half_beamwidth, distance, p);
}

// Exponent rate of the correlation per symbol: alpha(n) = kappa^(n * rate).
inline double correlation_rate(double doppler_hz, const RadioParams& p) {
  return doppler_hz / (0.423 * p.bandwidth);
}

// alpha = kappa^(n_gap * f_d / (0.423 B)).
inline double correlation(double n_gap, double doppler_hz, const RadioParams& p) {
  require(n_gap >= 0, "correlation: gap must be >= 0");
  require(doppler_hz >= 0, "correlation: Doppler must be >= 0");
  return std::pow(p.kappa, n_gap * correlation_rate(doppler_hz, p));
}

struct EstimationError {
  double noise_term = 0.0;
  double doppler_term = 0.0;
  double total = 0.0;
};

inline EstimationError estimation_mse(int pilots, double snr, double alpha) {
  if (pilots < 1) throw InvalidInput("estimation_mse: at least one pilot symbol is required");
  require(snr >= 0 && std::isfinite(snr), "estimation_mse: snr must be >= 0");
  require(alpha > 0 && alpha <= 1, "estimation_mse: alpha must lie in (0,1]");
  const double kg = pilots * snr;
  EstimationError e;
  e.noise_term = 1.0 / (1.0 + kg);
  e.doppler_term = 2.0 * kg * (1.0 - alpha) / (1.0 + kg);
  e.total = e.noise_term + e.doppler_term;
  return e;
}

struct MonteCarloMse {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

namespace detail {

inline constexpr std::size_t kMarkovChunk = 4096;

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

inline ChunkSums markov_chunk(int pilots, int gap, double snr, double alpha_step, std::size_t count,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));  // real/imag part of CN(0,1)
  auto cn = [&] { return std::complex<double>(half(rng), half(rng)); };

  const double sqrt_snr = std::sqrt(snr);
  const double innovation = std::sqrt(std::max(0.0, 1.0 - alpha_step * alpha_step));
  const double scale = sqrt_snr / (1.0 + pilots * snr);
  ChunkSums s;
  for (std::size_t t = 0; t < count; ++t) {
    std::complex<double> h = cn();
    // Unit pilots x_j = 1 over a block in which h is held constant.
    std::complex<double> xy{0.0, 0.0};
    for (int j = 0; j < pilots; ++j) xy += sqrt_snr * h + cn();
    const std::complex<double> h_hat = scale * xy;
    for (int j = 0; j < gap; ++j) h = alpha_step * h + innovation * cn();
    const double err = std::norm(h - h_hat);
    s.sum += err;
    s.sum_sq += err * err;
  }
  return s;
}

}  // namespace detail

// Empirical MSE of the pilot MMSE estimate after `gap` first-order Markov
// steps with per-symbol correlation `alpha_step`. Trials are split into fixed
// chunks with derived seeds, so the result does not depend on `workers`.
inline MonteCarloMse simulate_markov_channel(int pilots, int gap, double snr, double alpha_step,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned workers = 1) {
  if (trials < 1) throw InvalidInput("simulate_markov_channel: trials must be >= 1");
  require(pilots >= 1, "simulate_markov_channel: pilots must be >= 1");
  require(gap >= 0, "simulate_markov_channel: gap must be >= 0");
  require(snr >= 0 && std::isfinite(snr), "simulate_markov_channel: snr must be >= 0");
  require(alpha_step >= 0 && alpha_step <= 1, "simulate_markov_channel: alpha_step must lie in [0,1]");

  const std::size_t chunks = (trials + detail::kMarkovChunk - 1) / detail::kMarkovChunk;
  std::vector<detail::ChunkSums> sums(chunks);
  auto run = [&](std::size_t c) {
    const std::size_t begin = c * detail::kMarkovChunk;
    const std::size_t count = std::min(detail::kMarkovChunk, trials - begin);
    sums[c] = detail::markov_chunk(pilots, gap, snr, alpha_step, count, mix_seed(seed, c));
  };

  workers = std::max(1u, workers);
  if (workers == 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run(c);
      });
    for (auto& t : pool) t.join();
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& s : sums) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  MonteCarloMse out;
  out.trials = trials;
  out.mean = sum / static_cast<double>(trials);
  const double var = std::max(0.0, sum_sq / static_cast<double>(trials) - out.mean * out.mean);
  out.std_error = std::sqrt(var / static_cast<double>(trials));
  return out;
}

}  // namespace ilc
