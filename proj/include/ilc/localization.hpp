#pragma once

// Fisher information for 3D node positions: pilot measurement information,
// the inertial (random-walk) recursion, and the resulting posterior bound.

#include <algorithm>
#include <array>
#include <optional>

#include "ilc/channel.hpp"
#include "ilc/common.hpp"
#include "ilc/scenario.hpp"

namespace ilc {

// Symmetric 3x3 information matrix, row-major.
class Fim3 {
 public:
  constexpr Fim3() = default;

  static constexpr Fim3 diagonal(double a, double b, double c) {
    Fim3 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
  }
  static constexpr Fim3 identity() { return diagonal(1, 1, 1); }
  static constexpr Fim3 outer(const Vec3& v) {
    Fim3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = v[i] * v[j];
    return m;
  }

  constexpr double& operator()(int r, int c) { return a_[3 * r + c]; }
  constexpr double operator()(int r, int c) const { return a_[3 * r + c]; }

  constexpr Fim3& operator+=(const Fim3& o) {
    for (int i = 0; i < 9; ++i) a_[i] += o.a_[i];
    return *this;
  }
  constexpr Fim3& operator-=(const Fim3& o) {
    for (int i = 0; i < 9; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  constexpr Fim3& operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
  }
  friend constexpr Fim3 operator+(Fim3 a, const Fim3& b) { return a += b; }
  friend constexpr Fim3 operator-(Fim3 a, const Fim3& b) { return a -= b; }
  friend constexpr Fim3 operator*(Fim3 a, double s) { return a *= s; }
  friend constexpr Fim3 operator*(double s, Fim3 a) { return a *= s; }
  friend constexpr Fim3 operator*(const Fim3& a, const Fim3& b) {
    Fim3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        m(i, j) = s;
      }
    return m;
  }

  constexpr double trace() const { return a_[0] + a_[4] + a_[8]; }

  constexpr double determinant() const {
    const auto& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }

  // Adjugate inverse; nullopt when |det| is below `det_floor`.
  std::optional<Fim3> inverse(double det_floor = 1e-30) const {
    const double det = determinant();
    if (!(std::abs(det) > det_floor) || !std::isfinite(det)) return std::nullopt;
    const auto& m = *this;
    Fim3 r;
    r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return r * (1.0 / det);
  }

  Fim3 symmetrized() const {
    Fim3 m = *this;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) m(i, j) = m(j, i) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return m;
  }

  double asymmetry() const {
    double worst = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
  }

  // Ascending eigenvalues of the symmetric part (closed-form trigonometric solution).
  std::array<double, 3> eigenvalues() const {
    const Fim3 m = symmetrized();
    const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
    std::array<double, 3> ev;
    if (p1 == 0.0) {
      ev = {m(0, 0), m(1, 1), m(2, 2)};
    } else {
      const double q = m.trace() / 3.0;
      const double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                        (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
      const double p = std::sqrt(p2 / 6.0);
      const Fim3 b = (m - identity() * q) * (1.0 / p);
      const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
      const double angle = std::acos(r) / 3.0;
      const double e1 = q + 2.0 * p * std::cos(angle);
      const double e3 = q + 2.0 * p * std::cos(angle + 2.0 * kPi / 3.0);
      ev = {e1, 3.0 * q - e1 - e3, e3};
    }
    std::sort(ev.begin(), ev.end());
    return ev;
  }

  bool is_psd(double tol = 1e-10) const { return eigenvalues()[0] >= -tol; }

  friend bool operator==(const Fim3&, const Fim3&) = default;

 private:
  std::array<double, 9> a_{};
};

struct DirectionVectors {
  Vec3 q_r;      // d(distance)/d(gn position), unitless
  Vec3 q_theta;  // d(elevation)/d(gn position), 1/m
  Vec3 q_phi;    // d(azimuth)/d(gn position), 1/m
};

// Gradients of (c*tau, theta, phi) with respect to the GN position. Flipping
// the sign of any vector (derivatives with respect to the UAV position) leaves
// the pilot information unchanged.
inline DirectionVectors direction_vectors(const LinkGeometry& g) {
  if (g.degenerate)
    throw DegenerateGeometry("direction_vectors: overhead geometry, angle information must be skipped");
  const double ct = std::cos(g.theta), st = std::sin(g.theta);
  const double cp = std::cos(g.phi), sp = std::sin(g.phi);
  DirectionVectors q;
  q.q_r = {-cp * ct, -sp * ct, -st};
  q.q_theta = {cp * st / g.d, sp * st / g.d, -ct / g.d};
  q.q_phi = {sp / (g.d * ct), -cp / (g.d * ct), 0.0};
  return q;
}

// Angle-information settings. The array geometry factor sum_n A_n multiplies
// both angular intensities; the per-angle scales allow independent overrides.
struct AngleInformation {
  double array_factor = 8.0;
  double theta_scale = 1.0;
  double phi_scale = 1.0;

  void validate() const {
    require(std::isfinite(array_factor) && array_factor >= 0, "array_factor must be >= 0");
    require(std::isfinite(theta_scale) && theta_scale >= 0, "theta_scale must be >= 0");
    require(std::isfinite(phi_scale) && phi_scale >= 0, "phi_scale must be >= 0");
  }
};

struct RangingIntensities {
  double lambda_r = 0.0;
  double lambda_theta = 0.0;
  double lambda_phi = 0.0;
};

inline RangingIntensities ranging_intensities(double snr, const RadioParams& p,
                                              const AngleInformation& angle = {}) {
  require(snr >= 0 && std::isfinite(snr), "ranging_intensities: snr must be >= 0");
  const double c2 = kSpeedOfLight * kSpeedOfLight;
  const double range_coeff = 8.0 * kPi * kPi * p.zeta * p.zeta * (1.0 - p.chi * p.chi) / c2;
  const double f = p.zeta * p.chi + p.f_c;
  const double angle_coeff = 8.0 * kPi * kPi * f * f / c2 * angle.array_factor;
  return {range_coeff * snr, angle_coeff * snr * angle.theta_scale, angle_coeff * snr * angle.phi_scale};
}

// lambda_r q_r q_r^T + lambda_theta q_theta q_theta^T + lambda_phi q_phi q_phi^T.
// Overhead geometry keeps only the ranging term.
inline Fim3 pilot_fim(const LinkGeometry& g, const RangingIntensities& li) {
  if (g.degenerate) {
    const Vec3 q_r{0.0, 0.0, g.d_z >= 0 ? -1.0 : 1.0};
    return Fim3::outer(q_r) * li.lambda_r;
  }
  const DirectionVectors q = direction_vectors(g);
  return Fim3::outer(q.q_r) * li.lambda_r + Fim3::outer(q.q_theta) * li.lambda_theta +
         Fim3::outer(q.q_phi) * li.lambda_phi;
}

inline Fim3 inertial_information(const MotionNoise& noise) {
  require(noise.sigma_x > 0 && noise.sigma_y > 0 && noise.sigma_z > 0,
          "inertial information requires strictly positive motion noise");
  return Fim3::diagonal(1.0 / (noise.sigma_x * noise.sigma_x), 1.0 / (noise.sigma_y * noise.sigma_y),
                        1.0 / (noise.sigma_z * noise.sigma_z));
}

// One slot of the Schur-complement recursion
//   J_t = J_tt - D (J_{t-1} + D)^{-1} D,   J_tt = J^p + D (pilot slot) or D.
// D - D(J+D)^{-1}D is evaluated as D (J+D)^{-1} J, which avoids cancellation
// when J is small relative to D.
inline Fim3 recursive_fim(const Fim3& prev, const std::optional<Fim3>& measurement,
                          const MotionNoise& noise) {
  const Fim3 D = inertial_information(noise);
  Fim3 carried;
  if (D.trace() > 0.0) {
    const auto inv = (prev + D).inverse();
    if (!inv) throw NumericalError("recursive_fim: J_{t-1} + D is singular");
    carried = D * (*inv) * prev;
  }
  if (measurement) carried += *measurement;
  return carried.symmetrized();
}

// Sum of the per-axis error variances, tr(J^{-1}); +inf for a singular J.
inline double pcrb_trace(const Fim3& J) {
  const auto inv = J.inverse();
  if (!inv) return std::numeric_limits<double>::infinity();
  return inv->trace();
}

struct UncertaintyRadius {
  double l = 0.0;  // m
};

inline UncertaintyRadius uncertainty_radius(const Fim3& J, double conf_scale = 1.0) {
  require(conf_scale > 0 && std::isfinite(conf_scale), "uncertainty_radius: conf_scale must be > 0");
  const double tr = pcrb_trace(J);
  if (!std::isfinite(tr)) return {std::numeric_limits<double>::infinity()};
  return {conf_scale * std::sqrt(std::max(0.0, tr))};
}

// Information state of one node along a slot timeline. Before the first slot
// the state is empty; the first slot sets J_1 = J_11.
class InformationTrack {
 public:
  explicit InformationTrack(MotionNoise noise) : noise_(noise), D_(inertial_information(noise)) {}

  // Information available at the next slot before its measurement is applied.
  Fim3 predicted() const {
    if (!started_) return D_;
    return recursive_fim(J_, std::nullopt, noise_);
  }

  void step(const std::optional<Fim3>& measurement) {
    if (!started_) {
      J_ = measurement ? D_ + *measurement : D_;
      started_ = true;
    } else {
      J_ = recursive_fim(J_, measurement, noise_);
    }
  }

  void step_many(const std::optional<Fim3>& measurement, long slots) {
    for (long s = 0; s < slots; ++s) step(measurement);
  }

  const Fim3& current() const { return J_; }
  bool started() const { return started_; }

 private:
  MotionNoise noise_;
  Fim3 D_;
  Fim3 J_;
  bool started_ = false;
};

}  // namespace ilc
