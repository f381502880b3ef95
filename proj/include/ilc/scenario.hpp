#pragma once

// Node kinematics and UAV-to-GN link geometry.

#include <cstdint>
#include <random>

#include "ilc/common.hpp"

namespace ilc {

struct NodeState {
  Vec3 position;              // m
  Vec3 velocity;              // m/s
  std::uint64_t time_index = 0;  // slots elapsed
};

// Per-axis standard deviation of the random-walk term added every slot.
struct MotionNoise {
  double sigma_x = 0.005;
  double sigma_y = 0.005;
  double sigma_z = 0.005;

  void validate() const {
    require(std::isfinite(sigma_x) && std::isfinite(sigma_y) && std::isfinite(sigma_z),
            "motion noise must be finite");
    require(sigma_x >= 0 && sigma_y >= 0 && sigma_z >= 0, "motion noise must be nonnegative");
  }
};

struct LinkGeometry {
  double d = 0.0;      // slant distance, m
  double d_h = 0.0;    // horizontal distance, m
  double d_z = 0.0;    // height gap uav - gn, m
  double theta = 0.0;  // elevation, rad
  double phi = 0.0;    // azimuth, rad
  // Set when d_h == 0: azimuth undefined, reported as 0.
  bool degenerate = false;
};

// position' = position + velocity * slot + w, w ~ N(0, diag(sigma^2)).
inline NodeState step_motion(const NodeState& s, const MotionNoise& noise, double slot_duration,
                             Rng& rng) {
  require(s.velocity.finite(), "step_motion: velocity must be finite");
  require(s.position.finite(), "step_motion: position must be finite");
  require(slot_duration > 0 && std::isfinite(slot_duration), "step_motion: slot duration must be > 0");
  noise.validate();

  std::normal_distribution<double> unit(0.0, 1.0);
  NodeState out = s;
  out.position += s.velocity * slot_duration;
  // Always draw three samples so the stream position does not depend on which sigmas are zero.
  const double wx = unit(rng), wy = unit(rng), wz = unit(rng);
  out.position += Vec3{noise.sigma_x * wx, noise.sigma_y * wy, noise.sigma_z * wz};
  out.time_index = s.time_index + 1;
  return out;
}

// Mean (noise-free) position after `slots` slots of constant-velocity motion.
inline NodeState advance(const NodeState& s, std::uint64_t slots, double slot_duration) {
  NodeState out = s;
  out.position += s.velocity * (static_cast<double>(slots) * slot_duration);
  out.time_index = s.time_index + slots;
  return out;
}

inline LinkGeometry link_geometry(const NodeState& uav, const NodeState& gn) {
  require(uav.position.finite() && gn.position.finite(), "link_geometry: positions must be finite");
  const Vec3 delta = uav.position - gn.position;
  LinkGeometry g;
  g.d = delta.norm();
  if (g.d == 0.0) throw DegenerateGeometry("link_geometry: UAV and GN positions coincide");
  g.d_h = std::hypot(delta.x, delta.y);
  g.d_z = delta.z;
  g.theta = std::atan2(g.d_z, g.d_h);
  if (g.d_h == 0.0) {
    g.phi = 0.0;
    g.degenerate = true;
  } else {
    g.phi = std::atan2(delta.y, delta.x);
  }
  return g;
}

// Displacement uav - gn rebuilt from (d, theta, phi).
inline Vec3 displacement(const LinkGeometry& g) {
  return {g.d * std::cos(g.theta) * std::cos(g.phi), g.d * std::cos(g.theta) * std::sin(g.phi),
          g.d * std::sin(g.theta)};
}

inline double doppler_shift(double relative_speed, double carrier_hz) {
  require(relative_speed >= 0 && std::isfinite(relative_speed), "doppler_shift: speed must be >= 0");
  return relative_speed * carrier_hz / kSpeedOfLight;
}

}  // namespace ilc
