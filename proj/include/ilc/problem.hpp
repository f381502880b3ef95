#pragma once

// A UAV-GN pass split into N frames, and the forward evaluation of a frame
// plan along it: geometry at each frame start, the predicted location bound
// of both nodes, the beam coverage requirement, and per-frame SE.

#include <string>
#include <vector>

#include "ilc/channel.hpp"
#include "ilc/link.hpp"
#include "ilc/localization.hpp"
#include "ilc/scenario.hpp"

namespace ilc {

struct LinkScenario {
  RadioParams radio;
  LinkLimits limits;
  MotionNoise uav_noise;
  MotionNoise gn_noise;
  AngleInformation angle;
  double conf_scale = 1.0;  // multiplier from sqrt(PCRB) to uncertainty radius
  NodeState uav{{400.0, 100.0, 100.0}, {50.0, 0.0, 0.0}, 0};
  NodeState gn{{500.0, 100.0, 0.0}, {0.0, 0.0, 0.0}, 0};
  int frames = 100;
  double p_max = 4.0;  // W, total over all frames

  double relative_speed() const { return (uav.velocity - gn.velocity).norm(); }
  double doppler() const { return doppler_shift(relative_speed(), radio.f_c); }

  void validate() const {
    radio.validate();
    limits.validate();
    uav_noise.validate();
    gn_noise.validate();
    angle.validate();
    require(conf_scale > 0 && std::isfinite(conf_scale), "conf_scale must be > 0");
    require(frames >= 1, "frames must be >= 1");
    require(p_max > 0 && std::isfinite(p_max), "p_max must be > 0");
    require(uav.position.finite() && uav.velocity.finite() && gn.position.finite() && gn.velocity.finite(),
            "node states must be finite");
    require(uav.position.z > gn.position.z, "the UAV must fly above the GN");
  }
};

// Minimum half-beamwidth whose beam spans the uncertainty footprint of the GN
// (radius 2 l_n) seen from a UAV known to within l_u. The predicted pointing
// direction can lie anywhere inside the footprint, so the half-angle must
// cover the footprint's full angular extent.
inline double required_beamwidth(const LinkGeometry& g, double l_u, double l_n) {
  require(l_u >= 0 && l_n >= 0, "required_beamwidth: radii must be >= 0");
  if (!(g.d_z > 0)) throw DegenerateGeometry("required_beamwidth: GN must lie below the UAV");
  if (!std::isfinite(l_u) || !std::isfinite(l_n)) return std::numeric_limits<double>::infinity();
  if (g.d_h >= l_u + 2 * l_n) {
    const double d1 = g.d_h - l_u + 2 * l_n;
    const double d2 = g.d_h - l_u - 2 * l_n;
    return std::atan(d1 / g.d_z) - std::atan(d2 / g.d_z);
  }
  return 2 * std::atan(2 * l_n / g.d_z);
}

// Closed-form beamwidth: the coverage requirement floored at phi_min and
// clamped to phi_max.
inline double optimal_beamwidth(const LinkGeometry& g, double l_u, double l_n, double phi_min,
                                double phi_max) {
  require(phi_min > 0 && phi_min <= phi_max, "optimal_beamwidth: need 0 < phi_min <= phi_max");
  return std::min(phi_max, std::max(required_beamwidth(g, l_u, l_n), phi_min));
}

struct FrameEnv {
  long start_slot = 0;
  LinkGeometry geom;
  double doppler = 0.0;
  double l_u = 0.0;
  double l_n = 0.0;
  double required_beamwidth = 0.0;

  bool covers(double beamwidth) const { return beamwidth >= required_beamwidth * (1 - 1e-12); }
};

struct Evaluation {
  std::vector<FramePlan> plans;  // with derived fields
  std::vector<FrameEnv> env;
  double average_se = 0.0;
  int violations = 0;
  int first_violation = -1;
  std::string first_constraint;

  bool feasible() const { return violations == 0; }
  long total_pilots() const {
    long s = 0;
    for (const auto& p : plans) s += p.k;
    return s;
  }
  long total_data() const {
    long s = 0;
    for (const auto& p : plans) s += p.n;
    return s;
  }
  // Pilot-to-transmission ratio, sum T_s / sum T_d.
  double ptr() const { return static_cast<double>(total_pilots()) / static_cast<double>(total_data()); }
};

// Sequential frame-by-frame evaluation. Frame i's environment depends only on
// frames committed before it.
class Timeline {
 public:
  explicit Timeline(const LinkScenario& s) : s_(s), uav_track_(s.uav_noise), gn_track_(s.gn_noise) {
    eval_.plans.reserve(s.frames);
    eval_.env.reserve(s.frames);
  }

  int frame_index() const { return static_cast<int>(eval_.plans.size()); }

  FrameEnv next_env() const {
    FrameEnv e;
    e.start_slot = slot_;
    const auto slots = static_cast<std::uint64_t>(slot_);
    e.geom = link_geometry(advance(s_.uav, slots, s_.radio.T0), advance(s_.gn, slots, s_.radio.T0));
    e.doppler = s_.doppler();
    e.l_u = uncertainty_radius(uav_track_.predicted(), s_.conf_scale).l;
    e.l_n = uncertainty_radius(gn_track_.predicted(), s_.conf_scale).l;
    e.required_beamwidth = required_beamwidth(e.geom, e.l_u, e.l_n);
    return e;
  }

  // Evaluate `plan` in the next frame's environment and advance past it.
  const FramePlan& commit(const FramePlan& plan) { return commit(plan, next_env()); }

  const FramePlan& commit(const FramePlan& plan, const FrameEnv& env) {
    const FrameLink link{env.geom.d, env.doppler, env.covers(plan.beamwidth)};
    FramePlan done = evaluate_frame(plan, link, s_.radio);

    const Fim3 jp = pilot_fim(env.geom, ranging_intensities(done.snr, s_.radio, s_.angle));
    uav_track_.step_many(jp, done.k);
    gn_track_.step_many(jp, done.k);
    uav_track_.step_many(std::nullopt, done.n);
    gn_track_.step_many(std::nullopt, done.n);
    slot_ += done.k + done.n;

    const std::string v = frame_violation(done, s_.limits);
    if (!v.empty()) {
      if (eval_.violations == 0) {
        eval_.first_violation = frame_index();
        eval_.first_constraint = v;
      }
      ++eval_.violations;
    }
    sum_se_ += done.se;
    eval_.plans.push_back(done);
    eval_.env.push_back(env);
    return eval_.plans.back();
  }

  Evaluation finish() && {
    eval_.average_se = eval_.plans.empty() ? 0.0 : sum_se_ / static_cast<double>(eval_.plans.size());
    return std::move(eval_);
  }

 private:
  const LinkScenario& s_;
  InformationTrack uav_track_;
  InformationTrack gn_track_;
  long slot_ = 0;
  double sum_se_ = 0.0;
  Evaluation eval_;
};

inline Evaluation evaluate_plan(const LinkScenario& s, const std::vector<FramePlan>& plans) {
  require(static_cast<int>(plans.size()) == s.frames, "evaluate_plan: plan count must equal frame count");
  Timeline tl(s);
  for (const auto& p : plans) tl.commit(p);
  return std::move(tl).finish();
}

}  // namespace ilc
