#pragma once

// Built-in experiment presets. Each is a complete config document; the files
// under presets/ are the same text.

#include <string>
#include <string_view>
#include <vector>

#include "ilc/harness/config.hpp"

namespace ilc::harness {

struct Preset {
  std::string_view name;
  std::string_view summary;
  std::string_view text;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"fig3", "objective per outer iteration, N = 100, v = 50 m/s, P_max in {2, 4, 8} W",
       R"({
  "id": "fig3",
  "description": "Convergence of the iterative method. Straight constant-velocity pass: the UAV starts at (400, 100, 100) m and flies along +x; the GN is static at (500, 100, 0) m.",
  "frames": 100,
  "geometry": {"area": [1000, 200, 100], "uav_start": [400, 100, 100], "uav_direction": [1, 0, 0], "gn_position": [500, 100, 0]},
  "sweep": {"velocities": [50], "p_max": [2, 4, 8], "methods": ["proposed"]},
  "seed": 1
}
)"},
      {"fig4", "average SE against data duration with k = 5, P_max in {2, 4, 8} W, v in {10, 50} m/s",
       R"({
  "id": "fig4",
  "description": "Data-duration sweep with five pilot symbols per frame; beamwidth and power follow their closed forms at every grid point.",
  "frames": 100,
  "geometry": {"area": [1000, 200, 100], "uav_start": [400, 100, 100], "uav_direction": [1, 0, 0], "gn_position": [500, 100, 0]},
  "sweep": {"velocities": [10, 50], "p_max": [2, 4, 8], "methods": []},
  "data_sweep": {"k": 5, "points": 200, "n_min": 1, "n_max": 200},
  "seed": 1
}
)"},
      {"fig5", "average SE against relative velocity, all methods, P_max = 4 W",
       R"({
  "id": "fig5",
  "description": "Velocity sweep for every method at 4 W.",
  "frames": 100,
  "geometry": {"area": [1000, 200, 100], "uav_start": [400, 100, 100], "uav_direction": [1, 0, 0], "gn_position": [500, 100, 0]},
  "sweep": {"velocities": [10, 20, 30, 40, 50], "p_max": [4], "methods": ["proposed", "upper_bound", "benchmark1", "benchmark2", "benchmark3"]},
  "seed": 1
}
)"},
      {"fig6", "PTR against relative velocity, P_max = 4 W",
       R"({
  "id": "fig6",
  "description": "Velocity sweep at 4 W; read the ptr column.",
  "frames": 100,
  "geometry": {"area": [1000, 200, 100], "uav_start": [400, 100, 100], "uav_direction": [1, 0, 0], "gn_position": [500, 100, 0]},
  "sweep": {"velocities": [10, 20, 30, 40, 50], "p_max": [4], "methods": ["proposed", "upper_bound", "benchmark1", "benchmark2", "benchmark3"]},
  "seed": 1
}
)"},
      {"fig7", "average SE against P_max at v = 10 m/s, fixed-frame PTR 1/30",
       R"({
  "id": "fig7",
  "description": "Power sweep for every method at 10 m/s; the fixed-frame benchmark uses PTR 1/30.",
  "frames": 100,
  "geometry": {"area": [1000, 200, 100], "uav_start": [400, 100, 100], "uav_direction": [1, 0, 0], "gn_position": [500, 100, 0]},
  "sweep": {"velocities": [10], "p_max": [1, 2, 4, 6, 8], "methods": ["proposed", "upper_bound", "benchmark1", "benchmark2", "benchmark3"]},
  "baselines": {"fixed_ptr": 0.03333333333333333},
  "seed": 1
}
)"},
      {"fig8", "PTR against P_max at v = 10 m/s",
       R"({
  "id": "fig8",
  "description": "Power sweep at 10 m/s; read the ptr column.",
  "frames": 100,
  "geometry": {"area": [1000, 200, 100], "uav_start": [400, 100, 100], "uav_direction": [1, 0, 0], "gn_position": [500, 100, 0]},
  "sweep": {"velocities": [10], "p_max": [1, 2, 4, 6, 8], "methods": ["proposed", "upper_bound", "benchmark1", "benchmark2", "benchmark3"]},
  "baselines": {"fixed_ptr": 0.03333333333333333},
  "seed": 1
}
)"},
  };
  return all;
}

inline const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

inline ExperimentConfig preset_config(std::string_view name) {
  const Preset* p = find_preset(name);
  if (!p) throw ConfigError("", 0, 0, "unknown preset '" + std::string(name) + "'");
  return parse_config(p->text);
}

}  // namespace ilc::harness
