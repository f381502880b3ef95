#pragma once

// Experiment configuration: a strict JSON document layered over built-in
// defaults. Unknown keys, wrong types and out-of-range values are reported
// with the key path and the line/column where the key appears.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ilc/baselines.hpp"
#include "ilc/optimizer.hpp"
#include "ilc/problem.hpp"

namespace ilc::harness {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, int line, int column, const std::string& msg, const std::string& file = {})
      : Error(format(file, key_path, line, column, msg)),
        key_path_(std::move(key_path)),
        line_(line),
        column_(column),
        message_(msg) {}

  const std::string& key_path() const { return key_path_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  static std::string format(const std::string& file, const std::string& path, int line, int column,
                            const std::string& msg) {
    std::string out = file.empty() ? "" : file + ":";
    if (line > 0) out += std::to_string(line) + ":" + std::to_string(column) + ":";
    if (!out.empty()) out += " ";
    if (!path.empty()) out += path + ": ";
    return out + msg;
  }
  std::string key_path_;
  int line_;
  int column_;
  std::string message_;
};

// Line/column of every key and array element in a JSON text, keyed by path
// ("a.b", "a.list[2]"). Only meaningful for text that already parsed.
class SourceMap {
 public:
  SourceMap() = default;
  explicit SourceMap(std::string_view text) { scan(text); }

  std::pair<int, int> find(const std::string& path) const {
    const auto it = pos_.find(path);
    return it == pos_.end() ? std::pair<int, int>{0, 0} : it->second;
  }

 private:
  struct Frame {
    bool is_array;
    std::string path;
    int index = 0;
    std::string pending_key;
  };

  void scan(std::string_view t) {
    std::vector<Frame> stack;
    int line = 1, col = 1;
    bool expect_key = false;
    auto child_path = [&](const Frame& f) {
      return f.is_array ? f.path + "[" + std::to_string(f.index) + "]"
                        : (f.path.empty() ? f.pending_key : f.path + "." + f.pending_key);
    };
    auto mark_value = [&](int l, int c) {
      if (!stack.empty() && stack.back().is_array) pos_.emplace(child_path(stack.back()), std::pair{l, c});
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
      const char ch = t[i];
      const int l = line, c = col;
      auto advance = [&](char x) {
        if (x == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      };
      if (ch == '"') {
        std::string s;
        advance(ch);
        ++i;
        for (; i < t.size() && t[i] != '"'; ++i) {
          if (t[i] == '\\' && i + 1 < t.size()) {
            s += t[i + 1];
            advance(t[i]);
            ++i;
          } else {
            s += t[i];
          }
          advance(t[i]);
        }
        advance('"');
        if (expect_key && !stack.empty() && !stack.back().is_array) {
          stack.back().pending_key = s;
          pos_.emplace(child_path(stack.back()), std::pair{l, c});
          expect_key = false;
        } else {
          mark_value(l, c);
        }
        continue;
      }
      switch (ch) {
        case '{':
        case '[': {
          std::string path = stack.empty() ? std::string{} : child_path(stack.back());
          mark_value(l, c);
          stack.push_back({ch == '[', path, 0, {}});
          expect_key = ch == '{';
          break;
        }
        case '}':
        case ']':
          if (!stack.empty()) stack.pop_back();
          break;
        case ',':
          if (!stack.empty()) {
            if (stack.back().is_array) ++stack.back().index;
            else expect_key = true;
          }
          break;
        default:
          if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ':' && !stack.empty() && stack.back().is_array &&
              (i == 0 || t[i - 1] == '[' || t[i - 1] == ',' || std::isspace(static_cast<unsigned char>(t[i - 1]))))
            mark_value(l, c);
          break;
      }
      advance(ch);
    }
  }

  std::map<std::string, std::pair<int, int>> pos_;
};

struct DataSweep {
  int k = 5;
  int points = 200;
  long n_min = 1;
  long n_max = 200;
};

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> m{"proposed", "upper_bound", "benchmark1", "benchmark2", "benchmark3"};
  return m;
}

struct ExperimentConfig {
  std::string id = "custom";
  std::string description;
  LinkScenario scenario;          // velocity and p_max are overridden per sweep cell
  Vec3 uav_direction{1.0, 0.0, 0.0};
  Vec3 area{1000.0, 200.0, 100.0};
  std::vector<double> velocities{50.0};
  std::vector<double> p_max{4.0};
  std::vector<std::string> methods{"proposed"};
  std::optional<DataSweep> data_sweep;
  OptimizerConfig optimizer;
  BaselineConfig baselines;
  std::uint64_t seed = 1;

  // Scenario for one sweep cell.
  LinkScenario cell(double velocity, double power) const {
    LinkScenario s = scenario;
    s.uav.velocity = uav_direction * (velocity / uav_direction.norm());
    s.p_max = power;
    return s;
  }

  void validate() const {
    scenario.validate();
    optimizer.validate();
    baselines.validate();
    require(uav_direction.finite() && uav_direction.norm() > 0, "uav_direction must be a nonzero vector");
    require(area.x > 0 && area.y > 0 && area.z > 0, "area must be positive");
    auto inside = [&](const Vec3& p) {
      return p.x >= 0 && p.x <= area.x && p.y >= 0 && p.y <= area.y && p.z >= 0 && p.z <= area.z;
    };
    require(inside(scenario.uav.position) && inside(scenario.gn.position), "node start positions must lie in the area");
    for (double v : velocities) require(std::isfinite(v) && v >= 0, "velocities must be >= 0");
    for (double p : p_max) require(std::isfinite(p) && p > 0, "p_max values must be > 0");
    for (const auto& m : methods)
      require(std::find(known_methods().begin(), known_methods().end(), m) != known_methods().end(),
              "unknown method");
    if (data_sweep) {
      require(data_sweep->k >= 1 && data_sweep->points >= 2, "data_sweep needs k >= 1 and points >= 2");
      require(data_sweep->n_min >= 1 && data_sweep->n_max > data_sweep->n_min, "data_sweep needs 1 <= n_min < n_max");
    }
  }
};

namespace detail {

class Reader {
 public:
  explicit Reader(const SourceMap& map) : map_(map) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    const auto [l, c] = map_.find(path);
    throw ConfigError(path, l, c, msg);
  }

  using Field = std::pair<std::string, std::function<void(const json&, const std::string&)>>;

  void object(const json& j, const std::string& path, const std::vector<Field>& fields) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      const std::string sub = path.empty() ? key : path + "." + key;
      const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.first == key; });
      if (it == fields.end()) fail(sub, "unknown key");
      it->second(value, sub);
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }
  double positive(const json& j, const std::string& path) const {
    const double v = number(j, path);
    if (!(v > 0)) fail(path, "must be > 0");
    return v;
  }
  double nonnegative(const json& j, const std::string& path) const {
    const double v = number(j, path);
    if (v < 0) fail(path, "must be >= 0");
    return v;
  }
  long integer(const json& j, const std::string& path, long min) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    const long v = j.get<long>();
    if (v < min) fail(path, "must be >= " + std::to_string(min));
    return v;
  }
  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }
  Vec3 vec3(const json& j, const std::string& path) const {
    if (!j.is_array() || j.size() != 3) fail(path, "expected an array of three numbers");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
  }
  std::vector<double> numbers(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::vector<std::string> strings(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  const SourceMap& map_;
};

}  // namespace detail

// Parse `text` over the defaults in `base`.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/false);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ConfigError("", line, col, msg);
  }

  const SourceMap map(text);
  const detail::Reader r(map);
  ExperimentConfig c = std::move(base);
  LinkScenario& s = c.scenario;

  using F = detail::Reader::Field;
  auto num = [&](double& dst) { return [&r, &dst](const json& j, const std::string& p) { dst = r.positive(j, p); }; };
  auto nonneg = [&](double& dst) {
    return [&r, &dst](const json& j, const std::string& p) { dst = r.nonnegative(j, p); };
  };
  auto integer = [&](auto& dst, long min) {
    return [&r, &dst, min](const json& j, const std::string& p) {
      dst = static_cast<std::remove_reference_t<decltype(dst)>>(r.integer(j, p, min));
    };
  };
  auto unit_interval = [&](double& dst) {
    return [&r, &dst](const json& j, const std::string& p) {
      dst = r.number(j, p);
      if (!(dst > 0 && dst < 1)) r.fail(p, "must lie in (0,1)");
    };
  };

  const std::vector<F> radio{
      {"T0", num(s.radio.T0)},
      {"f_c", num(s.radio.f_c)},
      {"zeta", num(s.radio.zeta)},
      {"bandwidth", num(s.radio.bandwidth)},
      {"G0", num(s.radio.G0)},
      {"chi", [&](const json& j, const std::string& p) {
         s.radio.chi = r.nonnegative(j, p);
         if (s.radio.chi >= 1) r.fail(p, "must lie in [0,1)");
       }},
      {"noise_dbm", [&](const json& j, const std::string& p) { s.radio.sigma0_sq = dbm_to_watts(r.number(j, p)); }},
      {"beta0_db", [&](const json& j, const std::string& p) { s.radio.beta0 = db_to_linear(r.number(j, p)); }},
      {"kappa", unit_interval(s.radio.kappa)},
  };
  const std::vector<F> limits{
      {"gamma_th_db", [&](const json& j, const std::string& p) { s.limits.gamma_th = db_to_linear(r.number(j, p)); }},
      {"phi_min_deg", [&](const json& j, const std::string& p) { s.limits.phi_min = deg_to_rad(r.positive(j, p)); }},
      {"phi_max_deg", [&](const json& j, const std::string& p) { s.limits.phi_max = deg_to_rad(r.positive(j, p)); }},
      {"td_cap_symbols", integer(s.limits.td_cap_symbols, 1)},
  };
  auto noise = [&](MotionNoise& dst) {
    return [&r, &dst](const json& j, const std::string& p) {
      if (j.is_number()) {
        dst.sigma_x = dst.sigma_y = dst.sigma_z = r.nonnegative(j, p);
        return;
      }
      const Vec3 v = r.vec3(j, p);
      if (v.x < 0 || v.y < 0 || v.z < 0) r.fail(p, "must be >= 0");
      dst = {v.x, v.y, v.z};
    };
  };
  const std::vector<F> motion{
      {"uav_sigma", noise(s.uav_noise)},
      {"gn_sigma", noise(s.gn_noise)},
  };
  const std::vector<F> angle{
      {"array_factor", nonneg(s.angle.array_factor)},
      {"theta_scale", nonneg(s.angle.theta_scale)},
      {"phi_scale", nonneg(s.angle.phi_scale)},
  };
  const std::vector<F> geometry{
      {"area", [&](const json& j, const std::string& p) { c.area = r.vec3(j, p); }},
      {"uav_start", [&](const json& j, const std::string& p) { s.uav.position = r.vec3(j, p); }},
      {"uav_direction", [&](const json& j, const std::string& p) { c.uav_direction = r.vec3(j, p); }},
      {"gn_position", [&](const json& j, const std::string& p) { s.gn.position = r.vec3(j, p); }},
      {"gn_velocity", [&](const json& j, const std::string& p) { s.gn.velocity = r.vec3(j, p); }},
  };
  const std::vector<F> sweep{
      {"velocities", [&](const json& j, const std::string& p) { c.velocities = r.numbers(j, p); }},
      {"p_max", [&](const json& j, const std::string& p) { c.p_max = r.numbers(j, p); }},
      {"methods", [&](const json& j, const std::string& p) {
         c.methods = r.strings(j, p);
         for (std::size_t i = 0; i < c.methods.size(); ++i)
           if (std::find(known_methods().begin(), known_methods().end(), c.methods[i]) == known_methods().end())
             r.fail(p + "[" + std::to_string(i) + "]", "unknown method '" + c.methods[i] + "'");
       }},
  };
  auto& os = c.optimizer;
  const std::vector<F> optimizer{
      {"max_outer_iterations", integer(os.max_outer_iterations, 1)},
      {"convergence_tol", unit_interval(os.convergence_tol)},
      {"sca_max_steps", integer(os.sca_max_steps, 1)},
      {"sca_tol", num(os.sca_tol)},
      {"pilot_k_max", integer(os.pilot_k_max, 1)},
      {"mu_bisection_tol", unit_interval(os.mu_bisection_tol)},
      {"conf_scale", num(s.conf_scale)},
      {"init_k", integer(os.init_k, 1)},
      {"init_n", integer(os.init_n, 1)},
  };
  auto& bs = c.baselines;
  const std::vector<F> baselines{
      {"grid_k_max", integer(bs.grid_k_max, 1)},
      {"grid_n_max", integer(bs.grid_n_max, 1)},
      {"grid_n_step", integer(bs.grid_n_step, 1)},
      {"grid_budget", num(bs.grid_budget)},
      {"fixed_ptr", num(bs.fixed_ptr)},
      {"fixed_k", integer(bs.fixed_k, 1)},
      {"pso_particles", integer(bs.pso_particles, 1)},
      {"pso_iterations", integer(bs.pso_iterations, 0)},
      {"pso_inertia", [&](const json& j, const std::string& p) {
         bs.pso_inertia = r.nonnegative(j, p);
         if (bs.pso_inertia >= 1) r.fail(p, "must lie in [0,1)");
       }},
      {"pso_cognitive", nonneg(bs.pso_cognitive)},
      {"pso_social", nonneg(bs.pso_social)},
      {"pso_k_max", integer(bs.pso_k_max, 1)},
      {"pso_n_max", integer(bs.pso_n_max, 1)},
  };

  const std::vector<F> top{
      {"id", [&](const json& j, const std::string& p) { c.id = r.string(j, p); }},
      {"description", [&](const json& j, const std::string& p) { c.description = r.string(j, p); }},
      {"radio", [&](const json& j, const std::string& p) { r.object(j, p, radio); }},
      {"limits", [&](const json& j, const std::string& p) { r.object(j, p, limits); }},
      {"motion", [&](const json& j, const std::string& p) { r.object(j, p, motion); }},
      {"angle", [&](const json& j, const std::string& p) { r.object(j, p, angle); }},
      {"geometry", [&](const json& j, const std::string& p) { r.object(j, p, geometry); }},
      {"frames", integer(s.frames, 1)},
      {"sweep", [&](const json& j, const std::string& p) { r.object(j, p, sweep); }},
      {"data_sweep", [&](const json& j, const std::string& p) {
         DataSweep d;
         r.object(j, p,
                  {{"k", integer(d.k, 1)},
                   {"points", integer(d.points, 2)},
                   {"n_min", integer(d.n_min, 1)},
                   {"n_max", integer(d.n_max, 1)}});
         c.data_sweep = d;
       }},
      {"optimizer", [&](const json& j, const std::string& p) { r.object(j, p, optimizer); }},
      {"baselines", [&](const json& j, const std::string& p) { r.object(j, p, baselines); }},
      {"seed", [&](const json& j, const std::string& p) {
         if (!j.is_number_unsigned()) r.fail(p, "expected a nonnegative integer");
         c.seed = j.get<std::uint64_t>();
       }},
  };
  r.object(doc, "", top);

  try {
    c.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("", 0, 0, e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, 0, "cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(e.key_path(), e.line(), e.column(), e.message(), path.string());
  }
}

}  // namespace ilc::harness
