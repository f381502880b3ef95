#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilc/common.hpp"

namespace ilc::harness {

struct ResultRow {
  std::string scenario_id;
  std::string method;
  double velocity = 0.0;    // m/s
  double p_max = 0.0;       // W
  double average_se = 0.0;  // bit/s/Hz
  double ptr = 0.0;         // sum T_s / sum T_d
  int iterations = 0;
  std::string status = "ok";
  double wall_time_s = 0.0;  // kept out of results files, see write_timings

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline const char* result_header() {
  return "scenario_id,method,velocity_mps,p_max_w,average_se,ptr,iterations,status";
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(result_header()) + "\n";
  for (const auto& r : rows) {
    out += csv_field(r.scenario_id) + "," + csv_field(r.method) + "," + fmt17(r.velocity) + "," + fmt17(r.p_max) +
           "," + fmt17(r.average_se) + "," + fmt17(r.ptr) + "," + std::to_string(r.iterations) + "," +
           csv_field(r.status) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"scenario_id", r.scenario_id},
                   {"method", r.method},
                   {"velocity_mps", r.velocity},
                   {"p_max_w", r.p_max},
                   {"average_se", r.average_se},
                   {"ptr", r.ptr},
                   {"iterations", r.iterations},
                   {"status", r.status}});
  return arr;
}

inline std::vector<ResultRow> rows_from_json(const nlohmann::json& arr) {
  require(arr.is_array(), "rows_from_json: expected an array");
  std::vector<ResultRow> rows;
  for (const auto& o : arr) {
    ResultRow r;
    r.scenario_id = o.at("scenario_id").get<std::string>();
    r.method = o.at("method").get<std::string>();
    r.velocity = o.at("velocity_mps").get<double>();
    r.p_max = o.at("p_max_w").get<double>();
    r.average_se = o.at("average_se").get<double>();
    r.ptr = o.at("ptr").get<double>();
    r.iterations = o.at("iterations").get<int>();
    r.status = o.at("status").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

// nlohmann prints doubles with the shortest round-trip form, which already
// carries at most 17 significant digits.
inline std::string to_json_text(const std::vector<ResultRow>& rows) { return to_json(rows).dump(2) + "\n"; }

class IoError : public Error {
 public:
  using Error::Error;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

enum class OutputFormat { kCsv, kJson, kBoth };

// Writes results.csv and/or results.json into `dir`.
inline void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& dir, OutputFormat f) {
  if (f != OutputFormat::kJson) write_text(dir / "results.csv", to_csv(rows));
  if (f != OutputFormat::kCsv) write_text(dir / "results.json", to_json_text(rows));
}

// Wall times vary between runs, so they live apart from the results files.
inline void write_timings(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::string out = "scenario_id,method,velocity_mps,p_max_w,wall_time_s\n";
  for (const auto& r : rows)
    out += csv_field(r.scenario_id) + "," + csv_field(r.method) + "," + fmt17(r.velocity) + "," + fmt17(r.p_max) +
           "," + fmt17(r.wall_time_s) + "\n";
  write_text(path, out);
}

}  // namespace ilc::harness
