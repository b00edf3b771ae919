#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "seactrl/io.hpp"

namespace seactrl {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (out) out << content;
  if (!out) throw ValidationError("cannot write " + path);
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_cell(double v) {
  if (v == 0.0) return "0.000000000";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_telemetry_csv(const std::string& path, const Telemetry& tm, int decimate) {
  if (decimate < 1) throw ValidationError("decimation factor must be >= 1");
  const std::size_t cols = tm.columns.size();
  std::string out;
  out.reserve(16 * cols * (tm.rows / static_cast<std::size_t>(decimate) + 2));
  for (std::size_t c = 0; c < cols; ++c) {
    if (c) out += ',';
    out += tm.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < tm.rows; r += static_cast<std::size_t>(decimate)) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ',';
      out += format_cell(tm.at(r, c));
    }
    out += '\n';
  }
  write_file(path, out);
}

std::string metrics_to_json(const Scenario& sc, const RunResult& r) {
  json joints = json::array();
  for (std::size_t i = 0; i < r.metrics.size(); ++i) {
    const JointMetrics& m = r.metrics[i];
    joints.push_back(json{{"joint", i + 1},
                          {"mode", m.mode},
                          {"rms_error", m.rms_error},
                          {"max_abs_error", m.max_abs_error},
                          {"steady_state_error", m.steady_state_error},
                          {"settling_time", m.settling_time}});
  }
  const json j{{"scenario", sc.name}, {"joints", std::move(joints)}, {"warnings", r.warnings}};
  return j.dump(2) + "\n";
}

std::string certificates_to_json(const Scenario& sc, const RunResult& r) {
  json joints = json::array();
  for (std::size_t i = 0; i < r.certificates.size(); ++i) {
    const LyapunovCertificate& c = r.certificates[i];
    joints.push_back(json{{"joint", i + 1},
                          {"spectral_abscissa", c.spectral_abscissa},
                          {"residual", c.residual},
                          {"p_min", c.p_min},
                          {"p_max", c.p_max},
                          {"q_min", c.q_min},
                          {"P", matrix_rows(c.P)},
                          {"Q", matrix_rows(c.Q)}});
  }
  const json j{{"scenario", sc.name}, {"joints", std::move(joints)}};
  return j.dump(2) + "\n";
}

void write_outputs(const std::string& dir, const Scenario& sc, const RunResult& r,
                   int decimate, bool metrics_only) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir + ": " + ec.message());
  if (!metrics_only) write_telemetry_csv(dir + "/telemetry.csv", r.telemetry, decimate);
  write_file(dir + "/metrics.json", metrics_to_json(sc, r));
  write_file(dir + "/certificate.json", certificates_to_json(sc, r));
}

}  // namespace seactrl
