#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seactrl/io.hpp"

using namespace seactrl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("seactrl_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("empty object yields the documented default scenario") {
  const Scenario sc = parse_scenario("{}");
  CHECK(sc.name == "scenario");
  CHECK(sc.dt == 1e-4);
  CHECK(sc.duration == 1.0);
  CHECK(sc.seed == 0);
  CHECK(sc.noise_std == 0.0);
  CHECK(std::isinf(sc.torque_limit));
  REQUIRE(sc.world.joints.size() == 3);
  REQUIRE(sc.control.size() == 3);
  for (const JointParams& p : sc.world.joints) {
    // matched: the true plant equals the nominal model
    CHECK(p.true_phys.J == p.nominal.J);
    CHECK(p.true_phys.m == p.nominal.m);
    CHECK(p.true_phys.k == p.nominal.k);
  }
  CHECK(sc.world.geometry.gravity == 0.0);
  CHECK(sc.world.friction.coulomb_motor.isZero());
  for (const JointControlConfig& c : sc.control) {
    CHECK(c.mode == ControlMode::Position);
    CHECK(c.dob_bandwidth == 100.0);
    CHECK(c.poles == std::array<double, 4>{-20.0, -25.0, -30.0, -35.0});
    CHECK(c.reference->eval(3.7)[0] == 0.0);
  }
  CHECK(sc.metrics.post_transient == 0.0);
  CHECK(sc.metrics.settling_band == 1e-3);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_WITH_AS(parse_scenario("{\"bogus\": 1}"),
                       doctest::Contains("unknown key \"bogus\""), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario("{\"world\": {\"frictio\": {}}}"),
                       doctest::Contains("unknown key \"frictio\""), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario("{\"world\": {\"friction\": {\"mu\": []}}}"),
                       doctest::Contains("unknown key \"mu\""), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_scenario("{\"control\": [{\"gain\": 2}, {}, {}]}"),
      doctest::Contains("unknown key \"gain\" in control[0]"), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_scenario(
          "{\"control\": [{}, {}, {\"reference\": {\"type\": \"sine\", \"freq\": 1}}]}"),
      doctest::Contains("unknown key \"freq\""), ValidationError);
}

TEST_CASE("constraint violations name the field") {
  CHECK_THROWS_WITH_AS(parse_scenario("{\"dt\": 0}"), doctest::Contains("dt"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario("{\"dt\": \"small\"}"),
                       doctest::Contains("scenario.dt must be a number"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario("{\"seed\": -3}"), doctest::Contains("seed"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario("not json"), doctest::Contains("parse error"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario("[1, 2]"), doctest::Contains("must be a JSON object"),
                       ValidationError);
  // one control config per joint comes from scenario validation
  CHECK_THROWS_AS(parse_scenario("{\"control\": [{}]}"), ValidationError);
  // step blends must not overlap
  CHECK_THROWS_AS(parse_scenario("{\"control\": [{\"reference\": {\"type\": \"step\","
                                 " \"times\": [0.5, 0.6], \"values\": [1, 0],"
                                 " \"rise_time\": 0.2}}, {}, {}]}"),
                  ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_scenario("{\"control\": [{\"reference\": {\"type\": \"spline\"}}, {}, {}]}"),
      doctest::Contains("type"), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_scenario("{\"world\": {\"payloads\": [{\"location\": \"end\"}]}}"),
      doctest::Contains("location"), ValidationError);
}

TEST_CASE("scenario fields survive a parse") {
  const Scenario sc = parse_scenario(R"({
    "name": "custom",
    "dt": 2e-4,
    "duration": 0.5,
    "seed": 42,
    "noise_std": 1e-5,
    "torque_limit": 80.0,
    "world": {
      "geometry": {"gravity": 9.81},
      "friction": {"coulomb_motor": [0.5, 0.5, 0.5], "smoothing_band": 2e-3},
      "environment": {"active": [true, false, false], "K_e": [100, 0, 0]},
      "payloads": [{"time": 0.25, "location": "midspan", "link": 1, "mass": 1.0}]
    },
    "control": [
      {"mode": "force", "force_kp": 900, "reference": {"type": "constant", "value": 2}},
      {"reference": {"type": "step", "times": [0.1], "values": [0.4], "rise_time": 0.05}},
      {"reference": {"type": "sine", "amplitude": 0.3, "frequency_hz": 0.5}}
    ],
    "metrics": {"post_transient": 0.4, "settling_band": 0.01}
  })");
  CHECK(sc.name == "custom");
  CHECK(sc.dt == 2e-4);
  CHECK(sc.seed == 42);
  CHECK(sc.torque_limit == 80.0);
  CHECK(sc.world.geometry.gravity == 9.81);
  CHECK(sc.world.friction.coulomb_motor(1) == 0.5);
  CHECK(sc.world.friction.smoothing_band == 2e-3);
  CHECK(sc.world.environment.active == std::vector<bool>{true, false, false});
  REQUIRE(sc.world.payloads.size() == 1);
  CHECK(sc.world.payloads[0].location == PayloadLocation::Midspan);
  CHECK(sc.world.payloads[0].link == 1);
  CHECK(sc.control[0].mode == ControlMode::Force);
  CHECK(sc.control[0].force_kp == 900.0);
  CHECK(sc.control[0].reference->eval(0.0)[0] == 2.0);
  CHECK(sc.control[1].mode == ControlMode::Position);
  CHECK(sc.control[2].reference->eval(0.0)[0] == 0.0);  // sine offset defaults to 0
  CHECK(sc.metrics.post_transient == 0.4);
}

TEST_CASE("serialization round-trips every built-in campaign") {
  for (const std::string& name : campaign_names()) {
    CAPTURE(name);
    const Scenario sc = builtin_campaign(name);
    const std::string text = scenario_to_json(sc);
    const Scenario back = parse_scenario(text);
    CHECK(scenario_to_json(back) == text);
    CHECK(back.name == sc.name);
    CHECK(back.duration == sc.duration);
    REQUIRE(back.control.size() == sc.control.size());
    for (std::size_t i = 0; i < sc.control.size(); ++i) {
      CHECK(back.control[i].mode == sc.control[i].mode);
      for (double t : {0.0, 0.51, 2.0}) {
        CHECK(back.control[i].reference->eval(t) == sc.control[i].reference->eval(t));
      }
    }
  }
  // the default scenario round-trips too, unlimited torque included
  const std::string text = scenario_to_json(parse_scenario("{}"));
  const Scenario back = parse_scenario(text);
  CHECK(std::isinf(back.torque_limit));
  CHECK(scenario_to_json(back) == text);
}

TEST_CASE("cells format with nine significant digits") {
  CHECK(format_cell(0.0) == "0.000000000");
  CHECK(format_cell(-0.0) == "0.000000000");
  CHECK(format_cell(0.5) == "0.5");
  CHECK(format_cell(1.0 / 3.0) == "0.333333333");
  CHECK(format_cell(-1.0 / 3.0) == "-0.333333333");
  CHECK(format_cell(1234567891.0) == "1.23456789e+09");
  CHECK(format_cell(1.5e-7) == "1.5e-07");
}

TEST_CASE("telemetry csv layout and decimation") {
  Scenario sc = parse_scenario("{\"duration\": 0.01}");
  const RunResult r = run(sc);
  TempDir tmp;

  write_telemetry_csv(tmp.file("t.csv"), r.telemetry, 1);
  const std::string text = slurp(tmp.file("t.csv"));
  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  CHECK(header.substr(0, 20) == "t,q_J1,dq_J1,q_m1,dq");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) {
    ++rows;
    if (rows > 1) {
      // null scenario: every non-time cell is exactly zero
      CHECK(line.substr(line.find(',')) ==
            ",0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,"
            "0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,"
            "0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,"
            "0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,"
            "0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,"
            "0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000");
    }
  }
  CHECK(rows == r.telemetry.rows);

  write_telemetry_csv(tmp.file("d.csv"), r.telemetry, 10);
  std::istringstream dec(slurp(tmp.file("d.csv")));
  std::string line;
  std::getline(dec, line);  // header
  std::vector<double> t;
  while (std::getline(dec, line)) t.push_back(std::stod(line.substr(0, line.find(','))));
  REQUIRE(t.size() == 11);
  CHECK(t[1] == doctest::Approx(10 * sc.dt));
  CHECK(t.back() == doctest::Approx(0.01));

  CHECK_THROWS_AS(write_telemetry_csv(tmp.file("x.csv"), r.telemetry, 0), ValidationError);
}

TEST_CASE("run outputs land in the requested directory") {
  Scenario sc = parse_scenario("{\"duration\": 0.01, \"name\": \"io-probe\"}");
  const RunResult r = run(sc);
  TempDir tmp;

  write_outputs(tmp.file("deep/nested"), sc, r, 1, false);
  CHECK(std::filesystem::exists(tmp.file("deep/nested/telemetry.csv")));

  const std::string metrics = slurp(tmp.file("deep/nested/metrics.json"));
  CHECK(metrics.find("\"scenario\": \"io-probe\"") != std::string::npos);
  CHECK(metrics.find("\"rms_error\"") != std::string::npos);
  CHECK(metrics.find("\"settling_time\"") != std::string::npos);

  const std::string certs = slurp(tmp.file("deep/nested/certificate.json"));
  CHECK(certs.find("\"spectral_abscissa\"") != std::string::npos);
  CHECK(certs.find("\"P\"") != std::string::npos);

  write_outputs(tmp.file("lean"), sc, r, 1, true);
  CHECK_FALSE(std::filesystem::exists(tmp.file("lean/telemetry.csv")));
  CHECK(std::filesystem::exists(tmp.file("lean/metrics.json")));
}

TEST_CASE("file loading reports the path") {
  TempDir tmp;
  CHECK_THROWS_WITH_AS(load_scenario_file(tmp.file("missing.json")),
                       doctest::Contains("missing.json"), ValidationError);
  {
    std::ofstream out(tmp.file("bad.json"));
    out << "{\"dt\": }";
  }
  CHECK_THROWS_WITH_AS(load_scenario_file(tmp.file("bad.json")),
                       doctest::Contains("bad.json"), ValidationError);
  {
    std::ofstream out(tmp.file("good.json"));
    out << "{\"duration\": 0.02}";
  }
  CHECK(load_scenario_file(tmp.file("good.json")).duration == 0.02);
}
