#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "seactrl/io.hpp"

namespace {

using namespace seactrl;

// 0 success, 2 configuration or input error, 3 divergence, 4 failed
// stability certificate.
constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kDivergence = 3;
constexpr int kCertification = 4;

std::mutex io_mutex;

/// Built-in campaign names win; anything else is a scenario file path.
Scenario resolve_target(const std::string& target) {
  const std::vector<std::string> names = campaign_names();
  if (std::find(names.begin(), names.end(), target) != names.end()) {
    return builtin_campaign(target);
  }
  return load_scenario_file(target);
}

int run_target(const std::string& target, const std::string& out_root, int decimate,
               bool metrics_only) {
  try {
    const Scenario sc = resolve_target(target);
    const RunResult r = run(sc);
    const std::string dir = out_root + "/" + sc.name;
    write_outputs(dir, sc, r, decimate, metrics_only);

    const std::scoped_lock lock(io_mutex);
    std::printf("%s: %zu joints, %zu telemetry rows -> %s\n", sc.name.c_str(),
                r.metrics.size(), r.telemetry.rows, dir.c_str());
    for (std::size_t i = 0; i < r.metrics.size(); ++i) {
      const JointMetrics& m = r.metrics[i];
      std::printf("  joint %zu %-8s  rms %.3e  max %.3e  steady %.3e  settle %s\n", i + 1,
                  m.mode.c_str(), m.rms_error, m.max_abs_error, m.steady_state_error,
                  m.settling_time < 0 ? "never" : std::to_string(m.settling_time).c_str());
    }
    for (const std::string& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
    return kOk;
  } catch (const DivergenceError& e) {
    const std::scoped_lock lock(io_mutex);
    std::fprintf(stderr, "%s: divergence: %s\n", target.c_str(), e.what());
    return kDivergence;
  } catch (const CertificationError& e) {
    const std::scoped_lock lock(io_mutex);
    std::fprintf(stderr, "%s: certification failure: %s\n", target.c_str(), e.what());
    return kCertification;
  } catch (const std::exception& e) {
    const std::scoped_lock lock(io_mutex);
    // file loading errors already carry the path
    const std::string what = e.what();
    if (what.rfind(target, 0) == 0) {
      std::fprintf(stderr, "%s\n", what.c_str());
    } else {
      std::fprintf(stderr, "%s: %s\n", target.c_str(), what.c_str());
    }
    return kConfig;
  }
}

int run_all(const std::vector<std::string>& targets, const std::string& out_root, int decimate,
            bool metrics_only, int jobs) {
  std::vector<int> codes(targets.size(), kOk);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < targets.size(); i = next.fetch_add(1)) {
      codes[i] = run_target(targets[i], out_root, decimate, metrics_only);
    }
  };
  const int n = std::min<int>(jobs, static_cast<int>(targets.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  // deterministic exit: the first failing target decides
  for (int c : codes) {
    if (c != kOk) return c;
  }
  return kOk;
}

int certify_target(const std::string& target) {
  try {
    const Scenario sc = resolve_target(target);
    Controller ctl(sc.world.joints, sc.control, sc.torque_limit);
    std::printf("%s: all joints certified\n", sc.name.c_str());
    for (int i = 0; i < ctl.num_joints(); ++i) {
      const LyapunovCertificate& c = ctl.joint(i).certificate;
      std::printf(
          "  joint %d %-8s  spectral abscissa %9.4f  residual %.2e  P eig [%.3e, %.3e]\n",
          i + 1, sc.control[i].mode == ControlMode::Position ? "position" : "force",
          c.spectral_abscissa, c.residual, c.p_min, c.p_max);
    }
    return kOk;
  } catch (const CertificationError& e) {
    std::fprintf(stderr, "%s: certification failure: %s\n", target.c_str(), e.what());
    return kCertification;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    if (what.rfind(target, 0) == 0) {
      std::fprintf(stderr, "%s\n", what.c_str());
    } else {
      std::fprintf(stderr, "%s: %s\n", target.c_str(), what.c_str());
    }
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series elastic actuator motion control: simulation and synthesis"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand(
      "run", "Simulate scenarios and write telemetry.csv, metrics.json, certificate.json");
  std::vector<std::string> targets;
  run_cmd->add_option("targets", targets, "Scenario files or built-in campaign names")
      ->required();
  std::string out_root = "out";
  run_cmd->add_option("--out", out_root, "Output root; each run writes into <out>/<name>");
  int decimate = 1;
  run_cmd->add_option("--decimate", decimate, "Keep every Nth telemetry row")
      ->check(CLI::PositiveNumber);
  bool metrics_only = false;
  run_cmd->add_flag("--metrics-only", metrics_only, "Skip telemetry.csv");
  int jobs = 1;
  run_cmd->add_option("--jobs", jobs, "Number of scenarios to run in parallel")
      ->check(CLI::PositiveNumber);

  auto* list_cmd =
      app.add_subcommand("list-campaigns", "Print the built-in verification campaigns");

  auto* cert_cmd = app.add_subcommand(
      "certify", "Synthesize controllers and print stability certificates; no simulation");
  std::vector<std::string> cert_targets;
  cert_cmd->add_option("targets", cert_targets, "Scenario files or built-in campaign names")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  if (list_cmd->parsed()) {
    for (const std::string& name : campaign_names()) {
      std::printf("%-15s %s\n", name.c_str(), campaign_summary(name).c_str());
    }
    return kOk;
  }
  if (cert_cmd->parsed()) {
    int rc = kOk;
    for (const std::string& t : cert_targets) {
      const int c = certify_target(t);
      if (rc == kOk) rc = c;
    }
    return rc;
  }
  return run_all(targets, out_root, decimate, metrics_only, jobs);
}
