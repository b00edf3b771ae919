#pragma once

#include <functional>
#include <string>
#include <vector>

#include "seactrl/controller.hpp"
#include "seactrl/plant.hpp"

namespace seactrl {

/// Windows used by the tracking metrics.
struct MetricsConfig {
  double post_transient = 0.0;  ///< metrics start here [s]
  double settling_band = 1e-3;  ///< |error| band for the settling time
};

/// One complete simulation configuration.
struct Scenario {
  std::string name = "scenario";
  double dt = 1e-4;       ///< fixed integration step [s]
  double duration = 1.0;  ///< must be an integer multiple of dt
  unsigned long seed = 0;
  double noise_std = 0.0;  ///< measurement noise applied to the controller's inputs
  double torque_limit = std::numeric_limits<double>::infinity();
  World world;
  std::vector<JointControlConfig> control;
  MetricsConfig metrics;
};

void validate_scenario(const Scenario& sc);

/// Column-labelled numeric table, one row per integration grid point.
struct Telemetry {
  std::vector<std::string> columns;
  std::size_t rows = 0;
  std::vector<double> data;  ///< row-major, rows x columns.size()

  double at(std::size_t row, std::size_t col) const {
    return data[row * columns.size() + col];
  }
  /// Index of a named column; throws ValidationError when missing.
  std::size_t col(const std::string& name) const;
};

struct JointMetrics {
  std::string mode;            ///< "position" or "force"
  double rms_error = 0.0;      ///< over [post_transient, end]
  double max_abs_error = 0.0;  ///< over [post_transient, end]
  double steady_state_error = 0.0;  ///< mean |e| over the final 0.5 s
  double settling_time = -1.0;  ///< error stays inside the band from here on; -1: never
};

struct RunResult {
  Telemetry telemetry;
  std::vector<JointMetrics> metrics;
  std::vector<LyapunovCertificate> certificates;  ///< per joint, from synthesis
  std::vector<std::string> warnings;
};

/// Everything known about one integration grid point, handed to the step
/// callback before the step is taken.  References stay valid only during the
/// callback.
struct StepRecord {
  double t = 0.0;
  const RobotState& state;
  const RobotRates& rates;                         ///< true derivative under u
  const Eigen::VectorXd& u;
  const std::vector<Eigen::Vector4d>& tau_true;    ///< per-joint true disturbance
  const std::vector<PointMass>& payload_masses;    ///< active set of this step
  const Controller& controller;
};

using StepCallback = std::function<void(const StepRecord&)>;

/// Runs the scenario from rest: the plant and every observer integrate as one
/// coupled system, with the command re-evaluated at every integrator stage as
/// an algebraic function of the stage states.  Throws DivergenceError /
/// ValidationError / SynthesisError / CertificationError.
RunResult run(const Scenario& sc, const StepCallback& cb = {});

/// Three-link chain shared by the built-in campaigns and used as the scenario
/// fallback.  `mismatched` switches on the off-nominal physics: +20% link and
/// rotor inertia plus Coulomb friction on both sides of the spring.  Without
/// it the true plant equals the nominal models and all friction is zero.
World default_world(bool mismatched, double gravity);

/// Names of the built-in verification campaigns.
std::vector<std::string> campaign_names();

/// One-line description of a built-in campaign.
std::string campaign_summary(const std::string& name);

/// Builds a built-in campaign scenario; throws ValidationError for unknown
/// names.
Scenario builtin_campaign(const std::string& name);

}  // namespace seactrl
