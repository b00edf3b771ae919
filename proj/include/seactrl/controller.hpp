#pragma once

#include <Eigen/Dense>
#include <array>
#include <limits>
#include <memory>
#include <vector>

#include "seactrl/brunovsky.hpp"
#include "seactrl/dob2.hpp"
#include "seactrl/lyapunov.hpp"
#include "seactrl/trajectory.hpp"

namespace seactrl {

enum class ControlMode { Position, Force };

/// Per-joint control configuration.  The reference trajectory carries the
/// link angle [rad] in Position mode and the spring torque [N m] in Force
/// mode.
struct JointControlConfig {
  ControlMode mode = ControlMode::Position;
  std::shared_ptr<const Trajectory> reference;
  double dob_bandwidth = 100.0;
  std::array<double, 4> poles{-20.0, -25.0, -30.0, -35.0};  ///< Position mode
  double force_kp = 400.0;                                  ///< Force mode
  double force_kd = 40.0;                                   ///< Force mode
};

/// Synthesized per-joint controller pieces, frozen at construction.
struct JointController {
  JointControlConfig cfg;
  NominalModel model;
  DobGains gains{};
  CanonicalModel canon;          ///< Position mode
  Eigen::RowVector4d K;          ///< Position mode
  LyapunovCertificate certificate;
  double output_scale = 1.0;     ///< xi1 per link angle: m_n J_n / k_n
};

/// What the controller reads each step.  The caller injects measurement
/// noise here if the scenario asks for it.
struct MeasurementFrame {
  double t = 0.0;
  Eigen::VectorXd q_J, dq_J, q_m, dq_m;
};

/// Robust motion controller for all joints: one disturbance observer and one
/// canonical-form (Position) or spring-torque PD (Force) loop per joint.
///
/// The observer states live here but are advanced by the caller as part of
/// the coupled plant+observer integration.  The command is an algebraic
/// function of measurement and observer states: evaluate() computes it for
/// arbitrary stage states inside the integrator, while advance() ingests the
/// step's final observer states and refreshes the stored command and
/// estimates that the telemetry reads.
class Controller {
public:
  Controller(const std::vector<JointParams>& joints, std::vector<JointControlConfig> cfg,
             double torque_limit = std::numeric_limits<double>::infinity());

  int num_joints() const { return static_cast<int>(joints_.size()); }
  const JointController& joint(int i) const { return joints_.at(i); }

  const std::vector<DobState>& observer_states() const { return dob_; }

  /// Observer ODE right-hand side for joint i, for use inside the caller's
  /// integration stages.
  DobState observer_derivative(int i, const DobState& s, const Eigen::Vector4d& x_i,
                               double u_i) const;

  /// Resets the observers to zero-estimate states at the first measurement
  /// and computes the initial command.
  const Eigen::VectorXd& initialize(const MeasurementFrame& m);

  /// Stores the synchronously advanced observer states, then evaluates the
  /// control laws at measurement m.
  const Eigen::VectorXd& advance(const MeasurementFrame& m, std::vector<DobState> advanced);

  /// Evaluates the control laws at an arbitrary measurement and observer
  /// state without touching the stored step state.  This is what integration
  /// stages call so the coupled ODE sees the command vary continuously.
  Eigen::VectorXd evaluate(const MeasurementFrame& m, const std::vector<DobState>& dob) const;

  /// Command vector from the last initialize()/advance().
  const Eigen::VectorXd& command() const { return u_; }

  /// Reference value tracked by joint i at the last advance (link angle or
  /// spring torque).
  double last_reference(int i) const { return ref_.at(i); }

  /// Disturbance estimates of joint i at the last advance.
  const DobEstimates& last_estimates(int i) const { return est_.at(i); }

private:
  void compute(const MeasurementFrame& m);
  double eval_joint(std::size_t i, const MeasurementFrame& m, const DobState& s,
                    DobEstimates& est, double& ref) const;
  void check_frame(const MeasurementFrame& m) const;

  std::vector<JointController> joints_;
  std::vector<DobState> dob_;
  std::vector<DobEstimates> est_;
  std::vector<double> ref_;
  Eigen::VectorXd u_;
  double torque_limit_;
  bool initialized_ = false;
};

}  // namespace seactrl
