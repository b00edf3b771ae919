#pragma once

#include <Eigen/Dense>
#include <vector>

#include "seactrl/model_nominal.hpp"

namespace seactrl {

/// Rigid planar chain the link side of the joints drives.  Angles are
/// absolute-summed revolute coordinates; gravity pulls along -y, so a
/// horizontal-plane setup is expressed with gravity = 0.
struct LinkGeometry {
  Eigen::VectorXd lengths;        ///< full link lengths [m]
  Eigen::VectorXd masses;         ///< link masses [kg]
  Eigen::VectorXd com_offsets;    ///< centre of mass along the link axis [m]
  Eigen::VectorXd link_inertias;  ///< rotary inertia about the COM [kg m^2]
  double gravity = 0.0;           ///< [m/s^2]
};

void validate_geometry(const LinkGeometry& g);

/// Extra point mass rigidly carried by `link` at arc position `offset` [m]
/// from that link's proximal joint.
struct PointMass {
  int link = 0;
  double offset = 0.0;
  double mass = 0.0;
};

enum class PayloadLocation { Midspan, Tip };

/// A payload appears on the arm at `time` and stays.  Midspan places it at
/// half the named link's length; Tip places it at the distal end of the last
/// link.  The sim snaps `time` onto the integration grid before running.
struct PayloadEvent {
  double time = 0.0;
  PayloadLocation location = PayloadLocation::Tip;
  int link = 0;  ///< Midspan only
  double mass = 0.0;
};

/// Point masses of the payload events active at time t (event.time <= t).
std::vector<PointMass> payload_point_masses(const LinkGeometry& g,
                                            const std::vector<PayloadEvent>& events,
                                            double t);

/// Unilateral spring-damper environment acting on the link side in joint
/// space: engaged on joints with active[i] whenever q_m[i] >= q_e[i], then
/// tau_env = K_e (q_m - q_e) + D_e dq_m.  M_e is carried for completeness but
/// must be zero (massless wall).
struct Environment {
  std::vector<bool> active;
  Eigen::VectorXd K_e, D_e, M_e, q_e;
};

void validate_environment(const Environment& e, int n_joints);

Eigen::VectorXd environment_torque(const Environment& e, const Eigen::VectorXd& q_m,
                                   const Eigen::VectorXd& dq_m);

/// Velocity-smoothed Coulomb friction plus optional motor torque ripple.
struct FrictionConfig {
  Eigen::VectorXd coulomb_motor;     ///< [N m]
  Eigen::VectorXd coulomb_link;     ///< [N m]
  Eigen::VectorXd ripple_amplitude;  ///< [N m], motor side
  Eigen::VectorXd ripple_hz;
  double smoothing_band = 1e-3;  ///< [rad/s], tanh(dq / band)
};

Eigen::VectorXd motor_friction(const FrictionConfig& f, const Eigen::VectorXd& dq_J, double t);
Eigen::VectorXd link_friction(const FrictionConfig& f, const Eigen::VectorXd& dq_m);

/// Everything the true plant consists of.
struct World {
  LinkGeometry geometry;
  std::vector<JointParams> joints;
  FrictionConfig friction;
  Environment environment;
  std::vector<PayloadEvent> payloads;
};

void validate_world(const World& w);

/// Motor angles/rates q_J and link angles/rates q_m.
struct RobotState {
  Eigen::VectorXd q_J, dq_J, q_m, dq_m;
  double t = 0.0;
};

/// Time derivative of RobotState.
struct RobotRates {
  Eigen::VectorXd qd_J, qdd_J, qd_m, qdd_m;
};

/// Mass matrix, Christoffel Coriolis matrix and gravity vector of the chain
/// plus any extra point masses.  C is built from analytic dM/dq, so
/// dM/dt - 2C is skew symmetric.
struct LinkDynamics {
  Eigen::MatrixXd M;
  Eigen::MatrixXd C;
  Eigen::VectorXd G;
};

LinkDynamics compute_link_dynamics(const LinkGeometry& g, const std::vector<PointMass>& extras,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& dq);

/// Planar position of a point `offset` along `link` (0-based) at configuration q.
Eigen::Vector2d body_position(const LinkGeometry& g, const Eigen::VectorXd& q, int link,
                              double offset);

/// lambda_max / lambda_min of a symmetric positive definite mass matrix.
double mass_matrix_condition(const Eigen::MatrixXd& M);

/// Full SEA chain dynamics under motor torque u with the given active payload
/// masses.  Throws DivergenceError when the result stops being finite.
RobotRates plant_derivative(const World& w, const RobotState& s, const Eigen::VectorXd& u,
                            const std::vector<PointMass>& payload_masses);

/// Per-joint state-space disturbance vectors: everything the nominal linear
/// models leave unexplained, assembled term by term from the physical sources
/// (parameter mismatch, friction, ripple, gravity, coupling, contact).  By
/// construction xdot_i = A_i x_i + b_i u_i - tau_dis_i holds exactly on the
/// true trajectory.
std::vector<Eigen::Vector4d> true_disturbance(const World& w, const RobotState& s,
                                              const Eigen::VectorXd& u,
                                              const std::vector<PointMass>& payload_masses);

/// Kinetic plus potential plus spring energy; diagnostic for tests.
double total_energy(const World& w, const RobotState& s,
                    const std::vector<PointMass>& payload_masses);

}  // namespace seactrl
