#include "seactrl/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seactrl {

Controller::Controller(const std::vector<JointParams>& joints,
                       std::vector<JointControlConfig> cfg, double torque_limit)
    : torque_limit_(torque_limit) {
  if (joints.empty() || cfg.size() != joints.size()) {
    throw ValidationError("need one control configuration per joint");
  }
  if (!(torque_limit > 0.0)) {
    throw ValidationError("torque limit must be positive");
  }

  joints_.reserve(joints.size());
  for (size_t i = 0; i < joints.size(); ++i) {
    JointController jc;
    jc.cfg = std::move(cfg[i]);
    if (!jc.cfg.reference) {
      throw ValidationError("joint " + std::to_string(i) + " has no reference trajectory");
    }
    jc.model = build_nominal_model(joints[i].nominal, static_cast<int>(i));
    jc.gains = critically_damped_gains(jc.cfg.dob_bandwidth);
    jc.output_scale =
        joints[i].nominal.m * joints[i].nominal.J / joints[i].nominal.k;

    if (jc.cfg.mode == ControlMode::Position) {
      jc.canon = build_canonical(jc.model);
      jc.K = place_poles(jc.canon, jc.cfg.poles);
      Eigen::Matrix4d Acl = jc.canon.Lambda;
      Acl.row(3) -= jc.K;
      jc.certificate = certify_hurwitz(Acl, Eigen::Matrix4d::Identity());
    } else {
      if (!std::isfinite(jc.cfg.force_kp) || !std::isfinite(jc.cfg.force_kd)) {
        throw ValidationError("force gains must be finite");
      }
      Eigen::Matrix2d Acl;
      Acl << 0.0, 1.0, -jc.cfg.force_kp, -jc.cfg.force_kd;
      jc.certificate = certify_hurwitz(Acl, Eigen::Matrix2d::Identity());
    }
    joints_.push_back(std::move(jc));
  }
  u_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(joints_.size()));
  est_.resize(joints_.size());
  ref_.resize(joints_.size(), 0.0);
}

DobState Controller::observer_derivative(int i, const DobState& s, const Eigen::Vector4d& x_i,
                                         double u_i) const {
  const JointController& jc = joints_.at(i);
  return dob_derivative(jc.model, jc.gains, s, x_i, u_i);
}

const Eigen::VectorXd& Controller::initialize(const MeasurementFrame& m) {
  dob_.clear();
  dob_.reserve(joints_.size());
  for (size_t i = 0; i < joints_.size(); ++i) {
    const Eigen::Vector4d x(m.q_J(i), m.dq_J(i), m.q_m(i), m.dq_m(i));
    dob_.push_back(dob_init(joints_[i].gains, x));
  }
  initialized_ = true;
  compute(m);
  return u_;
}

const Eigen::VectorXd& Controller::advance(const MeasurementFrame& m,
                                           std::vector<DobState> advanced) {
  if (!initialized_) {
    throw ValidationError("controller must be initialized before advancing");
  }
  if (advanced.size() != joints_.size()) {
    throw ValidationError("advanced observer state count mismatch");
  }
  dob_ = std::move(advanced);
  compute(m);
  return u_;
}

void Controller::check_frame(const MeasurementFrame& m) const {
  const auto n = static_cast<Eigen::Index>(joints_.size());
  if (m.q_J.size() != n || m.dq_J.size() != n || m.q_m.size() != n || m.dq_m.size() != n) {
    throw ValidationError("measurement frame size mismatch");
  }
}

double Controller::eval_joint(std::size_t i, const MeasurementFrame& m, const DobState& s,
                              DobEstimates& est, double& ref) const {
  const JointController& jc = joints_[i];
  const auto ix = static_cast<Eigen::Index>(i);
  const Eigen::Vector4d x(m.q_J(ix), m.dq_J(ix), m.q_m(ix), m.dq_m(ix));
  est = dob_estimates(jc.gains, s, x);

  const std::array<double, 5> r = jc.cfg.reference->eval(m.t);
  ref = r[0];

  double u = 0.0;
  if (jc.cfg.mode == ControlMode::Position) {
    OutputDerivs y;
    for (int d = 0; d < 5; ++d) y[d] = jc.output_scale * r[d];
    const CanonicalDisturbance cd = transform_disturbance(jc.canon, est);
    const Eigen::Vector4d xi = jc.canon.T * x;
    const Eigen::Vector4d xi_ref = generate_references(y, cd);
    u = control_law(jc.canon, jc.K, xi, xi_ref, y, cd);
  } else {
    // PD on the spring-torque error expressed as a motor-angle error, plus
    // spring reaction and motor-side disturbance feedforward.  The link
    // acceleration is deliberately not fed forward: against a stiff contact
    // that term closes a high-gain loop through the environment.
    const JointParamValues& p = jc.model.params;
    const double q_ref = x(2) + r[0] / p.k;
    const double dq_ref = x(3) + r[1] / p.k;
    const double qdd_ref = r[2] / p.k;
    u = p.J * (qdd_ref + jc.cfg.force_kd * (dq_ref - x(1)) +
               jc.cfg.force_kp * (q_ref - x(0))) +
        p.k * (x(0) - x(2)) + p.J * est.tau(1);
  }
  return std::clamp(u, -torque_limit_, torque_limit_);
}

Eigen::VectorXd Controller::evaluate(const MeasurementFrame& m,
                                     const std::vector<DobState>& dob) const {
  if (dob.size() != joints_.size()) {
    throw ValidationError("observer state count mismatch");
  }
  check_frame(m);
  Eigen::VectorXd u(static_cast<Eigen::Index>(joints_.size()));
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    DobEstimates est;
    double ref = 0.0;
    u(static_cast<Eigen::Index>(i)) = eval_joint(i, m, dob[i], est, ref);
  }
  return u;
}

void Controller::compute(const MeasurementFrame& m) {
  check_frame(m);
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    u_(static_cast<Eigen::Index>(i)) = eval_joint(i, m, dob_[i], est_[i], ref_[i]);
  }
}

}  // namespace seactrl
