#pragma once

#include <Eigen/Dense>
#include <utility>

#include "seactrl/errors.hpp"

namespace seactrl {

/// Physical parameters of one series elastic joint.
/// Units: inertias kg m^2, viscous frictions N m s/rad, stiffness N m/rad.
struct JointParamValues {
  double J;    ///< motor-side inertia (reflected through the gearbox)
  double m;    ///< link-side inertia
  double b_J;  ///< motor-side viscous friction
  double b_m;  ///< link-side viscous friction
  double k;    ///< spring stiffness
};

/// Controller-side (nominal) and plant-side (true) parameter sets of a joint.
struct JointParams {
  JointParamValues nominal;
  JointParamValues true_phys;
};

/// Throws ValidationError unless J, m, k are strictly positive, frictions are
/// non-negative, and everything is finite.
void validate_params(const JointParamValues& p);

/// Per-joint linear model  xdot = A x + b u - tau_dis,
/// state x = [q_J, dq_J, q_m, dq_m]  (motor angle/rate, link angle/rate).
/// tau_dis collects every effect the nominal rigid model does not explain,
/// normalised by the nominal inertias on the two rate channels.
struct NominalModel {
  Eigen::Matrix4d A;
  Eigen::Vector4d b;
  JointParamValues params;  // nominal values the model was built from
  int joint = 0;
};

NominalModel build_nominal_model(const JointParamValues& nominal, int joint = 0);

/// [b, Ab, A^2 b, A^3 b]; full rank for any valid parameter set.
Eigen::Matrix4d controllability_matrix(const NominalModel& model);

/// Recovers the physical (matched, mismatched) disturbance torques from a
/// state-space disturbance vector.  Entries 0 and 2 must be exactly zero:
/// disturbances enter only on the rate channels.
std::pair<double, double> matched_mismatched_split(const NominalModel& model,
                                                   const Eigen::Vector4d& tau_dis);

}  // namespace seactrl
