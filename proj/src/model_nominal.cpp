#include "seactrl/model_nominal.hpp"

#include <cmath>
#include <string>

namespace seactrl {

namespace {

bool all_finite(const JointParamValues& p) {
  return std::isfinite(p.J) && std::isfinite(p.m) && std::isfinite(p.b_J) &&
         std::isfinite(p.b_m) && std::isfinite(p.k);
}

}  // namespace

void validate_params(const JointParamValues& p) {
  if (!all_finite(p)) throw ValidationError("joint parameters must be finite");
  if (p.J <= 0.0) throw ValidationError("motor inertia J must be > 0, got " + std::to_string(p.J));
  if (p.m <= 0.0) throw ValidationError("link inertia m must be > 0, got " + std::to_string(p.m));
  if (p.k <= 0.0) throw ValidationError("spring stiffness k must be > 0, got " + std::to_string(p.k));
  if (p.b_J < 0.0) throw ValidationError("motor friction b_J must be >= 0");
  if (p.b_m < 0.0) throw ValidationError("link friction b_m must be >= 0");
}

NominalModel build_nominal_model(const JointParamValues& nominal, int joint) {
  validate_params(nominal);
  const double J = nominal.J, m = nominal.m, k = nominal.k;

  NominalModel md;
  md.A << 0.0, 1.0, 0.0, 0.0,
      -k / J, -nominal.b_J / J, k / J, 0.0,
      0.0, 0.0, 0.0, 1.0,
      k / m, 0.0, -k / m, -nominal.b_m / m;
  md.b << 0.0, 1.0 / J, 0.0, 0.0;
  md.params = nominal;
  md.joint = joint;
  return md;
}

Eigen::Matrix4d controllability_matrix(const NominalModel& model) {
  Eigen::Matrix4d C;
  Eigen::Vector4d col = model.b;
  for (int i = 0; i < 4; ++i) {
    C.col(i) = col;
    col = model.A * col;
  }
  return C;
}

std::pair<double, double> matched_mismatched_split(const NominalModel& model,
                                                   const Eigen::Vector4d& tau_dis) {
  if (tau_dis(0) != 0.0 || tau_dis(2) != 0.0) {
    throw ValidationError(
        "disturbance vector has nonzero position-channel entries; "
        "disturbances act on the rate channels only");
  }
  return {model.params.J * tau_dis(1), model.params.m * tau_dis(3)};
}

}  // namespace seactrl
