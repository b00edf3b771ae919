#include "seactrl/brunovsky.hpp"

#include <cmath>

namespace seactrl {

CanonicalModel build_canonical(const NominalModel& md) {
  const Eigen::Matrix4d C = controllability_matrix(md);
  Eigen::FullPivLU<Eigen::Matrix4d> lu(C.transpose());
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw SynthesisError("controllability matrix is numerically singular (rcond " +
                         std::to_string(lu.rcond()) + ")");
  }
  const Eigen::Vector4d q = lu.solve(Eigen::Vector4d::Unit(3));

  CanonicalModel cm;
  Eigen::RowVector4d row = q.transpose();
  for (int i = 0; i < 4; ++i) {
    cm.T.row(i) = row;
    row = row * md.A;
  }
  // row now holds q^T A^4

  Eigen::FullPivLU<Eigen::Matrix4d> luT(cm.T);
  if (!luT.isInvertible() || luT.rcond() < 1e-12) {
    throw SynthesisError("canonical transformation is numerically singular");
  }
  cm.T_inv = luT.inverse();
  cm.a = row * cm.T_inv;

  cm.Lambda.setZero();
  cm.Lambda.block<3, 3>(0, 1).setIdentity();
  cm.Lambda.row(3) = cm.a;
  cm.beta = Eigen::Vector4d::Unit(3);

  if ((cm.T * md.b - cm.beta).cwiseAbs().maxCoeff() > 1e-9) {
    throw SynthesisError("canonical normalization T b = e4 failed");
  }
  return cm;
}

CanonicalDisturbance transform_disturbance(const CanonicalModel& cm, const DobEstimates& est) {
  return {cm.T * est.tau, cm.T * est.dtau, cm.T * est.ddtau};
}

Eigen::Vector4d generate_references(const OutputDerivs& y, const CanonicalDisturbance& d) {
  Eigen::Vector4d r;
  r(0) = y[0];
  r(1) = y[1] + d.Gamma(0);
  r(2) = y[2] + d.dGamma(0) + d.Gamma(1);
  r(3) = y[3] + d.ddGamma(0) + d.dGamma(1) + d.Gamma(2);
  return r;
}

Eigen::RowVector4d place_poles(const CanonicalModel& cm, const std::array<double, 4>& poles) {
  for (double p : poles) {
    if (!(p < 0.0) || !std::isfinite(p)) {
      throw ValidationError("closed-loop poles must be negative reals, got " +
                            std::to_string(p));
    }
  }
  // expand (s - p1)(s - p2)(s - p3)(s - p4) = s^4 + c3 s^3 + c2 s^2 + c1 s + c0
  std::array<double, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};  // c[i]: coefficient of s^(4-i)
  for (double p : poles) {
    for (int i = 4; i >= 1; --i) c[i] = c[i] - p * c[i - 1];
  }
  Eigen::RowVector4d K;
  K << c[4], c[3], c[2], c[1];
  return cm.a + K;
}

double control_law(const CanonicalModel& cm, const Eigen::RowVector4d& K,
                   const Eigen::Vector4d& xi, const Eigen::Vector4d& xi_ref,
                   const OutputDerivs& y, const CanonicalDisturbance& d) {
  return y[4] + d.ddGamma(1) + d.dGamma(2) + d.Gamma(3) - cm.a.dot(xi_ref) +
         K.dot(xi_ref - xi);
}

}  // namespace seactrl
