#pragma once

#include <Eigen/Dense>
#include <array>

#include "seactrl/dob2.hpp"
#include "seactrl/model_nominal.hpp"

namespace seactrl {

/// Controller canonical form of the per-joint model.  With xi = T x,
///   dxi = Lambda xi + beta v - Gamma,   Gamma = T tau_dis,
/// Lambda a companion matrix whose bottom row is `a`, beta = e4, and the
/// physical input passes through unchanged (v = u) because the transformation
/// row q is normalized against the controllability matrix.
struct CanonicalModel {
  Eigen::Matrix4d T;
  Eigen::Matrix4d T_inv;
  Eigen::Matrix4d Lambda;
  Eigen::Vector4d beta;
  Eigen::RowVector4d a;
};

/// Builds the canonical form; throws SynthesisError when the controllability
/// matrix is numerically singular or the normalization T b = e4 fails.
CanonicalModel build_canonical(const NominalModel& md);

/// Disturbance estimate mapped into canonical coordinates (Gamma = T tau).
struct CanonicalDisturbance {
  Eigen::Vector4d Gamma = Eigen::Vector4d::Zero();
  Eigen::Vector4d dGamma = Eigen::Vector4d::Zero();
  Eigen::Vector4d ddGamma = Eigen::Vector4d::Zero();
};

CanonicalDisturbance transform_disturbance(const CanonicalModel& cm, const DobEstimates& est);

/// Output reference derivatives [y, dy, d2y, d3y, d4y] for the first
/// canonical coordinate.  Note xi1 = q^T x scales the link angle by
/// m_n J_n / k_n, so physical targets must be scaled by the caller.
using OutputDerivs = std::array<double, 5>;

/// Disturbance-corrected reference state.  Constructed so that its time
/// derivative satisfies the same perturbed canonical dynamics the plant obeys,
/// which turns the tracking error into a pure regulation problem:
///   xi2ref = dy + G1, xi3ref = d2y + dG1 + G2, xi4ref = d3y + d2G1 + dG2 + G3.
Eigen::Vector4d generate_references(const OutputDerivs& y, const CanonicalDisturbance& d);

/// Feedback row K such that Lambda - beta K has the requested poles.
/// Exact coefficient matching in companion form; poles must be negative reals.
Eigen::RowVector4d place_poles(const CanonicalModel& cm, const std::array<double, 4>& poles);

/// Control input
///   u = d4y + (d2G2 + dG3 + G4) - a xi_ref + K (xi_ref - xi).
/// The third derivative of Gamma1 is not available from a second-order
/// disturbance estimate and is dropped; its effect stays inside the ultimate
/// bound certified by the Lyapunov module.
double control_law(const CanonicalModel& cm, const Eigen::RowVector4d& K,
                   const Eigen::Vector4d& xi, const Eigen::Vector4d& xi_ref,
                   const OutputDerivs& y, const CanonicalDisturbance& d);

}  // namespace seactrl
