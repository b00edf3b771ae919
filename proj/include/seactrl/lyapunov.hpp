#pragma once

#include <Eigen/Dense>

#include "seactrl/errors.hpp"

namespace seactrl {

/// Solution of  A^T P + P A = -Q  together with the scalars needed for an
/// ultimate-bound statement about the closed loop.
struct LyapunovCertificate {
  Eigen::MatrixXd P;
  Eigen::MatrixXd Q;
  double residual = 0.0;            ///< max |A^T P + P A + Q|
  double p_min = 0.0, p_max = 0.0;  ///< extreme eigenvalues of P
  double q_min = 0.0;               ///< smallest eigenvalue of Q
  double spectral_abscissa = 0.0;   ///< max Re eig(A), certified < 0
};

/// Solves the continuous Lyapunov equation by Kronecker vectorization
/// (dimensions here are tiny).  Throws CertificationError when A is not
/// Hurwitz, naming the offending eigenvalue, or when Q is not symmetric
/// positive definite.
LyapunovCertificate certify_hurwitz(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

/// Radius of the ball the tracking error ultimately enters when the
/// disturbance-compensation residual is bounded by eps:
///   r = 2 ||P||_2 eps / lambda_min(Q).
double ultimate_bound(const LyapunovCertificate& c, double eps);

}  // namespace seactrl
