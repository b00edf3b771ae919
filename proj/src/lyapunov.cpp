#include "seactrl/lyapunov.hpp"

#include <cmath>
#include <sstream>

namespace seactrl {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

}  // namespace

LyapunovCertificate certify_hurwitz(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw ValidationError("Lyapunov solve needs square A and Q of equal size");
  }
  const double q_scale = Q.cwiseAbs().maxCoeff();
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, q_scale)) {
    throw CertificationError("Q is not symmetric");
  }

  LyapunovCertificate cert;
  cert.Q = 0.5 * (Q + Q.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(cert.Q);
  cert.q_min = qe.eigenvalues().minCoeff();
  if (!(cert.q_min > 0.0)) {
    throw CertificationError("Q is not positive definite (lambda_min = " +
                             std::to_string(cert.q_min) + ")");
  }

  Eigen::EigenSolver<Eigen::MatrixXd> ae(A);
  Eigen::Index worst = 0;
  ae.eigenvalues().real().maxCoeff(&worst);
  cert.spectral_abscissa = ae.eigenvalues()(worst).real();
  if (!(cert.spectral_abscissa < 0.0)) {
    std::ostringstream os;
    os << "closed-loop matrix is not Hurwitz: eigenvalue "
       << ae.eigenvalues()(worst).real();
    if (ae.eigenvalues()(worst).imag() != 0.0)
      os << (ae.eigenvalues()(worst).imag() > 0 ? " + " : " - ")
         << std::abs(ae.eigenvalues()(worst).imag()) << "i";
    os << " has non-negative real part";
    throw CertificationError(os.str());
  }

  // vec(A^T P) + vec(P A) = (I (x) A^T + A^T (x) I) vec(P) = -vec(Q)
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd M = kron(I, A.transpose()) + kron(A.transpose(), I);
  const Eigen::VectorXd vq = cert.Q.reshaped();
  const Eigen::VectorXd vp = Eigen::FullPivLU<Eigen::MatrixXd>(M).solve(-vq);

  cert.P = vp.reshaped(n, n);
  cert.P = 0.5 * (cert.P + cert.P.transpose()).eval();
  cert.residual = (A.transpose() * cert.P + cert.P * A + cert.Q).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(cert.P);
  cert.p_min = pe.eigenvalues().minCoeff();
  cert.p_max = pe.eigenvalues().maxCoeff();
  if (!(cert.p_min > 0.0)) {
    throw CertificationError("Lyapunov solution P is not positive definite");
  }
  return cert;
}

double ultimate_bound(const LyapunovCertificate& c, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw ValidationError("disturbance residual bound must be non-negative");
  }
  return 2.0 * c.p_max * eps / c.q_min;
}

}  // namespace seactrl
