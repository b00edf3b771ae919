#include "seactrl/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace seactrl {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

int first_nonfinite(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i))) return static_cast<int>(i);
  return -1;
}

// One rigidly attached mass: a chain link's own COM mass or an extra payload.
struct Body {
  int link;
  double offset;
  double mass;
};

}  // namespace

void validate_geometry(const LinkGeometry& g) {
  const Eigen::Index n = g.lengths.size();
  require(n >= 1, "chain needs at least one link");
  require(g.masses.size() == n && g.com_offsets.size() == n && g.link_inertias.size() == n,
          "geometry vectors must have one entry per link");
  require(std::isfinite(g.gravity) && g.gravity >= 0.0, "gravity must be finite and >= 0");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(std::isfinite(g.lengths(i)) && g.lengths(i) > 0.0, "link lengths must be > 0");
    require(std::isfinite(g.masses(i)) && g.masses(i) > 0.0, "link masses must be > 0");
    require(std::isfinite(g.com_offsets(i)) && g.com_offsets(i) >= 0.0 &&
                g.com_offsets(i) <= g.lengths(i),
            "COM offsets must lie on the link");
    require(std::isfinite(g.link_inertias(i)) && g.link_inertias(i) >= 0.0,
            "link inertias must be >= 0");
  }
}

std::vector<PointMass> payload_point_masses(const LinkGeometry& g,
                                            const std::vector<PayloadEvent>& events,
                                            double t) {
  const int n = static_cast<int>(g.lengths.size());
  std::vector<PointMass> out;
  for (const PayloadEvent& e : events) {
    if (t < e.time) continue;
    if (e.location == PayloadLocation::Tip) {
      out.push_back({n - 1, g.lengths(n - 1), e.mass});
    } else {
      out.push_back({e.link, 0.5 * g.lengths(e.link), e.mass});
    }
  }
  return out;
}

void validate_environment(const Environment& e, int n_joints) {
  const auto n = static_cast<Eigen::Index>(n_joints);
  require(static_cast<Eigen::Index>(e.active.size()) == n && e.K_e.size() == n &&
              e.D_e.size() == n && e.M_e.size() == n && e.q_e.size() == n,
          "environment vectors must have one entry per joint");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(std::isfinite(e.K_e(i)) && e.K_e(i) >= 0.0, "environment stiffness must be >= 0");
    require(std::isfinite(e.D_e(i)) && e.D_e(i) >= 0.0, "environment damping must be >= 0");
    require(e.M_e(i) == 0.0,
            "environment inertia M_e must be exactly 0 (spring-damper wall)");
    require(std::isfinite(e.q_e(i)), "environment contact angle must be finite");
  }
}

Eigen::VectorXd environment_torque(const Environment& e, const Eigen::VectorXd& q_m,
                                   const Eigen::VectorXd& dq_m) {
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(q_m.size());
  for (Eigen::Index i = 0; i < q_m.size(); ++i) {
    if (i < static_cast<Eigen::Index>(e.active.size()) && e.active[i] && q_m(i) >= e.q_e(i)) {
      tau(i) = e.K_e(i) * (q_m(i) - e.q_e(i)) + e.D_e(i) * dq_m(i);
    }
  }
  return tau;
}

Eigen::VectorXd motor_friction(const FrictionConfig& f, const Eigen::VectorXd& dq_J,
                               double t) {
  Eigen::VectorXd tau(dq_J.size());
  for (Eigen::Index i = 0; i < dq_J.size(); ++i) {
    tau(i) = f.coulomb_motor(i) * std::tanh(dq_J(i) / f.smoothing_band);
    if (f.ripple_amplitude(i) != 0.0) {
      tau(i) += f.ripple_amplitude(i) * std::sin(2.0 * M_PI * f.ripple_hz(i) * t);
    }
  }
  return tau;
}

Eigen::VectorXd link_friction(const FrictionConfig& f, const Eigen::VectorXd& dq_m) {
  Eigen::VectorXd tau(dq_m.size());
  for (Eigen::Index i = 0; i < dq_m.size(); ++i) {
    tau(i) = f.coulomb_link(i) * std::tanh(dq_m(i) / f.smoothing_band);
  }
  return tau;
}

void validate_world(const World& w) {
  validate_geometry(w.geometry);
  const Eigen::Index n = w.geometry.lengths.size();
  require(static_cast<Eigen::Index>(w.joints.size()) == n,
          "need one joint parameter set per link");
  for (const JointParams& jp : w.joints) {
    validate_params(jp.nominal);
    validate_params(jp.true_phys);
  }
  const FrictionConfig& f = w.friction;
  require(f.coulomb_motor.size() == n && f.coulomb_link.size() == n &&
              f.ripple_amplitude.size() == n && f.ripple_hz.size() == n,
          "friction vectors must have one entry per joint");
  require(std::isfinite(f.smoothing_band) && f.smoothing_band > 0.0,
          "friction smoothing band must be > 0");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(f.coulomb_motor(i) >= 0.0 && f.coulomb_link(i) >= 0.0 &&
                f.ripple_amplitude(i) >= 0.0 && f.ripple_hz(i) >= 0.0,
            "friction magnitudes must be >= 0");
  }
  validate_environment(w.environment, static_cast<int>(n));
  for (const PayloadEvent& e : w.payloads) {
    require(std::isfinite(e.time) && e.time >= 0.0, "payload times must be >= 0");
    require(std::isfinite(e.mass) && e.mass > 0.0, "payload masses must be > 0");
    if (e.location == PayloadLocation::Midspan) {
      require(e.link >= 0 && e.link < n, "payload link index out of range");
    }
  }
}

Eigen::Vector2d body_position(const LinkGeometry& g, const Eigen::VectorXd& q, int link,
                              double offset) {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  double theta = 0.0;
  for (int j = 0; j <= link; ++j) {
    theta += q(j);
    const double a = (j < link) ? g.lengths(j) : offset;
    p += a * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  }
  return p;
}

LinkDynamics compute_link_dynamics(const LinkGeometry& g, const std::vector<PointMass>& extras,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& dq) {
  const int n = static_cast<int>(g.lengths.size());
  require(q.size() == n && dq.size() == n, "configuration size mismatch");

  LinkDynamics dyn;
  dyn.M = Eigen::MatrixXd::Zero(n, n);
  dyn.G = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::MatrixXd> dM(n, Eigen::MatrixXd::Zero(n, n));  // dM[k] = dM/dq_k

  std::vector<Body> bodies;
  bodies.reserve(g.lengths.size() + extras.size());
  for (int i = 0; i < n; ++i) bodies.push_back({i, g.com_offsets(i), g.masses(i)});
  for (const PointMass& pm : extras) {
    require(pm.link >= 0 && pm.link < n, "point mass link index out of range");
    bodies.push_back({pm.link, pm.offset, pm.mass});
  }

  // absolute angles
  Eigen::VectorXd theta(n);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += q(j);
    theta(j) = acc;
  }

  for (const Body& b : bodies) {
    const int L = b.link;
    // S[i] = dp/dq_i (suffix sums of tangents), T[i] = d(S[i])/dq_k for k <= i
    std::vector<Eigen::Vector2d> S(L + 1, Eigen::Vector2d::Zero());
    std::vector<Eigen::Vector2d> T(L + 1, Eigen::Vector2d::Zero());
    for (int j = L; j >= 0; --j) {
      const double a = (j < L) ? g.lengths(j) : b.offset;
      const double c = std::cos(theta(j)), s = std::sin(theta(j));
      const Eigen::Vector2d tangent(-a * s, a * c);
      const Eigen::Vector2d curv(-a * c, -a * s);
      S[j] = (j == L) ? tangent : Eigen::Vector2d(S[j + 1] + tangent);
      T[j] = (j == L) ? curv : Eigen::Vector2d(T[j + 1] + curv);
    }
    for (int i = 0; i <= L; ++i) {
      for (int j = 0; j <= L; ++j) dyn.M(i, j) += b.mass * S[i].dot(S[j]);
      dyn.G(i) += b.mass * g.gravity * S[i](1);
      for (int k = 0; k <= L; ++k) {
        for (int j = 0; j <= L; ++j) {
          dM[k](i, j) += b.mass * (T[std::max(i, k)].dot(S[j]) + S[i].dot(T[std::max(j, k)]));
        }
      }
    }
  }

  // rotary inertias: configuration independent, so no dM contribution
  for (int i = 0; i < n; ++i) {
    dyn.M.topLeftCorner(i + 1, i + 1).array() += g.link_inertias(i);
  }

  // Christoffel symbols of the first kind
  dyn.C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double cij = 0.0;
      for (int k = 0; k < n; ++k) {
        cij += 0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * dq(k);
      }
      dyn.C(i, j) = cij;
    }
  }
  return dyn;
}

double mass_matrix_condition(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

namespace {

struct PlantTerms {
  RobotRates rates;
  LinkDynamics dyn;
  Eigen::VectorXd delta, tau_env, fric_J, fric_m;
};

PlantTerms assemble(const World& w, const RobotState& s, const Eigen::VectorXd& u,
                    const std::vector<PointMass>& payload_masses) {
  const Eigen::Index n = w.geometry.lengths.size();
  require(s.q_J.size() == n && s.dq_J.size() == n && s.q_m.size() == n && s.dq_m.size() == n,
          "robot state size mismatch");
  require(u.size() == n, "input vector size mismatch");

  PlantTerms pt;
  pt.delta = s.q_J - s.q_m;
  pt.tau_env = environment_torque(w.environment, s.q_m, s.dq_m);
  pt.fric_J = motor_friction(w.friction, s.dq_J, s.t);
  pt.fric_m = link_friction(w.friction, s.dq_m);
  pt.dyn = compute_link_dynamics(w.geometry, payload_masses, s.q_m, s.dq_m);

  Eigen::VectorXd spring(n), qdd_J(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const JointParamValues& p = w.joints[i].true_phys;
    spring(i) = p.k * pt.delta(i);
    qdd_J(i) = (u(i) - spring(i) - p.b_J * s.dq_J(i) - pt.fric_J(i)) / p.J;
  }
  Eigen::VectorXd rhs = spring - pt.dyn.G - pt.dyn.C * s.dq_m - pt.tau_env - pt.fric_m;
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) -= w.joints[i].true_phys.b_m * s.dq_m(i);

  pt.rates.qd_J = s.dq_J;
  pt.rates.qdd_J = qdd_J;
  pt.rates.qd_m = s.dq_m;
  pt.rates.qdd_m = pt.dyn.M.ldlt().solve(rhs);

  for (const Eigen::VectorXd* v : {&pt.rates.qdd_J, &pt.rates.qdd_m}) {
    const int bad = first_nonfinite(*v);
    if (bad >= 0) {
      throw DivergenceError("plant derivative became non-finite at joint " +
                                std::to_string(bad) + ", t = " + std::to_string(s.t),
                            bad, s.t);
    }
  }
  return pt;
}

}  // namespace

RobotRates plant_derivative(const World& w, const RobotState& s, const Eigen::VectorXd& u,
                            const std::vector<PointMass>& payload_masses) {
  return assemble(w, s, u, payload_masses).rates;
}

std::vector<Eigen::Vector4d> true_disturbance(const World& w, const RobotState& s,
                                              const Eigen::VectorXd& u,
                                              const std::vector<PointMass>& payload_masses) {
  const PlantTerms pt = assemble(w, s, u, payload_masses);
  const Eigen::Index n = w.geometry.lengths.size();
  const Eigen::VectorXd M_qdd = pt.dyn.M * pt.rates.qdd_m;
  const Eigen::VectorXd C_dq = pt.dyn.C * s.dq_m;

  std::vector<Eigen::Vector4d> dis(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const JointParamValues& t = w.joints[i].true_phys;
    const JointParamValues& nom = w.joints[i].nominal;
    const double k_mis = (t.k - nom.k) * pt.delta(i);

    const double matched = (t.J - nom.J) * pt.rates.qdd_J(i) +
                           (t.b_J - nom.b_J) * s.dq_J(i) + k_mis + pt.fric_J(i);
    const double mismatched = (M_qdd(i) - nom.m * pt.rates.qdd_m(i)) + C_dq(i) +
                              (t.b_m - nom.b_m) * s.dq_m(i) - k_mis + pt.dyn.G(i) +
                              pt.fric_m(i) + pt.tau_env(i);
    dis[i] = Eigen::Vector4d(0.0, matched / nom.J, 0.0, mismatched / nom.m);
  }
  return dis;
}

double total_energy(const World& w, const RobotState& s,
                    const std::vector<PointMass>& payload_masses) {
  const LinkDynamics dyn = compute_link_dynamics(w.geometry, payload_masses, s.q_m, s.dq_m);
  double E = 0.5 * s.dq_m.dot(dyn.M * s.dq_m);
  for (size_t i = 0; i < w.joints.size(); ++i) {
    const JointParamValues& p = w.joints[i].true_phys;
    const double d = s.q_J(i) - s.q_m(i);
    E += 0.5 * p.J * s.dq_J(i) * s.dq_J(i) + 0.5 * p.k * d * d;
  }
  for (Eigen::Index i = 0; i < w.geometry.lengths.size(); ++i) {
    E += w.geometry.masses(i) * w.geometry.gravity *
         body_position(w.geometry, s.q_m, static_cast<int>(i), w.geometry.com_offsets(i))(1);
  }
  for (const PointMass& pm : payload_masses) {
    E += pm.mass * w.geometry.gravity * body_position(w.geometry, s.q_m, pm.link, pm.offset)(1);
  }
  return E;
}

}  // namespace seactrl
