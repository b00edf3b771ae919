#include <cmath>
#include <memory>

#include "seactrl/errors.hpp"
#include "seactrl/sim.hpp"

namespace seactrl {

namespace {

LinkGeometry chain_geometry(double mass_scale, double gravity) {
  // Stout three-link chain moving in a horizontal plane.  The payload masses
  // the campaigns drop onto the arm are fixed, so the links have to carry
  // enough inertia of their own that a loaded joint sees at most a few times
  // its bare value; lighter links push the link-side disturbance loop past
  // its stability margin.
  LinkGeometry g;
  g.lengths = Eigen::Vector3d(0.3, 0.3, 0.2);
  g.masses = Eigen::Vector3d(3.0, 2.25, 1.5) * mass_scale;
  g.com_offsets = 0.5 * g.lengths;
  g.link_inertias = (g.masses.array() * g.lengths.array().square() / 12.0).matrix();
  g.gravity = gravity;
  return g;
}

Eigen::VectorXd diag_inertia(const LinkGeometry& g) {
  const Eigen::VectorXd q0 = Eigen::VectorXd::Zero(g.lengths.size());
  return compute_link_dynamics(g, {}, q0, q0).M.diagonal();
}

}  // namespace

World default_world(bool mismatched, double gravity) {
  World w;
  w.geometry = chain_geometry(mismatched ? 1.2 : 1.0, gravity);

  // Nominal link inertias sit a little above the unloaded straight-pose mass
  // matrix diagonal, splitting the gap between the bare and payload-loaded
  // plant; the true plant runs +20% inertia, so the mismatch is live from
  // t = 0.  Damping and stiffness are taken as identified exactly.  The link
  // damping is deliberately generous: it is the only term that bleeds energy
  // out of the Coulomb-excited spring mode, and the disturbance observer
  // cancels it from the tracking dynamics anyway.
  const Eigen::VectorXd m_nom = 1.3 * diag_inertia(chain_geometry(1.0, gravity));

  for (int i = 0; i < 3; ++i) {
    JointParams p;
    p.nominal = JointParamValues{0.05, m_nom(i), 0.1, 24.0, 5000.0};
    p.true_phys = p.nominal;
    if (mismatched) p.true_phys.J = 1.2 * p.nominal.J;
    w.joints.push_back(p);
  }

  Environment& e = w.environment;
  e.active = {false, false, false};
  e.K_e = Eigen::Vector3d::Zero();
  e.D_e = Eigen::Vector3d::Zero();
  e.M_e = Eigen::Vector3d::Zero();
  e.q_e = Eigen::Vector3d::Zero();

  FrictionConfig& f = w.friction;
  if (mismatched) {
    f.coulomb_motor = Eigen::Vector3d::Constant(0.5);
    f.coulomb_link = Eigen::Vector3d::Constant(0.1);
  } else {
    f.coulomb_motor = Eigen::Vector3d::Zero();
    f.coulomb_link = Eigen::Vector3d::Zero();
  }
  f.ripple_amplitude = Eigen::Vector3d::Zero();
  f.ripple_hz = Eigen::Vector3d::Zero();
  return w;
}

std::vector<std::string> campaign_names() {
  return {"position-step", "position-sine", "force-soft", "force-stiff"};
}

std::string campaign_summary(const std::string& name) {
  if (name == "position-step")
    return "step regulation under friction, inertia mismatch and two payload drops";
  if (name == "position-sine")
    return "0.5 Hz sinusoidal tracking under the same mismatch and payload drops";
  if (name == "force-soft")
    return "spring-torque steps against a soft environment (K_e = 100 N m/rad)";
  if (name == "force-stiff")
    return "spring-torque steps against a stiff environment (K_e = 10000 N m/rad)";
  throw ValidationError("unknown campaign: " + name);
}

Scenario builtin_campaign(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.dt = 1e-4;

  const double amp_pos[3] = {0.5, 0.4, 0.3};  // [rad]
  const double amp_frc[3] = {5.0, 4.0, 3.0};  // [N m]

  if (name == "position-step" || name == "position-sine") {
    sc.duration = 6.0;
    sc.world = default_world(true, 0.0);
    sc.world.payloads = {PayloadEvent{1.8, PayloadLocation::Midspan, 1, 1.0},
                         PayloadEvent{3.0, PayloadLocation::Tip, 0, 2.5}};
    for (int i = 0; i < 3; ++i) {
      JointControlConfig c;
      c.mode = ControlMode::Position;
      c.dob_bandwidth = 600.0;
      c.poles = {-14.0, -16.0, -18.0, -20.0};
      if (name == "position-step") {
        // Out at 0.5 s on the bare arm, back home at 3.5 s with both payloads
        // attached, so the return step exercises the fully loaded plant.
        c.reference = std::make_shared<StepTrajectory>(
            0.0, std::vector<double>{0.5, 3.5}, std::vector<double>{amp_pos[i], 0.0}, 0.3);
      } else {
        c.reference = std::make_shared<SineTrajectory>(amp_pos[i], 0.5, 0.0, 0.0);
      }
      sc.control.push_back(c);
    }
    sc.metrics.post_transient = name == "position-step" ? 4.5 : 1.0;
    sc.metrics.settling_band = 1e-3;
    return sc;
  }

  if (name == "force-soft" || name == "force-stiff") {
    const bool stiff = name == "force-stiff";
    sc.duration = 4.0;
    // Torque stepping against a wall resolves spring deflections of k / sse,
    // well under a microradian here, so these campaigns run the identified
    // plant without friction: stick-slip alone would wander the equilibrium
    // by orders of magnitude more than the tolerated torque error.
    sc.world = default_world(false, 0.0);

    Environment& e = sc.world.environment;
    e.active = {true, true, true};
    e.K_e = Eigen::Vector3d::Constant(stiff ? 1e4 : 100.0);
    // The wall damping acts on the link through the smallest mass-matrix
    // eigenvalue, so its decay rate is what caps the explicit integrator's
    // step: D_e / lambda_min(M) * dt has to stay inside the stability
    // interval with margin.
    e.D_e = Eigen::Vector3d::Constant(stiff ? 50.0 : 20.0);
    e.M_e = Eigen::Vector3d::Zero();
    e.q_e = Eigen::Vector3d::Zero();

    for (int i = 0; i < 3; ++i) {
      JointControlConfig c;
      c.mode = ControlMode::Force;
      c.dob_bandwidth = 300.0;
      c.force_kp = 2000.0;
      c.force_kd = 100.0;
      c.reference = std::make_shared<StepTrajectory>(0.0, std::vector<double>{0.5},
                                                     std::vector<double>{amp_frc[i]}, 0.2);
      sc.control.push_back(c);
    }
    sc.metrics.post_transient = 1.0;
    sc.metrics.settling_band = 1e-2;
    return sc;
  }

  throw ValidationError("unknown campaign: " + name);
}

}  // namespace seactrl
