#include "seactrl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "seactrl/errors.hpp"
#include "seactrl/integrate.hpp"

namespace seactrl {

namespace {

MeasurementFrame make_frame(const RobotState& s) {
  MeasurementFrame m;
  m.t = s.t;
  m.q_J = s.q_J;
  m.dq_J = s.dq_J;
  m.q_m = s.q_m;
  m.dq_m = s.dq_m;
  return m;
}

RobotState unpack_plant(const Eigen::VectorXd& Y, int n, double t) {
  RobotState s;
  s.t = t;
  s.q_J = Y.segment(0, n);
  s.dq_J = Y.segment(n, n);
  s.q_m = Y.segment(2 * n, n);
  s.dq_m = Y.segment(3 * n, n);
  return s;
}

DobState unpack_dob(const Eigen::VectorXd& Y, int n, int i) {
  const int base = 4 * n + 12 * i;
  DobState d;
  d.z1 = Y.segment<4>(base);
  d.z2 = Y.segment<4>(base + 4);
  d.z3 = Y.segment<4>(base + 8);
  return d;
}

void pack_dob(Eigen::VectorXd& Y, int n, int i, const DobState& d) {
  const int base = 4 * n + 12 * i;
  Y.segment<4>(base) = d.z1;
  Y.segment<4>(base + 4) = d.z2;
  Y.segment<4>(base + 8) = d.z3;
}

// Non-finite plant coordinates are caught inside the dynamics; this also
// aborts runaway-but-still-finite trajectories before they reach infinity.
void check_state(const RobotState& s, int n) {
  for (int i = 0; i < n; ++i) {
    const double m = std::max({std::abs(s.q_J(i)), std::abs(s.dq_J(i)), std::abs(s.q_m(i)),
                               std::abs(s.dq_m(i))});
    if (!std::isfinite(m) || m > 1e9) {
      std::ostringstream os;
      os << "state of joint " << (i + 1) << " diverged at t = " << s.t;
      throw DivergenceError(os.str(), i, s.t);
    }
  }
}

bool in_contact(const Environment& e, const Eigen::VectorXd& q_m, int i) {
  return static_cast<std::size_t>(i) < e.active.size() && e.active[i] && q_m(i) >= e.q_e(i);
}

std::vector<JointMetrics> compute_metrics(const Scenario& sc, const Telemetry& tm) {
  const int n = static_cast<int>(sc.control.size());
  std::vector<JointMetrics> out(n);
  for (int i = 0; i < n; ++i) {
    const bool pos = sc.control[i].mode == ControlMode::Position;
    JointMetrics& m = out[i];
    m.mode = pos ? "position" : "force";
    const std::size_t c_y =
        tm.col((pos ? "q_m" : "tau_spring") + std::to_string(i + 1));
    const std::size_t c_r = tm.col("ref" + std::to_string(i + 1));

    double sum2 = 0.0, sse_sum = 0.0;
    std::size_t cnt = 0, sse_cnt = 0;
    const double sse_start = std::max(0.0, sc.duration - 0.5);
    std::ptrdiff_t last_outside = -1;
    for (std::size_t r = 0; r < tm.rows; ++r) {
      const double t = tm.at(r, 0);
      const double e = tm.at(r, c_y) - tm.at(r, c_r);
      if (t >= sc.metrics.post_transient - 1e-12) {
        sum2 += e * e;
        m.max_abs_error = std::max(m.max_abs_error, std::abs(e));
        ++cnt;
      }
      if (t >= sse_start - 1e-12) {
        sse_sum += std::abs(e);
        ++sse_cnt;
      }
      if (std::abs(e) > sc.metrics.settling_band) last_outside = static_cast<std::ptrdiff_t>(r);
    }
    m.rms_error = cnt ? std::sqrt(sum2 / static_cast<double>(cnt)) : 0.0;
    m.steady_state_error = sse_cnt ? sse_sum / static_cast<double>(sse_cnt) : 0.0;
    if (last_outside < 0) {
      m.settling_time = 0.0;
    } else if (static_cast<std::size_t>(last_outside) + 1 >= tm.rows) {
      m.settling_time = -1.0;  // never inside the band for good
    } else {
      m.settling_time = tm.at(static_cast<std::size_t>(last_outside) + 1, 0);
    }
  }
  return out;
}

}  // namespace

std::size_t Telemetry::col(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ValidationError("unknown telemetry column: " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

void validate_scenario(const Scenario& sc) {
  if (sc.name.empty()) throw ValidationError("scenario name must not be empty");
  if (!(sc.dt > 0.0) || !std::isfinite(sc.dt)) throw ValidationError("dt must be positive");
  if (!(sc.duration > 0.0) || !std::isfinite(sc.duration))
    throw ValidationError("duration must be positive");
  const double steps_f = sc.duration / sc.dt;
  if (steps_f < 1.0 - 1e-9) throw ValidationError("duration must cover at least one step");
  if (std::abs(steps_f - std::round(steps_f)) > 1e-6 * std::max(1.0, steps_f))
    throw ValidationError("duration must be an integer multiple of dt");
  if (!(sc.noise_std >= 0.0) || !std::isfinite(sc.noise_std))
    throw ValidationError("noise_std must be non-negative");
  if (!(sc.torque_limit > 0.0))  // +inf allowed
    throw ValidationError("torque_limit must be positive");
  if (!(sc.metrics.post_transient >= 0.0) || sc.metrics.post_transient > sc.duration)
    throw ValidationError("metrics.post_transient must lie inside [0, duration]");
  if (!(sc.metrics.settling_band > 0.0) || !std::isfinite(sc.metrics.settling_band))
    throw ValidationError("metrics.settling_band must be positive");

  validate_world(sc.world);
  if (sc.control.size() != sc.world.joints.size())
    throw ValidationError("one control config per joint is required");
  for (std::size_t i = 0; i < sc.control.size(); ++i) {
    if (!sc.control[i].reference) {
      throw ValidationError("joint " + std::to_string(i + 1) +
                            " has no reference trajectory");
    }
  }
}

RunResult run(const Scenario& sc, const StepCallback& cb) {
  validate_scenario(sc);

  World world = sc.world;
  // Payload drops take effect at step boundaries: snap each event time up to
  // the next grid point so every RK4 stage of a step sees one payload set.
  for (PayloadEvent& e : world.payloads) {
    e.time = sc.dt * std::max(0.0, std::ceil(e.time / sc.dt - 1e-9));
  }

  const int n = static_cast<int>(world.joints.size());
  const long long steps = std::llround(sc.duration / sc.dt);

  Controller ctl(world.joints, sc.control, sc.torque_limit);

  RunResult out;
  out.certificates.reserve(n);
  for (int i = 0; i < n; ++i) out.certificates.push_back(ctl.joint(i).certificate);

  Telemetry& tm = out.telemetry;
  tm.columns.push_back("t");
  static const char* const kFields[] = {"q_J",       "dq_J",       "q_m",       "dq_m",
                                        "u",         "ref",        "tau_spring", "tau_hat_m",
                                        "tau_hat_mm", "tau_dis_m", "tau_dis_mm", "contact"};
  for (int i = 0; i < n; ++i) {
    for (const char* f : kFields) tm.columns.push_back(f + std::to_string(i + 1));
  }
  tm.data.reserve(static_cast<std::size_t>(steps + 1) * tm.columns.size());

  // Measurement noise offsets are drawn once per control step and held
  // through the RK4 stages, keeping the integrand smooth inside a step and
  // the stage commands consistent with the logged one.
  std::mt19937_64 rng(sc.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(4 * n);
  auto draw_noise = [&] {
    if (sc.noise_std > 0.0) {
      for (int j = 0; j < 4 * n; ++j) noise(j) = sc.noise_std * gauss(rng);
    }
  };
  auto measure = [&](const RobotState& s) {
    MeasurementFrame m = make_frame(s);
    if (sc.noise_std > 0.0) {
      m.q_J += noise.segment(0, n);
      m.dq_J += noise.segment(n, n);
      m.q_m += noise.segment(2 * n, n);
      m.dq_m += noise.segment(3 * n, n);
    }
    return m;
  };

  RobotState state;
  state.q_J = Eigen::VectorXd::Zero(n);
  state.dq_J = Eigen::VectorXd::Zero(n);
  state.q_m = Eigen::VectorXd::Zero(n);
  state.dq_m = Eigen::VectorXd::Zero(n);
  state.t = 0.0;

  draw_noise();
  ctl.initialize(measure(state));

  Eigen::VectorXd Y = Eigen::VectorXd::Zero(16 * n);
  const std::vector<DobState>& d0 = ctl.observer_states();
  for (int i = 0; i < n; ++i) pack_dob(Y, n, i, d0[i]);

  auto log_row = [&](const RobotState& s) {
    const std::vector<PointMass> pm = payload_point_masses(world.geometry, world.payloads, s.t);
    const Eigen::VectorXd& u = ctl.command();
    const std::vector<Eigen::Vector4d> dis = true_disturbance(world, s, u, pm);

    tm.data.push_back(s.t);
    for (int i = 0; i < n; ++i) {
      const JointParamValues& nom = world.joints[i].nominal;
      const DobEstimates& est = ctl.last_estimates(i);
      tm.data.push_back(s.q_J(i));
      tm.data.push_back(s.dq_J(i));
      tm.data.push_back(s.q_m(i));
      tm.data.push_back(s.dq_m(i));
      tm.data.push_back(u(i));
      tm.data.push_back(ctl.last_reference(i));
      tm.data.push_back(nom.k * (s.q_J(i) - s.q_m(i)));
      tm.data.push_back(est.tau(1) * nom.J);
      tm.data.push_back(est.tau(3) * nom.m);
      tm.data.push_back(dis[i](1) * nom.J);
      tm.data.push_back(dis[i](3) * nom.m);
      tm.data.push_back(in_contact(world.environment, s.q_m, i) ? 1.0 : 0.0);
    }
    ++tm.rows;

    if (cb) {
      const RobotRates rates = plant_derivative(world, s, u, pm);
      cb(StepRecord{s.t, s, rates, u, dis, pm, ctl});
    }
  };

  double cond_max = 0.0;
  log_row(state);

  for (long long k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * sc.dt;
    const std::vector<PointMass> pm = payload_point_masses(world.geometry, world.payloads, t0);

    // The command is an algebraic function of plant and observer states, so
    // the coupled ODE evaluates it at every stage instead of holding it.
    auto field = [&](double t, const Eigen::VectorXd& y) {
      const RobotState s = unpack_plant(y, n, t);
      std::vector<DobState> zs(n);
      for (int i = 0; i < n; ++i) zs[i] = unpack_dob(y, n, i);
      const Eigen::VectorXd u = ctl.evaluate(measure(s), zs);
      const RobotRates r = plant_derivative(world, s, u, pm);
      Eigen::VectorXd dy(16 * n);
      dy.segment(0, n) = r.qd_J;
      dy.segment(n, n) = r.qdd_J;
      dy.segment(2 * n, n) = r.qd_m;
      dy.segment(3 * n, n) = r.qdd_m;
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector4d x(s.q_J(i), s.dq_J(i), s.q_m(i), s.dq_m(i));
        const DobState ds = ctl.observer_derivative(i, zs[i], x, u(i));
        pack_dob(dy, n, i, ds);
      }
      return dy;
    };

    Y = rk4_step(field, t0, Y, sc.dt);
    state = unpack_plant(Y, n, static_cast<double>(k + 1) * sc.dt);
    check_state(state, n);

    std::vector<DobState> adv(n);
    for (int i = 0; i < n; ++i) adv[i] = unpack_dob(Y, n, i);
    draw_noise();
    ctl.advance(measure(state), std::move(adv));

    if ((k + 1) % 200 == 0 || k + 1 == steps) {
      const LinkDynamics dyn = compute_link_dynamics(
          world.geometry, payload_point_masses(world.geometry, world.payloads, state.t),
          state.q_m, state.dq_m);
      cond_max = std::max(cond_max, mass_matrix_condition(dyn.M));
    }
    log_row(state);
  }

  if (cond_max > 1e8) {
    std::ostringstream os;
    os << "mass matrix condition number reached " << cond_max;
    out.warnings.push_back(os.str());
  }

  out.metrics = compute_metrics(sc, tm);
  return out;
}

}  // namespace seactrl
