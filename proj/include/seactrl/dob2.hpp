#pragma once

#include <Eigen/Dense>

#include "seactrl/model_nominal.hpp"

namespace seactrl {

/// Gains of the three-stage disturbance observer cascade,
/// characteristic polynomial s^3 + L1 s^2 + L2 s + L3 per channel.
struct DobGains {
  double L1;
  double L2;
  double L3;
};

/// Triple real estimation pole at -bandwidth: (3g, 3g^2, g^3).
DobGains critically_damped_gains(double bandwidth);

/// Routh conditions for the estimation error cascade: L1 > 0, L3 > 0, L1 L2 > L3.
bool gains_are_hurwitz(const DobGains& g);

/// Estimation-error transfer gain from a unit sinusoidal disturbance at
/// angular frequency w to the steady disturbance-estimate error, for a
/// triple pole at -bandwidth: (w^2 / (w^2 + bandwidth^2))^(3/2).
double sinusoid_error_gain(double bandwidth, double w);

/// Observer state.  The z's are auxiliary-variable estimates:
/// z1 tracks tau + L1 x, z2 tracks dtau/dt + L2 x, z3 tracks d2tau/dt2 + L3 x,
/// which removes every unmeasurable tau derivative from the realization.
struct DobState {
  Eigen::Vector4d z1 = Eigen::Vector4d::Zero();
  Eigen::Vector4d z2 = Eigen::Vector4d::Zero();
  Eigen::Vector4d z3 = Eigen::Vector4d::Zero();
};

/// State with zero initial disturbance estimates at the measured state x0.
DobState dob_init(const DobGains& g, const Eigen::Vector4d& x0);

/// Right-hand side of the observer ODE.  Uses only the measured state and the
/// applied input; the estimation error obeys a pure cascade driven by the
/// third disturbance derivative, so constant/ramp/quadratic disturbances are
/// reconstructed exactly and the error is independent of u.
DobState dob_derivative(const NominalModel& md, const DobGains& g, const DobState& s,
                        const Eigen::Vector4d& x, double u);

/// Disturbance estimate and its first two time derivatives.
struct DobEstimates {
  Eigen::Vector4d tau = Eigen::Vector4d::Zero();
  Eigen::Vector4d dtau = Eigen::Vector4d::Zero();
  Eigen::Vector4d ddtau = Eigen::Vector4d::Zero();
};

DobEstimates dob_estimates(const DobGains& g, const DobState& s, const Eigen::Vector4d& x);

}  // namespace seactrl
