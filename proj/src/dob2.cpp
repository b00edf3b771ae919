#include "seactrl/dob2.hpp"

#include <cmath>
#include <string>

namespace seactrl {

DobGains critically_damped_gains(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("observer bandwidth must be positive and finite, got " +
                          std::to_string(bandwidth));
  }
  return {3.0 * bandwidth, 3.0 * bandwidth * bandwidth,
          bandwidth * bandwidth * bandwidth};
}

bool gains_are_hurwitz(const DobGains& g) {
  return g.L1 > 0.0 && g.L3 > 0.0 && g.L1 * g.L2 > g.L3;
}

double sinusoid_error_gain(double bandwidth, double w) {
  const double r = w * w / (w * w + bandwidth * bandwidth);
  return r * std::sqrt(r);
}

DobState dob_init(const DobGains& g, const Eigen::Vector4d& x0) {
  return {g.L1 * x0, g.L2 * x0, g.L3 * x0};
}

DobState dob_derivative(const NominalModel& md, const DobGains& g, const DobState& s,
                        const Eigen::Vector4d& x, double u) {
  const Eigen::Vector4d known = md.A * x + md.b * u;  // modelled part of xdot
  DobState d;
  d.z1 = -g.L1 * s.z1 + s.z2 + g.L1 * known + (g.L1 * g.L1 - g.L2) * x;
  d.z2 = -g.L2 * s.z1 + s.z3 + g.L2 * known + (g.L1 * g.L2 - g.L3) * x;
  d.z3 = -g.L3 * s.z1 + g.L3 * known + (g.L3 * g.L1) * x;
  return d;
}

DobEstimates dob_estimates(const DobGains& g, const DobState& s, const Eigen::Vector4d& x) {
  return {s.z1 - g.L1 * x, s.z2 - g.L2 * x, s.z3 - g.L3 * x};
}

}  // namespace seactrl
