#include "seactrl/trajectory.hpp"

#include <cmath>
#include <string>

namespace seactrl {

StepTrajectory::StepTrajectory(double initial, std::vector<double> times,
                               std::vector<double> values, double rise_time)
    : initial_(initial), times_(std::move(times)), values_(std::move(values)), rise_(rise_time) {
  if (times_.size() != values_.size()) {
    throw ValidationError("step trajectory needs matching times and values");
  }
  if (!(rise_ > 0.0) || !std::isfinite(rise_)) {
    throw ValidationError("step rise time must be positive");
  }
  for (size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
      throw ValidationError("step trajectory entries must be finite");
    }
    if (i > 0 && times_[i] < times_[i - 1] + rise_) {
      throw ValidationError("step at t=" + std::to_string(times_[i]) +
                            " overlaps the previous blend");
    }
  }
}

std::array<double, 5> StepTrajectory::eval(double t) const {
  double prev = initial_;
  for (size_t i = 0; i < times_.size(); ++i) {
    if (t < times_[i]) break;
    const double s = (t - times_[i]) / rise_;
    if (s >= 1.0) {
      prev = values_[i];
      continue;
    }
    const double dv = values_[i] - prev;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    return {prev + dv * (10 * s3 - 15 * s4 + 6 * s5),
            dv * (30 * s2 - 60 * s3 + 30 * s4) / rise_,
            dv * (60 * s - 180 * s2 + 120 * s3) / (rise_ * rise_),
            dv * (60 - 360 * s + 360 * s2) / (rise_ * rise_ * rise_),
            dv * (-360 + 720 * s) / (rise_ * rise_ * rise_ * rise_)};
  }
  return {prev, 0, 0, 0, 0};
}

SineTrajectory::SineTrajectory(double amplitude, double frequency_hz, double phase,
                               double offset)
    : amp_(amplitude), f_hz_(frequency_hz), w_(2.0 * M_PI * frequency_hz), phase_(phase),
      offset_(offset) {
  if (!std::isfinite(amplitude) || !std::isfinite(frequency_hz) || !std::isfinite(phase) ||
      !std::isfinite(offset) || frequency_hz < 0.0) {
    throw ValidationError("sine trajectory parameters must be finite, frequency >= 0");
  }
}

std::array<double, 5> SineTrajectory::eval(double t) const {
  const double th = w_ * t + phase_;
  const double s = std::sin(th), c = std::cos(th);
  return {offset_ + amp_ * s, amp_ * w_ * c, -amp_ * w_ * w_ * s, -amp_ * w_ * w_ * w_ * c,
          amp_ * w_ * w_ * w_ * w_ * s};
}

}  // namespace seactrl
