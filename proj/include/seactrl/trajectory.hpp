#pragma once

#include <array>
#include <memory>
#include <vector>

#include "seactrl/errors.hpp"

namespace seactrl {

/// Reference signal with analytic time derivatives through order 4
/// (the control law consumes the fourth derivative in its feedforward).
class Trajectory {
public:
  virtual ~Trajectory() = default;
  /// [y, dy/dt, d2y/dt2, d3y/dt3, d4y/dt4] at time t.
  virtual std::array<double, 5> eval(double t) const = 0;
};

class ConstantTrajectory final : public Trajectory {
public:
  explicit ConstantTrajectory(double value) : value_(value) {}
  std::array<double, 5> eval(double) const override { return {value_, 0, 0, 0, 0}; }
  double value() const { return value_; }

private:
  double value_;
};

/// Piecewise-constant targets connected by quintic smoothsteps
/// (10 s^3 - 15 s^4 + 6 s^5), so position, rate and acceleration stay
/// continuous across every step; the third and fourth derivatives are
/// bounded with jumps at the blend knots.
class StepTrajectory final : public Trajectory {
public:
  /// Steps start at `times[i]` and reach `values[i]` after `rise_time`.
  /// Times must be strictly increasing and separated by at least rise_time.
  StepTrajectory(double initial, std::vector<double> times, std::vector<double> values,
                 double rise_time);
  std::array<double, 5> eval(double t) const override;

  double initial() const { return initial_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double rise_time() const { return rise_; }

private:
  double initial_;
  std::vector<double> times_;
  std::vector<double> values_;
  double rise_;
};

/// y = offset + amplitude * sin(2 pi f t + phase)
class SineTrajectory final : public Trajectory {
public:
  SineTrajectory(double amplitude, double frequency_hz, double phase, double offset);
  std::array<double, 5> eval(double t) const override;

  double amplitude() const { return amp_; }
  /// Stored as given, so serialization round-trips bit-exactly.
  double frequency_hz() const { return f_hz_; }
  double phase() const { return phase_; }
  double offset() const { return offset_; }

private:
  double amp_, f_hz_, w_, phase_, offset_;
};

}  // namespace seactrl
