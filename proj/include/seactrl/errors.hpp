#pragma once

#include <stdexcept>
#include <string>

namespace seactrl {

// Invalid physical parameters, malformed scenario input, or a violated
// structural precondition (e.g. a disturbance vector with entries outside
// the two input channels).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The integrated state stopped being finite.  Carries the first offending
// joint (0-based, -1 if unattributable) and the simulation time.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int joint, double time)
      : std::runtime_error(what), joint_(joint), time_(time) {}

  int joint() const noexcept { return joint_; }
  double time() const noexcept { return time_; }

private:
  int joint_;
  double time_;
};

// Controller synthesis could not produce a usable transformation
// (loss of controllability, ill-conditioned canonical map).
class SynthesisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A closed loop failed its stability certificate.
class CertificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace seactrl
