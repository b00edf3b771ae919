#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "seactrl/trajectory.hpp"

using namespace seactrl;

namespace {

// central finite difference of derivative order n against order n+1
void check_derivative_chain(const Trajectory& tr, double t, double h, double tol) {
  for (int n = 0; n < 4; ++n) {
    const double fd = (tr.eval(t + h)[n] - tr.eval(t - h)[n]) / (2.0 * h);
    CHECK(fd == doctest::Approx(tr.eval(t)[n + 1]).epsilon(tol).scale(1.0));
  }
}

}  // namespace

TEST_CASE("constant") {
  const ConstantTrajectory c(0.7);
  for (double t : {-1.0, 0.0, 5.0}) {
    CHECK(c.eval(t)[0] == 0.7);
    for (int n = 1; n <= 4; ++n) CHECK(c.eval(t)[n] == 0.0);
  }
}

TEST_CASE("step blend endpoints and interior values") {
  const StepTrajectory s(0.0, {1.0}, {2.0}, 0.2);
  CHECK(s.eval(0.0)[0] == 0.0);
  CHECK(s.eval(0.999)[0] == 0.0);
  CHECK(s.eval(1.2)[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.eval(5.0)[0] == 2.0);
  // midpoint of the quintic blend is the midpoint value
  CHECK(s.eval(1.1)[0] == doctest::Approx(1.0).epsilon(1e-12));
  // peak rate of the quintic: 15/8 * dv / T
  CHECK(s.eval(1.1)[1] == doctest::Approx(15.0 / 8.0 * 2.0 / 0.2).epsilon(1e-12));
  // rate and acceleration vanish at both ends of the blend
  for (double t : {1.0, 1.2}) {
    CHECK(std::abs(s.eval(t)[1]) < 1e-12);
    CHECK(std::abs(s.eval(t)[2]) < 1e-12);
  }
}

TEST_CASE("step derivative chain by finite differences") {
  const StepTrajectory s(-0.5, {1.0, 2.0}, {2.0, -1.0}, 0.4);
  for (double t : {1.05, 1.17, 1.33, 2.02, 2.2, 2.39}) {
    check_derivative_chain(s, t, 1e-6, 1e-5);
  }
}

TEST_CASE("consecutive steps chain from reached values") {
  const StepTrajectory s(1.0, {0.0, 1.0, 2.0}, {2.0, 0.5, 3.0}, 0.3);
  CHECK(s.eval(0.9)[0] == doctest::Approx(2.0));
  CHECK(s.eval(1.9)[0] == doctest::Approx(0.5));
  CHECK(s.eval(2.9)[0] == doctest::Approx(3.0));
  // blend midpoints bisect the segment endpoints
  CHECK(s.eval(1.15)[0] == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("step validation") {
  CHECK_THROWS_AS(StepTrajectory(0, {1.0}, {1.0, 2.0}, 0.1), ValidationError);
  CHECK_THROWS_AS(StepTrajectory(0, {1.0, 1.05}, {1.0, 2.0}, 0.1), ValidationError);
  CHECK_THROWS_AS(StepTrajectory(0, {1.0}, {1.0}, 0.0), ValidationError);
  CHECK_THROWS_AS(StepTrajectory(0, {1.0}, {NAN}, 0.1), ValidationError);
  CHECK_NOTHROW(StepTrajectory(0, {1.0, 1.1}, {1.0, 2.0}, 0.1));
}

TEST_CASE("sine values and derivative chain") {
  const double A = 0.5, f = 1.25, ph = 0.3, off = -0.2;
  const SineTrajectory s(A, f, ph, off);
  const double w = 2.0 * M_PI * f;
  CHECK(s.eval(0.0)[0] == doctest::Approx(off + A * std::sin(ph)).epsilon(1e-15));
  CHECK(s.eval(0.0)[1] == doctest::Approx(A * w * std::cos(ph)).epsilon(1e-15));
  CHECK(s.eval(0.37)[4] ==
        doctest::Approx(A * w * w * w * w * std::sin(w * 0.37 + ph)).epsilon(1e-12));
  for (double t : {0.0, 0.21, 0.5}) check_derivative_chain(s, t, 1e-6, 1e-6);
  CHECK_THROWS_AS(SineTrajectory(1.0, -2.0, 0.0, 0.0), ValidationError);
}
