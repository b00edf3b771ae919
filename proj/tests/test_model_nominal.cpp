#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "seactrl/model_nominal.hpp"

using namespace seactrl;

namespace {

JointParamValues unit_params() { return {1.0, 1.0, 0.0, 0.0, 1.0}; }

std::mt19937 rng(20240817u);

JointParamValues random_params() {
  std::uniform_real_distribution<double> J(0.02, 1.0), m(0.05, 2.0), b(0.0, 1.0), k(10.0, 1000.0);
  return {J(rng), m(rng), b(rng), b(rng), k(rng)};
}

}  // namespace

TEST_CASE("unit parameters give the canonical two-mass matrices") {
  const NominalModel md = build_nominal_model(unit_params());
  Eigen::Matrix4d A;
  A << 0, 1, 0, 0,
      -1, 0, 1, 0,
      0, 0, 0, 1,
      1, 0, -1, 0;
  CHECK((md.A - A).cwiseAbs().maxCoeff() == 0.0);
  CHECK(md.b(0) == 0.0);
  CHECK(md.b(1) == 1.0);
  CHECK(md.b(2) == 0.0);
  CHECK(md.b(3) == 0.0);
}

TEST_CASE("worked example J=2 m=4 k=100") {
  const NominalModel md = build_nominal_model({2.0, 4.0, 0.2, 0.4, 100.0});
  CHECK(md.A(1, 0) == doctest::Approx(-50.0).epsilon(1e-15));
  CHECK(md.A(1, 1) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(md.A(1, 2) == doctest::Approx(50.0).epsilon(1e-15));
  CHECK(md.A(1, 3) == 0.0);
  CHECK(md.A(3, 0) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(md.A(3, 1) == 0.0);
  CHECK(md.A(3, 2) == doctest::Approx(-25.0).epsilon(1e-15));
  CHECK(md.A(3, 3) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(md.b(1) == doctest::Approx(0.5).epsilon(1e-15));
  // position rows are pure integrators
  CHECK(md.A.row(0) == Eigen::RowVector4d(0, 1, 0, 0));
  CHECK(md.A.row(2) == Eigen::RowVector4d(0, 0, 0, 1));
}

TEST_CASE("trace identity and controllability over random parameter draws") {
  for (int it = 0; it < 200; ++it) {
    const JointParamValues p = random_params();
    const NominalModel md = build_nominal_model(p);
    CHECK(md.A.trace() == doctest::Approx(-(p.b_J / p.J + p.b_m / p.m)).epsilon(1e-12));

    Eigen::FullPivLU<Eigen::Matrix4d> lu(controllability_matrix(md));
    CHECK(lu.rank() == 4);
  }
}

TEST_CASE("frictionless spectrum: double integrator plus elastic mode") {
  const JointParamValues p{0.5, 1.5, 0.0, 0.0, 200.0};
  const NominalModel md = build_nominal_model(p);
  const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(md.A).eigenvalues();
  const double w = std::sqrt(p.k / p.J + p.k / p.m);

  double max_re = 0.0, max_im = 0.0;
  int near_zero = 0;
  for (int i = 0; i < 4; ++i) {
    max_re = std::max(max_re, std::abs(ev(i).real()));
    max_im = std::max(max_im, std::abs(ev(i).imag()));
    if (std::abs(ev(i)) < 1e-4) ++near_zero;
  }
  // the rigid-body eigenvalue is defective, so it is only resolved to
  // sqrt(machine epsilon) * scale
  CHECK(max_re < 1e-5);
  CHECK(near_zero == 2);                      // rigid-body double pole
  CHECK(max_im == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("matched/mismatched split recovers physical torques") {
  const NominalModel md = build_nominal_model({2.0, 4.0, 0.2, 0.4, 100.0});
  const auto [matched, mismatched] =
      matched_mismatched_split(md, Eigen::Vector4d(0.0, 1.5, 0.0, -2.0));
  CHECK(matched == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(mismatched == doctest::Approx(-8.0).epsilon(1e-15));

  CHECK_THROWS_AS(matched_mismatched_split(md, Eigen::Vector4d(0.1, 0.0, 0.0, 0.0)),
                  ValidationError);
  CHECK_THROWS_AS(matched_mismatched_split(md, Eigen::Vector4d(0.0, 0.0, 1e-12, 0.0)),
                  ValidationError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_nominal_model({0.0, 1.0, 0.0, 0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(build_nominal_model({1.0, -1.0, 0.0, 0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(build_nominal_model({1.0, 1.0, 0.0, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(build_nominal_model({1.0, 1.0, -0.1, 0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(build_nominal_model({1.0, 1.0, 0.0, 0.0, std::nan("")}), ValidationError);
  CHECK_NOTHROW(build_nominal_model(unit_params()));
}
