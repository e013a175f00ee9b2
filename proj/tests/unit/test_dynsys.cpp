#include <doctest.h>

#include "koopman/dynsys.hpp"
#include "koopman/gramians.hpp"
#include "test_util.hpp"

using namespace koopman;
using testutil::Rng;

TEST_CASE("step of the two-state oscillator") {
  const auto sys = DiscreteSystem::example1();

  SUBCASE("origin is a fixed point of the unforced map") {
    CHECK(sys.step(Vector::Zero(2)).isZero(0.0));
  }
  SUBCASE("hand evaluation at (1,1)") {
    Vector x(2);
    x << 1.0, 1.0;
    const Vector next = sys.step(x);
    // 0.75*1 + 0.02*1 - 1 and 0.9*1 + 0.12*1 + 0.1*1
    CHECK(next[0] == doctest::Approx(-0.23).epsilon(1e-15));
    CHECK(next[1] == doctest::Approx(1.12).epsilon(1e-15));
  }
  SUBCASE("dimension mismatches are errors") {
    CHECK_THROWS_AS(sys.step(Vector::Zero(3)), Error);
    CHECK_THROWS_AS(sys.step(Vector::Zero(2), Vector::Ones(1)), Error);
  }
}

TEST_CASE("controlled variant injects the input into the first channel") {
  const auto sys = DiscreteSystem::example3();
  Vector u(1);
  u << 1.0;
  const Vector next = sys.step(Vector::Zero(2), u);
  CHECK(next[0] == 1.0);
  CHECK(next[1] == 0.0);
}

TEST_CASE("parameter overrides reach the step map") {
  const auto sys = DiscreteSystem::example1({{"delta1", 0.5}});
  Vector x(2);
  x << 1.0, 0.0;
  CHECK(sys.step(x)[0] == doctest::Approx(0.52).epsilon(1e-15));
}

TEST_CASE("simulate") {
  const auto sys = DiscreteSystem::example1();

  SUBCASE("fixed point gives a constant trajectory") {
    const Trajectory traj = simulate(sys, Vector::Zero(2), InputSignal::zero(0), 10);
    CHECK(traj.horizon() == 10);
    CHECK(traj.states.isZero(0.0));
    CHECK(traj.outputs.isZero(0.0));
  }
  SUBCASE("one step matches step()") {
    Vector x0(2);
    x0 << 0.2, -0.1;
    const Trajectory traj = simulate(sys, x0, InputSignal::zero(0), 1);
    CHECK(traj.states.cols() == 2);
    CHECK((traj.states.col(1) - sys.step(x0)).isZero(0.0));
  }
  SUBCASE("horizon must be positive") {
    CHECK_THROWS_AS(simulate(sys, Vector::Zero(2), InputSignal::zero(0), 0), Error);
  }
  SUBCASE("divergence reports the step index") {
    Vector x0(2);
    x0 << 30.0, 30.0;
    try {
      simulate(sys, x0, InputSignal::zero(0), 50, 1e3);
      FAIL("expected divergence");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("at step") != std::string::npos);
    }
  }
  SUBCASE("bit-reproducible across runs") {
    Vector x0(2);
    x0 << 0.3, 0.3;
    const Trajectory a = simulate(sys, x0, InputSignal::zero(0), 40);
    const Trajectory b = simulate(sys, x0, InputSignal::zero(0), 40);
    CHECK(a.states == b.states);
    CHECK(a.outputs == b.outputs);
  }
}

TEST_CASE("forced oscillation stays bounded with the ramp input") {
  const auto sys = DiscreteSystem::example3();
  const Trajectory traj = simulate(sys, Vector::Zero(2), InputSignal::sin_ramp(1), 50);
  const double max_x1 = traj.states.row(0).cwiseAbs().maxCoeff();
  const double max_x2 = traj.states.row(1).cwiseAbs().maxCoeff();
  CHECK(max_x1 < 10.0);
  CHECK(max_x1 > 0.5);
  CHECK(max_x2 <= max_x1);
  int sign_changes = 0;
  for (int t = 1; t <= traj.horizon(); ++t)
    if (traj.states(0, t) * traj.states(0, t - 1) < 0.0) ++sign_changes;
  CHECK(sign_changes >= 5);
}

TEST_CASE("fixed points of random linear systems stay fixed") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix A = testutil::random_stable_matrix(rng, 3, 0.8);
    const auto sys = DiscreteSystem::linear(A, Matrix(3, 0), Matrix::Identity(3, 3));
    const Trajectory traj = simulate(sys, Vector::Zero(3), InputSignal::zero(0), 5);
    CHECK(traj.states.isZero(0.0));
  }
}

TEST_CASE("linearize") {
  const auto sys = DiscreteSystem::example1();

  SUBCASE("at the origin") {
    const LinearizedSystem lin = linearize(sys, Vector::Zero(2));
    Matrix A_expected(2, 2);
    A_expected << 0.75, 0.0, 0.12, 0.9;
    CHECK(testutil::max_abs_diff(lin.A, A_expected) == 0.0);
    CHECK(lin.C.isZero(0.0));
  }
  SUBCASE("at (1,1)") {
    Vector x0(2);
    x0 << 1.0, 1.0;
    const LinearizedSystem lin = linearize(sys, x0);
    Matrix A_expected(2, 2);
    A_expected << 0.79, -2.0, 0.12, 1.1;
    CHECK(testutil::max_abs_diff(lin.A, A_expected) < 1e-15);
    Matrix C_expected(2, 2);
    C_expected << 2.0, 0.0, 0.0, 2.0;
    CHECK(testutil::max_abs_diff(lin.C, C_expected) < 1e-15);
  }
  SUBCASE("a linear map is its own Jacobian") {
    Rng rng(3);
    const Matrix A = testutil::random_matrix(rng, 4, 4);
    const auto lsys = DiscreteSystem::linear(A, Matrix(4, 0), Matrix::Identity(4, 4));
    const LinearizedSystem lin = linearize(lsys, testutil::random_vector(rng, 4));
    CHECK(testutil::max_abs_diff(lin.A, A) < 1e-12);
  }
}

TEST_CASE("analytic and finite-difference Jacobians agree on the built-ins") {
  Rng rng(17);
  const auto sys1 = DiscreteSystem::example1();
  const auto sys3 = DiscreteSystem::example3();
  for (int i = 0; i < 100; ++i) {
    const Vector x = testutil::random_vector(rng, 2);
    {
      const Matrix fd = finite_difference_jacobian(
          [&](const Vector& p) { return sys1.step(p); }, x);
      CHECK(testutil::max_abs_diff(sys1.step_state_jacobian(x), fd) < 1e-6);
    }
    {
      const Matrix fd = finite_difference_jacobian(
          [&](const Vector& p) { return sys3.step(p, Vector::Zero(1)); }, x);
      CHECK(testutil::max_abs_diff(sys3.step_state_jacobian(x), fd) < 1e-6);
    }
    {
      const Matrix fd = finite_difference_jacobian(
          [&](const Vector& p) { return sys1.output(p); }, x);
      CHECK(testutil::max_abs_diff(sys1.output_jacobian(x), fd) < 1e-6);
    }
  }
}

TEST_CASE("classical observability gramian") {
  Matrix A(2, 2);
  A << 0.9, 0.0, 0.0, 0.5;
  Matrix C(1, 2);
  C << 1.0, 0.0;
  const LinearizedSystem lin{A, C, Vector::Zero(2)};

  SUBCASE("closed-form geometric series for the infinite horizon") {
    const Matrix X = linear_observability_gramian(lin, Horizon::infinite());
    CHECK(X(0, 0) == doctest::Approx(1.0 / 0.19).epsilon(1e-12));
    CHECK(std::abs(X(0, 1)) < 1e-12);
    CHECK(std::abs(X(1, 1)) < 1e-12);
  }
  SUBCASE("horizon zero is a single term") {
    const Matrix X = linear_observability_gramian(lin, Horizon::finite(0));
    CHECK(testutil::max_abs_diff(X, C.transpose() * C) == 0.0);
  }
  SUBCASE("zero output map gives the zero gramian") {
    const LinearizedSystem zc{A, Matrix::Zero(1, 2), Vector::Zero(2)};
    CHECK(linear_observability_gramian(zc, Horizon::infinite()).isZero(0.0));
  }
  SUBCASE("unstable dynamics reject the infinite horizon") {
    const LinearizedSystem unstable{Matrix::Identity(2, 2) * 1.1, C, Vector::Zero(2)};
    try {
      linear_observability_gramian(unstable, Horizon::infinite());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("spectral radius") != std::string::npos);
    }
  }
  SUBCASE("symmetric and monotone in the horizon") {
    Rng rng(23);
    const Matrix Ar = testutil::random_stable_matrix(rng, 3, 0.85);
    const Matrix Cr = testutil::random_matrix(rng, 2, 3);
    const LinearizedSystem rl{Ar, Cr, Vector::Zero(3)};
    Matrix prev = Matrix::Zero(3, 3);
    for (int T = 0; T <= 6; ++T) {
      const Matrix X = linear_observability_gramian(rl, Horizon::finite(T));
      CHECK(testutil::max_abs_diff(X, X.transpose()) < 1e-14);
      const Matrix diff = X - prev;
      CHECK(psd_check(diff).lambda_min >= -1e-10);
      prev = X;
    }
  }
}
