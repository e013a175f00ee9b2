#include <doctest.h>

#include "koopman/balance.hpp"
#include "test_util.hpp"

using namespace koopman;
using testutil::Rng;

namespace {

struct RandomRealization {
  Matrix A, B, C, Xc, Xo;
};

RandomRealization random_stable_realization(Rng& rng, int n, int m, int p, double rho = 0.8) {
  RandomRealization r;
  r.A = testutil::random_stable_matrix(rng, n, rho);
  r.B = testutil::random_matrix(rng, n, m);
  r.C = testutil::random_matrix(rng, p, n);
  r.Xc = stein_solve(r.A, r.B * r.B.transpose(), SteinSide::Right);
  r.Xo = stein_solve(r.A, r.C.transpose() * r.C, SteinSide::Left);
  return r;
}

}  // namespace

TEST_CASE("psd square root") {
  SUBCASE("identity and diagonal") {
    CHECK(testutil::max_abs_diff(sqrt_psd(Matrix::Identity(3, 3)), Matrix::Identity(3, 3)) <= 1e-14);
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 4.0;
    D(1, 1) = 9.0;
    Matrix S = sqrt_psd(D);
    CHECK(S(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(S(1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("squaring oracle on random PSD inputs") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix M = testutil::random_matrix(rng, 5, 5);
      const Matrix X = M * M.transpose();
      const Matrix S = sqrt_psd(X);
      CHECK(testutil::max_abs_diff(S * S, X) <= 1e-8 * (1.0 + X.cwiseAbs().maxCoeff()));
      CHECK(testutil::max_abs_diff(S, S.transpose()) <= 1e-12);
    }
  }
  SUBCASE("indefinite input is rejected") {
    Matrix X(2, 2);
    X << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(sqrt_psd(X), Error);
  }
}

TEST_CASE("hankel singular values") {
  SUBCASE("identity pair gives all ones") {
    const Vector hsv = hankel_singular_values(Matrix::Identity(4, 4), Matrix::Identity(4, 4));
    CHECK(hsv.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(hsv[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("scalar closed form") {
    Matrix Xc(1, 1), Xo(1, 1);
    Xc << 4.0 / 3.0;
    Xo << 4.0 / 3.0;
    CHECK(hankel_singular_values(Xc, Xo)[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("invariance under similarity/congruence pairs") {
    Rng rng(103);
    for (int trial = 0; trial < 8; ++trial) {
      const RandomRealization r = random_stable_realization(rng, 5, 2, 2);
      const Vector base = hankel_singular_values(r.Xc, r.Xo);
      const Matrix M = testutil::random_well_conditioned(rng, 5);
      const Matrix Mi = M.inverse();
      const Vector transformed =
          hankel_singular_values(M * r.Xc * M.transpose(), Mi.transpose() * r.Xo * Mi);
      CHECK((base - transformed).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("dimension mismatch is an error") {
    CHECK_THROWS_AS(hankel_singular_values(Matrix::Identity(3, 3), Matrix::Identity(4, 4)), Error);
  }
}

TEST_CASE("balancing a scalar system") {
  // k_x = 0.5, k_u = 1, w_h = 1: both infinite gramians are 4/3.
  Matrix Kx(1, 1), Ku(1, 1), Wh(1, 1);
  Kx << 0.5;
  Ku << 1.0;
  Wh << 1.0;
  const Matrix Xc = stein_solve(Kx, Ku * Ku.transpose(), SteinSide::Right);
  const Matrix Xo = stein_solve(Kx, Wh.transpose() * Wh, SteinSide::Left);
  CHECK(Xc(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(Xo(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  const BalancedRealization bal = balance_realization(Kx, Ku, Wh, Xc, Xo);
  CHECK(bal.order() == 1);
  CHECK(bal.hsv[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(bal.transform(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bal.A(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(bal.regularization_used == 0.0);
}

TEST_CASE("already-balanced diagonal pair is a fixed point up to signs") {
  Vector d(3);
  d << 3.0, 2.0, 1.0;
  const Matrix D = d.asDiagonal();
  Rng rng(107);
  const Matrix A = testutil::random_stable_matrix(rng, 3, 0.7);
  const BalancedRealization bal =
      balance_realization(A, Matrix::Identity(3, 3), Matrix::Identity(3, 3), D, D);
  CHECK((bal.hsv - d).cwiseAbs().maxCoeff() <= 1e-10);
  // The transform is diagonal with +-1 entries.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double expect = (i == j) ? 1.0 : 0.0;
      CHECK(std::abs(std::abs(bal.transform(i, j)) - expect) <= 1e-10);
    }
}

TEST_CASE("balanced realization properties on random stable models") {
  Rng rng(109);
  for (int trial = 0; trial < 8; ++trial) {
    const RandomRealization r = random_stable_realization(rng, 6, 2, 2);
    const BalancedRealization bal = balance_realization(r.A, r.B, r.C, r.Xc, r.Xo);
    REQUIRE(bal.order() == 6);
    const double sigma1 = bal.hsv[0];

    // hsv sorted nonincreasing and nonnegative
    for (int i = 1; i < 6; ++i) CHECK(bal.hsv[i] <= bal.hsv[i - 1] + 1e-14);
    CHECK(bal.hsv[5] >= 0.0);

    // T T^{-1} = I
    CHECK(testutil::max_abs_diff(bal.transform * bal.inverse_transform, Matrix::Identity(6, 6)) <=
          1e-8);

    // Both transformed gramians are diagonal and equal to diag(hsv).
    const Matrix Sigma = Vector(bal.hsv).asDiagonal();
    const Matrix Tc = bal.transform * r.Xc * bal.transform.transpose();
    const Matrix To =
        bal.inverse_transform.transpose() * r.Xo * bal.inverse_transform;
    CHECK(testutil::max_abs_diff(Tc, Sigma) <= 1e-6 * sigma1);
    CHECK(testutil::max_abs_diff(To, Sigma) <= 1e-6 * sigma1);

    // Similarity preserves the spectrum.
    Eigen::VectorXcd ev_a = bal.A.eigenvalues();
    Eigen::VectorXcd ev_k = r.A.eigenvalues();
    Vector mod_a = ev_a.cwiseAbs();
    Vector mod_k = ev_k.cwiseAbs();
    std::sort(mod_a.begin(), mod_a.end());
    std::sort(mod_k.begin(), mod_k.end());
    CHECK((mod_a - mod_k).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("truncation") {
  Rng rng(113);
  const RandomRealization r = random_stable_realization(rng, 6, 2, 2);
  const BalancedRealization bal = balance_realization(r.A, r.B, r.C, r.Xc, r.Xo);

  SUBCASE("bounds are ordered and vanish at full order") {
    for (int order = 1; order <= 6; ++order) {
      const ReducedModel rm = truncate(bal, order);
      CHECK(rm.bound_lower <= rm.bound_upper);
      if (order == 6) {
        CHECK(rm.bound_upper == 0.0);
        CHECK(rm.bound_lower == 0.0);
      } else {
        CHECK(rm.bound_lower == doctest::Approx(bal.hsv[order]));
      }
      CHECK_FALSE(rm.bound_advisory);
    }
  }
  SUBCASE("out-of-range orders are errors") {
    CHECK_THROWS_AS(truncate(bal, 0), Error);
    CHECK_THROWS_AS(truncate(bal, 7), Error);
  }
  SUBCASE("full-order truncation is lossless against the lifted free run") {
    const int T = 50;
    const ReducedModel full = truncate(bal, 6);
    const Matrix inputs = testutil::random_matrix(rng, 2, T);
    // Lifted reference: simulate (A, B, C) directly from a lifted start.
    const Vector x0 = testutil::random_vector(rng, 6);
    const Matrix y_ref = simulate_lifted(r.A, r.B, r.C, x0, inputs, T);
    const Matrix y_red =
        simulate_lifted(full.A, full.B, full.C, Vector(full.lift_in * x0), inputs, T);
    CHECK(testutil::max_abs_diff(y_ref, y_red) <= 1e-8);
  }
  SUBCASE("unstable balanced dynamics flag the bounds as advisory") {
    BalancedRealization unstable = bal;
    unstable.A = Matrix::Identity(6, 6) * 1.05;
    CHECK(truncate(unstable, 3).bound_advisory);
  }
}

TEST_CASE("reduced simulation from a zero start with zero input stays zero") {
  Rng rng(127);
  const RandomRealization r = random_stable_realization(rng, 4, 1, 1);
  const BalancedRealization bal = balance_realization(r.A, r.B, r.C, r.Xc, r.Xo);
  const ReducedModel rm = truncate(bal, 2);

  const Dictionary dict = identity_dictionary(4);
  const InputDictionary idict(InputDictionary::Kind::Identity, 1);
  const Matrix y = simulate_reduced(rm, Vector::Zero(4), dict, idict, InputSignal::zero(1), 10);
  CHECK(y.isZero(0.0));
  CHECK_THROWS_AS(simulate_reduced(rm, Vector::Zero(4), dict, idict, InputSignal::zero(1), 0), Error);
}

TEST_CASE("peak output error respects the truncation bound") {
  Rng rng(131);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8, m = 2, p = 2;
    const RandomRealization r = random_stable_realization(rng, n, m, p, 0.5 + 0.4 * (trial % 5) / 4.0);
    const BalancedRealization bal = balance_realization(r.A, r.B, r.C, r.Xc, r.Xo);
    if (bal.order() < n) continue;
    const ReducedModel rm = truncate(bal, n / 2);
    REQUIRE_FALSE(rm.bound_advisory);

    for (int k = 0; k < 10; ++k) {
      const int L = 30, T = 150;
      Matrix u = testutil::random_matrix(rng, m, L);
      u /= u.norm();  // unit input energy
      const Matrix y_full = simulate_lifted(bal.A, bal.B, bal.C, Vector::Zero(bal.order()), u, T);
      const Matrix y_red = simulate_lifted(rm.A, rm.B, rm.C, Vector::Zero(rm.order), u, T);
      double peak = 0.0;
      for (int t = 0; t <= T; ++t) peak = std::max(peak, (y_full.col(t) - y_red.col(t)).norm());
      CHECK(peak <= rm.bound_upper * (1.0 + 1e-6));
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("singular controllability gramians are regularized and reported") {
  Rng rng(137);
  const int n = 5;
  const Matrix A = testutil::random_stable_matrix(rng, n, 0.7);
  const Matrix B = testutil::random_matrix(rng, n, 1);
  const Matrix C = testutil::random_matrix(rng, 2, n);
  // Rank-1 controllability gramian: a single impulse direction.
  const Matrix Xc = B * B.transpose();
  const Matrix Xo = stein_solve(A, C.transpose() * C, SteinSide::Left);

  const BalancedRealization bal = balance_realization(A, B, C, Xc, Xo);
  CHECK(bal.regularization_used > 0.0);
  CHECK(bal.order() >= 1);
  CHECK(testutil::max_abs_diff(bal.transform * bal.inverse_transform,
                               Matrix::Identity(bal.order(), bal.order())) <= 1e-6);
}

TEST_CASE("gramian-typed balance checks its inputs") {
  Rng rng(139);
  const RandomRealization r = random_stable_realization(rng, 4, 1, 1);
  Gramian xc;
  xc.matrix = r.Xc;
  xc.kind = GramianKind::Controllability;
  Gramian xo;
  xo.matrix = r.Xo;
  xo.kind = GramianKind::Observability;

  std::vector<int> rows = {0, 1, 2, 3};
  KoopmanModel model{r.A,
                     r.B,
                     identity_dictionary(4),
                     InputDictionary(InputDictionary::Kind::Identity, 1),
                     Selector::general(r.C),
                     Selector::canonical(Selector::Kind::StateProjector, rows, 4),
                     0.0,
                     0.0};
  CHECK_NOTHROW(balance(model, xc, xo));
  CHECK_THROWS_AS(balance(model, xo, xc), Error);  // swapped kinds
  Gramian projected = xc;
  projected.projection = "state_projector(2x4)";
  CHECK_THROWS_AS(balance(model, projected, xo), Error);
}
