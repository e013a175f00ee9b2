#include <doctest.h>

#include <filesystem>

#include "koopman/serialize.hpp"
#include "test_util.hpp"

using namespace koopman;
using testutil::Rng;

TEST_CASE("trajectory CSV round trip is exact") {
  const auto sys = DiscreteSystem::example3();
  Vector x0(2);
  x0 << 0.3, 0.3;
  const Trajectory traj = simulate(sys, x0, InputSignal::sin_ramp(1), 12);

  const std::string csv = trajectory_to_csv(traj);
  CHECK(csv.substr(0, csv.find('\n')) == "t,x1,x2,u1,y1,y2");

  const Trajectory back = trajectory_from_csv(csv);
  CHECK(back.states == traj.states);
  CHECK(back.inputs == traj.inputs);
  CHECK(back.outputs == traj.outputs);
}

TEST_CASE("trajectory CSV rejects malformed content") {
  CHECK_THROWS_AS(trajectory_from_csv(""), Error);
  CHECK_THROWS_AS(trajectory_from_csv("a,b\n1,2\n"), Error);
  try {
    trajectory_from_csv("t,x1,y1\n0,0.0,0.0\n1,nope,0.0\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("dictionary specs rebuild identical dictionaries") {
  SUBCASE("monomial") {
    const Dictionary d = monomial_dictionary(3, 2, true);
    const DictionarySpec spec = dictionary_spec_from_json(dictionary_spec_to_json(d.spec()));
    const Dictionary d2 = make_dictionary(spec);
    REQUIRE(d2.lifted_dim() == d.lifted_dim());
    for (int i = 0; i < d.lifted_dim(); ++i)
      CHECK(d2.entries()[i].descriptor() == d.entries()[i].descriptor());
  }
  SUBCASE("example1 with parameter overrides") {
    const auto sys = DiscreteSystem::example1({{"alpha", 0.05}});
    const Dictionary d = example1_dictionary(sys).dictionary;
    const Dictionary d2 = make_dictionary(dictionary_spec_from_json(dictionary_spec_to_json(d.spec())));
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
      const Vector x = testutil::random_vector(rng, 2);
      CHECK((d.eval(x) - d2.eval(x)).isZero(0.0));
    }
  }
}

TEST_CASE("model JSON round trip preserves the operators exactly") {
  const auto sys = DiscreteSystem::example3();
  const Example1Basis basis = example1_dictionary(sys);
  const InputDictionary idict(InputDictionary::Kind::SinAugmented, 1);

  Vector x0(2);
  x0 << 0.2, -0.2;
  const Trajectory traj = simulate(sys, x0, InputSignal::sin_ramp(1), 20);
  const SnapshotPair snaps = build_snapshots({traj}, basis.dictionary, idict);
  const KoopmanModel model = fit_koopman_with_input(snaps, basis.dictionary, idict,
                                                    basis.output_selector, basis.state_projector, 1e-8);

  const KoopmanModel back = model_from_json(model_to_json(model));
  CHECK(back.K_x == model.K_x);
  CHECK(back.K_u == model.K_u);
  CHECK(back.regularization == model.regularization);
  CHECK(back.fit_residual == model.fit_residual);
  CHECK(back.dictionary.lifted_dim() == 12);
  CHECK(back.input_dictionary.has_value());
  CHECK(back.output_selector.rows() == model.output_selector.rows());

  Rng rng(9);
  const Vector x = testutil::random_vector(rng, 2);
  CHECK((back.dictionary.eval(x) - model.dictionary.eval(x)).isZero(0.0));
}

TEST_CASE("gramian, balanced, and reduced JSON round trips") {
  Rng rng(11);
  const Matrix A = testutil::random_stable_matrix(rng, 4, 0.8);
  const Matrix B = testutil::random_matrix(rng, 4, 2);
  const Matrix C = testutil::random_matrix(rng, 2, 4);
  const Matrix Xc = stein_solve(A, B * B.transpose(), SteinSide::Right);
  const Matrix Xo = stein_solve(A, C.transpose() * C, SteinSide::Left);

  Gramian g;
  g.matrix = Xc;
  g.kind = GramianKind::Controllability;
  g.horizon = Horizon::infinite();
  const Gramian g2 = gramian_from_json(gramian_to_json(g));
  CHECK(g2.matrix == g.matrix);
  CHECK(g2.kind == g.kind);
  CHECK(g2.horizon.is_infinite);

  const BalancedRealization bal = balance_realization(A, B, C, Xc, Xo);
  const BalancedRealization bal2 = balanced_from_json(balanced_to_json(bal));
  CHECK(bal2.transform == bal.transform);
  CHECK(bal2.inverse_transform == bal.inverse_transform);
  CHECK(Vector(bal2.hsv) == Vector(bal.hsv));
  CHECK(bal2.A == bal.A);

  const ReducedModel rm = truncate(bal, 2);
  const ReducedModel rm2 = reduced_from_json(reduced_to_json(rm));
  CHECK(rm2.order == 2);
  CHECK(rm2.A == rm.A);
  CHECK(rm2.lift_in == rm.lift_in);
  CHECK(rm2.bound_upper == rm.bound_upper);
  CHECK(rm2.bound_lower == rm.bound_lower);
}

TEST_CASE("simulation config round trip") {
  SimulationConfig cfg;
  cfg.system = "example3";
  cfg.params = {{"alpha", 0.03}};
  cfg.x0 = Vector::Zero(2);
  cfg.x0 << 0.3, 0.3;
  cfg.horizon = 50;
  cfg.input_kind = "sin_ramp";
  cfg.mu = 0.02;

  const SimulationConfig back = simulation_config_from_json(simulation_config_to_json(cfg));
  CHECK(back.system == cfg.system);
  CHECK(back.params.at("alpha") == 0.03);
  CHECK(back.x0 == cfg.x0);
  CHECK(back.horizon == 50);
  CHECK(back.input_kind == "sin_ramp");
  CHECK(back.mu == 0.02);

  const DiscreteSystem sys = make_system(back);
  CHECK(sys.input_dim() == 1);
  CHECK(make_input_signal(back, 1).at(0)[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("malformed JSON reports the byte offset") {
  try {
    model_from_json("{\"schema\": ");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(gramian_from_json("{}"), Error);
  CHECK_THROWS_AS(balanced_from_json("[1,2,3]"), Error);
}

TEST_CASE("file helpers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "koopman_serialize_test";
  fs::create_directories(dir);
  const std::string path = (dir / "t.txt").string();
  write_text_file(path, "hello");
  CHECK(read_text_file(path) == "hello\n");
  CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), Error);
  fs::remove_all(dir);
}
