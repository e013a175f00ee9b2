#include <benchmark/benchmark.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "koopman/balance.hpp"
#include "koopman/dictionary.hpp"
#include "koopman/dynsys.hpp"
#include "koopman/edmd.hpp"
#include "koopman/gramians.hpp"

using namespace koopman;

namespace {

Matrix random_stable(std::mt19937_64& rng, int n, double rho) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = dist(rng);
  return A * (rho / A.eigenvalues().cwiseAbs().maxCoeff());
}

std::vector<Trajectory> training_set() {
  const auto sys = DiscreteSystem::example1();
  std::vector<Trajectory> trajs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) {
      Vector x0(2);
      x0 << 0.05 + 0.15 * i, -0.5 + 0.1 * j;
      trajs.push_back(simulate(sys, x0, InputSignal::zero(0), 30));
    }
  return trajs;
}

void BM_simulate(benchmark::State& state) {
  const auto sys = DiscreteSystem::example3();
  Vector x0(2);
  x0 << 0.3, 0.3;
  const InputSignal input = InputSignal::sin_ramp(1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sys, x0, input, state.range(0)));
}
// The ramped input destabilizes the oscillator somewhere past t = 300, so
// the horizons stay below that.
BENCHMARK(BM_simulate)->Arg(50)->Arg(200);

void BM_dictionary_lift(benchmark::State& state) {
  const Dictionary dict = example1_dictionary().dictionary;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  Matrix states(2, state.range(0));
  for (int j = 0; j < states.cols(); ++j) {
    states(0, j) = dist(rng);
    states(1, j) = dist(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(dict.eval_columns(states));
}
BENCHMARK(BM_dictionary_lift)->Arg(600);

void BM_fit_koopman(benchmark::State& state) {
  const Example1Basis basis = example1_dictionary();
  const SnapshotPair snaps = build_snapshots(training_set(), basis.dictionary);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fit_koopman(snaps, basis.dictionary, basis.output_selector, basis.state_projector, 1e-6));
}
BENCHMARK(BM_fit_koopman);

void BM_stein_solve(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int n = static_cast<int>(state.range(0));
  const Matrix M = random_stable(rng, n, 0.9);
  const Matrix Q = Matrix::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(stein_solve(M, Q, SteinSide::Left));
}
BENCHMARK(BM_stein_solve)->Arg(12)->Arg(64);

void BM_balance(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int n = static_cast<int>(state.range(0));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Matrix A = random_stable(rng, n, 0.8);
  Matrix B(n, 2), C(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) {
      B(i, j) = dist(rng);
      C(j, i) = dist(rng);
    }
  const Matrix Xc = stein_solve(A, B * B.transpose(), SteinSide::Right);
  const Matrix Xo = stein_solve(A, C.transpose() * C, SteinSide::Left);
  for (auto _ : state) benchmark::DoNotOptimize(balance_realization(A, B, C, Xc, Xo));
}
BENCHMARK(BM_balance)->Arg(12)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
