/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/dynsys.hpp"

#include <cmath>

#include "koopman/gramians.hpp"

namespace koopman {

namespace {

double param_or(const std::map<std::string, double>& overrides, const std::string& key, double fallback) {
  auto it = overrides.find(key);
  return it == overrides.end() ? fallback : it->second;
}

void check_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw Error(what + ": non-finite value");
}

}  // namespace

DiscreteSystem::DiscreteSystem(std::string name, int state_dim, int input_dim,
                               PolynomialVector step_map, PolynomialVector output_map,
                               std::map<std::string, double> params)
    : name_(std::move(name)),
      state_dim_(state_dim),
      input_dim_(input_dim),
      step_map_(std::move(step_map)),
      output_map_(std::move(output_map)),
      params_(std::move(params)) {
  if (state_dim_ < 1) throw Error("DiscreteSystem: state_dim must be positive");
  if (input_dim_ < 0) throw Error("DiscreteSystem: input_dim must be nonnegative");
  if (static_cast<int>(step_map_.size()) != state_dim_)
    throw Error("DiscreteSystem: step_map must have one polynomial per state coordinate");
  if (output_map_.empty()) throw Error("DiscreteSystem: output_dim must be positive");
  for (const auto& p : step_map_)
    if (p.num_vars() != state_dim_ + input_dim_)
      throw Error("DiscreteSystem: step_map polynomials must use state+input variables");
  for (const auto& p : output_map_)
    if (p.num_vars() != state_dim_)
      throw Error("DiscreteSystem: output_map polynomials must use state variables");
}

DiscreteSystem DiscreteSystem::example1(const std::map<std::string, double>& overrides) {
  const double delta1 = param_or(overrides, "delta1", 0.75);
  const double delta2 = param_or(overrides, "delta2", 0.9);
  const double alpha = param_or(overrides, "alpha", 0.02);
  const double beta = param_or(overrides, "beta", 0.12);
  const double gamma = param_or(overrides, "gamma", 0.1);

  const auto x1 = Polynomial::variable(2, 0);
  const auto x2 = Polynomial::variable(2, 1);
  PolynomialVector step = {delta1 * x1 + alpha * x1 * x1 - x2 * x2,
                           delta2 * x2 + beta * x1 + gamma * x2 * x2};
  PolynomialVector out = {x1 * x1, x2 * x2};
  return DiscreteSystem("example1", 2, 0, std::move(step), std::move(out),
                        {{"delta1", delta1}, {"delta2", delta2}, {"alpha", alpha},
                         {"beta", beta}, {"gamma", gamma}});
}

DiscreteSystem DiscreteSystem::example3(const std::map<std::string, double>& overrides) {
  const double delta1 = param_or(overrides, "delta1", 0.75);
  const double delta2 = param_or(overrides, "delta2", 0.9);
  const double alpha = param_or(overrides, "alpha", 0.02);
  const double beta = param_or(overrides, "beta", 0.12);
  const double gamma = param_or(overrides, "gamma", 0.1);

  // Variables (x1, x2, u1).
  const auto x1 = Polynomial::variable(3, 0);
  const auto x2 = Polynomial::variable(3, 1);
  const auto u1 = Polynomial::variable(3, 2);
  PolynomialVector step = {delta1 * x1 + alpha * x1 * x1 - x2 * x2 + u1,
                           delta2 * x2 + beta * x1 + gamma * x2 * x2};
  const auto y1 = Polynomial::variable(2, 0);
  const auto y2 = Polynomial::variable(2, 1);
  PolynomialVector out = {y1 * y1, y2 * y2};
  return DiscreteSystem("example3", 2, 1, std::move(step), std::move(out),
                        {{"delta1", delta1}, {"delta2", delta2}, {"alpha", alpha},
                         {"beta", beta}, {"gamma", gamma}});
}

DiscreteSystem DiscreteSystem::linear(const Matrix& A, const Matrix& B, const Matrix& C) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  const int p = static_cast<int>(C.rows());
  if (A.cols() != n) throw Error("DiscreteSystem::linear: A must be square");
  if (B.rows() != n && m > 0) throw Error("DiscreteSystem::linear: B row count must match A");
  if (C.cols() != n) throw Error("DiscreteSystem::linear: C column count must match A");

  PolynomialVector step;
  for (int i = 0; i < n; ++i) {
    Polynomial p_i(n + m);
    for (int j = 0; j < n; ++j)
      if (A(i, j) != 0.0) p_i += A(i, j) * Polynomial::variable(n + m, j);
    for (int j = 0; j < m; ++j)
      if (B(i, j) != 0.0) p_i += B(i, j) * Polynomial::variable(n + m, n + j);
    step.push_back(std::move(p_i));
  }
  PolynomialVector out;
  for (int i = 0; i < p; ++i) {
    Polynomial p_i(n);
    for (int j = 0; j < n; ++j)
      if (C(i, j) != 0.0) p_i += C(i, j) * Polynomial::variable(n, j);
    out.push_back(std::move(p_i));
  }
  return DiscreteSystem("linear", n, m, std::move(step), std::move(out), {});
}

PolynomialVector DiscreteSystem::unforced_step_map() const {
  std::vector<Polynomial> subs;
  subs.reserve(state_dim_ + input_dim_);
  for (int i = 0; i < state_dim_; ++i) subs.push_back(Polynomial::variable(state_dim_, i));
  for (int j = 0; j < input_dim_; ++j) subs.push_back(Polynomial(state_dim_));
  PolynomialVector unforced;
  unforced.reserve(step_map_.size());
  for (const auto& p : step_map_) unforced.push_back(p.compose(subs));
  return unforced;
}

Vector DiscreteSystem::step(const Vector& x, const Vector& u) const {
  if (x.size() != state_dim_)
    throw Error("step: state dimension mismatch (expected " + std::to_string(state_dim_) +
                ", got " + std::to_string(x.size()) + ")");
  if (u.size() != input_dim_)
    throw Error("step: input dimension mismatch (expected " + std::to_string(input_dim_) +
                ", got " + std::to_string(u.size()) + ")");
  Vector xu(state_dim_ + input_dim_);
  xu << x, u;
  Vector next(state_dim_);
  for (int i = 0; i < state_dim_; ++i) next[i] = step_map_[i].eval(xu);
  check_finite(next, "step");
  return next;
}

Vector DiscreteSystem::output(const Vector& x) const {
  if (x.size() != state_dim_) throw Error("output: state dimension mismatch");
  Vector y(output_dim());
  for (int i = 0; i < output_dim(); ++i) y[i] = output_map_[i].eval(x);
  check_finite(y, "output");
  return y;
}

Matrix DiscreteSystem::step_state_jacobian(const Vector& x, const Vector& u) const {
  Vector uu = u;
  if (uu.size() == 0 && input_dim_ > 0) uu = Vector::Zero(input_dim_);
  if (x.size() != state_dim_ || uu.size() != input_dim_)
    throw Error("step_state_jacobian: dimension mismatch");
  Vector xu(state_dim_ + input_dim_);
  xu << x, uu;
  Matrix J(state_dim_, state_dim_);
  for (int i = 0; i < state_dim_; ++i)
    for (int j = 0; j < state_dim_; ++j) J(i, j) = step_map_[i].derivative(j).eval(xu);
  return J;
}

Matrix DiscreteSystem::output_jacobian(const Vector& x) const {
  if (x.size() != state_dim_) throw Error("output_jacobian: dimension mismatch");
  Matrix J(output_dim(), state_dim_);
  for (int i = 0; i < output_dim(); ++i)
    for (int j = 0; j < state_dim_; ++j) J(i, j) = output_map_[i].derivative(j).eval(x);
  return J;
}

InputSignal InputSignal::zero(int input_dim) {
  if (input_dim < 0) throw Error("InputSignal::zero: negative dimension");
  return InputSignal(Kind::Zero, input_dim);
}

InputSignal InputSignal::sin_ramp(int input_dim, double mu) {
  if (input_dim < 1) throw Error("InputSignal::sin_ramp: needs at least one channel");
  InputSignal s(Kind::SinRamp, input_dim);
  s.mu_ = mu;
  return s;
}

InputSignal InputSignal::samples(Matrix values) {
  InputSignal s(Kind::Samples, static_cast<int>(values.rows()));
  s.samples_ = std::move(values);
  return s;
}

Vector InputSignal::at(int t) const {
  if (t < 0) throw Error("InputSignal::at: negative time index");
  switch (kind_) {
    case Kind::Zero:
      return Vector::Zero(dim_);
    case Kind::SinRamp: {
      Vector u = Vector::Zero(dim_);
      u[0] = std::sin(static_cast<double>(t)) + mu_ * static_cast<double>(t);
      return u;
    }
    case Kind::Samples:
      if (t >= samples_.cols())
        throw Error("InputSignal::at: sample signal has only " + std::to_string(samples_.cols()) +
                    " columns, requested t=" + std::to_string(t));
      return samples_.col(t);
  }
  throw Error("InputSignal::at: unreachable");
}

Trajectory simulate(const DiscreteSystem& sys, const Vector& x0, const InputSignal& input,
                    int horizon, double divergence_cap) {
  if (horizon < 1) throw Error("simulate: horizon must be >= 1");
  if (x0.size() != sys.state_dim()) throw Error("simulate: x0 dimension mismatch");
  if (input.dim() != sys.input_dim())
    throw Error("simulate: input signal dimension " + std::to_string(input.dim()) +
                " does not match system input dimension " + std::to_string(sys.input_dim()));

  Trajectory traj;
  traj.states.resize(sys.state_dim(), horizon + 1);
  traj.inputs.resize(sys.input_dim(), horizon);
  traj.outputs.resize(sys.output_dim(), horizon + 1);

  traj.states.col(0) = x0;
  traj.outputs.col(0) = sys.output(x0);
  for (int t = 0; t < horizon; ++t) {
    const Vector u = input.at(t);
    if (sys.input_dim() > 0) traj.inputs.col(t) = u;
    const Vector next = sys.step(traj.states.col(t), u);
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > divergence_cap)
      throw Error("simulate: state diverged past cap " + std::to_string(divergence_cap) +
                  " at step " + std::to_string(t + 1));
    traj.states.col(t + 1) = next;
    traj.outputs.col(t + 1) = sys.output(next);
  }
  return traj;
}

LinearizedSystem linearize(const DiscreteSystem& sys, const Vector& x0) {
  if (!x0.allFinite()) throw Error("linearize: x0 must be finite");
  LinearizedSystem lin;
  lin.A = sys.step_state_jacobian(x0);
  lin.C = sys.output_jacobian(x0);
  lin.x0 = x0;
  if (!lin.A.allFinite() || !lin.C.allFinite()) throw Error("linearize: non-finite Jacobian");
  return lin;
}

Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x,
                                  double rel_step) {
  const Vector f0 = fn(x);
  Matrix J(f0.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    const double step = rel_step * std::max(1.0, std::abs(x[j]));
    Vector xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    J.col(j) = (fn(xp) - fn(xm)) / (2.0 * step);
  }
  return J;
}

Matrix linear_observability_gramian(const LinearizedSystem& lin, const Horizon& horizon) {
  const int n = static_cast<int>(lin.A.rows());
  if (lin.C.cols() != n) throw Error("linear_observability_gramian: C/A dimension mismatch");

  if (horizon.is_infinite) {
    const double rho = spectral_radius(lin.A);
    if (rho >= 1.0 - 1e-9)
      throw Error("linear_observability_gramian: infinite horizon requires spectral radius < 1 - 1e-9, got rho = " +
                  std::to_string(rho) + "; use a finite horizon");
    return stein_solve(lin.A, lin.C.transpose() * lin.C, SteinSide::Left);
  }

  Matrix X = Matrix::Zero(n, n);
  Matrix M = lin.C;  // C A^t
  X += M.transpose() * M;
  for (int t = 0; t < horizon.steps; ++t) {
    M = M * lin.A;
    X += M.transpose() * M;
  }
  return 0.5 * (X + X.transpose());
}

}  // namespace koopman
