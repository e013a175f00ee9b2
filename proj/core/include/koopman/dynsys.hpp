/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "koopman/polynomial.hpp"
#include "koopman/types.hpp"

namespace koopman {

/// Discrete-time system x_{t+1} = F(x_t, u_t), y_t = h(x_t), with F and h
/// given as polynomial maps. Immutable after construction.
///
/// step_map holds one polynomial per state coordinate over the n + m
/// variables (x_1..x_n, u_1..u_m); output_map holds one polynomial per
/// output coordinate over the n state variables.
class DiscreteSystem {
 public:
  DiscreteSystem(std::string name, int state_dim, int input_dim,
                 PolynomialVector step_map, PolynomialVector output_map,
                 std::map<std::string, double> params = {});

  /// Two-state polynomial oscillator:
  ///   x1' = delta1 x1 + alpha x1^2 - x2^2
  ///   x2' = delta2 x2 + beta x1 + gamma x2^2
  ///   y   = (x1^2, x2^2)
  /// Defaults: delta1=0.75, delta2=0.9, alpha=0.02, beta=0.12, gamma=0.1.
  static DiscreteSystem example1(const std::map<std::string, double>& overrides = {});

  /// Same dynamics with a single input added to the first state channel.
  static DiscreteSystem example3(const std::map<std::string, double>& overrides = {});

  /// Linear system x' = A x + B u, y = C x. B may have zero columns.
  static DiscreteSystem linear(const Matrix& A, const Matrix& B, const Matrix& C);

  const std::string& name() const { return name_; }
  int state_dim() const { return state_dim_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return static_cast<int>(output_map_.size()); }
  const std::map<std::string, double>& params() const { return params_; }
  const PolynomialVector& step_map() const { return step_map_; }
  const PolynomialVector& output_map() const { return output_map_; }

  /// Unforced step polynomials: F(x, 0) as polynomials over the state only.
  PolynomialVector unforced_step_map() const;

  /// Evaluate F(x, u). u must be empty iff input_dim() == 0.
  Vector step(const Vector& x, const Vector& u = Vector()) const;

  /// Evaluate h(x).
  Vector output(const Vector& x) const;

  /// Analytic Jacobian dF/dx at (x, u); exact for the polynomial terms.
  Matrix step_state_jacobian(const Vector& x, const Vector& u = Vector()) const;

  /// Analytic Jacobian dh/dx at x.
  Matrix output_jacobian(const Vector& x) const;

 private:
  std::string name_;
  int state_dim_;
  int input_dim_;
  PolynomialVector step_map_;
  PolynomialVector output_map_;
  std::map<std::string, double> params_;
};

/// States, inputs, and outputs of one simulated run. states has T+1 columns,
/// inputs T columns (zero rows when the system is autonomous), outputs T+1
/// columns; column t corresponds to time step t.
struct Trajectory {
  Matrix states;
  Matrix inputs;
  Matrix outputs;

  int horizon() const { return static_cast<int>(states.cols()) - 1; }
  int state_dim() const { return static_cast<int>(states.rows()); }
  int input_dim() const { return static_cast<int>(inputs.rows()); }
  int output_dim() const { return static_cast<int>(outputs.rows()); }
};

/// First-order expansion of a system about x0: A = dF/dx, C = dh/dx.
struct LinearizedSystem {
  Matrix A;
  Matrix C;
  Vector x0;
};

/// Deterministic input signal u(t), t = 0, 1, 2, ...
class InputSignal {
 public:
  enum class Kind { Zero, SinRamp, Samples };

  static InputSignal zero(int input_dim);
  /// Channel 1 carries sin(t) + mu*t; remaining channels are zero.
  static InputSignal sin_ramp(int input_dim, double mu = 0.01);
  /// Explicit sample columns; t beyond the last column is an error.
  static InputSignal samples(Matrix values);

  Vector at(int t) const;
  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  double mu() const { return mu_; }
  const Matrix& sample_values() const { return samples_; }

 private:
  InputSignal(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_ = Kind::Zero;
  int dim_ = 0;
  double mu_ = 0.01;
  Matrix samples_;
};

/// Roll the system forward for `horizon` steps (horizon >= 1). Aborts with
/// the offending step index if any state magnitude exceeds divergence_cap
/// or turns non-finite.
Trajectory simulate(const DiscreteSystem& sys, const Vector& x0, const InputSignal& input,
                    int horizon, double divergence_cap = 1e12);

/// Linearize about x0 with the input frozen at zero. Jacobians are computed
/// analytically from the polynomial maps.
LinearizedSystem linearize(const DiscreteSystem& sys, const Vector& x0);

/// Central finite-difference Jacobian of fn at x, with per-coordinate step
/// rel_step * max(1, |x_i|). Companion check for the analytic path.
Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x,
                                  double rel_step = 1e-6);

/// Classical observability gramian sum_{t=0}^{T} (A^t)^T C^T C A^t. The
/// infinite horizon requires rho(A) < 1 - 1e-9 and is solved via the Stein
/// equation.
Matrix linear_observability_gramian(const LinearizedSystem& lin, const Horizon& horizon);

}  // namespace koopman
