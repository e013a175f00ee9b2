/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <optional>
#include <vector>

#include "koopman/dictionary.hpp"
#include "koopman/dynsys.hpp"
#include "koopman/types.hpp"

namespace koopman {

/// Aligned lifted snapshot columns: psi_future.col(j) = psi(x_{t+1}) whenever
/// psi_past.col(j) = psi(x_t). With inputs, psi_input.col(j) lifts the input
/// applied at the past column's time step.
struct SnapshotPair {
  Matrix psi_past;    // n_L x N
  Matrix psi_future;  // n_L x N
  Matrix psi_input;   // m_L x N (zero rows when autonomous)

  int count() const { return static_cast<int>(psi_past.cols()); }
  int lifted_dim() const { return static_cast<int>(psi_past.rows()); }
  bool has_input() const { return psi_input.rows() > 0; }
};

/// Learned lifted-linear model psi(x_{t+1}) ~= K_x psi(x_t) + K_u psi_u(u_t),
/// with output read via W_h and state read via P_x. Immutable after fit.
struct KoopmanModel {
  Matrix K_x;  // n_L x n_L
  Matrix K_u;  // n_L x m_L (zero columns when autonomous)
  Dictionary dictionary;
  std::optional<InputDictionary> input_dictionary;
  Selector output_selector;  // W_h
  Selector state_projector;  // P_x
  double regularization = 0.0;
  double fit_residual = 0.0;  // Frobenius norm of the data misfit

  bool has_input() const { return K_u.cols() > 0; }
  int lifted_dim() const { return static_cast<int>(K_x.rows()); }
  int input_lifted_dim() const { return static_cast<int>(K_u.cols()); }
  int output_dim() const { return static_cast<int>(output_selector.matrix().rows()); }
  int state_dim() const { return dictionary.state_dim(); }
};

/// Lift consecutive-state pairs from every trajectory, in trajectory order
/// then time order. Each trajectory must have at least two states. Pass an
/// input dictionary to also lift the applied inputs.
SnapshotPair build_snapshots(const std::vector<Trajectory>& trajectories, const Dictionary& dict,
                             const std::optional<InputDictionary>& input_dict = std::nullopt);

/// Least-squares fit of psi_future ~= K psi_past with Tikhonov penalty
/// zeta * ||K||_F^2. With zeta = 0 the minimum-norm solution is computed via
/// an SVD pseudoinverse that discards singular values below 1e-10 * sigma_max.
KoopmanModel fit_koopman(const SnapshotPair& snapshots, const Dictionary& dict,
                         const Selector& output_selector, const Selector& state_projector,
                         double zeta);

/// Stacked regression psi_future ~= [K_x K_u] [psi_past; psi_input] with the
/// same regularized solver.
KoopmanModel fit_koopman_with_input(const SnapshotPair& snapshots, const Dictionary& dict,
                                    const InputDictionary& input_dict,
                                    const Selector& output_selector, const Selector& state_projector,
                                    double zeta);

/// Lifted free run: psi_hat_{t+1} = K_x psi_hat_t + K_u psi_u(u_t) from
/// psi(x0); states read via P_x, outputs via W_h. Columns t = 0..T.
struct LiftedPrediction {
  Matrix states;   // n x (T+1)
  Matrix outputs;  // p x (T+1)
};

LiftedPrediction predict_free_run(const KoopmanModel& model, const Vector& x0,
                                  const InputSignal& input, int horizon);

/// One-step predictions against a reference trajectory: column t (t >= 1) is
/// the model's propagation of the lifted true state at t-1. Column 0 holds the
/// lifted read of the true initial state. Setting use_input = false zeroes the
/// input term, predicting as if the input were an unknown disturbance.
LiftedPrediction predict_one_step(const KoopmanModel& model, const Trajectory& truth,
                                  bool use_input = true);

enum class PredictionMode { OneStep, MultiStep, WithControl, OpenLoopIgnoringInput };
enum class ErrorChannels { Output, State };

/// Per-channel 2-norm errors of a prediction against the true trajectory;
/// total_error sums the channels. One-step modes score columns 1..T,
/// MultiStep scores 0..T. Channels selects whether errors are measured on the
/// W_h outputs (default) or on the P_x states.
struct PredictionReport {
  Vector per_channel_errors;
  double total_error = 0.0;
  int horizon = 0;
  PredictionMode mode = PredictionMode::OneStep;
  ErrorChannels channels = ErrorChannels::Output;
};

PredictionReport prediction_error(const KoopmanModel& model, const Trajectory& truth,
                                  PredictionMode mode, ErrorChannels channels = ErrorChannels::Output);

}  // namespace koopman
