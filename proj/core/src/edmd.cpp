/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/edmd.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace koopman {

namespace {

constexpr double kPinvCutoff = 1e-10;  // relative to sigma_max

// Minimum-norm least-squares solution K of data ~= K regressors, or the
// Tikhonov-regularized solution when zeta > 0.
Matrix solve_regression(const Matrix& regressors, const Matrix& data, double zeta) {
  if (zeta < 0.0) throw Error("fit: regularization must be nonnegative");
  if (regressors.cols() < 1) throw Error("fit: needs at least one snapshot pair");
  if (regressors.cwiseAbs().maxCoeff() == 0.0) throw Error("fit: all-zero snapshot matrix");

  if (zeta == 0.0) {
    Eigen::JacobiSVD<Matrix> svd(regressors, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = kPinvCutoff * sv(0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    // K = data * V_r S_r^{-1} U_r^T
    const Matrix Ur = svd.matrixU().leftCols(rank);
    const Matrix Vr = svd.matrixV().leftCols(rank);
    const Vector inv_s = sv.head(rank).cwiseInverse();
    return ((data * Vr) * inv_s.asDiagonal()) * Ur.transpose();
  }

  const int d = static_cast<int>(regressors.rows());
  const Matrix gram = regressors * regressors.transpose() + zeta * Matrix::Identity(d, d);
  // K^T solves (Psi Psi^T + zeta I) K^T = Psi data^T.
  return gram.ldlt().solve(regressors * data.transpose()).transpose();
}

Selector resize_check(const Selector& s, int lifted_dim, const char* what) {
  if (s.matrix().cols() != lifted_dim)
    throw Error(std::string("fit: ") + what + " column count does not match the lifted dimension");
  return s;
}

}  // namespace

SnapshotPair build_snapshots(const std::vector<Trajectory>& trajectories, const Dictionary& dict,
                             const std::optional<InputDictionary>& input_dict) {
  if (trajectories.empty()) throw Error("build_snapshots: empty trajectory list");

  int total = 0;
  for (const auto& tr : trajectories) {
    if (tr.horizon() < 1) throw Error("build_snapshots: every trajectory needs at least two states");
    if (tr.state_dim() != dict.state_dim())
      throw Error("build_snapshots: trajectory state dimension does not match the dictionary");
    if (input_dict && tr.input_dim() != input_dict->input_dim())
      throw Error("build_snapshots: trajectory input dimension does not match the input dictionary");
    total += tr.horizon();
  }

  SnapshotPair snaps;
  snaps.psi_past.resize(dict.lifted_dim(), total);
  snaps.psi_future.resize(dict.lifted_dim(), total);
  snaps.psi_input.resize(input_dict ? input_dict->lifted_dim() : 0, total);

  int col = 0;
  for (const auto& tr : trajectories) {
    for (int t = 0; t < tr.horizon(); ++t, ++col) {
      snaps.psi_past.col(col) = dict.eval(tr.states.col(t));
      snaps.psi_future.col(col) = dict.eval(tr.states.col(t + 1));
      if (input_dict) snaps.psi_input.col(col) = input_dict->eval(tr.inputs.col(t));
    }
  }
  return snaps;
}

KoopmanModel fit_koopman(const SnapshotPair& snapshots, const Dictionary& dict,
                         const Selector& output_selector, const Selector& state_projector,
                         double zeta) {
  if (snapshots.lifted_dim() != dict.lifted_dim())
    throw Error("fit_koopman: snapshot rows do not match the dictionary's lifted dimension");

  const Matrix K = solve_regression(snapshots.psi_past, snapshots.psi_future, zeta);

  KoopmanModel model{
      K,
      Matrix(dict.lifted_dim(), 0),
      dict,
      std::nullopt,
      resize_check(output_selector, dict.lifted_dim(), "output selector"),
      resize_check(state_projector, dict.lifted_dim(), "state projector"),
      zeta,
      (snapshots.psi_future - K * snapshots.psi_past).norm(),
  };
  if (!model.K_x.allFinite()) throw Error("fit_koopman: non-finite operator entries");
  return model;
}

KoopmanModel fit_koopman_with_input(const SnapshotPair& snapshots, const Dictionary& dict,
                                    const InputDictionary& input_dict,
                                    const Selector& output_selector, const Selector& state_projector,
                                    double zeta) {
  if (!snapshots.has_input()) throw Error("fit_koopman_with_input: snapshot pair has no lifted inputs");
  if (snapshots.psi_input.rows() != input_dict.lifted_dim())
    throw Error("fit_koopman_with_input: snapshot input rows do not match the input dictionary");
  if (snapshots.lifted_dim() != dict.lifted_dim())
    throw Error("fit_koopman_with_input: snapshot rows do not match the dictionary's lifted dimension");

  const int n_l = snapshots.lifted_dim();
  const int m_l = static_cast<int>(snapshots.psi_input.rows());
  Matrix stacked(n_l + m_l, snapshots.count());
  stacked.topRows(n_l) = snapshots.psi_past;
  stacked.bottomRows(m_l) = snapshots.psi_input;

  const Matrix K = solve_regression(stacked, snapshots.psi_future, zeta);

  KoopmanModel model{
      K.leftCols(n_l),
      K.rightCols(m_l),
      dict,
      input_dict,
      resize_check(output_selector, dict.lifted_dim(), "output selector"),
      resize_check(state_projector, dict.lifted_dim(), "state projector"),
      zeta,
      (snapshots.psi_future - K * stacked).norm(),
  };
  if (!model.K_x.allFinite() || !model.K_u.allFinite())
    throw Error("fit_koopman_with_input: non-finite operator entries");
  return model;
}

LiftedPrediction predict_free_run(const KoopmanModel& model, const Vector& x0,
                                  const InputSignal& input, int horizon) {
  if (horizon < 1) throw Error("predict_free_run: horizon must be >= 1");
  if (model.has_input() && input.dim() != model.input_dictionary->input_dim())
    throw Error("predict_free_run: input signal dimension mismatch");

  const Matrix& P_x = model.state_projector.matrix();
  const Matrix& W_h = model.output_selector.matrix();

  LiftedPrediction pred;
  pred.states.resize(P_x.rows(), horizon + 1);
  pred.outputs.resize(W_h.rows(), horizon + 1);

  Vector lifted = model.dictionary.eval(x0);
  for (int t = 0;; ++t) {
    pred.states.col(t) = P_x * lifted;
    pred.outputs.col(t) = W_h * lifted;
    if (t == horizon) break;
    Vector next = model.K_x * lifted;
    if (model.has_input()) next += model.K_u * model.input_dictionary->eval(input.at(t));
    lifted = std::move(next);
  }
  return pred;
}

LiftedPrediction predict_one_step(const KoopmanModel& model, const Trajectory& truth,
                                  bool use_input) {
  if (truth.state_dim() != model.state_dim()) throw Error("predict_one_step: state dimension mismatch");
  if (use_input && model.has_input() && truth.input_dim() != model.input_dictionary->input_dim())
    throw Error("predict_one_step: trajectory inputs do not match the model's input dictionary");

  const int T = truth.horizon();
  const Matrix& P_x = model.state_projector.matrix();
  const Matrix& W_h = model.output_selector.matrix();

  LiftedPrediction pred;
  pred.states.resize(P_x.rows(), T + 1);
  pred.outputs.resize(W_h.rows(), T + 1);

  Vector lifted = model.dictionary.eval(truth.states.col(0));
  pred.states.col(0) = P_x * lifted;
  pred.outputs.col(0) = W_h * lifted;
  for (int t = 0; t < T; ++t) {
    lifted = model.dictionary.eval(truth.states.col(t));
    Vector next = model.K_x * lifted;
    if (use_input && model.has_input())
      next += model.K_u * model.input_dictionary->eval(truth.inputs.col(t));
    pred.states.col(t + 1) = P_x * next;
    pred.outputs.col(t + 1) = W_h * next;
  }
  return pred;
}

PredictionReport prediction_error(const KoopmanModel& model, const Trajectory& truth,
                                  PredictionMode mode, ErrorChannels channels) {
  if (truth.horizon() < 1) throw Error("prediction_error: trajectory has no steps");
  if ((mode == PredictionMode::WithControl || mode == PredictionMode::OpenLoopIgnoringInput) &&
      !model.has_input())
    throw Error("prediction_error: mode requires a model with an input operator");

  LiftedPrediction pred;
  int first_scored = 1;
  switch (mode) {
    case PredictionMode::OneStep:
      pred = predict_one_step(model, truth, model.has_input());
      break;
    case PredictionMode::WithControl:
      pred = predict_one_step(model, truth, true);
      break;
    case PredictionMode::OpenLoopIgnoringInput:
      pred = predict_one_step(model, truth, false);
      break;
    case PredictionMode::MultiStep: {
      const InputSignal input = model.has_input() && truth.input_dim() > 0
                                    ? InputSignal::samples(truth.inputs)
                                    : InputSignal::zero(truth.input_dim());
      pred = predict_free_run(model, truth.states.col(0), input, truth.horizon());
      first_scored = 0;
      break;
    }
  }

  const bool use_output = (channels == ErrorChannels::Output);
  const Matrix& predicted = use_output ? pred.outputs : pred.states;
  const Matrix& actual = use_output ? truth.outputs : truth.states;
  if (predicted.rows() != actual.rows())
    throw Error("prediction_error: channel count mismatch between model and trajectory");
  if (predicted.cols() != actual.cols())
    throw Error("prediction_error: length mismatch between prediction and trajectory");

  const int T = truth.horizon();
  PredictionReport report;
  report.mode = mode;
  report.channels = channels;
  report.horizon = T;
  report.per_channel_errors = Vector::Zero(predicted.rows());
  for (int c = 0; c < predicted.rows(); ++c) {
    double sq = 0.0;
    for (int t = first_scored; t <= T; ++t) {
      const double d = predicted(c, t) - actual(c, t);
      sq += d * d;
    }
    report.per_channel_errors[c] = std::sqrt(sq);
  }
  report.total_error = report.per_channel_errors.sum();
  return report;
}

}  // namespace koopman
