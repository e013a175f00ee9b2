/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/balance.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace koopman {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kDefaultEps = 1e-10;
constexpr double kHsvDropTol = 1e-14;  // relative to the largest Hankel value

Matrix symmetrize(const Matrix& X) { return 0.5 * (X + X.transpose()); }

// Sign convention: flip each column of U so its largest-magnitude entry is
// positive, making the transform reproducible across runs and platforms.
void fix_column_signs(Matrix& U) {
  for (int j = 0; j < U.cols(); ++j) {
    int imax = 0;
    U.col(j).cwiseAbs().maxCoeff(&imax);
    if (U(imax, j) < 0.0) U.col(j) = -U.col(j);
  }
}

}  // namespace

Matrix sqrt_psd(const Matrix& X) {
  const PsdReport psd = psd_check(X);
  if (!psd.is_psd)
    throw Error("sqrt_psd: matrix is not positive semidefinite (lambda_min = " +
                std::to_string(psd.lambda_min) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(X));
  const Vector clipped = es.eigenvalues().cwiseMax(0.0);
  return symmetrize(es.eigenvectors() * clipped.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose());
}

Vector hankel_singular_values(const Matrix& X_c, const Matrix& X_o) {
  if (X_c.rows() != X_o.rows() || X_c.cols() != X_o.cols() || X_c.rows() != X_c.cols())
    throw Error("hankel_singular_values: gramians must be square with equal sides");
  const Matrix S = sqrt_psd(X_c);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S * X_o * S));
  Vector sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(sq.begin(), sq.end(), std::greater<double>());
  return sq;
}

BalancedRealization balance_realization(const Matrix& K_x, const Matrix& K_u, const Matrix& W_h,
                                        const Matrix& X_c, const Matrix& X_o, double eps_reg) {
  const int d = static_cast<int>(K_x.rows());
  if (K_x.cols() != d) throw Error("balance: K_x must be square");
  if (K_u.rows() != d && K_u.cols() > 0) throw Error("balance: K_u row count mismatch");
  if (W_h.cols() != d) throw Error("balance: W_h column count mismatch");
  if (X_c.rows() != d || X_o.rows() != d || X_c.cols() != d || X_o.cols() != d)
    throw Error("balance: gramian dimensions do not match the realization");
  if (!psd_check(X_c).is_psd || !psd_check(X_o).is_psd)
    throw Error("balance: both gramians must be positive semidefinite");
  if (X_c.cwiseAbs().maxCoeff() == 0.0) throw Error("balance: controllability gramian is numerically zero");

  // Conditional Tikhonov shift so that sqrt(X_c) is invertible.
  Matrix Xc_reg = symmetrize(X_c);
  double shift = 0.0;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Xc_reg);
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin <= 0.0 || lmax / lmin > kConditionLimit) {
      const double eps = (eps_reg == kAutoRegularization) ? kDefaultEps : eps_reg;
      if (eps < 0.0) throw Error("balance: eps_reg must be nonnegative");
      shift = eps * Xc_reg.trace() / d;
      Xc_reg += shift * Matrix::Identity(d, d);
    }
  }

  const Matrix S = sqrt_psd(Xc_reg);
  Eigen::SelfAdjointEigenSolver<Matrix> core(symmetrize(S * X_o * S));
  if (core.info() != Eigen::Success) throw Error("balance: eigendecomposition failed");

  // Eigenvalues ascending from Eigen; reorder to nonincreasing Hankel values.
  const int dd = d;
  Matrix U(dd, dd);
  Vector hsv_all(dd);
  for (int j = 0; j < dd; ++j) {
    U.col(j) = core.eigenvectors().col(dd - 1 - j);
    hsv_all[j] = std::sqrt(std::max(core.eigenvalues()[dd - 1 - j], 0.0));
  }
  fix_column_signs(U);

  const double sigma_max = hsv_all[0];
  if (sigma_max == 0.0) throw Error("balance: all Hankel singular values are zero");
  int kept = 0;
  while (kept < dd && hsv_all[kept] > kHsvDropTol * sigma_max) ++kept;

  BalancedRealization bal;
  bal.hsv = hsv_all.head(kept);
  bal.hsv_discarded = hsv_all.tail(dd - kept);
  bal.regularization_used = shift;

  const Matrix U_k = U.leftCols(kept);
  const Vector inv_sqrt_sigma = bal.hsv.cwiseSqrt().cwiseInverse();
  const Vector sqrt_sigma = bal.hsv.cwiseSqrt();

  // T^{-1} = S U Sigma^{-1/2};  T = Sigma^{1/2} U^T S^{-1}. S is positive
  // definite after the conditional shift, so S^{-1} is well defined.
  bal.inverse_transform = S * U_k * inv_sqrt_sigma.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es_s(S);
  const Matrix S_inv = es_s.eigenvectors() * es_s.eigenvalues().cwiseInverse().asDiagonal() *
                       es_s.eigenvectors().transpose();
  bal.transform = sqrt_sigma.asDiagonal() * U_k.transpose() * S_inv;

  bal.A = bal.transform * K_x * bal.inverse_transform;
  bal.B = bal.transform * K_u;
  bal.C = W_h * bal.inverse_transform;
  if (!bal.transform.allFinite() || !bal.inverse_transform.allFinite() || !bal.A.allFinite())
    throw Error("balance: non-finite transform; the gramian pair is too ill-conditioned");
  return bal;
}

BalancedRealization balance(const KoopmanModel& model, const Gramian& X_c, const Gramian& X_o,
                            double eps_reg) {
  if (X_c.kind != GramianKind::Controllability || X_o.kind != GramianKind::Observability)
    throw Error("balance: pass the controllability gramian first and the observability gramian second");
  if (!X_c.projection.empty() || !X_o.projection.empty())
    throw Error("balance: balancing requires the unprojected lifted gramians");
  return balance_realization(model.K_x, model.K_u, model.output_selector.matrix(), X_c.matrix,
                             X_o.matrix, eps_reg);
}

ReducedModel truncate(const BalancedRealization& bal, int order) {
  if (order < 1 || order > bal.order())
    throw Error("truncate: order must lie in [1, " + std::to_string(bal.order()) + "], got " +
                std::to_string(order));

  ReducedModel rm;
  rm.order = order;
  rm.A = bal.A.topLeftCorner(order, order);
  rm.B = bal.B.topRows(order);
  rm.C = bal.C.leftCols(order);
  rm.lift_in = bal.transform.topRows(order);
  if (order < bal.order()) {
    double tail = bal.hsv.tail(bal.order() - order).sum() + bal.hsv_discarded.sum();
    rm.bound_upper = 2.0 * tail;
    rm.bound_lower = bal.hsv[order];
  }
  rm.bound_advisory = spectral_radius(bal.A) >= 1.0;
  return rm;
}

Matrix simulate_reduced(const ReducedModel& rm, const Vector& x0, const Dictionary& dict,
                        const std::optional<InputDictionary>& input_dict, const InputSignal& input,
                        int horizon) {
  if (horizon < 1) throw Error("simulate_reduced: horizon must be >= 1");
  if (rm.lift_in.cols() != dict.lifted_dim())
    throw Error("simulate_reduced: dictionary does not match the reduced model's lifted dimension");
  if (input_dict && rm.B.cols() != input_dict->lifted_dim())
    throw Error("simulate_reduced: input dictionary does not match B");
  if (!input_dict && rm.B.cols() > 0 && input.dim() > 0)
    throw Error("simulate_reduced: model has an input channel but no input dictionary was given");

  Matrix outputs(rm.C.rows(), horizon + 1);
  Vector eta = rm.lift_in * dict.eval(x0);
  for (int t = 0;; ++t) {
    outputs.col(t) = rm.C * eta;
    if (t == horizon) break;
    Vector next = rm.A * eta;
    if (input_dict && rm.B.cols() > 0) next += rm.B * input_dict->eval(input.at(t));
    eta = std::move(next);
  }
  return outputs;
}

Matrix simulate_lifted(const Matrix& A, const Matrix& B, const Matrix& C, const Vector& eta0,
                       const Matrix& lifted_inputs, int horizon) {
  if (horizon < 1) throw Error("simulate_lifted: horizon must be >= 1");
  Matrix outputs(C.rows(), horizon + 1);
  Vector eta = eta0;
  for (int t = 0;; ++t) {
    outputs.col(t) = C * eta;
    if (t == horizon) break;
    Vector next = A * eta;
    if (B.cols() > 0 && lifted_inputs.rows() > 0 && t < lifted_inputs.cols())
      next += B * lifted_inputs.col(t);
    eta = std::move(next);
  }
  return outputs;
}

}  // namespace koopman
