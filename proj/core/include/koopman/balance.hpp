/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <optional>

#include "koopman/dictionary.hpp"
#include "koopman/dynsys.hpp"
#include "koopman/edmd.hpp"
#include "koopman/gramians.hpp"
#include "koopman/types.hpp"

namespace koopman {

/// Symmetric PSD square root via eigendecomposition, with negative
/// eigenvalues clipped to zero. The input must pass psd_check.
Matrix sqrt_psd(const Matrix& X);

/// Square roots of the eigenvalues of X_c X_o (computed through the
/// symmetric product S X_o S with S = sqrt_psd(X_c)), clipped at zero and
/// sorted nonincreasing.
Vector hankel_singular_values(const Matrix& X_c, const Matrix& X_o);

/// Balanced coordinates for a lifted linear realization (K_x, K_u, W_h):
/// transform * X_c * transform^T and the congruent observability transform
/// both equal diag(hsv). Directions whose Hankel value falls below
/// 1e-14 * hsv_max are dropped from the realization and reported in
/// hsv_discarded, so order() can be smaller than the lifted dimension.
struct BalancedRealization {
  Matrix transform;          // T, order x n_L
  Matrix inverse_transform;  // T^{-1}, n_L x order
  Vector hsv;                // kept Hankel singular values, nonincreasing
  Vector hsv_discarded;      // values dropped from the realization
  Matrix A;                  // T K_x T^{-1}
  Matrix B;                  // T K_u
  Matrix C;                  // W_h T^{-1}
  double regularization_used = 0.0;  // diagonal shift added to X_c (0 if none)

  int order() const { return static_cast<int>(hsv.size()); }
};

/// Default: regularize X_c by eps * tr(X_c)/n * I with eps = 1e-10 whenever
/// cond(X_c) exceeds 1e12. Pass a nonnegative eps_reg to override eps.
inline constexpr double kAutoRegularization = -1.0;

BalancedRealization balance_realization(const Matrix& K_x, const Matrix& K_u, const Matrix& W_h,
                                        const Matrix& X_c, const Matrix& X_o,
                                        double eps_reg = kAutoRegularization);

/// Convenience overload taking the learned model and its gramians.
BalancedRealization balance(const KoopmanModel& model, const Gramian& X_c, const Gramian& X_o,
                            double eps_reg = kAutoRegularization);

/// Leading-block truncation of a balanced realization with the classical
/// Hankel tail bounds. bound_advisory is set when the balanced A is not
/// stable, in which case the bounds are reported but not guaranteed.
struct ReducedModel {
  int order = 0;
  Matrix A;        // r x r
  Matrix B;        // r x m_L
  Matrix C;        // p x r
  Matrix lift_in;  // first r rows of T, for eta_0 = lift_in * psi(x0)
  double bound_upper = 0.0;  // 2 * sum of discarded Hankel values
  double bound_lower = 0.0;  // first discarded Hankel value
  bool bound_advisory = false;
};

ReducedModel truncate(const BalancedRealization& bal, int order);

/// eta_0 = lift_in * psi(x0); eta_{t+1} = A eta_t + B psi_u(u_t);
/// y_t = C eta_t. Returns outputs for t = 0..horizon.
Matrix simulate_reduced(const ReducedModel& rm, const Vector& x0, const Dictionary& dict,
                        const std::optional<InputDictionary>& input_dict, const InputSignal& input,
                        int horizon);

/// Roll an explicit lifted realization forward from eta0 with raw input
/// columns already lifted; returns outputs for t = 0..horizon.
Matrix simulate_lifted(const Matrix& A, const Matrix& B, const Matrix& C, const Vector& eta0,
                       const Matrix& lifted_inputs, int horizon);

}  // namespace koopman
