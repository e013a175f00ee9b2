/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <optional>
#include <string>

#include "koopman/edmd.hpp"
#include "koopman/types.hpp"

namespace koopman {

enum class GramianKind { Observability, Controllability };

/// Symmetric PSD energy matrix with horizon and projection provenance.
/// Symmetrized on construction; PSD within tolerance
/// lambda_min >= -1e-8 * (1 + lambda_max).
struct Gramian {
  Matrix matrix;
  GramianKind kind = GramianKind::Observability;
  Horizon horizon = Horizon::finite(0);
  std::string projection;  // empty when unprojected
  bool normalized = false;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Largest eigenvalue modulus.
double spectral_radius(const Matrix& M);

enum class SteinSide { Left, Right };

/// Solve X = M^T X M + Q (left) or X = M X M^T + Q (right) by squaring
/// iteration: X <- X + M_k^T X M_k (left), M_k <- M_k^2, until the update
/// falls below tol in max norm. Requires rho(M) < 1 - 1e-9.
Matrix stein_solve(const Matrix& M, const Matrix& Q, SteinSide side, double tol = 1e-12,
                   int max_iterations = 60);

/// sum_{t=0}^{T} (K_x^t)^T W_h^T W_h K_x^t, or the Stein solution for the
/// infinite horizon (requires rho(K_x) < 1 - 1e-9).
Gramian observability_gramian(const KoopmanModel& model, const Horizon& horizon);

/// sum_{j=0}^{T} K_x^j K_u K_u^T (K_x^j)^T, or the Stein solution for the
/// infinite horizon. The model must carry an input operator.
Gramian controllability_gramian(const KoopmanModel& model, const Horizon& horizon);

/// P X P^T, symmetrized, with the projection recorded.
Gramian project(const Gramian& g, const Matrix& projection, const std::string& descriptor = "");
Gramian project(const Gramian& g, const Selector& selector);

/// Divide by the largest absolute entry (a zero gramian is returned
/// unchanged) and set the normalized flag.
Gramian normalize(const Gramian& g);

/// The j-step input-to-lifted-state map K_x^j K_u.
Matrix phi_c(const KoopmanModel& model, int j);

struct PsdReport {
  bool is_psd = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

PsdReport psd_check(const Matrix& X);
PsdReport psd_check(const Gramian& g);

}  // namespace koopman
