/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/gramians.hpp"

#include <Eigen/Eigenvalues>

namespace koopman {

namespace {

constexpr double kStabilityMargin = 1e-9;

Matrix symmetrize(const Matrix& X) { return 0.5 * (X + X.transpose()); }

void require_stable(const Matrix& M, const char* what) {
  const double rho = spectral_radius(M);
  if (rho >= 1.0 - kStabilityMargin)
    throw Error(std::string(what) + ": infinite horizon requires spectral radius < 1 - 1e-9, got rho = " +
                std::to_string(rho) + "; use a finite horizon instead");
}

}  // namespace

double spectral_radius(const Matrix& M) {
  if (M.rows() != M.cols()) throw Error("spectral_radius: matrix must be square");
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix stein_solve(const Matrix& M, const Matrix& Q, SteinSide side, double tol, int max_iterations) {
  if (M.rows() != M.cols()) throw Error("stein_solve: M must be square");
  if (Q.rows() != Q.cols() || Q.rows() != M.rows()) throw Error("stein_solve: Q/M dimension mismatch");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + Q.cwiseAbs().maxCoeff()))
    throw Error("stein_solve: Q must be symmetric");
  require_stable(M, "stein_solve");

  Matrix X = symmetrize(Q);
  Matrix Mk = M;
  for (int k = 0; k < max_iterations; ++k) {
    const Matrix update = (side == SteinSide::Left) ? Matrix(Mk.transpose() * X * Mk)
                                                    : Matrix(Mk * X * Mk.transpose());
    X += update;
    if (update.cwiseAbs().maxCoeff() < tol) return symmetrize(X);
    Mk = Mk * Mk;
  }
  throw Error("stein_solve: no convergence after " + std::to_string(max_iterations) +
              " squaring iterations (rho estimate " + std::to_string(spectral_radius(M)) + ")");
}

Gramian observability_gramian(const KoopmanModel& model, const Horizon& horizon) {
  const Matrix& W_h = model.output_selector.matrix();
  const int d = model.lifted_dim();

  Matrix X;
  if (horizon.is_infinite) {
    require_stable(model.K_x, "observability_gramian");
    X = stein_solve(model.K_x, W_h.transpose() * W_h, SteinSide::Left);
  } else {
    X = Matrix::Zero(d, d);
    Matrix M = W_h;  // W_h K_x^t
    X += M.transpose() * M;
    for (int t = 0; t < horizon.steps; ++t) {
      M = M * model.K_x;
      X += M.transpose() * M;
    }
  }

  Gramian g;
  g.matrix = symmetrize(X);
  g.kind = GramianKind::Observability;
  g.horizon = horizon;
  return g;
}

Gramian controllability_gramian(const KoopmanModel& model, const Horizon& horizon) {
  if (!model.has_input()) throw Error("controllability_gramian: model has no input operator K_u");
  const int d = model.lifted_dim();

  Matrix X;
  if (horizon.is_infinite) {
    require_stable(model.K_x, "controllability_gramian");
    X = stein_solve(model.K_x, model.K_u * model.K_u.transpose(), SteinSide::Right);
  } else {
    X = Matrix::Zero(d, d);
    Matrix M = model.K_u;  // K_x^j K_u
    X += M * M.transpose();
    for (int j = 0; j < horizon.steps; ++j) {
      M = model.K_x * M;
      X += M * M.transpose();
    }
  }

  Gramian g;
  g.matrix = symmetrize(X);
  g.kind = GramianKind::Controllability;
  g.horizon = horizon;
  return g;
}

Gramian project(const Gramian& g, const Matrix& projection, const std::string& descriptor) {
  if (projection.cols() != g.dim())
    throw Error("project: projection column count " + std::to_string(projection.cols()) +
                " does not match gramian side " + std::to_string(g.dim()));
  Gramian out = g;
  out.matrix = symmetrize(projection * g.matrix * projection.transpose());
  out.projection = descriptor.empty()
                       ? "general(" + std::to_string(projection.rows()) + "x" +
                             std::to_string(projection.cols()) + ")"
                       : descriptor;
  if (!g.projection.empty()) out.projection = g.projection + ";" + out.projection;
  return out;
}

Gramian project(const Gramian& g, const Selector& selector) {
  return project(g, selector.matrix(), selector.descriptor());
}

Gramian normalize(const Gramian& g) {
  Gramian out = g;
  const double m = g.matrix.cwiseAbs().maxCoeff();
  if (m > 0.0) out.matrix /= m;
  out.normalized = true;
  return out;
}

Matrix phi_c(const KoopmanModel& model, int j) {
  if (!model.has_input()) throw Error("phi_c: model has no input operator K_u");
  if (j < 0) throw Error("phi_c: step must be >= 0");
  Matrix M = model.K_u;
  for (int k = 0; k < j; ++k) M = model.K_x * M;
  return M;
}

PsdReport psd_check(const Matrix& X) {
  if (X.rows() != X.cols()) throw Error("psd_check: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(X));
  if (es.info() != Eigen::Success) throw Error("psd_check: eigendecomposition failed");
  PsdReport r;
  r.lambda_min = es.eigenvalues().minCoeff();
  r.lambda_max = es.eigenvalues().maxCoeff();
  r.is_psd = r.lambda_min >= -1e-8 * (1.0 + r.lambda_max);
  return r;
}

PsdReport psd_check(const Gramian& g) { return psd_check(g.matrix); }

}  // namespace koopman
