#pragma once

#include <Eigen/Dense>

#include "nsgp/common.hpp"

namespace nsgp {

// Lower-triangular Cholesky factor of a (jittered) symmetric matrix.
struct CholFactor {
  Eigen::MatrixXd L;
  double log_det = 0.0;        // log|LL^T| = 2 * sum(log L_ii)
  double applied_jitter = 0.0; // amount added to the diagonal to factorize

  Eigen::Index dim() const { return L.rows(); }

  // (LL^T)^{-1} b via two triangular solves.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;
  // L^{-1} b.
  Eigen::VectorXd half_solve(const Eigen::VectorXd& b) const;
};

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 0.0);

// Factorizes m + j*I, escalating j from base_jitter*mean(diag) by doubling
// (starting at 1e-6*mean(diag) if the base attempt fails) up to a relative
// cap of 1e-2. Throws FactorizationFailed past the cap.
CholFactor cholesky_with_jitter(const Eigen::MatrixXd& m, double base_jitter = 0.0);

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const CholFactor& chol);

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const CholFactor& chol, Rng& rng);

// Reverse-mode map for L = chol(P): given dJ/dL (lower part used), returns
// symmetric dJ/dP.
Eigen::MatrixXd cholesky_reverse(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Lbar);

}  // namespace nsgp
