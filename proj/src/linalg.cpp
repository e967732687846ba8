#include "nsgp/linalg.hpp"

#include <cmath>

namespace nsgp {

Eigen::VectorXd CholFactor::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd t = L.triangularView<Eigen::Lower>().solve(b);
  return L.triangularView<Eigen::Lower>().transpose().solve(t);
}

Eigen::MatrixXd CholFactor::solve(const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd t = L.triangularView<Eigen::Lower>().solve(B);
  return L.triangularView<Eigen::Lower>().transpose().solve(t);
}

Eigen::VectorXd CholFactor::half_solve(const Eigen::VectorXd& b) const {
  return L.triangularView<Eigen::Lower>().solve(b);
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

CholFactor cholesky_with_jitter(const Eigen::MatrixXd& m, double base_jitter) {
  if (m.rows() != m.cols()) throw DimensionMismatch("cholesky: matrix not square");
  if (!m.allFinite()) throw FactorizationFailed("cholesky: non-finite entries");
  const Eigen::Index n = m.rows();
  const double diag_scale = std::max(m.diagonal().mean(), 0.0);
  const double cap = 1e-2 * std::max(diag_scale, 1e-300);

  double jitter = base_jitter * diag_scale;
  while (true) {
    Eigen::MatrixXd work = m;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      CholFactor f;
      f.L = llt.matrixL();
      // LLT can "succeed" with a zero pivot on semidefinite input; require
      // strictly positive diagonal per the CholFactor invariant.
      if ((f.L.diagonal().array() > 0.0).all()) {
        f.log_det = 2.0 * f.L.diagonal().array().log().sum();
        f.applied_jitter = jitter;
        return f;
      }
    }
    if (jitter >= cap) {
      throw FactorizationFailed("cholesky: jitter cap exceeded (ill-conditioned matrix)");
    }
    jitter = (jitter <= 0.0) ? 1e-6 * std::max(diag_scale, 1e-300)
                             : std::min(2.0 * jitter, cap);
  }
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const CholFactor& chol) {
  const Eigen::Index n = x.size();
  if (mean.size() != n || chol.dim() != n) {
    throw DimensionMismatch("mvn_logpdf: dimension mismatch");
  }
  Eigen::VectorXd w = chol.half_solve(x - mean);
  constexpr double log_2pi = 1.8378770664093453;
  return -0.5 * w.squaredNorm() - 0.5 * chol.log_det - 0.5 * double(n) * log_2pi;
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const CholFactor& chol, Rng& rng) {
  Eigen::VectorXd z(chol.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + chol.L.triangularView<Eigen::Lower>() * z;
}

// Reverse-mode Cholesky via the closed form
//   Pbar = 1/2 L^{-T} (Phi(L^T Lbar) + Phi(L^T Lbar)^T) L^{-1},
// Phi = lower triangle with halved diagonal (Murray 2016, eq. 8).
Eigen::MatrixXd cholesky_reverse(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Lbar_in) {
  const Eigen::Index n = L.rows();
  Eigen::MatrixXd Lbar = Lbar_in.triangularView<Eigen::Lower>();
  Eigen::MatrixXd C = L.transpose() * Lbar;
  Eigen::MatrixXd Phi = C.triangularView<Eigen::StrictlyLower>();
  Phi.diagonal() = 0.5 * C.diagonal();
  Eigen::MatrixXd S = Phi + Phi.transpose();
  // L^{-T} S L^{-1}
  Eigen::MatrixXd T = L.triangularView<Eigen::Lower>().transpose().solve(S);
  Eigen::MatrixXd G = L.triangularView<Eigen::Lower>().transpose()
                          .solve(T.transpose()).transpose();
  return 0.5 * (G + G.transpose());
}

}  // namespace nsgp
