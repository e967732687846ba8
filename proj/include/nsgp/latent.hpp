#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "nsgp/kernels.hpp"
#include "nsgp/linalg.hpp"
#include "nsgp/warp.hpp"

namespace nsgp {

// Prior over one functional hyperparameter: SE latent GP pushed through a
// warp. mean_shift is the constant prior mean in latent space.
struct LatentGPSpec {
  double lengthscale = 1.0;  // lambda_d
  double variance = 1.0;     // s_d
  WarpSpec warp;
  double mean_shift = 0.0;

  static LatentGPSpec for_ell();    // Exp warp, prior median lengthscale 0.5
  static LatentGPSpec for_sigma();  // Softplus warp, prior median amplitude 1
  static LatentGPSpec for_mu();     // Identity warp, zero shift
};

// Maps hyperfunction indices onto (sigma_p | ell_pd | mu_pd) slots for a
// kernel family.
struct FieldLayout {
  int P = 1, D = 1;
  bool has_sigma = false, has_mu = false;

  int funcs_per_component() const { return (has_sigma ? 1 : 0) + D + (has_mu ? D : 0); }
  int n_funcs() const { return P * funcs_per_component(); }
  int idx_sigma(int p) const { return p * funcs_per_component(); }
  int idx_ell(int p, int d) const { return p * funcs_per_component() + (has_sigma ? 1 : 0) + d; }
  int idx_mu(int p, int d) const {
    return p * funcs_per_component() + (has_sigma ? 1 : 0) + D + d;
  }
  static FieldLayout for_family(KernelFamily f, int P, int D);
};

// Warped latent-GP representation of all functional hyperparameters:
// inducing locations z, per-function priors, and whitened inducing values.
struct HyperFunctionField {
  FieldLayout layout;
  Eigen::MatrixXd z;                // M_theta x D, rows distinct
  std::vector<LatentGPSpec> fn;     // layout.n_funcs()
  Eigen::MatrixXd u_white;          // M_theta x n_funcs

  int m() const { return int(z.rows()); }
  int n_funcs() const { return layout.n_funcs(); }
  bool empty() const { return z.rows() == 0 || fn.empty(); }

  static HyperFunctionField make(KernelFamily family, int P, int D,
                                 const Eigen::MatrixXd& z);
};

// Latent SE covariance s * exp(-|a-b|^2 / (2 lambda^2)).
Eigen::MatrixXd latent_gram(const LatentGPSpec& spec, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& B);

// u = L u_white with L L^T = k_d(Z, Z) + jitter.
Eigen::VectorXd unwhiten(const HyperFunctionField& field, int d);
Eigen::VectorXd whiten(const HyperFunctionField& field, int d, const Eigen::VectorXd& u);

enum class FieldMode { Mean, Sample };

// Conditional evaluation of all hyperfunctions at the rows of X; carries the
// pieces inference needs for gradients (latent values and the linear maps
// h_d = W_d u_white_d [+ conditional noise]).
struct FieldEvalResult {
  std::vector<HyperValues> values;       // per row of X
  Eigen::MatrixXd h;                     // n x n_funcs, latent values (pre-warp)
  std::vector<Eigen::MatrixXd> W;        // per fn: n x M, k(X,Z) L^{-T}
};

// In Sample mode the conditional noise is drawn jointly over the rows of X,
// either from rng or taken from *noise (n x n_funcs standard normals) when
// supplied — the latter keeps energy evaluations deterministic for
// finite-difference checks and common-random-number updates.
FieldEvalResult conditional_hyper(const HyperFunctionField& field, const Eigen::MatrixXd& X,
                                  FieldMode mode, Rng* rng = nullptr,
                                  const Eigen::MatrixXd* noise = nullptr);

// Inducing-point state moved by the samplers and optimizers.
struct InducingState {
  HyperFunctionField field;  // empty for parametric kernels
  Eigen::MatrixXd z_f;       // M_f x D
  Eigen::VectorXd u_f;       // M_f
};

// Mean-path point evaluator exposing a trained field as a HyperField.
struct LatentHyperField : HyperField {
  std::shared_ptr<const HyperFunctionField> field;
  HyperValues eval(const Eigen::VectorXd& x) const override;
};

}  // namespace nsgp
