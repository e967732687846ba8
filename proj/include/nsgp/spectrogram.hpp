#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nsgp/kernels.hpp"
#include "nsgp/warp.hpp"

namespace nsgp {

// Local frequency mean, precision-like matrix and amplitude of one kernel
// component at one input: the parameters of the Gaussian-in-frequency
// spectrogram approximation.
struct SpectrogramComponent {
  Eigen::VectorXd xi;      // radians per unit input
  Eigen::MatrixXd lambda;  // inverse-squared-length units, symmetric PSD
  double amp = 0.0;        // sigma_xx
};

struct SpectrogramPoint {
  Eigen::VectorXd x;
  std::vector<SpectrogramComponent> comps;

  double amp_sum() const;
};

// Closed-form local parameters per kernel family (field Jacobians via
// central differences on the conditional mean, step 1e-4 * (1+|x|)).
SpectrogramPoint local_params(const KernelSpec& spec, const Eigen::VectorXd& x);

// Independent oracle: xi from the gradient of the phase U(x+t/2, x-t/2) at
// t=0, lambda from halved second directional derivatives of the distance
// term D (D(tau) = tau' Lambda tau).
SpectrogramPoint local_params_fd_oracle(const KernelSpec& spec, const Eigen::VectorXd& x);

// SE kernel over warped inputs f(x), constant covariance Sigma:
// k(x,x') = exp(-1/2 (f(x)-f(x'))' Sigma^{-1} (f(x)-f(x'))).
struct DgpSeSpec {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  Eigen::MatrixXd sigma;  // K x K
};

SpectrogramPoint local_params_dgp_se(const DgpSeSpec& spec, const Eigen::VectorXd& x);
SpectrogramPoint local_params_dgp_se_fd(const DgpSeSpec& spec, const Eigen::VectorXd& x);

// Approximate Wigner value: real kernels split their spectral mass between
// +xi and -xi, so each component contributes
// amp/2 [N(w | xi/2pi, Lambda/4pi^2) + N(w | -xi/2pi, Lambda/4pi^2)].
double spectrogram_eval(const SpectrogramPoint& pt, const Eigen::VectorXd& omega);

// Quadrature of the Wigner transform along the lag axis (1-dim inputs);
// returns the real part per requested frequency.
Eigen::VectorXd wigner_numeric(const KernelSpec& spec, double x,
                               const Eigen::VectorXd& omegas, int n_nodes = 4001);

// One-sided (folded onto w >= 0) spectrogram over a 1-dim input grid; each
// column integrates to its amp_sum by trapezoid.
struct SpectrogramGrid {
  Eigen::VectorXd x_grid;
  Eigen::VectorXd omega_grid;
  Eigen::MatrixXd values;   // n_omega x n_x
  Eigen::VectorXd amp_sum;  // per column
};

// n_omega points over [0, 3 max|xi|/2pi + 3 max sqrt(Lambda)/(pi sqrt 2)].
SpectrogramGrid spectrogram_grid(const KernelSpec& spec, const Eigen::VectorXd& x_grid,
                                 int n_omega = 64);

// Covariance-function DGP prior sampling: layer l draws from the layer
// kernel with hyperfunctions warped from the previous layer's sample.
struct DgpStackSpec {
  int depth = 0;                                  // L, capped at 8
  KernelFamily layer_family = KernelFamily::NSQ;  // NSQ or CSK correlation
  WarpSpec ell_warp;    // next-layer lengthscale = warp(f_{l-1})
  WarpSpec mu_warp;     // CSK layers
  WarpSpec sigma_warp;  // CSK layers
  double base_ell = 0.5;

  static DgpStackSpec defaults(KernelFamily family, int depth);
};

// Returns depth+1 layers f_0 .. f_L sampled on the grid rows.
std::vector<Eigen::VectorXd> sample_dgp_prior(const DgpStackSpec& stack,
                                              const Eigen::MatrixXd& grid, Rng& rng);

}  // namespace nsgp
