#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "nsgp/common.hpp"
#include "nsgp/numdiff.hpp"

namespace nsgp {

// Per-component functional hyperparameter values at one input point.
// Row p of ell is the diagonal of Sigma_p^{1/2}; row p of mu the frequency
// parameter of component p.
struct HyperValues {
  Eigen::VectorXd sigma;  // P, amplitudes (>= 0); 1 for correlation-only use
  Eigen::MatrixXd ell;    // P x D, lengthscales (> 0)
  Eigen::MatrixXd mu;     // P x D

  int components() const { return int(sigma.size()); }
  int dim() const { return int(ell.cols()); }

  static HyperValues constant(int P, int D, double sigma_v = 1.0, double ell_v = 1.0,
                              double mu_v = 0.0);
};

// Same shape as HyperValues; holds d(kernel)/d(hyper value).
struct HyperGrad {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd ell;
  Eigen::MatrixXd mu;

  void resize_zero(int P, int D);
};

enum class KernelFamily { SE, SM, NSQ, GSM, CSK };

std::string family_name(KernelFamily f);
KernelFamily family_from_name(const std::string& name);
bool family_has_field(KernelFamily f);

// Source of hyperparameter values for the nonparametric families.
struct HyperField {
  virtual ~HyperField() = default;
  virtual HyperValues eval(const Eigen::VectorXd& x) const = 0;
};

// Analytic field for tests, spectrogram fixtures, and synthetic demos.
struct AnalyticField : HyperField {
  int P = 1, D = 1;
  std::function<double(int p, const Eigen::VectorXd& x)> sigma_fn;        // null -> 1
  std::function<double(int p, int d, const Eigen::VectorXd& x)> ell_fn;   // null -> 1
  std::function<double(int p, int d, const Eigen::VectorXd& x)> mu_fn;    // null -> 0

  HyperValues eval(const Eigen::VectorXd& x) const override;
};

// A kernel family plus its parameters: constants for SE/SM, a field
// reference for NSQ/GSM/CSK. Single entry point for Gram construction and
// spectrogram analysis.
struct KernelSpec {
  KernelFamily family = KernelFamily::SE;
  int components = 1;  // P (1 for SE and NSQ)
  int dim = 1;         // D

  Eigen::VectorXd weight;  // SE/SM: w_p (variance weights)
  Eigen::MatrixXd ell0;    // SE/SM: P x D
  Eigen::MatrixXd mu0;     // SM: P x D

  std::shared_ptr<const HyperField> field;  // NSQ/GSM/CSK

  void validate() const;
  bool parametric() const { return !family_has_field(family); }
  HyperValues hyper_at(const Eigen::VectorXd& x) const;

  static KernelSpec se(const Eigen::VectorXd& ell, double weight = 1.0);
  static KernelSpec sm(const Eigen::VectorXd& weight, const Eigen::MatrixXd& ell,
                       const Eigen::MatrixXd& mu);
};

// Pairwise quantities of the normalized CSK correlation for one component:
// prefactor sigma_ij, squared Mahalanobis distance Q_ij, pairwise frequency
// omega_ij, frequency distance S_ij.
struct PairwiseTerms {
  double sigma_ij = 1.0;
  double Q_ij = 0.0;
  Eigen::VectorXd omega_ij;
  double S_ij = 0.0;
};

PairwiseTerms csk_pairwise(const HyperValues& ha, const HyperValues& hb, int p,
                           const Eigen::VectorXd& xa, const Eigen::VectorXd& xb);

// Normalized correlation sigma_ij exp(-(Q+S)/2) cos<omega_ij, xa-xb> of
// component p.
double csk_correlation(const HyperValues& ha, const HyperValues& hb,
                       const Eigen::VectorXd& xa, const Eigen::VectorXd& xb, int p = 0);

// Multi-component kernel sum_p sigma_p(xa) sigma_p(xb) R_p(xa, xb).
double csk_kernel(const HyperValues& ha, const HyperValues& hb, const Eigen::VectorXd& xa,
                  const Eigen::VectorXd& xb);

// sigma_ij exp(-Q/2); the zero-frequency special case.
double nsq_kernel(const HyperValues& ha, const HyperValues& hb, const Eigen::VectorXd& xa,
                  const Eigen::VectorXd& xb);

// sigma_ij exp(-Q/2) cos(<mu_a, xa> - <mu_b, xb>).
double gsm_kernel(const HyperValues& ha, const HyperValues& hb, const Eigen::VectorXd& xa,
                  const Eigen::VectorXd& xb);

// sum_p w_p exp(-1/2 tau' diag(ell_p^2)^{-1} tau) cos<mu_p, tau>.
double sm_kernel(const Eigen::VectorXd& weight, const Eigen::MatrixXd& ell,
                 const Eigen::MatrixXd& mu, const Eigen::VectorXd& xa,
                 const Eigen::VectorXd& xb);

// Dispatch on spec.family; ha/hb are ignored for parametric families.
double kernel_value(const KernelSpec& spec, const Eigen::VectorXd& xa,
                    const Eigen::VectorXd& xb, const HyperValues* ha = nullptr,
                    const HyperValues* hb = nullptr);

// kernel_value plus d k / d (hyper values at both endpoints); only meaningful
// for field families (ga/gb left zero otherwise).
double kernel_value_grad(KernelFamily family, const Eigen::VectorXd& xa,
                         const Eigen::VectorXd& xb, const HyperValues& ha,
                         const HyperValues& hb, HyperGrad& ga, HyperGrad& gb);

// Gram matrix k(x_i, x_j) over rows of X; vals holds per-row hyper values
// for field families (may be empty for SE/SM). OpenMP over row blocks; the
// serial variant is the reference the parallel one is tested against.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X,
                     const std::vector<HyperValues>& vals);
Eigen::MatrixXd gram_serial(const KernelSpec& spec, const Eigen::MatrixXd& X,
                            const std::vector<HyperValues>& vals);
Eigen::MatrixXd gram_cross(const KernelSpec& spec, const Eigen::MatrixXd& Xa,
                           const std::vector<HyperValues>& va, const Eigen::MatrixXd& Xb,
                           const std::vector<HyperValues>& vb);

// Convenience overloads that evaluate spec.field at every row first.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X);
Eigen::MatrixXd gram_cross(const KernelSpec& spec, const Eigen::MatrixXd& Xa,
                           const Eigen::MatrixXd& Xb);

std::vector<HyperValues> eval_field_rows(const KernelSpec& spec, const Eigen::MatrixXd& X);

// Numeric Hermitian inner product of two complex radial basis functions
// (1-dim), the quadrature oracle for the closed-form kernel integral.
Complex convolution_oracle(double ell_i, double mu_i, double ell_j, double mu_j,
                           double x_i, double x_j, int n_nodes = 2001);

// Re(oracle) normalized by the diagonal values; comparable to
// csk_correlation on 1-dim inputs.
double convolution_correlation_oracle(double ell_i, double mu_i, double ell_j,
                                      double mu_j, double x_i, double x_j,
                                      int n_nodes = 2001);

// Demo-quality sample path via discretized convolution of the basis
// functions with white noise (single component fields).
Eigen::VectorXd sample_via_convolution(const Eigen::VectorXd& grid,
                                       const HyperField& field, Rng& rng,
                                       int n_noise = 10000);

}  // namespace nsgp
