#include "nsgp/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nsgp {

HyperValues HyperValues::constant(int P, int D, double sigma_v, double ell_v, double mu_v) {
  HyperValues h;
  h.sigma = Eigen::VectorXd::Constant(P, sigma_v);
  h.ell = Eigen::MatrixXd::Constant(P, D, ell_v);
  h.mu = Eigen::MatrixXd::Constant(P, D, mu_v);
  return h;
}

void HyperGrad::resize_zero(int P, int D) {
  sigma = Eigen::VectorXd::Zero(P);
  ell = Eigen::MatrixXd::Zero(P, D);
  mu = Eigen::MatrixXd::Zero(P, D);
}

std::string family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::SE: return "se";
    case KernelFamily::SM: return "sm";
    case KernelFamily::NSQ: return "nsq";
    case KernelFamily::GSM: return "gsm";
    case KernelFamily::CSK: return "csk";
  }
  return "se";
}

KernelFamily family_from_name(const std::string& name) {
  if (name == "se") return KernelFamily::SE;
  if (name == "sm") return KernelFamily::SM;
  if (name == "nsq") return KernelFamily::NSQ;
  if (name == "gsm") return KernelFamily::GSM;
  if (name == "csk") return KernelFamily::CSK;
  throw ValidationError("unknown kernel family: " + name);
}

bool family_has_field(KernelFamily f) {
  return f == KernelFamily::NSQ || f == KernelFamily::GSM || f == KernelFamily::CSK;
}

HyperValues AnalyticField::eval(const Eigen::VectorXd& x) const {
  HyperValues h;
  h.sigma.resize(P);
  h.ell.resize(P, D);
  h.mu.resize(P, D);
  for (int p = 0; p < P; ++p) {
    h.sigma[p] = sigma_fn ? sigma_fn(p, x) : 1.0;
    for (int d = 0; d < D; ++d) {
      h.ell(p, d) = ell_fn ? ell_fn(p, d, x) : 1.0;
      h.mu(p, d) = mu_fn ? mu_fn(p, d, x) : 0.0;
    }
  }
  return h;
}

void KernelSpec::validate() const {
  if (components < 1) throw ValidationError("kernel: components must be >= 1");
  if (dim < 1) throw ValidationError("kernel: dim must be >= 1");
  if ((family == KernelFamily::SE || family == KernelFamily::NSQ) && components != 1) {
    throw ValidationError("kernel: " + family_name(family) + " is single-component");
  }
  if (parametric()) {
    if (weight.size() != components || ell0.rows() != components || ell0.cols() != dim) {
      throw ValidationError("kernel: SE/SM constants have wrong shape");
    }
    if ((ell0.array() <= 0.0).any()) throw NonPositiveLengthscale("kernel: ell0 <= 0");
  } else if (!field) {
    throw ValidationError("kernel: " + family_name(family) + " requires a hyper field");
  }
}

HyperValues KernelSpec::hyper_at(const Eigen::VectorXd& x) const {
  if (parametric()) {
    HyperValues h;
    h.sigma = weight.array().sqrt();
    h.ell = ell0;
    h.mu = mu0.size() ? mu0 : Eigen::MatrixXd::Zero(components, dim);
    return h;
  }
  if (!field) throw FieldUnavailable("kernel: no hyper field attached");
  return field->eval(x);
}

KernelSpec KernelSpec::se(const Eigen::VectorXd& ell, double weight) {
  KernelSpec s;
  s.family = KernelFamily::SE;
  s.components = 1;
  s.dim = int(ell.size());
  s.weight = Eigen::VectorXd::Constant(1, weight);
  s.ell0 = ell.transpose();
  s.mu0 = Eigen::MatrixXd::Zero(1, s.dim);
  return s;
}

KernelSpec KernelSpec::sm(const Eigen::VectorXd& weight, const Eigen::MatrixXd& ell,
                          const Eigen::MatrixXd& mu) {
  KernelSpec s;
  s.family = KernelFamily::SM;
  s.components = int(weight.size());
  s.dim = int(ell.cols());
  s.weight = weight;
  s.ell0 = ell;
  s.mu0 = mu;
  return s;
}

namespace {

inline void check_ell(double la, double lb) {
  if (!(la > 0.0) || !(lb > 0.0)) {
    throw NonPositiveLengthscale("kernel: lengthscale must be positive");
  }
}

}  // namespace

PairwiseTerms csk_pairwise(const HyperValues& ha, const HyperValues& hb, int p,
                           const Eigen::VectorXd& xa, const Eigen::VectorXd& xb) {
  const int D = ha.dim();
  PairwiseTerms t;
  t.omega_ij.resize(D);
  double log_sigma = 0.0;
  for (int d = 0; d < D; ++d) {
    const double la = ha.ell(p, d), lb = hb.ell(p, d);
    check_ell(la, lb);
    const double la2 = la * la, lb2 = lb * lb;
    const double A = la2 + lb2;
    const double tau = xa[d] - xb[d];
    log_sigma += 0.5 * std::log(la * lb) - 0.5 * std::log(0.5 * A);
    t.Q_ij += tau * tau / A;
    t.omega_ij[d] = (ha.mu(p, d) + hb.mu(p, d)) / A;
    const double delta = ha.mu(p, d) / la2 - hb.mu(p, d) / lb2;
    t.S_ij += delta * delta * (la2 * lb2 / A);
  }
  t.sigma_ij = std::exp(log_sigma);
  return t;
}

double csk_correlation(const HyperValues& ha, const HyperValues& hb,
                       const Eigen::VectorXd& xa, const Eigen::VectorXd& xb, int p) {
  const PairwiseTerms t = csk_pairwise(ha, hb, p, xa, xb);
  const double phase = t.omega_ij.dot(xa - xb);
  return t.sigma_ij * std::exp(-0.5 * (t.Q_ij + t.S_ij)) * std::cos(phase);
}

double csk_kernel(const HyperValues& ha, const HyperValues& hb, const Eigen::VectorXd& xa,
                  const Eigen::VectorXd& xb) {
  double k = 0.0;
  for (int p = 0; p < ha.components(); ++p) {
    k += ha.sigma[p] * hb.sigma[p] * csk_correlation(ha, hb, xa, xb, p);
  }
  return k;
}

double nsq_kernel(const HyperValues& ha, const HyperValues& hb, const Eigen::VectorXd& xa,
                  const Eigen::VectorXd& xb) {
  const PairwiseTerms t = csk_pairwise(ha, hb, 0, xa, xb);
  return t.sigma_ij * std::exp(-0.5 * t.Q_ij);
}

double gsm_kernel(const HyperValues& ha, const HyperValues& hb, const Eigen::VectorXd& xa,
                  const Eigen::VectorXd& xb) {
  const PairwiseTerms t = csk_pairwise(ha, hb, 0, xa, xb);
  const double phase = ha.mu.row(0).dot(xa) - hb.mu.row(0).dot(xb);
  return t.sigma_ij * std::exp(-0.5 * t.Q_ij) * std::cos(phase);
}

double sm_kernel(const Eigen::VectorXd& weight, const Eigen::MatrixXd& ell,
                 const Eigen::MatrixXd& mu, const Eigen::VectorXd& xa,
                 const Eigen::VectorXd& xb) {
  const Eigen::VectorXd tau = xa - xb;
  double k = 0.0;
  for (int p = 0; p < weight.size(); ++p) {
    double q = 0.0, phase = 0.0;
    for (int d = 0; d < tau.size(); ++d) {
      const double l = ell(p, d);
      check_ell(l, l);
      q += tau[d] * tau[d] / (l * l);
      if (mu.size()) phase += mu(p, d) * tau[d];
    }
    k += weight[p] * std::exp(-0.5 * q) * std::cos(phase);
  }
  return k;
}

double kernel_value(const KernelSpec& spec, const Eigen::VectorXd& xa,
                    const Eigen::VectorXd& xb, const HyperValues* ha,
                    const HyperValues* hb) {
  switch (spec.family) {
    case KernelFamily::SE:
    case KernelFamily::SM:
      return sm_kernel(spec.weight, spec.ell0, spec.mu0, xa, xb);
    default: break;
  }
  if (!ha || !hb) throw FieldUnavailable("kernel_value: field values required");
  switch (spec.family) {
    case KernelFamily::NSQ: return nsq_kernel(*ha, *hb, xa, xb);
    case KernelFamily::GSM: return gsm_kernel(*ha, *hb, xa, xb);
    case KernelFamily::CSK: return csk_kernel(*ha, *hb, xa, xb);
    default: break;
  }
  throw ValidationError("kernel_value: unknown family");
}

namespace {

// One CSK component with gradients w.r.t. both endpoints' (ell, mu) rows;
// fills grad rows p of ga/gb and returns R_p.
double csk_correlation_grad(const HyperValues& ha, const HyperValues& hb, int p,
                            const Eigen::VectorXd& xa, const Eigen::VectorXd& xb,
                            bool with_freq, HyperGrad& ga, HyperGrad& gb) {
  const int D = ha.dim();
  double log_sigma = 0.0, Q = 0.0, S = 0.0, phase = 0.0;
  for (int d = 0; d < D; ++d) {
    const double la = ha.ell(p, d), lb = hb.ell(p, d);
    check_ell(la, lb);
    const double la2 = la * la, lb2 = lb * lb;
    const double A = la2 + lb2;
    const double tau = xa[d] - xb[d];
    log_sigma += 0.5 * std::log(la * lb) - 0.5 * std::log(0.5 * A);
    Q += tau * tau / A;
    if (with_freq) {
      phase += tau * (ha.mu(p, d) + hb.mu(p, d)) / A;
      const double delta = ha.mu(p, d) / la2 - hb.mu(p, d) / lb2;
      S += delta * delta * (la2 * lb2 / A);
    }
  }
  const double env = std::exp(log_sigma - 0.5 * (Q + S));  // sigma_ij e^{-(Q+S)/2}
  const double c = std::cos(phase), s = std::sin(phase);
  const double R = env * c;

  for (int d = 0; d < D; ++d) {
    const double la = ha.ell(p, d), lb = hb.ell(p, d);
    const double la2 = la * la, lb2 = lb * lb;
    const double A = la2 + lb2, A2 = A * A;
    const double tau = xa[d] - xb[d];
    const double ma = ha.mu(p, d), mb = hb.mu(p, d);

    const double dls_a = 0.5 / la - la / A;
    const double dls_b = 0.5 / lb - lb / A;
    const double dQ_a = -2.0 * la * tau * tau / A2;
    const double dQ_b = -2.0 * lb * tau * tau / A2;

    double dS_a = 0.0, dS_b = 0.0, dphi_la = 0.0, dphi_lb = 0.0;
    double dR_ma = 0.0, dR_mb = 0.0;
    if (with_freq) {
      const double delta = ma / la2 - mb / lb2;
      const double B = la2 * lb2 / A;
      dS_a = 2.0 * delta * B * (-2.0 * ma / (la2 * la)) + delta * delta * (2.0 * la * lb2 * lb2 / A2);
      dS_b = 2.0 * delta * B * (2.0 * mb / (lb2 * lb)) + delta * delta * (2.0 * lb * la2 * la2 / A2);
      dphi_la = tau * (-2.0 * la * (ma + mb) / A2);
      dphi_lb = tau * (-2.0 * lb * (ma + mb) / A2);

      const double dphi_m = tau / A;
      dR_ma = -0.5 * R * (2.0 * delta * B / la2) - env * s * dphi_m;
      dR_mb = -0.5 * R * (-2.0 * delta * B / lb2) - env * s * dphi_m;
    }
    ga.ell(p, d) += R * dls_a - 0.5 * R * (dQ_a + dS_a) - env * s * dphi_la;
    gb.ell(p, d) += R * dls_b - 0.5 * R * (dQ_b + dS_b) - env * s * dphi_lb;
    if (with_freq) {
      ga.mu(p, d) += dR_ma;
      gb.mu(p, d) += dR_mb;
    }
  }
  return R;
}

}  // namespace

double kernel_value_grad(KernelFamily family, const Eigen::VectorXd& xa,
                         const Eigen::VectorXd& xb, const HyperValues& ha,
                         const HyperValues& hb, HyperGrad& ga, HyperGrad& gb) {
  const int P = ha.components(), D = ha.dim();
  ga.resize_zero(P, D);
  gb.resize_zero(P, D);
  switch (family) {
    case KernelFamily::SE:
    case KernelFamily::SM:
      // constants; no per-point hyper gradients
      return sm_kernel(ha.sigma.array().square(), ha.ell, ha.mu, xa, xb);
    case KernelFamily::NSQ:
      return csk_correlation_grad(ha, hb, 0, xa, xb, /*with_freq=*/false, ga, gb);
    case KernelFamily::GSM: {
      // sigma_ij e^{-Q/2} cos(<mu_a,xa> - <mu_b,xb>)
      HyperGrad ea, eb;
      ea.resize_zero(P, D);
      eb.resize_zero(P, D);
      const double E = csk_correlation_grad(ha, hb, 0, xa, xb, /*with_freq=*/false, ea, eb);
      const double phase = ha.mu.row(0).dot(xa) - hb.mu.row(0).dot(xb);
      const double c = std::cos(phase), s = std::sin(phase);
      ga.ell = c * ea.ell;
      gb.ell = c * eb.ell;
      ga.mu.row(0) = -E * s * xa.transpose();
      gb.mu.row(0) = E * s * xb.transpose();
      return E * c;
    }
    case KernelFamily::CSK: {
      double k = 0.0;
      HyperGrad ra, rb;
      ra.resize_zero(P, D);
      rb.resize_zero(P, D);
      for (int p = 0; p < P; ++p) {
        ra.ell.row(p).setZero();
        rb.ell.row(p).setZero();
        ra.mu.row(p).setZero();
        rb.mu.row(p).setZero();
        const double R = csk_correlation_grad(ha, hb, p, xa, xb, true, ra, rb);
        const double sa = ha.sigma[p], sb = hb.sigma[p];
        k += sa * sb * R;
        ga.sigma[p] = sb * R;
        gb.sigma[p] = sa * R;
        ga.ell.row(p) = sa * sb * ra.ell.row(p);
        gb.ell.row(p) = sa * sb * rb.ell.row(p);
        ga.mu.row(p) = sa * sb * ra.mu.row(p);
        gb.mu.row(p) = sa * sb * rb.mu.row(p);
      }
      return k;
    }
  }
  throw ValidationError("kernel_value_grad: unknown family");
}

namespace {

template <bool Parallel>
Eigen::MatrixXd gram_impl(const KernelSpec& spec, const Eigen::MatrixXd& X,
                          const std::vector<HyperValues>& vals) {
  const Eigen::Index n = X.rows();
  const bool needs_field = family_has_field(spec.family);
  if (needs_field && Eigen::Index(vals.size()) != n) {
    throw FieldUnavailable("gram: hyper values missing for some rows");
  }
  Eigen::MatrixXd K(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (Parallel)
#endif
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = X.row(i);
    for (Eigen::Index j = i; j < n; ++j) {
      const Eigen::VectorXd xj = X.row(j);
      const double v = needs_field
                           ? kernel_value(spec, xi, xj, &vals[i], &vals[j])
                           : kernel_value(spec, xi, xj);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

}  // namespace

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X,
                     const std::vector<HyperValues>& vals) {
  return gram_impl<true>(spec, X, vals);
}

Eigen::MatrixXd gram_serial(const KernelSpec& spec, const Eigen::MatrixXd& X,
                            const std::vector<HyperValues>& vals) {
  return gram_impl<false>(spec, X, vals);
}

Eigen::MatrixXd gram_cross(const KernelSpec& spec, const Eigen::MatrixXd& Xa,
                           const std::vector<HyperValues>& va, const Eigen::MatrixXd& Xb,
                           const std::vector<HyperValues>& vb) {
  const Eigen::Index na = Xa.rows(), nb = Xb.rows();
  const bool needs_field = family_has_field(spec.family);
  if (needs_field &&
      (Eigen::Index(va.size()) != na || Eigen::Index(vb.size()) != nb)) {
    throw FieldUnavailable("gram_cross: hyper values missing for some rows");
  }
  Eigen::MatrixXd K(na, nb);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (Eigen::Index i = 0; i < na; ++i) {
    const Eigen::VectorXd xi = Xa.row(i);
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Eigen::VectorXd xj = Xb.row(j);
      K(i, j) = needs_field ? kernel_value(spec, xi, xj, &va[i], &vb[j])
                            : kernel_value(spec, xi, xj);
    }
  }
  return K;
}

std::vector<HyperValues> eval_field_rows(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  std::vector<HyperValues> vals;
  if (!family_has_field(spec.family)) return vals;
  if (!spec.field) throw FieldUnavailable("eval_field_rows: no hyper field attached");
  vals.reserve(size_t(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    vals.push_back(spec.field->eval(X.row(i)));
  }
  return vals;
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  return gram(spec, X, eval_field_rows(spec, X));
}

Eigen::MatrixXd gram_cross(const KernelSpec& spec, const Eigen::MatrixXd& Xa,
                           const Eigen::MatrixXd& Xb) {
  return gram_cross(spec, Xa, eval_field_rows(spec, Xa), Xb, eval_field_rows(spec, Xb));
}

namespace {

// Eq.-style basis function with explicit normalization:
// (2 pi l^2)^{-1/2} exp(-(u-x)^2 / 2l^2) exp(i (mu/l^2) (u-x))
Complex basis_fn(double u, double x, double ell, double mu) {
  const double l2 = ell * ell;
  const double dx = u - x;
  const double amp = std::exp(-0.5 * dx * dx / l2) / std::sqrt(2.0 * M_PI * l2);
  const double ph = mu * dx / l2;
  return Complex(amp * std::cos(ph), amp * std::sin(ph));
}

}  // namespace

Complex convolution_oracle(double ell_i, double mu_i, double ell_j, double mu_j,
                           double x_i, double x_j, int n_nodes) {
  check_ell(ell_i, ell_j);
  const double pad = 8.0 * std::max(ell_i, ell_j);
  const double lo = std::min(x_i, x_j) - pad;
  const double hi = std::max(x_i, x_j) + pad;
  return quad_integral_1d(
      [&](double u) {
        return basis_fn(u, x_i, ell_i, mu_i) * std::conj(basis_fn(u, x_j, ell_j, mu_j));
      },
      lo, hi, n_nodes);
}

double convolution_correlation_oracle(double ell_i, double mu_i, double ell_j,
                                      double mu_j, double x_i, double x_j, int n_nodes) {
  const Complex kij = convolution_oracle(ell_i, mu_i, ell_j, mu_j, x_i, x_j, n_nodes);
  const Complex kii = convolution_oracle(ell_i, mu_i, ell_i, mu_i, x_i, x_i, n_nodes);
  const Complex kjj = convolution_oracle(ell_j, mu_j, ell_j, mu_j, x_j, x_j, n_nodes);
  return kij.real() / std::sqrt(kii.real() * kjj.real());
}

Eigen::VectorXd sample_via_convolution(const Eigen::VectorXd& grid,
                                       const HyperField& field, Rng& rng, int n_noise) {
  const Eigen::Index n = grid.size();
  std::vector<HyperValues> vals;
  vals.reserve(size_t(n));
  double max_ell = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x(1);
    x[0] = grid[i];
    vals.push_back(field.eval(x));
    max_ell = std::max(max_ell, vals.back().ell.maxCoeff());
  }
  const int P = vals.empty() ? 1 : vals[0].components();
  const double lo = grid.minCoeff() - 8.0 * max_ell;
  const double hi = grid.maxCoeff() + 8.0 * max_ell;
  const double delta = (hi - lo) / double(n_noise);
  const double sqrt_delta = std::sqrt(delta);

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g(n_noise);
  for (int p = 0; p < P; ++p) {
    for (int k = 0; k < n_noise; ++k) g[k] = rng.normal();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ell = vals[i].ell(p, 0), mu = vals[i].mu(p, 0);
      const double sig = vals[i].sigma[p];
      if (sig == 0.0) continue;
      // window of noise cells within 9 lengthscales
      const int k0 = std::max(0, int((grid[i] - 9.0 * ell - lo) / delta));
      const int k1 = std::min(n_noise, int((grid[i] + 9.0 * ell - lo) / delta) + 1);
      double acc = 0.0;
      for (int k = k0; k < k1; ++k) {
        const double u = lo + (double(k) + 0.5) * delta;
        acc += basis_fn(u, grid[i], ell, mu).real() * g[k];
      }
      // unit-variance normalization: Int |K|^2 du = (4 pi l^2)^{-1/2}
      f[i] += sig * acc * sqrt_delta * std::pow(4.0 * M_PI * ell * ell, 0.25);
    }
  }
  return f;
}

}  // namespace nsgp
