#include "nsgp/latent.hpp"

#include <cmath>
#include <map>

namespace nsgp {

LatentGPSpec LatentGPSpec::for_ell() {
  LatentGPSpec s;
  s.warp.kind = WarpKind::Exp;
  s.mean_shift = std::log(0.5);
  return s;
}

LatentGPSpec LatentGPSpec::for_sigma() {
  LatentGPSpec s;
  s.warp.kind = WarpKind::Softplus;
  s.mean_shift = std::log(std::exp(1.0) - 1.0);  // softplus(shift) = 1
  return s;
}

LatentGPSpec LatentGPSpec::for_mu() {
  LatentGPSpec s;
  s.warp.kind = WarpKind::Identity;
  s.mean_shift = 0.0;
  return s;
}

FieldLayout FieldLayout::for_family(KernelFamily f, int P, int D) {
  FieldLayout l;
  l.P = P;
  l.D = D;
  switch (f) {
    case KernelFamily::NSQ:
      l.has_sigma = false;
      l.has_mu = false;
      break;
    case KernelFamily::GSM:
      l.has_sigma = false;
      l.has_mu = true;
      break;
    case KernelFamily::CSK:
      l.has_sigma = true;
      l.has_mu = true;
      break;
    default:
      throw ValidationError("FieldLayout: parametric family has no field");
  }
  return l;
}

HyperFunctionField HyperFunctionField::make(KernelFamily family, int P, int D,
                                            const Eigen::MatrixXd& z) {
  HyperFunctionField f;
  f.layout = FieldLayout::for_family(family, P, D);
  f.z = z;
  f.fn.resize(size_t(f.layout.n_funcs()));
  for (int p = 0; p < P; ++p) {
    if (f.layout.has_sigma) f.fn[size_t(f.layout.idx_sigma(p))] = LatentGPSpec::for_sigma();
    for (int d = 0; d < D; ++d) {
      f.fn[size_t(f.layout.idx_ell(p, d))] = LatentGPSpec::for_ell();
      if (f.layout.has_mu) f.fn[size_t(f.layout.idx_mu(p, d))] = LatentGPSpec::for_mu();
    }
  }
  f.u_white = Eigen::MatrixXd::Zero(z.rows(), f.layout.n_funcs());
  return f;
}

Eigen::MatrixXd latent_gram(const LatentGPSpec& spec, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& B) {
  const double inv2l2 = 0.5 / (spec.lengthscale * spec.lengthscale);
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      K(i, j) = spec.variance *
                std::exp(-(A.row(i) - B.row(j)).squaredNorm() * inv2l2);
    }
  }
  return K;
}

Eigen::VectorXd unwhiten(const HyperFunctionField& field, int d) {
  const auto& spec = field.fn[size_t(d)];
  const CholFactor L = cholesky_with_jitter(latent_gram(spec, field.z, field.z), 1e-10);
  return L.L.triangularView<Eigen::Lower>() * field.u_white.col(d);
}

Eigen::VectorXd whiten(const HyperFunctionField& field, int d, const Eigen::VectorXd& u) {
  const auto& spec = field.fn[size_t(d)];
  const CholFactor L = cholesky_with_jitter(latent_gram(spec, field.z, field.z), 1e-10);
  return L.half_solve(u);
}

FieldEvalResult conditional_hyper(const HyperFunctionField& field, const Eigen::MatrixXd& X,
                                  FieldMode mode, Rng* rng, const Eigen::MatrixXd* noise) {
  const Eigen::Index n = X.rows();
  const int nf = field.n_funcs();
  FieldEvalResult out;
  out.h = Eigen::MatrixXd::Zero(n, nf);
  out.W.resize(size_t(nf));

  if (mode == FieldMode::Sample && !rng && !noise) {
    throw ValidationError("conditional_hyper: Sample mode needs an rng or noise");
  }
  if (noise && (noise->rows() != n || noise->cols() != nf)) {
    throw DimensionMismatch("conditional_hyper: noise shape mismatch");
  }

  // Functions sharing (lengthscale, variance) share all matrix work.
  std::map<std::pair<double, double>, std::vector<int>> groups;
  for (int d = 0; d < nf; ++d) {
    groups[{field.fn[size_t(d)].lengthscale, field.fn[size_t(d)].variance}].push_back(d);
  }

  for (const auto& [key, ds] : groups) {
    const LatentGPSpec& spec = field.fn[size_t(ds.front())];
    const CholFactor Lz = cholesky_with_jitter(latent_gram(spec, field.z, field.z), 1e-10);
    const Eigen::MatrixXd Kxz = latent_gram(spec, X, field.z);
    // W = k(X,Z) L^{-T}: solve L W^T = k(X,Z)^T
    const Eigen::MatrixXd Wt =
        Lz.L.triangularView<Eigen::Lower>().solve(Kxz.transpose());
    const Eigen::MatrixXd W = Wt.transpose();

    Eigen::MatrixXd Lc;  // conditional covariance factor, Sample mode only
    if (mode == FieldMode::Sample) {
      Eigen::MatrixXd C = latent_gram(spec, X, X) - W * W.transpose();
      C.diagonal().array() += 1e-10 * std::max(spec.variance, 1e-12);
      Lc = cholesky_with_jitter(C, 1e-8).L;
    }

    for (int d : ds) {
      out.W[size_t(d)] = W;
      Eigen::VectorXd h = W * field.u_white.col(d);
      if (mode == FieldMode::Sample) {
        Eigen::VectorXd zvec(n);
        if (noise) {
          zvec = noise->col(d);
        } else {
          for (Eigen::Index i = 0; i < n; ++i) zvec[i] = rng->normal();
        }
        h += Lc.triangularView<Eigen::Lower>() * zvec;
      }
      out.h.col(d) = h;
    }
  }

  // Warp into HyperValues.
  const FieldLayout& lay = field.layout;
  out.values.resize(size_t(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    HyperValues v;
    v.sigma.resize(lay.P);
    v.ell.resize(lay.P, lay.D);
    v.mu.resize(lay.P, lay.D);
    for (int p = 0; p < lay.P; ++p) {
      v.sigma[p] = lay.has_sigma
                       ? warp(field.fn[size_t(lay.idx_sigma(p))].warp,
                              out.h(i, lay.idx_sigma(p)) +
                                  field.fn[size_t(lay.idx_sigma(p))].mean_shift)
                       : 1.0;
      for (int d = 0; d < lay.D; ++d) {
        const int ie = lay.idx_ell(p, d);
        v.ell(p, d) = warp(field.fn[size_t(ie)].warp,
                           out.h(i, ie) + field.fn[size_t(ie)].mean_shift);
        if (lay.has_mu) {
          const int im = lay.idx_mu(p, d);
          v.mu(p, d) = warp(field.fn[size_t(im)].warp,
                            out.h(i, im) + field.fn[size_t(im)].mean_shift);
        } else {
          v.mu(p, d) = 0.0;
        }
      }
    }
    out.values[size_t(i)] = std::move(v);
  }
  return out;
}

HyperValues LatentHyperField::eval(const Eigen::VectorXd& x) const {
  if (!field) throw FieldUnavailable("LatentHyperField: missing field");
  const FieldEvalResult r = conditional_hyper(*field, x.transpose(), FieldMode::Mean);
  return r.values.front();
}

}  // namespace nsgp
