#include "nsgp/warp.hpp"

#include <cmath>

namespace nsgp {

namespace {
double softplus(double t) { return t > 30.0 ? t : std::log1p(std::exp(t)); }
double sigmoid(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}
}  // namespace

double warp(const WarpSpec& spec, double h) {
  const double t = h + spec.offset;
  switch (spec.kind) {
    case WarpKind::Exp: return std::exp(t);
    case WarpKind::Softplus: return softplus(t);
    case WarpKind::Identity: return t;
  }
  return t;
}

double warp_deriv(const WarpSpec& spec, double h) {
  const double t = h + spec.offset;
  switch (spec.kind) {
    case WarpKind::Exp: return std::exp(t);
    case WarpKind::Softplus: return sigmoid(t);
    case WarpKind::Identity: return 1.0;
  }
  return 1.0;
}

double warp_inverse(const WarpSpec& spec, double value) {
  switch (spec.kind) {
    case WarpKind::Exp: return std::log(value) - spec.offset;
    case WarpKind::Softplus:
      // inverse of log(1+e^t): t = log(e^v - 1)
      return (value > 30.0 ? value : std::log(std::expm1(value))) - spec.offset;
    case WarpKind::Identity: return value - spec.offset;
  }
  return value - spec.offset;
}

}  // namespace nsgp
