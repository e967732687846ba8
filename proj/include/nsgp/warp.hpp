#pragma once

namespace nsgp {

enum class WarpKind { Exp, Softplus, Identity };

// Monotone link applied to latent GP values; Exp and Softplus map onto
// (0, inf), Identity is unconstrained.
struct WarpSpec {
  WarpKind kind = WarpKind::Identity;
  double offset = 0.0;  // added to the latent value before warping
};

double warp(const WarpSpec& spec, double h);
double warp_deriv(const WarpSpec& spec, double h);  // d warp / d h

// Latent value whose warp equals the requested output (warp is strictly
// monotone for Exp/Softplus).
double warp_inverse(const WarpSpec& spec, double value);

}  // namespace nsgp
