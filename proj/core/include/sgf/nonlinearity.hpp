#pragma once

// Transported-vorticity nonlinearity
//
//   nonlinear_term(u, v) = (I + alpha A)^{-1} Leray( curl(u - alpha Lap u) x v )
//
// computed pseudo-spectrally on a grid padded to twice the coefficient
// support, so the quadratic product is an exact linear convolution on every
// retained mode and the skew-symmetry identities hold to rounding.

#include "sgf/spectral.hpp"

namespace sgf {

SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v);

}  // namespace sgf
