#pragma once

// Operator calculus on divergence-free torus fields.  Every operator here is
// an exact per-mode multiplier:
//
//   space weights        L2: 1,  H1: |k|^2,  V: 1+a|k|^2,
//                        W: |k|^2 (1+a|k|^2)^2,  Wstar: 1/|k|^2
//   Stokes operator A    |k|^2
//   Helmholtz (I+aA)     1+a|k|^2, inverse 1/(1+a|k|^2)
//   dissipation Ahat     |k|^2/(1+a|k|^2)
//   curl                 i * sign(k) * |k|
//
// The duality pairing of the Gelfand triple W c V c Wstar coincides with the
// V inner product whenever the left argument has finite V norm, which is
// always the case for truncated fields.

#include "sgf/spectral.hpp"

namespace sgf {

enum class Space { L2, H1, V, W, Wstar };

double mode_weight(Space s, WaveVector k, double alpha);

double norm(const SpectralField& u, Space s);

// Real part of the weighted Hermitian sum; exact inner product on real fields.
double inner(const SpectralField& u, const SpectralField& v, Space s);

inline double inner_l2(const SpectralField& u, const SpectralField& v) {
    return inner(u, v, Space::L2);
}
inline double inner_h1(const SpectralField& u, const SpectralField& v) {
    return inner(u, v, Space::H1);
}
inline double inner_v(const SpectralField& u, const SpectralField& v) {
    return inner(u, v, Space::V);
}
inline double inner_w(const SpectralField& u, const SpectralField& v) {
    return inner(u, v, Space::W);
}

// Duality pairing <f, v> of the Gelfand triple; equals (f, v)_V here.
inline double pairing(const SpectralField& f, const SpectralField& v) {
    return inner(f, v, Space::V);
}

ScalarSpectralField curl(const SpectralField& u);

// curl((I + alpha A) u): the transported scalar of the strong inner product.
ScalarSpectralField curl_helmholtz(const SpectralField& u);

// Helmholtz-Leray projection of a two-component Fourier field onto its
// divergence-free part; the mean mode is dropped by convention.
SpectralField leray_project(const ScalarSpectralField& vx, const ScalarSpectralField& vy,
                            double alpha);

SpectralField apply_stokes(const SpectralField& u);          // A u
SpectralField apply_helmholtz(const SpectralField& u);       // (I + alpha A) u
SpectralField solve_helmholtz(const SpectralField& u);       // (I + alpha A)^{-1} u
SpectralField apply_dissipation(const SpectralField& u);     // (I + alpha A)^{-1} A u

// Finite Galerkin level: the first n modes ordered by eigenvalue.  +-pairs are
// kept adjacent (canonical representative first, sorted lexicographically
// within an eigenvalue tie) so every level is closed under k -> -k.
class GalerkinLevel {
  public:
    GalerkinLevel() = default;

    // First n eigenmodes; n must be even and >= 2.
    static GalerkinLevel first_modes(int n, double alpha);
    // All modes of the square box max(|k1|,|k2|) <= cutoff.
    static GalerkinLevel full_box(int cutoff, double alpha);

    int size() const { return int(modes_.size()); }
    int box() const { return box_; }
    double alpha() const { return alpha_; }
    const std::vector<WaveVector>& modes() const { return modes_; }
    const std::vector<double>& eigenvalues() const { return lambdas_; }
    double lambda_min() const { return lambdas_.front(); }
    double lambda_max() const { return lambdas_.back(); }
    bool contains(WaveVector k) const;

  private:
    std::vector<WaveVector> modes_;
    std::vector<double> lambdas_;  // sorted non-decreasing, aligned with modes_
    std::vector<std::uint8_t> mask_;
    int box_ = 0;
    double alpha_ = 0.0;
};

// Orthogonal projection onto the level span; output lives on the level box.
SpectralField project_level(const SpectralField& u, const GalerkinLevel& level);

}  // namespace sgf
