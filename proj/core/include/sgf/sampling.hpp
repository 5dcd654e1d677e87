#pragma once

// Deterministic random-field generation for verification suites and tests.

#include "sgf/operators.hpp"
#include "sgf/rng.hpp"

namespace sgf {

// Real Gaussian field on the full box: independent complex-normal amplitudes
// on canonical modes, conjugate partners mirrored, per-mode scale
// exp(-decay * |k|).
inline SpectralField random_real_field(int cutoff, double alpha, std::uint64_t seed,
                                       std::uint64_t stream, std::uint64_t index,
                                       double decay = 0.0) {
    SpectralField u(cutoff, alpha);
    std::uint64_t mode_counter = 0;
    for (int i = -cutoff; i <= cutoff; ++i)
        for (int j = -cutoff; j <= cutoff; ++j) {
            WaveVector k{i, j};
            if (k.is_zero() || !k.is_canonical()) continue;
            const std::uint64_t key =
                rng::derive(seed, stream, rng::kField, index, mode_counter++);
            const double scale =
                std::exp(-decay * std::sqrt(k.norm2())) / std::sqrt(2.0);
            Complex a{rng::normal(rng::mix(key ^ 1)) * scale,
                      rng::normal(rng::mix(key ^ 2)) * scale};
            u.set(k, a);
            u.set(-k, std::conj(a));
        }
    return u;
}

// Same construction restricted to a Galerkin level.
inline SpectralField random_level_field(const GalerkinLevel& level, std::uint64_t seed,
                                        std::uint64_t stream, std::uint64_t index,
                                        double decay = 0.0) {
    return project_level(random_real_field(level.box(), level.alpha(), seed, stream, index, decay),
                         level);
}

// Smooth field with deterministic magnitudes |a_k| = scale * exp(-decay |k|)
// and random phases; band energies are then exact, which level-refinement
// studies rely on.
inline SpectralField smooth_phase_field(const GalerkinLevel& level, std::uint64_t seed,
                                        std::uint64_t stream, std::uint64_t index, double decay,
                                        double scale = 1.0) {
    SpectralField u(level.box(), level.alpha());
    std::uint64_t mode_counter = 0;
    for (WaveVector k : level.modes()) {
        if (!k.is_canonical()) continue;
        const std::uint64_t key = rng::derive(seed, stream, rng::kField, index, mode_counter++);
        const double mag = scale * std::exp(-decay * std::sqrt(k.norm2()));
        const double phi =
            2.0 * 3.14159265358979323846 * rng::uniform01(key);
        Complex a{mag * std::cos(phi), mag * std::sin(phi)};
        u.set(k, a);
        u.set(-k, std::conj(a));
    }
    return u;
}

}  // namespace sgf
