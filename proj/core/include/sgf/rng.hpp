#pragma once

// Counter-based random derivation.  Every draw is a pure function of
// (seed, stream, role, indices), so paths can be regenerated, refined and
// consumed in any order or thread count with bit-identical results.
// Distribution samplers are implemented from raw 64-bit words to stay
// independent of standard-library distribution internals.

#include <cstdint>
#include <vector>

namespace sgf::rng {

// Derivation roles; part of the key, never reused across purposes.
enum Role : std::uint64_t {
    kBrownianBase = 1,
    kBridge = 2,
    kJumpCount = 3,
    kJumpTime = 4,
    kJumpMark = 5,
    kField = 6,
    kJumpSplit = 7,
    kSample = 8,
};

std::uint64_t mix(std::uint64_t x);  // splitmix64 finalizer

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t role,
                     std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0);

// Uniform in the open interval (0, 1).
double uniform01(std::uint64_t key);

// Standard normal via Box-Muller on two derived uniforms.
double normal(std::uint64_t key);

// Poisson count by inversion; exact for the finite intensities used here.
std::uint64_t poisson(double lambda, std::uint64_t key);

}  // namespace sgf::rng
