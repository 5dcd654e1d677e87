#include "sgf/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgf::rng {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t role,
                     std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix(seed);
    h = mix(h ^ stream);
    h = mix(h ^ role);
    h = mix(h ^ a);
    h = mix(h ^ b);
    h = mix(h ^ c);
    return h;
}

double uniform01(std::uint64_t key) {
    // 53 mantissa bits, offset by half an ulp so 0 and 1 are excluded.
    return (double(key >> 11) + 0.5) * 0x1.0p-53;
}

double normal(std::uint64_t key) {
    const double u1 = uniform01(mix(key ^ 0x6a09e667f3bcc909ULL));
    const double u2 = uniform01(mix(key ^ 0xbb67ae8584caa73bULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t poisson(double lambda, std::uint64_t key) {
    if (lambda < 0.0) throw std::invalid_argument("poisson: negative intensity");
    if (lambda == 0.0) return 0;
    // Split large intensities so exp(-lambda) stays representable.
    if (lambda > 500.0) {
        std::uint64_t half = poisson(lambda / 2.0, mix(key ^ 1));
        return half + poisson(lambda / 2.0, mix(key ^ 2));
    }
    const double limit = std::exp(-lambda);
    std::uint64_t n = 0;
    double p = 1.0;
    std::uint64_t counter = 0;
    for (;;) {
        p *= uniform01(derive(key, 0, kSample, counter++));
        if (p <= limit) return n;
        ++n;
    }
}

}  // namespace sgf::rng
