#include <doctest.h>

#include <cmath>

#include "sgf/nonlinearity.hpp"
#include "sgf/operators.hpp"
#include "sgf/sampling.hpp"
#include "test_oracles.hpp"

using namespace sgf;
namespace oracle = sgf::testing;

namespace {
double field_dist(const SpectralField& a, const SpectralField& b) {
    return norm(a - b, Space::V);
}
}  // namespace

TEST_CASE("single-mode self-interaction vanishes") {
    // The transported scalar of a single shell is proportional to the stream
    // function, so the product is a perfect gradient.
    for (double alpha : {0.5, 1.0}) {
        SpectralField u = unit_real_mode({1, 0}, 3, alpha);
        CHECK(norm(nonlinear_term(u, u), Space::V) <= 1e-14);
        SpectralField w = unit_real_mode({2, 1}, 4, alpha, 1.7);
        CHECK(norm(nonlinear_term(w, w), Space::V) <= 1e-13);
        // Same-shell two-mode field: still a single eigenvalue shell.
        SpectralField shell(3, alpha);
        shell.set({1, 0}, {1.0, 0.0});
        shell.set({-1, 0}, {1.0, 0.0});
        shell.set({0, 1}, {1.0, 0.0});
        shell.set({0, -1}, {1.0, 0.0});
        CHECK(norm(nonlinear_term(shell, shell), Space::V) <= 1e-13);
    }
}

TEST_CASE("cross-mode interaction produces the hand-computed amplitudes at (1,+-1)") {
    const double alpha = 1.0;
    SpectralField u(3, alpha);
    u.set({1, 0}, {1.0, 0.0});
    u.set({-1, 0}, {1.0, 0.0});
    u.set({0, 1}, {1.0, 0.0});
    u.set({0, -1}, {1.0, 0.0});
    SpectralField v(3, alpha);
    v.set({0, 1}, {1.0, 0.0});
    v.set({0, -1}, {1.0, 0.0});

    SpectralField b = nonlinear_term(u, v);

    // Hand convolution: output amplitude -i (1+alpha) / (sqrt(2) (1+2 alpha))
    // at (1, 1) and (1, -1), conjugates at the mirrored modes, nothing else.
    const double expected = (1.0 + alpha) / (std::sqrt(2.0) * (1.0 + 2.0 * alpha));
    CHECK(b.at({1, 1}).real() == doctest::Approx(0.0));
    CHECK(b.at({1, 1}).imag() == doctest::Approx(-expected).epsilon(1e-13));
    CHECK(b.at({1, -1}).imag() == doctest::Approx(-expected).epsilon(1e-13));
    CHECK(b.at({-1, -1}).imag() == doctest::Approx(expected).epsilon(1e-13));
    CHECK(b.at({-1, 1}).imag() == doctest::Approx(expected).epsilon(1e-13));
    double off_support = 0.0;
    b.for_each([&](WaveVector k, Complex a) {
        if (std::abs(k.k1) == 1 && std::abs(k.k2) == 1) return;
        off_support = std::max(off_support, std::abs(a));
    });
    CHECK(off_support <= 1e-14);

    // Cross-checked against both independent oracles.
    CHECK(field_dist(b, oracle::conv_nonlinear_term(u, v)) <= 1e-13);
    CHECK(field_dist(b, oracle::quadrature_nonlinear_term(u, v, 16)) <= 1e-12);
}

TEST_CASE("transform path equals direct convolution on random fields") {
    for (int s = 0; s < 10; ++s) {
        SpectralField u = random_real_field(4, 0.8, 51, 1, std::uint64_t(s));
        SpectralField v = random_real_field(4, 0.8, 51, 2, std::uint64_t(s));
        SpectralField fast = nonlinear_term(u, v);
        SpectralField slow = oracle::conv_nonlinear_term(u, v);
        CHECK(field_dist(fast, slow) <= 1e-12 * std::max(1.0, norm(slow, Space::V)));
    }
    // And against plain grid quadrature on a small case.
    SpectralField u = random_real_field(2, 1.0, 52, 1, 0);
    SpectralField v = random_real_field(2, 1.0, 52, 2, 0);
    CHECK(field_dist(nonlinear_term(u, v), oracle::quadrature_nonlinear_term(u, v, 12)) <= 1e-12);
}

TEST_CASE("bilinearity") {
    SpectralField u = random_real_field(3, 1.0, 53, 1, 0);
    SpectralField v = random_real_field(3, 1.0, 53, 2, 0);
    SpectralField w = random_real_field(3, 1.0, 53, 3, 0);
    SpectralField lhs = nonlinear_term(u, v + 2.0 * w);
    SpectralField rhs = nonlinear_term(u, v) + 2.0 * nonlinear_term(u, w);
    CHECK(field_dist(lhs, rhs) <= 1e-12);
    SpectralField lhs2 = nonlinear_term(u + 2.0 * w, v);
    SpectralField rhs2 = nonlinear_term(u, v) + 2.0 * nonlinear_term(w, v);
    CHECK(field_dist(lhs2, rhs2) <= 1e-12);
}

TEST_CASE("skew pairing, antisymmetry, difference identity, strong orthogonality") {
    for (int cutoff : {2, 4, 8}) {
        for (int s = 0; s < 25; ++s) {
            SpectralField u = random_real_field(cutoff, 1.0, 57, 1, std::uint64_t(s));
            SpectralField v = random_real_field(cutoff, 1.0, 57, 2, std::uint64_t(s));
            SpectralField w = random_real_field(cutoff, 1.0, 57, 3, std::uint64_t(s));

            const double scale =
                std::max(1.0, norm(u, Space::W) * norm(v, Space::V) * norm(w, Space::V));
            CHECK(std::abs(pairing(nonlinear_term(u, v), v)) <= 1e-12 * scale);
            CHECK(std::abs(pairing(nonlinear_term(u, v), w) +
                           pairing(nonlinear_term(u, w), v)) <= 1e-12 * scale);

            SpectralField d = u - v;
            CHECK(std::abs(pairing(nonlinear_term(u, u) - nonlinear_term(v, v), d) +
                           pairing(nonlinear_term(d, d), v)) <= 1e-12 * scale);

            CHECK(std::abs(inner_w(nonlinear_term(u, u), u)) <=
                  1e-12 * std::max(1.0, std::pow(norm(u, Space::W), 3)));
        }
    }
}

TEST_CASE("weak-norm bounds are finite and scale-invariant") {
    // |Bhat(u, v)|_{Wstar} <= C |u|_W |v|_V and the self-interaction bound.
    double worst_pair = 0.0, worst_self = 0.0;
    for (int s = 0; s < 40; ++s) {
        SpectralField u = random_real_field(6, 1.0, 59, 1, std::uint64_t(s));
        SpectralField v = random_real_field(6, 1.0, 59, 2, std::uint64_t(s));
        worst_pair = std::max(worst_pair, norm(nonlinear_term(u, v), Space::Wstar) /
                                              (norm(u, Space::W) * norm(v, Space::V)));
        worst_self = std::max(worst_self, norm(nonlinear_term(u, u), Space::Wstar) /
                                              std::pow(norm(u, Space::V), 2));
    }
    CHECK(worst_pair > 0.0);
    CHECK(worst_pair < 10.0);
    CHECK(worst_self > 0.0);
    CHECK(worst_self < 10.0);
}
