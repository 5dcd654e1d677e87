#include "sgf/operators.hpp"

#include <algorithm>
#include <cmath>

namespace sgf {

double mode_weight(Space s, WaveVector k, double alpha) {
    const double k2 = k.norm2();
    const double h = 1.0 + alpha * k2;
    switch (s) {
        case Space::L2: return 1.0;
        case Space::H1: return k2;
        case Space::V: return h;
        case Space::W: return k2 * h * h;
        case Space::Wstar: return 1.0 / k2;
    }
    return 0.0;
}

double norm(const SpectralField& u, Space s) {
    double acc = 0.0;
    u.for_each([&](WaveVector k, Complex a) {
        if (a != Complex{}) acc += mode_weight(s, k, u.alpha()) * std::norm(a);
    });
    return std::sqrt(acc);
}

double inner(const SpectralField& u, const SpectralField& v, Space s) {
    if (u.alpha() != v.alpha())
        throw std::invalid_argument("inner: alpha mismatch");
    if (u.cutoff() != v.cutoff())
        throw std::invalid_argument("inner: cutoff mismatch");
    double acc = 0.0;
    u.for_each([&](WaveVector k, Complex a) {
        if (a == Complex{}) return;
        Complex b = v.at(k);
        if (b == Complex{}) return;
        acc += mode_weight(s, k, u.alpha()) * (a * std::conj(b)).real();
    });
    return acc;
}

ScalarSpectralField curl(const SpectralField& u) {
    ScalarSpectralField out(u.cutoff());
    u.for_each([&](WaveVector k, Complex a) {
        if (a == Complex{}) return;
        double m = orientation_sign(k) * std::sqrt(k.norm2());
        out.set(k, Complex{0.0, m} * a);
    });
    return out;
}

ScalarSpectralField curl_helmholtz(const SpectralField& u) {
    ScalarSpectralField out(u.cutoff());
    u.for_each([&](WaveVector k, Complex a) {
        if (a == Complex{}) return;
        double m = orientation_sign(k) * std::sqrt(k.norm2()) * (1.0 + u.alpha() * k.norm2());
        out.set(k, Complex{0.0, m} * a);
    });
    return out;
}

SpectralField leray_project(const ScalarSpectralField& vx, const ScalarSpectralField& vy,
                            double alpha) {
    if (vx.cutoff() != vy.cutoff())
        throw std::invalid_argument("leray_project: cutoff mismatch");
    SpectralField out(vx.cutoff(), alpha);
    out.transform([&](WaveVector k, Complex) {
        double dx, dy;
        direction(k, dx, dy);
        return vx.at(k) * dx + vy.at(k) * dy;
    });
    return out;
}

SpectralField apply_stokes(const SpectralField& u) {
    SpectralField out = u;
    out.transform([](WaveVector k, Complex a) { return a * k.norm2(); });
    return out;
}

SpectralField apply_helmholtz(const SpectralField& u) {
    SpectralField out = u;
    const double alpha = u.alpha();
    out.transform([alpha](WaveVector k, Complex a) { return a * (1.0 + alpha * k.norm2()); });
    return out;
}

SpectralField solve_helmholtz(const SpectralField& u) {
    SpectralField out = u;
    const double alpha = u.alpha();
    out.transform([alpha](WaveVector k, Complex a) { return a / (1.0 + alpha * k.norm2()); });
    return out;
}

SpectralField apply_dissipation(const SpectralField& u) {
    // Composed so that the factorization through the Stokes operator and the
    // Helmholtz resolvent holds bit for bit.
    return solve_helmholtz(apply_stokes(u));
}

namespace {

struct ModePair {
    double lambda;
    WaveVector canonical;
};

std::vector<ModePair> pairs_up_to(int box, double alpha) {
    std::vector<ModePair> pairs;
    for (int i = -box; i <= box; ++i)
        for (int j = -box; j <= box; ++j) {
            WaveVector k{i, j};
            if (k.is_zero() || !k.is_canonical()) continue;
            pairs.push_back({mode_eigenvalue(k, alpha), k});
        }
    std::sort(pairs.begin(), pairs.end(), [](const ModePair& a, const ModePair& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.canonical.k1 != b.canonical.k1) return a.canonical.k1 < b.canonical.k1;
        return a.canonical.k2 < b.canonical.k2;
    });
    return pairs;
}

}  // namespace

GalerkinLevel GalerkinLevel::first_modes(int n, double alpha) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("GalerkinLevel: mode count must be even and >= 2");
    if (alpha <= 0.0) throw std::invalid_argument("GalerkinLevel: alpha must be positive");

    // Grow the enumeration box until n/2 canonical pairs fit strictly inside
    // the eigenvalue horizon (modes outside the box must not sort earlier).
    int box = 2;
    std::vector<ModePair> pairs;
    for (;;) {
        pairs = pairs_up_to(box, alpha);
        if (int(pairs.size()) >= n / 2) {
            double edge = mode_eigenvalue({box + 1, 0}, alpha);
            if (pairs[std::size_t(n / 2) - 1].lambda < edge) break;
        }
        box *= 2;
    }

    GalerkinLevel level;
    level.alpha_ = alpha;
    for (int p = 0; p < n / 2; ++p) {
        const auto& mp = pairs[std::size_t(p)];
        level.modes_.push_back(mp.canonical);
        level.modes_.push_back(-mp.canonical);
        level.lambdas_.push_back(mp.lambda);
        level.lambdas_.push_back(mp.lambda);
        level.box_ = std::max({level.box_, std::abs(mp.canonical.k1), std::abs(mp.canonical.k2)});
    }
    level.mask_.assign(std::size_t(2 * level.box_ + 1) * (2 * level.box_ + 1), 0);
    for (WaveVector k : level.modes_)
        level.mask_[std::size_t(k.k1 + level.box_) * (2 * level.box_ + 1) +
                    std::size_t(k.k2 + level.box_)] = 1;
    return level;
}

GalerkinLevel GalerkinLevel::full_box(int cutoff, double alpha) {
    if (cutoff < 1) throw std::invalid_argument("GalerkinLevel: cutoff must be >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("GalerkinLevel: alpha must be positive");
    // The square box is not an eigenvalue prefix for cutoff >= 3, so it is
    // enumerated directly, keeping the same (lambda, pair-lex) ordering.
    GalerkinLevel level;
    level.alpha_ = alpha;
    level.box_ = cutoff;
    for (const ModePair& mp : pairs_up_to(cutoff, alpha)) {
        level.modes_.push_back(mp.canonical);
        level.modes_.push_back(-mp.canonical);
        level.lambdas_.push_back(mp.lambda);
        level.lambdas_.push_back(mp.lambda);
    }
    level.mask_.assign(std::size_t(2 * cutoff + 1) * (2 * cutoff + 1), 1);
    level.mask_[std::size_t(cutoff) * (2 * cutoff + 1) + std::size_t(cutoff)] = 0;
    return level;
}

bool GalerkinLevel::contains(WaveVector k) const {
    if (k.is_zero() || std::abs(k.k1) > box_ || std::abs(k.k2) > box_) return false;
    return mask_[std::size_t(k.k1 + box_) * (2 * box_ + 1) + std::size_t(k.k2 + box_)] != 0;
}

SpectralField project_level(const SpectralField& u, const GalerkinLevel& level) {
    if (u.alpha() != level.alpha())
        throw std::invalid_argument("project_level: alpha mismatch");
    SpectralField out(level.box(), u.alpha());
    for (WaveVector k : level.modes()) {
        Complex a = u.at(k);
        if (a != Complex{}) out.set(k, a);
    }
    return out;
}

}  // namespace sgf
