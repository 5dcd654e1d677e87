#include "sgf/spectral.hpp"

#include <cmath>

namespace sgf {

double mode_eigenvalue(WaveVector k, double alpha) {
    if (k.is_zero()) throw std::invalid_argument("mode_eigenvalue: zero wavevector");
    if (alpha <= 0.0) throw std::invalid_argument("mode_eigenvalue: alpha must be positive");
    double k2 = k.norm2();
    return k2 * (1.0 + alpha * k2);
}

SpectralField::SpectralField(int cutoff, double alpha) : cutoff_(cutoff), alpha_(alpha) {
    if (cutoff < 1) throw std::invalid_argument("SpectralField: cutoff must be >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("SpectralField: alpha must be positive");
    amps_.assign(std::size_t(2 * cutoff + 1) * (2 * cutoff + 1), Complex{});
}

void SpectralField::set(WaveVector k, Complex a) {
    if (k.is_zero()) throw std::invalid_argument("SpectralField::set: mean mode is excluded");
    if (!in_box(k)) throw std::invalid_argument("SpectralField::set: wavevector outside box");
    amps_[index(k)] = a;
}

void SpectralField::add(WaveVector k, Complex a) {
    if (k.is_zero()) throw std::invalid_argument("SpectralField::add: mean mode is excluded");
    if (!in_box(k)) throw std::invalid_argument("SpectralField::add: wavevector outside box");
    amps_[index(k)] += a;
}

SpectralField SpectralField::embedded(int cutoff) const {
    if (cutoff < cutoff_)
        throw std::invalid_argument("SpectralField::embedded: target box is smaller");
    SpectralField out(cutoff, alpha_);
    for_each([&](WaveVector k, Complex a) {
        if (a != Complex{}) out.set(k, a);
    });
    return out;
}

bool SpectralField::is_real(double tol) const {
    bool ok = true;
    for_each([&](WaveVector k, Complex a) {
        if (!k.is_canonical()) return;
        Complex b = at(-k);
        if (std::abs(a - std::conj(b)) > tol * (1.0 + std::abs(a))) ok = false;
    });
    return ok;
}

bool SpectralField::is_finite() const {
    for (const auto& a : amps_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (cutoff_ != o.cutoff_ || alpha_ != o.alpha_)
        throw std::invalid_argument("SpectralField: box/alpha mismatch in +=");
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (cutoff_ != o.cutoff_ || alpha_ != o.alpha_)
        throw std::invalid_argument("SpectralField: box/alpha mismatch in -=");
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& a : amps_) a *= s;
    return *this;
}

ScalarSpectralField::ScalarSpectralField(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 1) throw std::invalid_argument("ScalarSpectralField: cutoff must be >= 1");
    amps_.assign(std::size_t(2 * cutoff + 1) * (2 * cutoff + 1), Complex{});
}

void ScalarSpectralField::set(WaveVector k, Complex a) {
    if (k.is_zero()) throw std::invalid_argument("ScalarSpectralField::set: mean mode excluded");
    if (!in_box(k)) throw std::invalid_argument("ScalarSpectralField::set: outside box");
    amps_[index(k)] = a;
}

double ScalarSpectralField::norm_l2() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

SpectralField unit_real_mode(WaveVector k, int cutoff, double alpha, double amplitude) {
    if (k.is_zero()) throw std::invalid_argument("unit_real_mode: zero wavevector");
    SpectralField u(cutoff, alpha);
    const double a = amplitude / std::sqrt(2.0);
    u.set(k, Complex{a, 0.0});
    u.set(-k, Complex{a, 0.0});
    return u;
}

SpectralField single_mode(WaveVector k, int cutoff, double alpha, Complex amplitude) {
    SpectralField u(cutoff, alpha);
    u.set(k, amplitude);
    return u;
}

}  // namespace sgf
