#pragma once

// Divergence-free Fourier representation on the 2-pi periodic torus.
//
// A velocity field is stored as one complex amplitude per wavevector k,
// multiplying the unit divergence-free mode d_k * exp(i k.x).  The direction
// vector d_k = kperp/|k| is shared between k and -k (taken from the canonical
// representative of the +-k pair), so real fields satisfy exactly
// a_{-k} = conj(a_k).  The mean mode k = (0,0) is excluded throughout.

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sgf {

using Complex = std::complex<double>;

struct WaveVector {
    int k1 = 0;
    int k2 = 0;

    friend auto operator<=>(const WaveVector&, const WaveVector&) = default;

    bool is_zero() const { return k1 == 0 && k2 == 0; }
    double norm2() const { return double(k1) * k1 + double(k2) * k2; }
    WaveVector operator-() const { return {-k1, -k2}; }
    WaveVector operator+(WaveVector o) const { return {k1 + o.k1, k2 + o.k2}; }

    // Canonical representative of the +-k pair: k1 > 0, or k1 == 0 and k2 > 0.
    bool is_canonical() const { return k1 > 0 || (k1 == 0 && k2 > 0); }
};

// Orientation sign of the shared direction vector: +1 on the canonical
// half-plane, -1 on the other.  curl(d_k e^{ik.x}) = i * sign * |k| * e^{ik.x}.
inline int orientation_sign(WaveVector k) { return k.is_canonical() ? 1 : -1; }

// Shared unit direction d_k = kperp/|k| of the canonical representative.
inline void direction(WaveVector k, double& dx, double& dy) {
    WaveVector c = k.is_canonical() ? k : -k;
    double inv = 1.0 / std::sqrt(c.norm2());
    dx = -c.k2 * inv;
    dy = c.k1 * inv;
}

// Eigenvalue lambda_k = |k|^2 (1 + alpha |k|^2) relating the strong and weak
// inner products on the torus basis.
double mode_eigenvalue(WaveVector k, double alpha);

class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(int cutoff, double alpha);

    int cutoff() const { return cutoff_; }
    double alpha() const { return alpha_; }
    bool in_box(WaveVector k) const {
        return std::abs(k.k1) <= cutoff_ && std::abs(k.k2) <= cutoff_;
    }

    Complex at(WaveVector k) const {
        if (k.is_zero() || !in_box(k)) return {};
        return amps_[index(k)];
    }
    void set(WaveVector k, Complex a);
    void add(WaveVector k, Complex a);

    // Visits every nonzero-wavevector slot of the box in a fixed order
    // (k1 major, k2 minor), including zero amplitudes.
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (int i = -cutoff_; i <= cutoff_; ++i)
            for (int j = -cutoff_; j <= cutoff_; ++j) {
                if (i == 0 && j == 0) continue;
                fn(WaveVector{i, j}, amps_[index({i, j})]);
            }
    }
    template <class Fn>
    void transform(Fn&& fn) {
        for (int i = -cutoff_; i <= cutoff_; ++i)
            for (int j = -cutoff_; j <= cutoff_; ++j) {
                if (i == 0 && j == 0) continue;
                auto& a = amps_[index({i, j})];
                a = fn(WaveVector{i, j}, a);
            }
    }

    // Same field re-hosted on a larger (or equal) box.
    SpectralField embedded(int cutoff) const;

    bool is_real(double tol = 1e-12) const;
    bool is_finite() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    bool operator==(const SpectralField& o) const = default;

  private:
    std::size_t index(WaveVector k) const {
        return std::size_t(k.k1 + cutoff_) * (2 * cutoff_ + 1) + std::size_t(k.k2 + cutoff_);
    }

    int cutoff_ = 0;
    double alpha_ = 1.0;
    std::vector<Complex> amps_;
};

// Scalar field (curl output and friends), same box layout.
class ScalarSpectralField {
  public:
    ScalarSpectralField() = default;
    explicit ScalarSpectralField(int cutoff);

    int cutoff() const { return cutoff_; }
    bool in_box(WaveVector k) const {
        return std::abs(k.k1) <= cutoff_ && std::abs(k.k2) <= cutoff_;
    }
    Complex at(WaveVector k) const {
        if (k.is_zero() || !in_box(k)) return {};
        return amps_[index(k)];
    }
    void set(WaveVector k, Complex a);

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (int i = -cutoff_; i <= cutoff_; ++i)
            for (int j = -cutoff_; j <= cutoff_; ++j) {
                if (i == 0 && j == 0) continue;
                fn(WaveVector{i, j}, amps_[index({i, j})]);
            }
    }

    double norm_l2() const;

    bool operator==(const ScalarSpectralField& o) const = default;

  private:
    std::size_t index(WaveVector k) const {
        return std::size_t(k.k1 + cutoff_) * (2 * cutoff_ + 1) + std::size_t(k.k2 + cutoff_);
    }

    int cutoff_ = 0;
    std::vector<Complex> amps_;
};

// Real cosine-type mode of unit L2 norm: amplitude 1/sqrt(2) at +-k.
SpectralField unit_real_mode(WaveVector k, int cutoff, double alpha, double amplitude = 1.0);

// Field with a single stored amplitude (no conjugate partner); used by the
// exactly-solvable single-mode oracles.
SpectralField single_mode(WaveVector k, int cutoff, double alpha, Complex amplitude);

}  // namespace sgf
