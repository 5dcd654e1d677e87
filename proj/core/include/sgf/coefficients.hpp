#pragma once

// Coefficient triple (forcing F, diffusion sigma, jump amplitude f) together
// with its declared Lipschitz/growth metadata, the mark space of the jump
// noise, the composite drift, the compensator sum and the local-monotonicity
// weight.  Shipped families carry provable constants so the hypothesis audit
// is a true positive/negative test.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sgf/operators.hpp"
#include "sgf/report.hpp"

namespace sgf {

struct DomainParams {
    double alpha = 1.0;  // second-grade length-squared parameter
    double mu = 1.0;     // viscosity

    void validate() const {
        if (alpha <= 0.0) throw std::invalid_argument("DomainParams: alpha must be positive");
        if (mu <= 0.0) throw std::invalid_argument("DomainParams: mu must be positive");
    }
};

// Finite mark space with strictly positive intensity mass per mark.
struct MarkSpace {
    std::vector<double> weights;  // nu_j, mass per unit time

    int size() const { return int(weights.size()); }
    double total_mass() const;
    void validate() const;
};

// Abstract coefficient triple.  Implementations must be pure (no hidden
// mutable state) so they can be evaluated concurrently.  Returned fields live
// on the box of `u`; forcing modes outside that box are dropped, which only
// tightens the declared growth bounds.
class Coefficients {
  public:
    virtual ~Coefficients() = default;

    virtual SpectralField forcing(const SpectralField& u, double t) const = 0;
    virtual SpectralField diffusion(const SpectralField& u, double t) const = 0;
    virtual SpectralField jump(const SpectralField& u, double t, int mark) const = 0;

    // Declared constants of the Lipschitz and growth conditions.
    virtual double lipschitz_rho(double t) const = 0;  // rho_tilde(t), integrable
    virtual double growth_K(double t) const = 0;       // K(t), square-integrable
    virtual double growth_C() const = 0;               // C

    virtual std::string family() const = 0;
    virtual std::map<std::string, std::string> describe() const = 0;

    double alpha() const { return alpha_; }
    int mark_count() const { return marks_.size(); }
    const MarkSpace& marks() const { return marks_; }

  protected:
    Coefficients(double alpha, MarkSpace marks);
    double alpha_;
    MarkSpace marks_;
};

using CoefficientsPtr = std::shared_ptr<const Coefficients>;

// ---- shipped families ------------------------------------------------------

// F = sigma = f = 0; all constants zero.
CoefficientsPtr make_zero_coefficients(double alpha, MarkSpace marks);

struct ModeAmplitude {
    WaveVector k{1, 0};
    double amplitude = 0.0;  // L2 norm of the real cosine mode
};

// State-independent coefficients: each of F, sigma, f(.,.,z_j) is a fixed
// real mode.  Lipschitz constant is zero; K is derived from the V norms.
CoefficientsPtr make_additive_coefficients(double alpha, MarkSpace marks, ModeAmplitude forcing,
                                           ModeAmplitude diffusion,
                                           std::vector<ModeAmplitude> jumps);

// Additive part plus a bounded linear term kappa * P_{|k| <= M} u in each of
// F, sigma and f; Lipschitz and growth constants are exact by construction.
CoefficientsPtr make_affine_lowpass_coefficients(double alpha, MarkSpace marks,
                                                 ModeAmplitude forcing, ModeAmplitude diffusion,
                                                 std::vector<ModeAmplitude> jumps, double kappa_F,
                                                 double kappa_sigma, double kappa_f,
                                                 double lowpass);

// Wrapper that re-declares the constants of an inner family (used by the
// adversarial self-test of the hypothesis audit).
CoefficientsPtr make_misdeclared(CoefficientsPtr inner, double rho_scale, double K_scale,
                                 double C_scale);

// ---- derived evaluations ---------------------------------------------------

// Drift value together with its three summands; value is their exact sum.
struct DriftEval {
    SpectralField value;
    SpectralField dissipation_part;  // -mu Ahat u
    SpectralField nonlinear_part;    // -Bhat(u, u)
    SpectralField forcing_part;      // resolvent-applied forcing
};

DriftEval eval_drift(const SpectralField& u, double t, const Coefficients& coeffs,
                     const DomainParams& params);

// Resolvent-applied diffusion coefficient.
SpectralField eval_diffusion(const SpectralField& u, double t, const Coefficients& coeffs);

// Resolvent-applied jump amplitude for one mark.
SpectralField eval_jump_coeff(const SpectralField& u, double t, int mark,
                              const Coefficients& coeffs);

// Intensity-weighted sum of jump amplitudes: the drift correction that turns
// raw-jump integration into compensated integration.
SpectralField compensator(const SpectralField& u, double t, const Coefficients& coeffs);

// Local-monotonicity weight 1 + 2 C_B |u|_W + C_A^2 rho_tilde(t).
double monotonicity_weight(const SpectralField& u, double t, const Coefficients& coeffs,
                           double c_nonlinear, double c_resolvent);

// Samples random field pairs and times and audits both Lipschitz displays and
// both growth displays against the declared constants.  Violations are
// reported, never thrown.
VerificationReport check_hypotheses(const Coefficients& coeffs, int cutoff, int samples,
                                    std::uint64_t seed);

}  // namespace sgf
