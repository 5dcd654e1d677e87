#include "sgf/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgf/nonlinearity.hpp"
#include "sgf/sampling.hpp"

namespace sgf {

double MarkSpace::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void MarkSpace::validate() const {
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("MarkSpace: weights must be positive");
    if (!weights.empty() && !(total_mass() > 0.0))
        throw std::invalid_argument("MarkSpace: total mass must be positive");
}

Coefficients::Coefficients(double alpha, MarkSpace marks)
    : alpha_(alpha), marks_(std::move(marks)) {
    if (alpha_ <= 0.0) throw std::invalid_argument("Coefficients: alpha must be positive");
    marks_.validate();
}

namespace {

std::string mode_str(const ModeAmplitude& m) {
    std::ostringstream os;
    os << "(" << m.k.k1 << "," << m.k.k2 << ")x" << m.amplitude;
    return os.str();
}

// Builds the fixed real mode on the box of u; outside-box modes are dropped.
SpectralField fixed_mode_field(const ModeAmplitude& m, const SpectralField& u) {
    SpectralField out(u.cutoff(), u.alpha());
    if (m.amplitude != 0.0 && !m.k.is_zero() && out.in_box(m.k)) {
        const double a = m.amplitude / std::sqrt(2.0);
        out.set(m.k, Complex{a, 0.0});
        out.add(-m.k, Complex{a, 0.0});
    }
    return out;
}

double mode_v_norm2(const ModeAmplitude& m, double alpha) {
    if (m.amplitude == 0.0 || m.k.is_zero()) return 0.0;
    return m.amplitude * m.amplitude * (1.0 + alpha * m.k.norm2());
}

class ZeroCoefficients final : public Coefficients {
  public:
    ZeroCoefficients(double alpha, MarkSpace marks) : Coefficients(alpha, std::move(marks)) {}

    SpectralField forcing(const SpectralField& u, double) const override {
        return SpectralField(u.cutoff(), u.alpha());
    }
    SpectralField diffusion(const SpectralField& u, double) const override {
        return SpectralField(u.cutoff(), u.alpha());
    }
    SpectralField jump(const SpectralField& u, double, int mark) const override {
        if (mark < 0 || mark >= mark_count())
            throw std::invalid_argument("jump: unknown mark");
        return SpectralField(u.cutoff(), u.alpha());
    }
    double lipschitz_rho(double) const override { return 0.0; }
    double growth_K(double) const override { return 0.0; }
    double growth_C() const override { return 0.0; }
    std::string family() const override { return "zero"; }
    std::map<std::string, std::string> describe() const override {
        return {{"family", "zero"}};
    }
};

class AdditiveCoefficients : public Coefficients {
  public:
    AdditiveCoefficients(double alpha, MarkSpace marks, ModeAmplitude forcing,
                         ModeAmplitude diffusion, std::vector<ModeAmplitude> jumps)
        : Coefficients(alpha, std::move(marks)),
          forcing_(forcing),
          diffusion_(diffusion),
          jumps_(std::move(jumps)) {
        if (int(jumps_.size()) != mark_count())
            throw std::invalid_argument("additive family: one jump mode per mark required");
        double k2 = mode_v_norm2(forcing_, alpha_) + mode_v_norm2(diffusion_, alpha_);
        double k4 = 0.0;
        for (int j = 0; j < mark_count(); ++j) {
            const double nj = marks_.weights[std::size_t(j)];
            const double v2 = mode_v_norm2(jumps_[std::size_t(j)], alpha_);
            k2 += nj * v2;
            k4 += nj * v2 * v2;
        }
        // One K serves both growth displays.
        declared_K_ = std::max(k2, std::sqrt(k4));
    }

    SpectralField forcing(const SpectralField& u, double) const override {
        return fixed_mode_field(forcing_, u);
    }
    SpectralField diffusion(const SpectralField& u, double) const override {
        return fixed_mode_field(diffusion_, u);
    }
    SpectralField jump(const SpectralField& u, double, int mark) const override {
        if (mark < 0 || mark >= mark_count())
            throw std::invalid_argument("jump: unknown mark");
        return fixed_mode_field(jumps_[std::size_t(mark)], u);
    }
    double lipschitz_rho(double) const override { return 0.0; }
    double growth_K(double) const override { return declared_K_; }
    double growth_C() const override { return 0.0; }
    std::string family() const override { return "additive"; }
    std::map<std::string, std::string> describe() const override {
        std::map<std::string, std::string> d{{"family", family()},
                                             {"forcing", mode_str(forcing_)},
                                             {"diffusion", mode_str(diffusion_)}};
        for (int j = 0; j < int(jumps_.size()); ++j)
            d["jump_" + std::to_string(j)] = mode_str(jumps_[std::size_t(j)]);
        return d;
    }

  protected:
    ModeAmplitude forcing_, diffusion_;
    std::vector<ModeAmplitude> jumps_;
    double declared_K_ = 0.0;
};

class AffineLowpassCoefficients final : public AdditiveCoefficients {
  public:
    AffineLowpassCoefficients(double alpha, MarkSpace marks, ModeAmplitude forcing,
                              ModeAmplitude diffusion, std::vector<ModeAmplitude> jumps,
                              double kappa_F, double kappa_sigma, double kappa_f, double lowpass)
        : AdditiveCoefficients(alpha, std::move(marks), forcing, diffusion, std::move(jumps)),
          kappa_F_(kappa_F),
          kappa_sigma_(kappa_sigma),
          kappa_f_(kappa_f),
          lowpass_(lowpass) {
        if (lowpass_ < 1.0)
            throw std::invalid_argument("affine family: lowpass cutoff must be >= 1");
        const double mass = marks_.total_mass();
        rho_ = kappa_F_ * kappa_F_ + kappa_sigma_ * kappa_sigma_ + mass * kappa_f_ * kappa_f_;
        // (a+b)^2 <= 2a^2 + 2b^2 and (a+b)^4 <= 8a^4 + 8b^4 on the additive base.
        double k2 = mode_v_norm2(forcing_, alpha_) + mode_v_norm2(diffusion_, alpha_);
        double k4 = 0.0;
        for (int j = 0; j < mark_count(); ++j) {
            const double nj = marks_.weights[std::size_t(j)];
            const double v2 = mode_v_norm2(jumps_[std::size_t(j)], alpha_);
            k2 += nj * v2;
            k4 += nj * v2 * v2;
        }
        declared_K_ = std::max(2.0 * k2, std::sqrt(8.0 * k4));
        declared_C_ = std::max(2.0 * rho_, 8.0 * mass * std::pow(kappa_f_, 4));
    }

    SpectralField forcing(const SpectralField& u, double t) const override {
        SpectralField out = AdditiveCoefficients::forcing(u, t);
        add_lowpass(out, u, kappa_F_);
        return out;
    }
    SpectralField diffusion(const SpectralField& u, double t) const override {
        SpectralField out = AdditiveCoefficients::diffusion(u, t);
        add_lowpass(out, u, kappa_sigma_);
        return out;
    }
    SpectralField jump(const SpectralField& u, double t, int mark) const override {
        SpectralField out = AdditiveCoefficients::jump(u, t, mark);
        add_lowpass(out, u, kappa_f_);
        return out;
    }
    double lipschitz_rho(double) const override { return rho_; }
    double growth_K(double) const override { return declared_K_; }
    double growth_C() const override { return declared_C_; }
    std::string family() const override { return "affine_lowpass"; }
    std::map<std::string, std::string> describe() const override {
        auto d = AdditiveCoefficients::describe();
        d["family"] = family();
        d["kappa_F"] = std::to_string(kappa_F_);
        d["kappa_sigma"] = std::to_string(kappa_sigma_);
        d["kappa_f"] = std::to_string(kappa_f_);
        d["lowpass"] = std::to_string(lowpass_);
        return d;
    }

  private:
    void add_lowpass(SpectralField& out, const SpectralField& u, double kappa) const {
        if (kappa == 0.0) return;
        const double m2 = lowpass_ * lowpass_;
        u.for_each([&](WaveVector k, Complex a) {
            if (a != Complex{} && k.norm2() <= m2) out.add(k, kappa * a);
        });
    }

    double kappa_F_, kappa_sigma_, kappa_f_, lowpass_;
    double rho_ = 0.0, declared_C_ = 0.0;
};

class MisdeclaredCoefficients final : public Coefficients {
  public:
    MisdeclaredCoefficients(CoefficientsPtr inner, double rho_scale, double K_scale,
                            double C_scale)
        : Coefficients(inner->alpha(), inner->marks()),
          inner_(std::move(inner)),
          rho_scale_(rho_scale),
          K_scale_(K_scale),
          C_scale_(C_scale) {}

    SpectralField forcing(const SpectralField& u, double t) const override {
        return inner_->forcing(u, t);
    }
    SpectralField diffusion(const SpectralField& u, double t) const override {
        return inner_->diffusion(u, t);
    }
    SpectralField jump(const SpectralField& u, double t, int mark) const override {
        return inner_->jump(u, t, mark);
    }
    double lipschitz_rho(double t) const override { return rho_scale_ * inner_->lipschitz_rho(t); }
    double growth_K(double t) const override { return K_scale_ * inner_->growth_K(t); }
    double growth_C() const override { return C_scale_ * inner_->growth_C(); }
    std::string family() const override { return inner_->family() + "_misdeclared"; }
    std::map<std::string, std::string> describe() const override {
        auto d = inner_->describe();
        d["misdeclared"] = "true";
        return d;
    }

  private:
    CoefficientsPtr inner_;
    double rho_scale_, K_scale_, C_scale_;
};

}  // namespace

CoefficientsPtr make_zero_coefficients(double alpha, MarkSpace marks) {
    return std::make_shared<ZeroCoefficients>(alpha, std::move(marks));
}

CoefficientsPtr make_additive_coefficients(double alpha, MarkSpace marks, ModeAmplitude forcing,
                                           ModeAmplitude diffusion,
                                           std::vector<ModeAmplitude> jumps) {
    return std::make_shared<AdditiveCoefficients>(alpha, std::move(marks), forcing, diffusion,
                                                  std::move(jumps));
}

CoefficientsPtr make_affine_lowpass_coefficients(double alpha, MarkSpace marks,
                                                 ModeAmplitude forcing, ModeAmplitude diffusion,
                                                 std::vector<ModeAmplitude> jumps, double kappa_F,
                                                 double kappa_sigma, double kappa_f,
                                                 double lowpass) {
    return std::make_shared<AffineLowpassCoefficients>(alpha, std::move(marks), forcing, diffusion,
                                                       std::move(jumps), kappa_F, kappa_sigma,
                                                       kappa_f, lowpass);
}

CoefficientsPtr make_misdeclared(CoefficientsPtr inner, double rho_scale, double K_scale,
                                 double C_scale) {
    return std::make_shared<MisdeclaredCoefficients>(std::move(inner), rho_scale, K_scale,
                                                     C_scale);
}

DriftEval eval_drift(const SpectralField& u, double t, const Coefficients& coeffs,
                     const DomainParams& params) {
    params.validate();
    if (u.alpha() != params.alpha)
        throw std::invalid_argument("eval_drift: field alpha differs from domain alpha");
    DriftEval out;
    out.dissipation_part = -params.mu * apply_dissipation(u);
    out.nonlinear_part = -1.0 * nonlinear_term(u, u);
    out.forcing_part = solve_helmholtz(coeffs.forcing(u, t));
    out.value = out.dissipation_part + out.nonlinear_part + out.forcing_part;
    return out;
}

SpectralField eval_diffusion(const SpectralField& u, double t, const Coefficients& coeffs) {
    return solve_helmholtz(coeffs.diffusion(u, t));
}

SpectralField eval_jump_coeff(const SpectralField& u, double t, int mark,
                              const Coefficients& coeffs) {
    if (mark < 0 || mark >= coeffs.mark_count())
        throw std::invalid_argument("eval_jump_coeff: unknown mark");
    return solve_helmholtz(coeffs.jump(u, t, mark));
}

SpectralField compensator(const SpectralField& u, double t, const Coefficients& coeffs) {
    SpectralField acc(u.cutoff(), u.alpha());
    for (int j = 0; j < coeffs.mark_count(); ++j) {
        SpectralField fj = eval_jump_coeff(u, t, j, coeffs);
        fj *= coeffs.marks().weights[std::size_t(j)];
        acc += fj;
    }
    return acc;
}

double monotonicity_weight(const SpectralField& u, double t, const Coefficients& coeffs,
                           double c_nonlinear, double c_resolvent) {
    return 1.0 + 2.0 * c_nonlinear * norm(u, Space::W) +
           c_resolvent * c_resolvent * coeffs.lipschitz_rho(t);
}

namespace {

// ratio of lhs against rhs with a rounding guard; rhs == 0 demands lhs ~ 0.
double violation_ratio(double lhs, double rhs, double scale) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs <= 1e-12 * (1.0 + scale) ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

VerificationReport check_hypotheses(const Coefficients& coeffs, int cutoff, int samples,
                                    std::uint64_t seed) {
    VerificationReport rep;
    rep.name = "hypothesis_audit_" + coeffs.family();
    rep.provenance =
        "Lipschitz and growth conditions of the coefficient triple against declared constants";
    rep.note =
        "constants are audited on sampled finite-dimensional inputs, not on the full space";
    rep.seed = seed;

    const double alpha = coeffs.alpha();
    double worst_s1 = 0.0, worst_s2a = 0.0, worst_s2b = 0.0;
    long violations = 0;

    auto audit = [&](const SpectralField& u1, const SpectralField& u2, double t) {
        const auto& nu = coeffs.marks().weights;

        // Lipschitz display on the pair.
        SpectralField dF = coeffs.forcing(u1, t) - coeffs.forcing(u2, t);
        SpectralField dS = coeffs.diffusion(u1, t) - coeffs.diffusion(u2, t);
        double lhs1 = std::pow(norm(dF, Space::V), 2) + std::pow(norm(dS, Space::V), 2);
        for (int j = 0; j < coeffs.mark_count(); ++j) {
            SpectralField dj = coeffs.jump(u1, t, j) - coeffs.jump(u2, t, j);
            lhs1 += nu[std::size_t(j)] * std::pow(norm(dj, Space::V), 2);
        }
        const double du2 = std::pow(norm(u1 - u2, Space::V), 2);
        worst_s1 = std::max(worst_s1, violation_ratio(lhs1, coeffs.lipschitz_rho(t) * du2, du2));

        // Growth displays on u1.
        const double uv2 = std::pow(norm(u1, Space::V), 2);
        double lhs2 = std::pow(norm(coeffs.forcing(u1, t), Space::V), 2) +
                      std::pow(norm(coeffs.diffusion(u1, t), Space::V), 2);
        double lhs4 = 0.0;
        for (int j = 0; j < coeffs.mark_count(); ++j) {
            const double vj2 = std::pow(norm(coeffs.jump(u1, t, j), Space::V), 2);
            lhs2 += nu[std::size_t(j)] * vj2;
            lhs4 += nu[std::size_t(j)] * vj2 * vj2;
        }
        const double K = coeffs.growth_K(t);
        const double C = coeffs.growth_C();
        worst_s2a = std::max(worst_s2a, violation_ratio(lhs2, K + C * uv2, uv2));
        worst_s2b = std::max(worst_s2b, violation_ratio(lhs4, K * K + C * uv2 * uv2, uv2 * uv2));
    };

    // Structured samples first: mode pairs against zero detect a mis-declared
    // Lipschitz constant deterministically.
    const SpectralField zero(cutoff, alpha);
    long used = 0;
    for (int i = -cutoff; i <= cutoff; ++i)
        for (int j = -cutoff; j <= cutoff; ++j) {
            WaveVector k{i, j};
            if (k.is_zero() || !k.is_canonical()) continue;
            audit(unit_real_mode(k, cutoff, alpha), zero, 0.5);
            ++used;
        }
    audit(zero, zero, 0.0);
    ++used;
    for (int s = 0; s < samples; ++s) {
        const double t = rng::uniform01(rng::derive(seed, 0, rng::kSample, std::uint64_t(s), 99));
        audit(random_real_field(cutoff, alpha, seed, 1, std::uint64_t(s)),
              random_real_field(cutoff, alpha, seed, 2, std::uint64_t(s)), t);
        ++used;
    }

    const double guard = 1.0 + 1e-9;
    if (worst_s1 > guard) ++violations;
    if (worst_s2a > guard) ++violations;
    if (worst_s2b > guard) ++violations;

    rep.samples = used;
    rep.metrics["worst_ratio_lipschitz"] = worst_s1;
    rep.metrics["worst_ratio_growth_second"] = worst_s2a;
    rep.metrics["worst_ratio_growth_fourth"] = worst_s2b;
    rep.metrics["violated_displays"] = double(violations);
    rep.tolerances["max_ratio"] = guard;
    rep.status = violations == 0 ? VerificationReport::Status::pass
                                 : VerificationReport::Status::fail;
    return rep;
}

}  // namespace sgf
