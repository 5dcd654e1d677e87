// Acceptance suite: one criterion per section, one pass/fail line each.
// Exit code 0 iff every criterion passes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgf/analysis.hpp"
#include "sgf/driver.hpp"
#include "sgf/parallel.hpp"
#include "sgf/sampling.hpp"

using namespace sgf;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
const std::uint64_t kSeed = 20260811;
const int kWorkers = 8;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

CoefficientsPtr additive_family(double alpha) {
    return make_additive_coefficients(alpha, MarkSpace{{1.0, 0.5}}, {{1, 0}, 0.4}, {{0, 1}, 0.3},
                                      {{{1, 0}, 0.25}, {{1, 1}, 0.2}});
}

CoefficientsPtr affine_family(double alpha) {
    return make_affine_lowpass_coefficients(alpha, MarkSpace{{1.0, 0.5}}, {{1, 0}, 0.4},
                                            {{0, 1}, 0.3}, {{{1, 0}, 0.25}, {{1, 1}, 0.2}}, 0.4,
                                            0.3, 0.2, 2.0);
}

// ---- 1: operator identities -------------------------------------------------

void criterion_1() {
    VerificationReport rep = operator_identity_suite(1.0, {8, 16, 32}, 1000, kSeed, kWorkers);
    report(1, "operator-identity suite at cutoffs {8,16,32}", rep.passed(),
           "worst residual " + fmt(rep.metrics.at("worst_residual")) + " <= 1e-12 over 1000 fields");
}

// ---- 2: single-mode decay ---------------------------------------------------

void criterion_2() {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(8, 1.0);
    cfg.coeffs = make_zero_coefficients(1.0, {});
    cfg.horizon = 2.0;
    cfg.dt = 1e-3;
    cfg.scheme = Scheme::exp_euler;
    cfg.initial = single_mode({1, 0}, 1, 1.0, {1.0, 0.0});

    NoisePath noise = sample_noise({2.0, 1e-3}, {}, kSeed, 1);
    const Complex amp = simulate_path(cfg, noise).final_state().at({1, 0});
    const double err = std::abs(amp - std::exp(-1.0));

    SimConfig eu = cfg;
    eu.scheme = Scheme::euler;
    const double e1 =
        std::abs(simulate_path(eu, noise).final_state().at({1, 0}) - std::exp(-1.0));
    eu.dt = 5e-4;
    const double e2 = std::abs(
        simulate_path(eu, refine_noise(noise, 2)).final_state().at({1, 0}) - std::exp(-1.0));
    const double ratio = e1 / e2;

    report(2, "single-mode decay", err <= 1e-9 && ratio >= 1.9,
           "final error " + fmt(err) + " <= 1e-9, Euler halving ratio " + fmt(ratio) + " >= 1.9");
}

// ---- 3: energy-identity residuals -------------------------------------------

void criterion_3() {
    bool ok = true;
    std::string detail;

    // Exactly solvable configuration.
    {
        SimConfig cfg;
        cfg.params = {1.0, 1.0};
        cfg.level = GalerkinLevel::first_modes(8, 1.0);
        cfg.coeffs = make_zero_coefficients(1.0, {});
        cfg.horizon = 1.0;
        cfg.dt = 1e-3;
        cfg.scheme = Scheme::exp_euler;
        cfg.record_every = 1;
        cfg.initial = single_mode({1, 0}, 1, 1.0, {1.0, 0.0});
        NoisePath noise = sample_noise({1.0, 1e-3}, {}, kSeed, 2);
        Trajectory traj = simulate_path(cfg, noise);
        const double r2 = energy_identity_residual_w2(traj, noise, cfg).metrics.at("max_residual");
        const double r4 = energy_identity_residual_w4(traj, noise, cfg).metrics.at("max_residual");
        ok = ok && r2 <= 1e-8 && r4 <= 1e-8;
        detail += "exact case residuals " + fmt(r2) + "/" + fmt(r4) + " <= 1e-8";
    }

    // Order ratios across three halvings with shared refined noise.
    for (bool fourth : {false, true}) {
        SimConfig cfg;
        cfg.params = {1.0, 1.0};
        cfg.level = GalerkinLevel::first_modes(8, 1.0);
        cfg.coeffs = additive_family(1.0);
        cfg.horizon = 0.5;
        cfg.dt = 0.02;
        cfg.scheme = Scheme::euler;
        cfg.record_every = 1;
        cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);
        NoisePath noise = sample_noise({0.5, 0.02}, cfg.coeffs->marks(), kSeed, 3);
        double prev = 0.0;
        double worst_ratio = 1e9;
        for (int halving = 0; halving <= 3; ++halving) {
            Trajectory traj = simulate_path(cfg, noise);
            VerificationReport rep = fourth ? energy_identity_residual_w4(traj, noise, cfg)
                                            : energy_identity_residual_w2(traj, noise, cfg);
            const double res = rep.metrics.at("max_residual");
            if (halving > 0) worst_ratio = std::min(worst_ratio, prev / res);
            prev = res;
            if (halving < 3) {
                noise = refine_noise(noise, 2);
                cfg.dt = noise.dt();
            }
        }
        ok = ok && worst_ratio >= 1.8;
        detail += std::string(fourth ? ", fourth" : ", second") + "-power ratio " +
                  fmt(worst_ratio) + " >= 1.8";
    }
    report(3, "energy-identity residuals", ok, detail);
}

// ---- 4: hypothesis audit ----------------------------------------------------

void criterion_4() {
    const int samples = 1000;
    auto zero = make_zero_coefficients(1.0, MarkSpace{{1.0, 0.5}});
    auto additive = additive_family(1.0);
    auto affine = affine_family(1.0);

    const bool p0 = check_hypotheses(*zero, 8, samples, kSeed).passed();
    const bool p1 = check_hypotheses(*additive, 8, samples, kSeed).passed();
    const bool p2 = check_hypotheses(*affine, 8, samples, kSeed).passed();

    VerificationReport bad =
        check_hypotheses(*make_misdeclared(affine, 0.5, 1.0, 1.0), 8, samples, kSeed);
    const double ratio = bad.metrics.at("worst_ratio_lipschitz");
    const bool caught = !bad.passed() && ratio > 1.0;

    report(4, "hypothesis audit", p0 && p1 && p2 && caught,
           std::string("families pass: ") + (p0 && p1 && p2 ? "yes" : "no") +
               ", mis-declared constant flagged with ratio " + fmt(ratio) + " > 1");
}

// ---- 5: fourth-moment bound across levels -----------------------------------

void criterion_5() {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(8, 1.0);
    cfg.coeffs = additive_family(1.0);
    cfg.horizon = 1.0;
    cfg.dt = 2e-3;
    cfg.scheme = Scheme::euler;
    SpectralField xi = unit_real_mode({1, 0}, 1, 1.0, 1.0);
    xi *= 1.0 / norm(xi, Space::W);  // unit strong norm
    cfg.initial = xi;

    std::vector<GalerkinLevel> levels{
        GalerkinLevel::first_modes(8, 1.0), GalerkinLevel::first_modes(16, 1.0),
        GalerkinLevel::first_modes(32, 1.0), GalerkinLevel::first_modes(64, 1.0)};
    VerificationReport rep = moment_bound_study(cfg, levels, 1000, kSeed, kWorkers);
    report(5, "fourth-moment bound across levels {8,16,32,64}", rep.passed(),
           "max/min " + fmt(rep.metrics.at("uniformity_ratio")) + " <= 2 over 1000 paths, " +
               "bound constant " + fmt(rep.metrics.at("bound_constant")));
}

// ---- 6: uniqueness / contraction --------------------------------------------

void criterion_6() {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(8, 1.0);
    cfg.coeffs = affine_family(1.0);
    cfg.horizon = 0.5;
    cfg.dt = 2e-3;
    cfg.scheme = Scheme::euler;
    cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);

    MonotonicityConstants constants = measure_monotonicity_constants(1.0, 8, 256, kSeed);

    VerificationReport same = contraction_experiment(cfg, cfg, 32, kSeed, constants, kWorkers);
    SimConfig other = cfg;
    other.initial = cfg.initial + unit_real_mode({1, 1}, 1, 1.0, 0.5);
    VerificationReport diff = contraction_experiment(cfg, other, 1000, kSeed, constants, kWorkers);

    report(6, "twin-run uniqueness and weighted contraction", same.passed() && diff.passed(),
           "identical runs max diff " + fmt(same.metrics.at("max_difference")) +
               ", weighted excess over bound " + fmt(diff.metrics.at("worst_excess_over_bound")) +
               " <= 0 across 1000 paths");
}

// ---- 7: cross-level convergence ----------------------------------------------

void criterion_7() {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    std::vector<GalerkinLevel> levels{
        GalerkinLevel::first_modes(8, 1.0), GalerkinLevel::first_modes(16, 1.0),
        GalerkinLevel::first_modes(32, 1.0), GalerkinLevel::first_modes(64, 1.0)};
    cfg.level = levels.back();
    cfg.coeffs = additive_family(1.0);
    cfg.horizon = 0.5;
    cfg.dt = 2e-3;
    cfg.scheme = Scheme::euler;
    // Amplitudes proportional to e^{-1.5 |k|}, random phases.
    cfg.initial = smooth_phase_field(levels.back(), kSeed, 7, 0, 1.5);

    VerificationReport rep = galerkin_convergence(cfg, levels, 100, kSeed, kWorkers);
    std::string rates;
    for (const auto& [key, value] : rep.metrics)
        if (key.rfind("rate_", 0) == 0) rates += " " + fmt(value);
    report(7, "cross-level strong convergence", rep.passed(),
           "errors decrease monotonically over three doublings; empirical rates" + rates);
}

// ---- 8: determinism and replay -----------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void criterion_8() {
    bool ok = true;
    std::string detail;

    // Same seed, same outputs, byte for byte, via the batch driver.
    {
        const fs::path base = fs::temp_directory_path() / "sgf_acceptance_det";
        fs::remove_all(base);
        RunConfig rc;
        rc.cutoff = 4;
        rc.horizon = 0.1;
        rc.dt = 1e-3;
        rc.family = "additive";
        rc.mark_weights = {1.0};
        rc.jump_k = {{1, 1}};
        rc.jump_amp = {0.2};
        rc.forcing_amp = 0.3;
        rc.diffusion_amp = 0.2;
        rc.initial_kind = "mode";
        rc.seed = kSeed;
        rc.out_dir = (base / "a").string();
        int c1 = run_subcommand("simulate", rc);
        rc.out_dir = (base / "b").string();
        int c2 = run_subcommand("simulate", rc);
        const bool same_bytes = slurp(base / "a" / "trajectory.csv") ==
                                slurp(base / "b" / "trajectory.csv");
        ok = ok && c1 == 0 && c2 == 0 && same_bytes;
        detail += std::string("driver outputs byte-identical: ") + (same_bytes ? "yes" : "no");
        fs::remove_all(base);
    }

    // Checkpoint split-restore equals the uninterrupted run.
    {
        SimConfig cfg;
        cfg.params = {1.0, 1.0};
        cfg.level = GalerkinLevel::first_modes(8, 1.0);
        cfg.coeffs = additive_family(1.0);
        cfg.horizon = 0.4;
        cfg.dt = 2e-3;
        cfg.scheme = Scheme::euler;
        cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);
        NoisePath noise = sample_noise({0.4, 2e-3}, cfg.coeffs->marks(), kSeed, 4);
        VerificationReport rt = checkpoint_roundtrip(cfg, noise, 0.2);
        ok = ok && rt.passed();
        detail += std::string(", checkpoint roundtrip: ") + (rt.passed() ? "exact" : "DIFFERS");
    }

    // Worker-count independence of a Monte Carlo report.
    {
        SimConfig cfg;
        cfg.params = {1.0, 1.0};
        cfg.level = GalerkinLevel::first_modes(8, 1.0);
        cfg.coeffs = additive_family(1.0);
        cfg.horizon = 0.25;
        cfg.dt = 5e-3;
        cfg.scheme = Scheme::euler;
        cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);
        std::vector<GalerkinLevel> levels{GalerkinLevel::first_modes(8, 1.0),
                                          GalerkinLevel::first_modes(16, 1.0)};
        const std::string a = moment_bound_study(cfg, levels, 64, kSeed, 1).to_json();
        const std::string b = moment_bound_study(cfg, levels, 64, kSeed, 7).to_json();
        ok = ok && a == b;
        detail += std::string(", worker-count independent: ") + (a == b ? "yes" : "no");
    }
    report(8, "determinism and replay", ok, detail);
}

// ---- 9: compensated-noise statistics -----------------------------------------

void criterion_9() {
    MarkSpace marks{{1.0, 1.0}};
    NoisePath proto = sample_noise({1.0, 0.1}, marks, kSeed, 5);
    VerificationReport rep = compensated_integral_check(proto, marks, 100000, {1.0, -1.0});
    report(9, "compensated-noise statistics", rep.passed(),
           "mean " + fmt(rep.metrics.at("mean")) + " within 3 se " +
               fmt(3.0 * rep.metrics.at("stderr")) + ", jump-count mean " +
               fmt(rep.metrics.at("jump_count_mean")) + " vs " +
               fmt(rep.metrics.at("jump_count_target")));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
