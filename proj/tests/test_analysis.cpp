#include <doctest.h>

#include <cmath>

#include "sgf/analysis.hpp"
#include "sgf/sampling.hpp"

using namespace sgf;

namespace {

SimConfig residual_config(Scheme scheme, double horizon, double dt, bool with_noise,
                          bool with_jumps) {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(8, 1.0);
    MarkSpace marks = with_jumps ? MarkSpace{{2.0}} : MarkSpace{};
    std::vector<ModeAmplitude> jumps;
    if (with_jumps) jumps.push_back({{1, 1}, 0.2});
    cfg.coeffs = make_additive_coefficients(1.0, marks, {{1, 0}, with_noise ? 0.4 : 0.0},
                                            {{0, 1}, with_noise ? 0.3 : 0.0}, jumps);
    cfg.horizon = horizon;
    cfg.dt = dt;
    cfg.scheme = scheme;
    cfg.record_every = 1;
    cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);
    return cfg;
}

}  // namespace

TEST_CASE("energy residual: exactly solvable single-mode configuration") {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(8, 1.0);
    cfg.coeffs = make_zero_coefficients(1.0, {});
    cfg.horizon = 1.0;
    cfg.dt = 1e-3;
    cfg.scheme = Scheme::exp_euler;
    cfg.record_every = 1;
    cfg.initial = single_mode({1, 0}, 1, 1.0, {1.0, 0.0});

    NoisePath noise = sample_noise({1.0, 1e-3}, {}, 3, 1);
    Trajectory traj = simulate_path(cfg, noise);
    VerificationReport w2 = energy_identity_residual_w2(traj, noise, cfg);
    CHECK(w2.metrics.at("max_residual") <= 1e-9);
    VerificationReport w4 = energy_identity_residual_w4(traj, noise, cfg);
    CHECK(w4.metrics.at("max_residual") <= 1e-8);
}

TEST_CASE("energy residual: zero trajectory is identically balanced") {
    SimConfig cfg = residual_config(Scheme::exp_euler, 0.2, 1e-2, false, false);
    cfg.initial = SpectralField(1, 1.0);
    NoisePath noise = sample_noise({0.2, 1e-2}, {}, 3, 1);
    Trajectory traj = simulate_path(cfg, noise);
    CHECK(energy_identity_residual_w2(traj, noise, cfg).metrics.at("max_residual") == 0.0);
    CHECK(energy_identity_residual_w4(traj, noise, cfg).metrics.at("max_residual") == 0.0);
}

TEST_CASE("energy residual: first order in the step under shared refined noise") {
    for (bool fourth : {false, true}) {
        double prev = 0.0;
        NoisePath noise = sample_noise({0.5, 0.02}, MarkSpace{{2.0}}, 19, 1);
        SimConfig cfg = residual_config(Scheme::euler, 0.5, 0.02, true, true);
        for (int halving = 0; halving < 3; ++halving) {
            Trajectory traj = simulate_path(cfg, noise);
            VerificationReport rep = fourth ? energy_identity_residual_w4(traj, noise, cfg)
                                            : energy_identity_residual_w2(traj, noise, cfg);
            const double res = rep.metrics.at("max_residual");
            if (halving > 0) CHECK(prev / res >= 1.8);
            // Jump bookkeeping cancels exactly regardless of the step.
            CHECK(rep.metrics.at("jump_bookkeeping_gap") <=
                  1e-12 * std::max(1.0, rep.metrics.at("scale")));
            prev = res;
            noise = refine_noise(noise, 2);
            cfg.dt = noise.dt();
        }
    }
}

TEST_CASE("energy residual: thinned trajectories are rejected") {
    SimConfig cfg = residual_config(Scheme::euler, 0.1, 1e-2, true, false);
    cfg.record_every = 4;
    NoisePath noise = sample_noise({0.1, 1e-2}, {}, 3, 1);
    Trajectory traj = simulate_path(cfg, noise);
    CHECK_THROWS_AS(static_cast<void>(energy_identity_residual_w2(traj, noise, cfg)),
                    std::invalid_argument);
}

TEST_CASE("moment bound study: pure decay attains the supremum at time zero") {
    SimConfig cfg = residual_config(Scheme::exp_euler, 0.25, 5e-3, false, false);
    cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);
    std::vector<GalerkinLevel> levels{GalerkinLevel::first_modes(8, 1.0),
                                      GalerkinLevel::first_modes(16, 1.0)};
    VerificationReport rep = moment_bound_study(cfg, levels, 16, 7, 2);
    CHECK(rep.status == VerificationReport::Status::pass);
    const double xi_w4 = std::pow(norm(project_level(cfg.initial, levels[0]), Space::W), 4);
    CHECK(rep.metrics.at("level_8_mean") == doctest::Approx(xi_w4).epsilon(1e-12));
    CHECK(rep.metrics.at("uniformity_ratio") == doctest::Approx(1.0).epsilon(1e-12));

    // Zero data with zero coefficients: estimate is exactly zero.
    SimConfig zero_cfg = cfg;
    zero_cfg.initial = SpectralField(1, 1.0);
    VerificationReport zr = moment_bound_study(zero_cfg, levels, 8, 7, 1);
    CHECK(zr.metrics.at("level_8_mean") == 0.0);

    // A path hitting the strong-norm cap fails the study with diagnostics.
    SimConfig capped = cfg;
    capped.w_cap = 1e-9;
    VerificationReport cr = moment_bound_study(capped, levels, 8, 7, 1);
    CHECK(cr.status == VerificationReport::Status::fail);
    CHECK(cr.metrics.at("truncated_paths") > 0.0);
}

TEST_CASE("monotonicity suite passes with measured constants on 1000 pairs") {
    auto coeffs = make_affine_lowpass_coefficients(
        1.0, MarkSpace{{1.0, 0.5}}, {{1, 0}, 0.4}, {{0, 1}, 0.3},
        {{{1, 0}, 0.25}, {{1, 1}, 0.2}}, 0.4, 0.3, 0.2, 2.0);
    MonotonicityConstants constants = measure_monotonicity_constants(1.0, 6, 128, 101);
    VerificationReport rep = monotonicity_suite(coeffs, {1.0, 1.0}, 6, 1000, 101, constants);
    CHECK(rep.status == VerificationReport::Status::pass);
    CHECK(rep.metrics.at("violations_monotonicity") == 0.0);
    CHECK(rep.metrics.at("violations_difference_identity") == 0.0);
    CHECK(rep.metrics.at("growth_constant") > 0.0);
    // The level coercivity constant grows with the level.
    VerificationReport bigger = monotonicity_suite(coeffs, {1.0, 1.0}, 12, 50, 101, constants);
    CHECK(bigger.metrics.at("coercivity_constant") > rep.metrics.at("coercivity_constant"));
}

TEST_CASE("contraction experiment: identical and distinct initial data") {
    SimConfig cfg = residual_config(Scheme::euler, 0.25, 5e-3, true, true);
    MonotonicityConstants constants = measure_monotonicity_constants(1.0, 4, 64, 103);

    VerificationReport same = contraction_experiment(cfg, cfg, 8, 103, constants, 2);
    CHECK(same.status == VerificationReport::Status::pass);
    CHECK(same.metrics.at("max_difference") == 0.0);

    SimConfig other = cfg;
    other.initial = cfg.initial + unit_real_mode({1, 1}, 1, 1.0, 0.5);
    VerificationReport rep = contraction_experiment(cfg, other, 64, 103, constants, 2);
    CHECK(rep.status == VerificationReport::Status::pass);
    CHECK(rep.metrics.at("initial_distance") > 0.0);

    // Zero noise, zero forcing, distinct single-mode data: the weighted
    // difference decreases strictly along the run.
    SimConfig da = residual_config(Scheme::exp_euler, 0.25, 5e-3, false, false);
    SimConfig db = da;
    db.initial = da.initial + unit_real_mode({1, 1}, 1, 1.0, 0.5);
    VerificationReport drep = contraction_experiment(da, db, 4, 103, constants, 1);
    CHECK(drep.status == VerificationReport::Status::pass);
    CHECK(drep.metrics.at("worst_weighted_mean") <= drep.metrics.at("initial_distance"));
}

TEST_CASE("galerkin convergence: no mode creation means zero cross-level error") {
    SimConfig cfg = residual_config(Scheme::exp_euler, 0.2, 5e-3, true, false);
    std::vector<GalerkinLevel> levels{GalerkinLevel::first_modes(8, 1.0),
                                      GalerkinLevel::first_modes(16, 1.0),
                                      GalerkinLevel::first_modes(32, 1.0)};
    VerificationReport rep = galerkin_convergence(cfg, levels, 4, 107, 2);
    CHECK(rep.metrics.at("error_8_16") <= 1e-24);
    CHECK(rep.metrics.at("error_16_32") <= 1e-24);

    // Smooth data with deterministic band energies: errors decrease across
    // level doublings.
    SimConfig smooth = cfg;
    smooth.level = levels.back();
    smooth.initial = smooth_phase_field(levels.back(), 107, 7, 0, 1.5);
    VerificationReport conv = galerkin_convergence(smooth, levels, 8, 107, 2);
    CHECK(conv.status == VerificationReport::Status::pass);
}

TEST_CASE("operator identity suite passes at the acceptance tolerances") {
    VerificationReport rep = operator_identity_suite(1.0, {4, 8}, 100, 109, 2);
    CHECK(rep.status == VerificationReport::Status::pass);
    CHECK(rep.metrics.at("worst_residual") <= 1e-12);
}

TEST_CASE("constant estimation: analytic maximizer and stabilization") {
    VerificationReport rep = estimate_constants(1.0, {4, 8, 16}, 60, 111);
    CHECK(rep.status == VerificationReport::Status::pass);
    CHECK(rep.metrics.at("c_resolvent_strong_gap") <= 1e-6);
    CHECK(rep.metrics.at("poincare_constant") == 1.0);
    CHECK(rep.metrics.at("growth_c_nonlinear_self") <= 0.10);
    // All reported constants are positive (the maximizer gap may be zero).
    for (const auto& [key, value] : rep.metrics)
        if (key.rfind("c_", 0) == 0 && key.find("gap") == std::string::npos)
            CHECK(value > 0.0);
}
