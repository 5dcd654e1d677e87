#include <benchmark/benchmark.h>

#include "sgf/integrator.hpp"
#include "sgf/nonlinearity.hpp"
#include "sgf/sampling.hpp"

using namespace sgf;

namespace {

SpectralField bench_field(int cutoff) { return random_real_field(cutoff, 1.0, 2026, 1, 0); }

void BM_NonlinearTerm(benchmark::State& state) {
    const int cutoff = int(state.range(0));
    SpectralField u = bench_field(cutoff);
    SpectralField v = random_real_field(cutoff, 1.0, 2026, 2, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nonlinear_term(u, v));
    }
}
BENCHMARK(BM_NonlinearTerm)->Arg(8)->Arg(16)->Arg(32);

void BM_StrongNorm(benchmark::State& state) {
    SpectralField u = bench_field(int(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(norm(u, Space::W));
    }
}
BENCHMARK(BM_StrongNorm)->Arg(16)->Arg(64);

void BM_StepContinuous(benchmark::State& state) {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(int(state.range(0)), 1.0);
    cfg.coeffs = make_additive_coefficients(1.0, MarkSpace{{1.0}}, {{1, 0}, 0.4}, {{0, 1}, 0.3},
                                            {{{1, 1}, 0.2}});
    cfg.dt = 1e-3;
    cfg.initial = unit_real_mode({1, 0}, 1, 1.0, 1.0);
    SpectralField u = random_level_field(cfg.level, 2026, 3, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step_continuous(u, 0.0, 1e-3, 1e-2, cfg));
    }
}
BENCHMARK(BM_StepContinuous)->Arg(8)->Arg(64);

void BM_SimulatePath(benchmark::State& state) {
    SimConfig cfg;
    cfg.params = {1.0, 1.0};
    cfg.level = GalerkinLevel::first_modes(16, 1.0);
    cfg.coeffs = make_additive_coefficients(1.0, MarkSpace{{1.0}}, {{1, 0}, 0.4}, {{0, 1}, 0.3},
                                            {{{1, 1}, 0.2}});
    cfg.horizon = 0.1;
    cfg.dt = 1e-3;
    cfg.record_every = 1 << 20;
    cfg.initial = unit_real_mode({1, 0}, 2, 1.0, 1.0);
    NoisePath noise = sample_noise({0.1, 1e-3}, cfg.coeffs->marks(), 2026, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(cfg, noise));
    }
}
BENCHMARK(BM_SimulatePath);

}  // namespace

BENCHMARK_MAIN();
