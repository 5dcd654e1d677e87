#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sgf/noise.hpp"
#include "sgf/parallel.hpp"
#include "sgf/rng.hpp"

using namespace sgf;

namespace {
MarkSpace two_marks() { return MarkSpace{{1.0, 1.0}}; }
}  // namespace

TEST_CASE("sampling is deterministic in (seed, stream)") {
    NoiseGridSpec grid{1.0, 0.01};
    NoisePath a = sample_noise(grid, two_marks(), 42, 7);
    NoisePath b = sample_noise(grid, two_marks(), 42, 7);
    CHECK(a == b);
    NoisePath c = sample_noise(grid, two_marks(), 42, 8);
    CHECK_FALSE(a == c);
}

TEST_CASE("grid structure: jumps are nodes, increments cover the horizon") {
    NoiseGridSpec grid{1.0, 0.01};
    NoisePath p = sample_noise(grid, MarkSpace{{3.0}}, 11, 1);
    CHECK(p.nodes().front() == 0.0);
    CHECK(p.nodes().back() == 1.0);
    CHECK(p.increments().size() == p.nodes().size() - 1);
    for (std::size_t i = 0; i < p.jumps().size(); ++i) {
        CHECK(p.nodes()[p.jump_node_index()[i]] == p.jumps()[i].time);
        if (i > 0) CHECK(p.jumps()[i].time > p.jumps()[i - 1].time);
    }
    // Empty mark space: no jumps, plain uniform grid.
    NoisePath q = sample_noise(grid, MarkSpace{}, 11, 1);
    CHECK(q.jumps().empty());
    CHECK(q.nodes().size() == 101);

    CHECK_THROWS_AS(sample_noise({-1.0, 0.01}, MarkSpace{}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_noise({1.0, 0.0}, MarkSpace{}, 1, 1), std::invalid_argument);
}

TEST_CASE("refinement sums back to the coarse increments and keeps the jumps") {
    NoiseGridSpec grid{0.5, 0.05};
    NoisePath coarse = sample_noise(grid, two_marks(), 91, 3);
    NoisePath fine = refine_noise(coarse, 2);
    CHECK(fine.dt() == doctest::Approx(0.025));
    CHECK(fine.jumps() == coarse.jumps());

    // Sum fine increments between consecutive coarse nodes.
    std::size_t fi = 0;
    for (std::size_t ci = 0; ci + 1 < coarse.nodes().size(); ++ci) {
        double sum = 0.0;
        while (fi < fine.increments().size() && fine.nodes()[fi + 1] <= coarse.nodes()[ci + 1]) {
            sum += fine.increments()[fi];
            ++fi;
        }
        CHECK(sum == doctest::Approx(coarse.increments()[ci]).epsilon(1e-12));
    }
}

TEST_CASE("refining twice by two equals refining once by four") {
    NoiseGridSpec grid{0.25, 0.05};
    NoisePath base = sample_noise(grid, two_marks(), 17, 5);
    NoisePath twice = refine_noise(refine_noise(base, 2), 2);
    NoisePath once = refine_noise(base, 4);
    CHECK(twice == once);
}

TEST_CASE("odd refinement factors keep the coarse sums") {
    NoiseGridSpec grid{0.3, 0.05};
    NoisePath coarse = sample_noise(grid, two_marks(), 19, 6);
    NoisePath fine = refine_noise(coarse, 3);
    CHECK(fine.dt() == doctest::Approx(0.05 / 3.0));
    std::size_t fi = 0;
    for (std::size_t ci = 0; ci + 1 < coarse.nodes().size(); ++ci) {
        double sum = 0.0;
        while (fi < fine.increments().size() && fine.nodes()[fi + 1] <= coarse.nodes()[ci + 1]) {
            sum += fine.increments()[fi];
            ++fi;
        }
        CHECK(sum == doctest::Approx(coarse.increments()[ci]).epsilon(1e-12));
    }
    // Factor 6 = 2 then 3, hierarchically.
    NoisePath six = refine_noise(coarse, 6);
    CHECK(six.dt() == doctest::Approx(0.05 / 6.0));
}

TEST_CASE("regeneration replays sampling and refinement bit-identically") {
    NoiseGridSpec grid{0.5, 0.05};
    NoisePath p = refine_noise(sample_noise(grid, two_marks(), 23, 2), 2);
    NoisePath r = regenerate_noise(grid, two_marks(), 23, 2, p.refinement_history());
    CHECK(p == r);
}

TEST_CASE("Brownian scaling: increment variance equals the step") {
    const int samples = 100000;
    const double dt = 0.02;
    std::vector<double> xs(samples);
    for (int s = 0; s < samples; ++s)
        xs[std::size_t(s)] = std::sqrt(dt) * rng::normal(rng::derive(7, std::uint64_t(s),
                                                                     rng::kBrownianBase));
    MeanStderr m = mean_stderr(xs);
    CHECK(std::abs(m.mean) <= 3.0 * m.stderr_);
    // Variance within 3 sigma of dt (se ~ dt sqrt(2/n)).
    CHECK(std::abs(m.variance - dt) <= 3.0 * dt * std::sqrt(2.0 / samples));
}

TEST_CASE("independence across streams") {
    NoiseGridSpec grid{1.0, 0.01};
    const int paths = 200;
    std::vector<double> xs, ys;
    for (int p = 0; p < paths; ++p) {
        NoisePath a = sample_noise(grid, MarkSpace{}, 3, std::uint64_t(2 * p));
        NoisePath b = sample_noise(grid, MarkSpace{}, 3, std::uint64_t(2 * p + 1));
        xs.insert(xs.end(), a.increments().begin(), a.increments().end());
        ys.insert(ys.end(), b.increments().begin(), b.increments().end());
    }
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
    }
    const double corr = (n * sxy - sx * sy) /
                        std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(std::abs(corr) <= 3.0 / std::sqrt(n));
}

TEST_CASE("jump count follows the intensity: Monte Carlo mean") {
    // mass 2, horizon 1: mean jump count 2 within 3 sigma over many paths.
    NoiseGridSpec grid{1.0, 0.1};
    MarkSpace marks{{2.0}};
    const int samples = 20000;
    double count = 0.0;
    for (int s = 0; s < samples; ++s)
        count += double(sample_noise(grid, marks, 29, std::uint64_t(s)).jumps().size());
    const double mean = count / samples;
    CHECK(std::abs(mean - 2.0) <= 3.0 * std::sqrt(2.0 / samples));
}

TEST_CASE("compensated integral statistics") {
    NoiseGridSpec grid{1.0, 0.1};
    MarkSpace marks = two_marks();
    NoisePath proto = sample_noise(grid, marks, 31, 1);

    VerificationReport rep = compensated_integral_check(proto, marks, 20000);
    CHECK(rep.status == VerificationReport::Status::pass);
    CHECK(std::abs(rep.metrics.at("mean")) <= 3.0 * rep.metrics.at("stderr"));
    CHECK(rep.metrics.at("variance_target") == doctest::Approx(2.0));  // T sum nu g^2 = 2

    // Integrand (1, -1) with nu = (1, 1): variance target 2 T as well, and
    // the compensator drift cancels.
    VerificationReport pm = compensated_integral_check(proto, marks, 20000, {1.0, -1.0});
    CHECK(pm.status == VerificationReport::Status::pass);
    CHECK(pm.metrics.at("variance_target") == doctest::Approx(2.0));

    // Zero integrand: identically zero.
    VerificationReport z = compensated_integral_check(proto, marks, 100, {0.0, 0.0});
    CHECK(z.metrics.at("mean") == 0.0);
    CHECK(z.metrics.at("variance") == 0.0);
}

TEST_CASE("poisson sampler edge cases") {
    CHECK(rng::poisson(0.0, 123) == 0);
    // Large intensity splits without overflow and keeps a sane mean.
    double acc = 0.0;
    const int samples = 2000;
    for (int s = 0; s < samples; ++s)
        acc += double(rng::poisson(800.0, rng::derive(5, std::uint64_t(s), rng::kJumpCount)));
    CHECK(std::abs(acc / samples - 800.0) <= 3.0 * std::sqrt(800.0 / samples));
}
