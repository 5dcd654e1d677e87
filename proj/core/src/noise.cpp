#include "sgf/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgf/rng.hpp"

namespace sgf {

namespace {

long uniform_step_count(const NoiseGridSpec& grid) {
    if (!(grid.horizon > 0.0)) throw std::invalid_argument("noise: horizon must be positive");
    if (!(grid.dt > 0.0)) throw std::invalid_argument("noise: dt must be positive");
    const double ratio = grid.horizon / grid.dt;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - double(n)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("noise: horizon must be an integer multiple of dt");
    return n;
}

std::vector<Jump> sample_jumps(const NoiseGridSpec& grid, const MarkSpace& marks,
                               std::uint64_t seed, std::uint64_t stream) {
    marks.validate();
    std::vector<Jump> jumps;
    if (marks.size() == 0) return jumps;

    const double mass = marks.total_mass();
    const std::uint64_t count =
        rng::poisson(mass * grid.horizon, rng::derive(seed, stream, rng::kJumpCount));
    jumps.reserve(count);
    for (std::uint64_t c = 0; c < count; ++c) {
        const double t = grid.horizon * rng::uniform01(rng::derive(seed, stream, rng::kJumpTime, c));
        const double m = mass * rng::uniform01(rng::derive(seed, stream, rng::kJumpMark, c));
        int mark = 0;
        double acc = marks.weights[0];
        while (mark + 1 < marks.size() && m > acc) acc += marks.weights[std::size_t(++mark)];
        jumps.push_back({t, mark});
    }
    std::sort(jumps.begin(), jumps.end(),
              [](const Jump& a, const Jump& b) { return a.time < b.time; });
    // Ties have probability ~ n^2 * 2^-53; keep jump times strictly increasing.
    for (std::size_t i = 1; i < jumps.size(); ++i)
        while (jumps[i].time <= jumps[i - 1].time)
            jumps[i].time = std::nextafter(jumps[i].time, grid.horizon);
    while (!jumps.empty() && jumps.back().time > grid.horizon) jumps.pop_back();
    return jumps;
}

// Inserts `s` as a grid node, bridge-splitting the increment of the interval
// that contains it.  No-op if `s` already is a node.
void insert_node(std::vector<double>& nodes, std::vector<double>& incr, double s,
                 std::uint64_t key) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), s);
    if (it != nodes.end() && *it == s) return;
    if (it == nodes.begin() || it == nodes.end())
        throw std::logic_error("noise: node insertion outside grid");
    const std::size_t right = std::size_t(it - nodes.begin());
    const double a = nodes[right - 1];
    const double b = nodes[right];
    const double total = incr[right - 1];
    const double frac = (s - a) / (b - a);
    const double mean = total * frac;
    const double var = (s - a) * (b - s) / (b - a);
    const double left = mean + std::sqrt(var) * rng::normal(key);
    nodes.insert(it, s);
    incr[right - 1] = left;
    incr.insert(incr.begin() + long(right), total - left);
}

}  // namespace

void NoisePath::rebuild_merged() {
    jump_node_.clear();
    jump_node_.reserve(jumps_.size());
    for (const Jump& j : jumps_) {
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), j.time);
        if (it == nodes_.end() || *it != j.time)
            throw std::logic_error("noise: jump time is not a grid node");
        jump_node_.push_back(std::size_t(it - nodes_.begin()));
    }
}

NoisePath sample_noise(NoiseGridSpec grid, const MarkSpace& marks, std::uint64_t seed,
                       std::uint64_t stream_id) {
    const long n = uniform_step_count(grid);

    NoisePath path;
    path.horizon_ = grid.horizon;
    path.dt_ = grid.dt;
    path.base_dt_ = grid.dt;
    path.seed_ = seed;
    path.stream_id_ = stream_id;
    path.jumps_ = sample_jumps(grid, marks, seed, stream_id);

    // Base uniform grid with exact horizon as the last node.
    path.nodes_.resize(std::size_t(n) + 1);
    for (long i = 0; i < n; ++i) path.nodes_[std::size_t(i)] = double(i) * grid.dt;
    path.nodes_.back() = grid.horizon;

    path.increments_.resize(std::size_t(n));
    for (long i = 0; i < n; ++i) {
        const double len = path.nodes_[std::size_t(i) + 1] - path.nodes_[std::size_t(i)];
        path.increments_[std::size_t(i)] =
            std::sqrt(len) *
            rng::normal(rng::derive(seed, stream_id, rng::kBrownianBase, std::uint64_t(i)));
    }

    // Jump times become grid nodes; the enclosing Brownian increment is split
    // conditionally so the realization is unchanged in law.
    std::uint64_t ordinal = 0;
    for (const Jump& j : path.jumps_)
        insert_node(path.nodes_, path.increments_, j.time,
                    rng::derive(seed, stream_id, rng::kJumpSplit, ordinal++));

    path.rebuild_merged();
    return path;
}

NoisePath refine_noise(const NoisePath& path, int factor) {
    if (factor < 2) throw std::invalid_argument("refine_noise: factor must be >= 2");

    NoisePath out = path;

    // One refinement pass: split every current uniform interval into `f`
    // equal parts, conditioning new increments on the existing ones.
    auto refine_pass = [&out](std::vector<double>& uniform_nodes, int f, std::size_t depth) {
        std::uint64_t ordinal = 0;
        std::vector<double> new_uniform;
        new_uniform.reserve(uniform_nodes.size() * std::size_t(f));
        for (std::size_t i = 0; i + 1 < uniform_nodes.size(); ++i) {
            const double a = uniform_nodes[i];
            const double b = uniform_nodes[i + 1];
            new_uniform.push_back(a);
            for (int j = 1; j < f; ++j) {
                const double s = a + (b - a) * (double(j) / double(f));
                insert_node(out.nodes_, out.increments_, s,
                            rng::derive(out.seed_, out.stream_id_, rng::kBridge, depth,
                                        ordinal++));
                new_uniform.push_back(s);
            }
        }
        new_uniform.push_back(uniform_nodes.back());
        uniform_nodes = std::move(new_uniform);
    };
    // Reconstruct the exact current uniform node values by replaying the
    // refinement history from the base grid (split positions only).
    std::vector<double> uniform_nodes;
    {
        const long n = uniform_step_count({out.horizon_, out.base_dt_});
        uniform_nodes.resize(std::size_t(n) + 1);
        for (long i = 0; i < n; ++i) uniform_nodes[std::size_t(i)] = double(i) * out.base_dt_;
        uniform_nodes.back() = out.horizon_;
        for (int f : out.history_) {
            std::vector<double> finer;
            finer.reserve(uniform_nodes.size() * std::size_t(f));
            for (std::size_t i = 0; i + 1 < uniform_nodes.size(); ++i) {
                finer.push_back(uniform_nodes[i]);
                for (int j = 1; j < f; ++j)
                    finer.push_back(uniform_nodes[i] +
                                    (uniform_nodes[i + 1] - uniform_nodes[i]) *
                                        (double(j) / double(f)));
            }
            finer.push_back(uniform_nodes.back());
            uniform_nodes = std::move(finer);
        }
    }

    int remaining = factor;
    while (remaining % 2 == 0) {
        out.history_.push_back(2);
        refine_pass(uniform_nodes, 2, out.history_.size());
        out.dt_ /= 2.0;
        remaining /= 2;
    }
    if (remaining > 1) {
        out.history_.push_back(remaining);
        refine_pass(uniform_nodes, remaining, out.history_.size());
        out.dt_ /= double(remaining);
    }
    out.rebuild_merged();
    return out;
}

NoisePath regenerate_noise(NoiseGridSpec grid, const MarkSpace& marks, std::uint64_t seed,
                           std::uint64_t stream_id, const std::vector<int>& history) {
    NoisePath path = sample_noise(grid, marks, seed, stream_id);
    for (int f : history) path = refine_noise(path, f);
    return path;
}

VerificationReport compensated_integral_check(const NoisePath& prototype, const MarkSpace& marks,
                                              int samples, const std::vector<double>& integrand) {
    if (samples < 2) throw std::invalid_argument("compensated_integral_check: samples >= 2");
    std::vector<double> g = integrand;
    if (g.empty()) g.assign(std::size_t(std::max(0, marks.size())), 1.0);
    if (int(g.size()) != marks.size())
        throw std::invalid_argument("compensated_integral_check: integrand size mismatch");

    const double T = prototype.horizon();
    const double mass = marks.total_mass();
    double comp_mean_rate = 0.0;  // integral of g d(nu) per unit time
    double second_moment = 0.0;   // sum_j nu_j g_j^2
    for (int j = 0; j < marks.size(); ++j) {
        comp_mean_rate += marks.weights[std::size_t(j)] * g[std::size_t(j)];
        second_moment += marks.weights[std::size_t(j)] * g[std::size_t(j)] * g[std::size_t(j)];
    }

    double sum = 0.0, sum2 = 0.0, count_sum = 0.0;
    const NoiseGridSpec grid{T, prototype.dt()};
    for (int s = 0; s < samples; ++s) {
        const auto jumps =
            sample_jumps(grid, marks, prototype.seed(), prototype.stream_id() + std::uint64_t(s));
        double x = -T * comp_mean_rate;
        for (const Jump& j : jumps) x += g[std::size_t(j.mark)];
        sum += x;
        sum2 += x * x;
        count_sum += double(jumps.size());
    }
    const double n = double(samples);
    const double mean = sum / n;
    const double var = (sum2 - n * mean * mean) / (n - 1.0);
    const double se = std::sqrt(std::max(var, 0.0) / n);
    const double var_target = T * second_moment;
    const double count_mean = count_sum / n;
    const double count_se = std::sqrt(std::max(mass * T, 1e-300) / n);

    VerificationReport rep;
    rep.name = "compensated_integral_check";
    rep.provenance = "compensated Poisson integrals are centered with the predicted variance";
    rep.seed = prototype.seed();
    rep.samples = samples;
    rep.metrics["mean"] = mean;
    rep.metrics["stderr"] = se;
    rep.metrics["variance"] = var;
    rep.metrics["variance_target"] = var_target;
    rep.metrics["jump_count_mean"] = count_mean;
    rep.metrics["jump_count_target"] = mass * T;
    rep.tolerances["mean_sigmas"] = 3.0;
    rep.tolerances["variance_rel"] = 0.05;
    rep.confidence = {{mean, se}};

    bool ok = std::abs(mean) <= 3.0 * se + 1e-300;
    if (var_target > 0.0) ok = ok && std::abs(var / var_target - 1.0) <= 0.05;
    else ok = ok && var == 0.0;
    if (mass > 0.0) ok = ok && std::abs(count_mean - mass * T) <= 3.0 * count_se;
    rep.status = ok ? VerificationReport::Status::pass : VerificationReport::Status::fail;
    return rep;
}

}  // namespace sgf
