#include "sgf/integrator.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "sgf/nonlinearity.hpp"

namespace sgf {

const char* to_string(Scheme s) {
    return s == Scheme::euler ? "euler" : "exp_euler";
}

void SimConfig::validate() const {
    params.validate();
    if (!coeffs) throw std::invalid_argument("SimConfig: coefficients missing");
    if (coeffs->alpha() != params.alpha)
        throw std::invalid_argument("SimConfig: coefficient alpha differs from domain alpha");
    if (level.size() == 0) throw std::invalid_argument("SimConfig: empty Galerkin level");
    if (level.alpha() != params.alpha)
        throw std::invalid_argument("SimConfig: level alpha differs from domain alpha");
    if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
    if (record_every < 1) throw std::invalid_argument("SimConfig: record_every must be >= 1");
    if (!(w_cap > 0.0)) throw std::invalid_argument("SimConfig: w_cap must be positive");
    if (initial.cutoff() == 0) throw std::invalid_argument("SimConfig: initial state missing");
    if (initial.alpha() != params.alpha)
        throw std::invalid_argument("SimConfig: initial alpha differs from domain alpha");
    if (!initial.is_finite() || !(norm(initial, Space::W) < HUGE_VAL))
        throw std::invalid_argument("SimConfig: initial state must have finite strong norm");
    // xi must be supported on the level.
    bool supported = true;
    initial.for_each([&](WaveVector k, Complex a) {
        if (a != Complex{} && !level.contains(k)) supported = false;
    });
    if (!supported)
        throw std::invalid_argument("SimConfig: initial state has modes outside the level");
}

namespace {

std::string hex_bits(double x) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, bits);
    return buf;
}

}  // namespace

std::string SimConfig::canonical_string() const {
    std::ostringstream os;
    os << "alpha=" << hex_bits(params.alpha) << ";mu=" << hex_bits(params.mu)
       << ";horizon=" << hex_bits(horizon) << ";dt=" << hex_bits(dt)
       << ";scheme=" << to_string(scheme) << ";record_every=" << record_every
       << ";w_cap=" << hex_bits(w_cap) << ";level=" << level.size() << ":" << level.box();
    os << ";marks=";
    for (double w : coeffs->marks().weights) os << hex_bits(w) << ",";
    os << ";coeffs=";
    for (const auto& [k, v] : coeffs->describe()) os << k << "=" << v << ",";
    os << ";initial=";
    initial.for_each([&](WaveVector k, Complex a) {
        if (a != Complex{})
            os << k.k1 << ":" << k.k2 << ":" << hex_bits(a.real()) << ":" << hex_bits(a.imag())
               << ",";
    });
    return os.str();
}

const SpectralField& Trajectory::final_state() const {
    for (auto it = records.rbegin(); it != records.rend(); ++it)
        if (it->state) return *it->state;
    throw std::logic_error("Trajectory: no recorded states");
}

SpectralField step_continuous(const SpectralField& u, double t, double dt_eff, double dW,
                              const SimConfig& cfg) {
    if (!(dt_eff > 0.0)) throw std::invalid_argument("step_continuous: dt_eff must be positive");
    const Coefficients& coeffs = *cfg.coeffs;
    const double mu = cfg.params.mu;
    const double alpha = cfg.params.alpha;

    SpectralField additive = -1.0 * nonlinear_term(u, u);
    additive += solve_helmholtz(coeffs.forcing(u, t));
    additive -= compensator(u, t, coeffs);
    additive = project_level(additive, cfg.level);
    SpectralField stochastic = project_level(eval_diffusion(u, t, coeffs), cfg.level);

    SpectralField out = u;
    if (cfg.scheme == Scheme::euler) {
        out.transform([&](WaveVector k, Complex a) {
            const double beta = k.norm2() / (1.0 + alpha * k.norm2());
            return a - mu * beta * a * dt_eff;
        });
    } else {
        out.transform([&](WaveVector k, Complex a) {
            const double beta = k.norm2() / (1.0 + alpha * k.norm2());
            return a * std::exp(-mu * beta * dt_eff);
        });
    }
    additive *= dt_eff;
    stochastic *= dW;
    out += additive;
    out += stochastic;

    if (!out.is_finite())
        throw BlowupError("step_continuous: non-finite state", u, t + dt_eff);
    return out;
}

SpectralField apply_jump(const SpectralField& u_minus, double t, int mark, const SimConfig& cfg) {
    SpectralField kick = project_level(eval_jump_coeff(u_minus, t, mark, *cfg.coeffs), cfg.level);
    return u_minus + kick;
}

namespace {

void record_node(Trajectory& traj, const SimConfig& cfg, double t, std::size_t node,
                 std::size_t last_node, const SpectralField& u, long jumps, bool is_jump,
                 std::optional<SpectralField> pre_jump) {
    TrajectoryRecord rec;
    rec.t = t;
    rec.norm_v = norm(u, Space::V);
    rec.norm_w = norm(u, Space::W);
    rec.jumps_so_far = jumps;
    rec.is_jump = is_jump;
    const bool full = (node % std::size_t(cfg.record_every) == 0) || node == last_node || is_jump;
    if (full) {
        rec.state = u;
        if (is_jump && cfg.record_every == 1) rec.pre_jump = std::move(pre_jump);
    }
    traj.records.push_back(std::move(rec));
}

// Index of the grid node equal to cfg.horizon.
std::size_t horizon_node(const SimConfig& cfg, const NoisePath& noise) {
    if (noise.dt() != cfg.dt)
        throw std::invalid_argument("simulate_path: noise grid dt differs from config dt");
    if (noise.horizon() < cfg.horizon - 1e-12)
        throw std::invalid_argument("simulate_path: noise horizon shorter than config horizon");
    const auto& nodes = noise.nodes();
    auto it = std::lower_bound(nodes.begin(), nodes.end(), cfg.horizon);
    if (it == nodes.end() || *it != cfg.horizon)
        throw std::invalid_argument("simulate_path: config horizon is not a noise grid node");
    return std::size_t(it - nodes.begin());
}

}  // namespace

SpectralField continue_path(const SimConfig& cfg, const NoisePath& noise, SpectralField state,
                            std::size_t start_node, Trajectory& traj, std::size_t stop_node) {
    const std::size_t last = horizon_node(cfg, noise);
    const std::size_t stop = std::min(last, stop_node);
    const auto& nodes = noise.nodes();
    const auto& incr = noise.increments();
    const auto& jump_nodes = noise.jump_node_index();

    long jumps_done = 0;
    for (std::size_t j = 0; j < jump_nodes.size(); ++j)
        if (jump_nodes[j] <= start_node) ++jumps_done;

    if (start_node == 0) {
        record_node(traj, cfg, nodes[0], 0, last, state, 0, false, std::nullopt);
    }

    SpectralField u = std::move(state);
    for (std::size_t i = start_node; i < stop; ++i) {
        const double t = nodes[i];
        const double h = nodes[i + 1] - nodes[i];
        try {
            u = step_continuous(u, t, h, incr[i], cfg);
        } catch (const BlowupError& e) {
            traj.truncated = true;
            traj.truncation_time = e.time;
            traj.truncation_reason = e.what();
            record_node(traj, cfg, nodes[i + 1], i + 1, i + 1, e.last_finite, jumps_done, false,
                        std::nullopt);
            return e.last_finite;
        }

        bool is_jump = false;
        std::optional<SpectralField> pre;
        auto jit = std::lower_bound(jump_nodes.begin(), jump_nodes.end(), i + 1);
        if (jit != jump_nodes.end() && *jit == i + 1) {
            const Jump& jp = noise.jumps()[std::size_t(jit - jump_nodes.begin())];
            pre = u;
            u = apply_jump(u, jp.time, jp.mark, cfg);
            ++jumps_done;
            is_jump = true;
        }

        if (norm(u, Space::W) > cfg.w_cap) {
            traj.truncated = true;
            traj.truncation_time = nodes[i + 1];
            traj.truncation_reason = "strong-norm cap crossed";
            record_node(traj, cfg, nodes[i + 1], i + 1, i + 1, u, jumps_done, is_jump,
                        std::move(pre));
            return u;
        }
        record_node(traj, cfg, nodes[i + 1], i + 1, last, u, jumps_done, is_jump, std::move(pre));
    }
    return u;
}

Trajectory simulate_path(const SimConfig& cfg, const NoisePath& noise) {
    cfg.validate();
    Trajectory traj;
    SpectralField u0 = project_level(cfg.initial, cfg.level);
    continue_path(cfg, noise, std::move(u0), 0, traj);
    return traj;
}

std::pair<Trajectory, Trajectory> simulate_coupled(const SimConfig& cfg_a, const SimConfig& cfg_b,
                                                   const NoisePath& noise) {
    if (cfg_a.params.alpha != cfg_b.params.alpha || cfg_a.params.mu != cfg_b.params.mu ||
        cfg_a.horizon != cfg_b.horizon || cfg_a.dt != cfg_b.dt ||
        cfg_a.scheme != cfg_b.scheme || cfg_a.w_cap != cfg_b.w_cap)
        throw std::invalid_argument("simulate_coupled: configs differ beyond initial/level");
    if (cfg_a.coeffs->describe() != cfg_b.coeffs->describe())
        throw std::invalid_argument("simulate_coupled: coefficient families differ");
    return {simulate_path(cfg_a, noise), simulate_path(cfg_b, noise)};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const GalerkinLevel& level,
                          bool per_mode_columns) {
    os << "t,norm_V,norm_W,jumps";
    if (per_mode_columns) {
        for (WaveVector k : level.modes())
            os << ",re_" << k.k1 << "_" << k.k2 << ",im_" << k.k1 << "_" << k.k2;
    }
    os << "\n";
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        os << buf;
    };
    for (const auto& rec : traj.records) {
        put(rec.t);
        os << ",";
        put(rec.norm_v);
        os << ",";
        put(rec.norm_w);
        os << "," << rec.jumps_so_far;
        if (per_mode_columns) {
            if (!rec.state)
                throw std::invalid_argument("write_trajectory_csv: per-mode export needs states");
            for (WaveVector k : level.modes()) {
                Complex a = rec.state->at(k);
                os << ",";
                put(a.real());
                os << ",";
                put(a.imag());
            }
        }
        os << "\n";
    }
}

}  // namespace sgf
