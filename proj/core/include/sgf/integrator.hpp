#pragma once

// Jump-adapted time integration of the Galerkin system.  Jump times are grid
// nodes, so jumps are applied at exact times to the left limit and carry no
// discretization error; only the continuous part is O(dt).  The scheme
// integrates the compensated form: raw jumps are added at jump times and the
// compensator is subtracted from the drift.

#include <optional>
#include <ostream>
#include <string>

#include "sgf/coefficients.hpp"
#include "sgf/noise.hpp"
#include "sgf/operators.hpp"

namespace sgf {

enum class Scheme { euler, exp_euler };

const char* to_string(Scheme s);

struct SimConfig {
    DomainParams params;
    GalerkinLevel level;
    CoefficientsPtr coeffs;
    double horizon = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::exp_euler;
    int record_every = 1;
    SpectralField initial;  // xi; must be supported on the level
    double w_cap = 1e9;     // stopping cap on |u|_W

    void validate() const;
    // Deterministic textual snapshot; feeds digests and manifests.
    std::string canonical_string() const;
};

struct TrajectoryRecord {
    double t = 0.0;
    double norm_v = 0.0;
    double norm_w = 0.0;
    long jumps_so_far = 0;
    bool is_jump = false;
    std::optional<SpectralField> state;     // post-jump value (cadlag convention)
    std::optional<SpectralField> pre_jump;  // left limit, kept under full recording

    bool operator==(const TrajectoryRecord& o) const = default;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;  // one per grid node
    bool truncated = false;
    double truncation_time = 0.0;
    std::string truncation_reason;

    const SpectralField& final_state() const;
    bool operator==(const Trajectory& o) const = default;
};

// Raised by the continuous step on non-finite state; carries the last finite
// state for diagnostics.
struct BlowupError : std::runtime_error {
    BlowupError(std::string msg, SpectralField last, double when)
        : std::runtime_error(std::move(msg)), last_finite(std::move(last)), time(when) {}
    SpectralField last_finite;
    double time;
};

// One continuous step of length dt_eff with Brownian increment dW.
SpectralField step_continuous(const SpectralField& u, double t, double dt_eff, double dW,
                              const SimConfig& cfg);

// Applies one jump at the left limit.
SpectralField apply_jump(const SpectralField& u_minus, double t, int mark, const SimConfig& cfg);

// Integrates over the jump-adapted grid of `noise` up to cfg.horizon.
Trajectory simulate_path(const SimConfig& cfg, const NoisePath& noise);

// As simulate_path, starting from `state` at node `start_node`, appending
// records to `traj` and stopping early at `stop_node` when given.  Recording
// cadence is anchored to the full run, so split runs concatenate exactly.
// Returns the live state at the node where integration stopped.
SpectralField continue_path(const SimConfig& cfg, const NoisePath& noise, SpectralField state,
                            std::size_t start_node, Trajectory& traj,
                            std::size_t stop_node = std::size_t(-1));

// Twin or cross-level run on one noise realization.  Configs may differ only
// in initial condition and Galerkin level.
std::pair<Trajectory, Trajectory> simulate_coupled(const SimConfig& cfg_a, const SimConfig& cfg_b,
                                                   const NoisePath& noise);

// CSV export: header t,norm_V,norm_W,jumps plus optional per-mode columns.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const GalerkinLevel& level,
                          bool per_mode_columns = false);

}  // namespace sgf
