#pragma once

// Driving noise: one-dimensional Brownian increments on a jump-adapted grid
// plus a finite-activity Poisson random measure with marks.
//
// Everything is a pure function of (seed, stream_id, grid spec, marks):
// regeneration is bit-identical, refinement is hierarchical (refining twice
// by 2 equals refining once by 4), and coupled runs share one realization by
// construction.

#include <cstdint>
#include <vector>

#include "sgf/coefficients.hpp"
#include "sgf/report.hpp"

namespace sgf {

struct Jump {
    double time = 0.0;
    int mark = 0;

    friend bool operator==(const Jump&, const Jump&) = default;
};

struct NoiseGridSpec {
    double horizon = 1.0;  // T
    double dt = 1e-3;      // uniform step of the base grid
};

class NoisePath {
  public:
    // Grid nodes 0 = t_0 < t_1 < ... < t_m = T: every uniform multiple of dt
    // and every jump time.  increments()[i] is the Brownian increment over
    // (nodes[i], nodes[i+1]].
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& increments() const { return increments_; }
    const std::vector<Jump>& jumps() const { return jumps_; }

    double horizon() const { return horizon_; }
    double dt() const { return dt_; }
    double base_dt() const { return base_dt_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    // Refinement factors applied so far, in order (regeneration replays them).
    const std::vector<int>& refinement_history() const { return history_; }

    // Index into nodes() of each jump (jump times are always grid nodes).
    const std::vector<std::size_t>& jump_node_index() const { return jump_node_; }

    bool operator==(const NoisePath& o) const = default;

  private:
    friend NoisePath sample_noise(NoiseGridSpec, const MarkSpace&, std::uint64_t, std::uint64_t);
    friend NoisePath refine_noise(const NoisePath&, int);
    friend NoisePath regenerate_noise(NoiseGridSpec, const MarkSpace&, std::uint64_t,
                                      std::uint64_t, const std::vector<int>&);

    void rebuild_merged();

    double horizon_ = 0.0;
    double dt_ = 0.0;       // current uniform step
    double base_dt_ = 0.0;  // uniform step at sampling time
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::vector<int> history_;

    // Merged representation.
    std::vector<double> nodes_;
    std::vector<double> increments_;
    std::vector<Jump> jumps_;
    std::vector<std::size_t> jump_node_;
};

// Samples jump count ~ Poisson(mass * T), i.i.d. uniform jump times, i.i.d.
// categorical marks, and Brownian increments over the merged grid.
NoisePath sample_noise(NoiseGridSpec grid, const MarkSpace& marks, std::uint64_t seed,
                       std::uint64_t stream_id);

// Refines the uniform grid by `factor` (>= 2), holding the realization fixed:
// coarse increments are exactly the sums of the fine ones and jumps are
// unchanged.  Powers of two refine by repeated halving, so the hierarchy is
// associative; a leftover odd factor is applied as a single split pass.
NoisePath refine_noise(const NoisePath& path, int factor);

// Replays sampling plus a refinement history; used by checkpoint restore.
NoisePath regenerate_noise(NoiseGridSpec grid, const MarkSpace& marks, std::uint64_t seed,
                           std::uint64_t stream_id, const std::vector<int>& history);

// Monte Carlo check of the compensated-measure statistics for per-mark
// constant integrands: mean of the compensated integral within 3 standard
// errors of zero, variance within 5% of T * sum_j nu_j g_j^2, jump-count mean
// within 3 sigma of mass * T.
VerificationReport compensated_integral_check(const NoisePath& prototype, const MarkSpace& marks,
                                              int samples,
                                              const std::vector<double>& integrand = {});

}  // namespace sgf
