#pragma once

// Versioned binary checkpoint: restore + continue reproduces an uninterrupted
// run bit for bit.  Layout (all little-endian):
//
//   magic "SGFCKPT1" | u32 version | u64 config digest
//   f64 time | u64 node index
//   u32 n_modes | n_modes x (i32 k1, i32 k2) | n_modes x (f64 re, f64 im)
//   noise generator state: u64 seed, u64 stream, f64 horizon, f64 base_dt,
//     f64 dt, u32 n_factors, n_factors x i32
//   u32 n_remaining_jumps | each (f64 time, i32 mark)

#include <cstdint>
#include <string>

#include "sgf/integrator.hpp"
#include "sgf/report.hpp"

namespace sgf {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    std::uint64_t config_digest = 0;
    double time = 0.0;
    std::uint64_t node_index = 0;
    SpectralField state;
    // Noise generator state.
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    double horizon = 0.0;
    double base_dt = 0.0;
    double dt = 0.0;
    std::vector<int> refinement_history;
    std::vector<Jump> remaining_jumps;
};

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t config_digest(const SimConfig& cfg);

void write_checkpoint(const std::string& path, const SimConfig& cfg, const NoisePath& noise,
                      const SpectralField& state, std::uint64_t node_index);

// Throws std::runtime_error on bad magic, version mismatch or digest mismatch
// against the supplied config.
Checkpoint read_checkpoint(const std::string& path, const SimConfig& cfg);

// Regenerates the noise from the stored generator state and verifies the
// stored remaining jumps against it.
NoisePath restore_noise(const Checkpoint& ckpt, const SimConfig& cfg);

// Runs to t_split, saves, restores, continues, and compares against the
// uninterrupted run record by record.
VerificationReport checkpoint_roundtrip(const SimConfig& cfg, const NoisePath& noise,
                                        double t_split);

}  // namespace sgf
