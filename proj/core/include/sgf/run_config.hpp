#pragma once

// Flat sectioned key=value run configuration.  Unknown keys are hard errors;
// command-line overrides take precedence over file values.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sgf/analysis.hpp"
#include "sgf/integrator.hpp"

namespace sgf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // domain
    double alpha = 1.0;
    double mu = 1.0;
    // galerkin
    int cutoff = 0;       // square box level when > 0
    int modes = 0;        // eigenvalue-ordered level when > 0
    std::vector<int> levels;  // mode counts for multi-level studies
    // time
    double horizon = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::exp_euler;
    int record_every = 1;
    double w_cap = 1e9;
    // coefficients
    std::string family = "zero";
    WaveVector forcing_k{1, 0};
    double forcing_amp = 0.0;
    WaveVector diffusion_k{1, 0};
    double diffusion_amp = 0.0;
    std::vector<WaveVector> jump_k;
    std::vector<double> jump_amp;
    double kappa_forcing = 0.0;
    double kappa_diffusion = 0.0;
    double kappa_jump = 0.0;
    double lowpass = 1.0;
    // marks
    std::vector<double> mark_weights;
    // initial
    std::string initial_kind = "mode";  // zero | mode | single | smooth
    WaveVector initial_k{1, 0};
    double initial_amp = 1.0;
    double initial_decay = 1.0;
    // run
    std::uint64_t seed = 1;
    int paths = 100;
    int workers = 1;
    int samples = 1000;
    double contraction_offset = 0.5;
    double decay_tolerance = 1e-9;  // per-mode amplitude tolerance of `decay`
    std::string out_dir = "out";

    // Materialized pieces.
    DomainParams domain() const { return {alpha, mu}; }
    GalerkinLevel level() const;
    std::vector<GalerkinLevel> level_list() const;
    CoefficientsPtr coefficients() const;
    SpectralField initial_field(const GalerkinLevel& level) const;
    SimConfig sim_config() const;

    // Flattened echo of every effective key, for manifests.
    std::map<std::string, std::string> echo() const;
};

// Parses the file, applies `overrides` ("section.key=value"), validates.
// Throws ConfigError with file/line context on malformed input, unknown keys
// or out-of-range values.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Parses from an already-loaded string (used by tests); `origin` labels
// error messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::vector<std::string>& overrides = {});

}  // namespace sgf
