#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sel/torus.hpp"

namespace sel {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully-defaulted run configuration. Every value that affects results is
/// materialized into the manifest.
struct RunConfig {
    // sim
    double sim_dt = 1e-3;
    double sim_T = 1.0;
    int sim_particles = 512;
    uint64_t sim_seed = 12345;
    double sim_blob_radius = 0.0;  // 0 = auto: 2x kernel table cell
    int sim_kernel_cutoff = 16;
    int sim_kernel_table_resolution = 512;
    // noise
    double noise_beta = 4.0;
    int noise_cutoff = 8;
    bool noise_enabled = true;
    // spectral
    int spectral_resolution = 128;
    bool spectral_enabled = true;
    bool spectral_advection = true;
    // init
    std::string init_kind = "sheet_circle";  // sheet_circle | sheet_segment | blob_grid | file
    double init_mass = 1.0;
    double init_mass_bound = 1.0;
    double init_epsilon = 0.1;  // mollification scale for grid initial data
    double init_radius = 1.0;   // circle sheet radius
    std::string init_file;
    // output
    int output_every = 100;
    std::string output_dir = "out";
    int output_sobolev_cutoff = 16;
    bool output_snapshots = false;

    double blob_radius_effective() const {
        return sim_blob_radius > 0.0 ? sim_blob_radius : 2.0 * kTwoPi / sim_kernel_table_resolution;
    }

    bool operator==(const RunConfig&) const = default;
};

/// Sectioned key=value text ([sim] dt = ... , or flat sim.dt = ...).
/// Errors name the offending key and line; constraints (beta > 3, dt > 0,
/// ...) are enforced here.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Canonical emission; parse(emit(cfg)) == cfg.
std::string emit_config(const RunConfig& cfg);

}  // namespace sel
