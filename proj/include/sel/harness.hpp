#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sel/config.hpp"
#include "sel/diagnostics.hpp"
#include "sel/kernel.hpp"
#include "sel/measure.hpp"
#include "sel/noise.hpp"
#include "sel/particle.hpp"
#include "sel/spectral.hpp"

namespace sel {

enum class SolverKind { particle, spectral, both };

SolverKind solver_from_string(const std::string& s);
std::string to_string(SolverKind s);

struct EnsembleSpec {
    int members = 1;
    uint64_t base_seed = 12345;
    SolverKind solver = SolverKind::particle;
};

/// Worker pool width: SEL_THREADS if set, hardware concurrency otherwise.
int worker_pool_size();

ParticleMeasure make_initial_particles(const RunConfig& cfg);
/// Grid initial datum: blob_grid analytic profile, or the mollified sheet.
GridField make_initial_field(const RunConfig& cfg);

struct MemberOptions {
    std::string out_dir;  // empty: no files
    bool collect_holder = false;
    int holder_cutoff = 16;
};

struct MemberArtifacts {
    std::vector<double> times;
    std::vector<DiagnosticsRecord> diag;
    std::vector<std::vector<std::complex<double>>> holder_blocks;
    double initial_max = 0.0;  // max xi_0 (grids) / max weight (particles)
    bool failed = false;
    std::string error;
};

MemberArtifacts run_member_particle(const RunConfig& cfg, uint64_t base_seed, uint64_t member,
                                    const KernelTable& table, const NoiseBasis& basis,
                                    const MemberOptions& opts);
MemberArtifacts run_member_spectral(const RunConfig& cfg, uint64_t base_seed, uint64_t member,
                                    const NoiseBasis& basis, const MemberOptions& opts);

struct CrossRunResult {
    std::vector<double> times;
    std::vector<double> weak_distance;  // particle vs spectral state
};

/// Particle and spectral solvers driven by the same Brownian path.
CrossRunResult run_cross(const RunConfig& cfg, uint64_t base_seed, uint64_t member,
                         const KernelTable& table, const NoiseBasis& basis, const std::string& out_dir);

struct EnsembleOutcome {
    EnsembleSeries series;
    EnsembleSummary summary;
    HolderSeries holder;
    std::vector<std::string> member_errors;  // empty when all succeeded
};

EnsembleOutcome run_ensemble(const EnsembleSpec& spec, const RunConfig& cfg,
                             const std::string& out_root, const MemberOptions& opts);

// --- artifact emission -----------------------------------------------------
void write_diag_csv(const std::string& path, const std::vector<double>& times,
                    const std::vector<DiagnosticsRecord>& diag);
void write_summary_csv(const std::string& path, const EnsembleSummary& summary);
std::string manifest_json(const RunConfig& cfg, const NoiseBasis& basis, SolverKind solver,
                          uint64_t base_seed, int members);
void write_grid_snapshot(const std::string& path_base, const GridField& f, double t);

// --- verification suites ---------------------------------------------------
struct VerifyRow {
    std::string case_name;
    std::string metric;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct VerifyReport {
    std::string name;
    std::vector<VerifyRow> rows;
    bool pass = true;

    void add(VerifyRow row) {
        pass = pass && row.pass;
        rows.push_back(std::move(row));
    }
    void merge(const VerifyReport& other) {
        pass = pass && other.pass;
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    }
};

void write_verify_csv(const std::string& path, const VerifyReport& report);

VerifyReport verify_noise(bool quick);
VerifyReport verify_kernel(bool quick);
VerifyReport verify_nonlinear(bool quick);
VerifyReport verify_apriori(bool quick);

}  // namespace sel
