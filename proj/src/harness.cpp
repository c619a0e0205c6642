#include "sel/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace sel {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::complex<double>> spectrum_block(const Spectrum& s, int cutoff) {
    const int w = 2 * cutoff + 1;
    std::vector<std::complex<double>> block(std::size_t(w) * w, 0.0);
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
        for (int k2 = -cutoff; k2 <= cutoff; ++k2)
            block[std::size_t(k1 + cutoff) * w + (k2 + cutoff)] = s.mode(k1, k2);
    return block;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

}  // namespace

SolverKind solver_from_string(const std::string& s) {
    if (s == "particle") return SolverKind::particle;
    if (s == "spectral") return SolverKind::spectral;
    if (s == "both") return SolverKind::both;
    throw std::invalid_argument("unknown solver '" + s + "' (particle|spectral|both)");
}

std::string to_string(SolverKind s) {
    switch (s) {
        case SolverKind::particle: return "particle";
        case SolverKind::spectral: return "spectral";
        case SolverKind::both: return "both";
    }
    return "?";
}

int worker_pool_size() {
    if (const char* env = std::getenv("SEL_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

ParticleMeasure make_initial_particles(const RunConfig& cfg) {
    ParticleMeasure mu;
    if (cfg.init_kind == "sheet_circle") {
        CurveSpec spec;
        spec.kind = CurveSpec::Kind::circle;
        spec.radius = cfg.init_radius;
        mu = sample_vortex_sheet(spec, cfg.sim_particles, cfg.init_mass);
    } else if (cfg.init_kind == "sheet_segment") {
        CurveSpec spec;
        spec.kind = CurveSpec::Kind::segment;
        mu = sample_vortex_sheet(spec, cfg.sim_particles, cfg.init_mass);
    } else if (cfg.init_kind == "blob_grid") {
        int r = std::max(8, int(std::lround(std::sqrt(double(cfg.sim_particles)))));
        mu = particles_from_grid(make_initial_field(cfg), cfg.init_mass_bound);
        (void)r;
    } else if (cfg.init_kind == "file") {
        mu = load_particles_jsonl(cfg.init_file);
    } else {
        throw ConfigError("init.kind '" + cfg.init_kind + "' not usable for the particle solver");
    }
    mu.declared_mass_bound = cfg.init_mass_bound;
    mu.validate();
    return mu;
}

GridField make_initial_field(const RunConfig& cfg) {
    const int n = cfg.spectral_resolution;
    if (cfg.init_kind == "blob_grid") {
        // smooth, non-negative, multi-shell (not a steady state)
        GridField f(n);
        double amp = cfg.init_mass / (kTwoPi * kTwoPi);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                TorusPoint p = f.point(i, j);
                f.at(i, j) =
                    amp * (1.0 + 0.5 * std::cos(p.x1) * std::cos(p.x2) + 0.3 * std::cos(2.0 * p.x1));
            }
        return f;
    }
    if (cfg.init_kind == "sheet_circle" || cfg.init_kind == "sheet_segment" || cfg.init_kind == "file") {
        RunConfig pc = cfg;
        ParticleMeasure sheet = make_initial_particles(pc);
        return mollify(sheet, cfg.init_epsilon, n);
    }
    throw ConfigError("init.kind '" + cfg.init_kind + "' not usable for the spectral solver");
}

MemberArtifacts run_member_particle(const RunConfig& cfg, uint64_t base_seed, uint64_t member,
                                    const KernelTable& table, const NoiseBasis& basis,
                                    const MemberOptions& opts) {
    MemberArtifacts art;
    try {
        ensure_dir(opts.out_dir);
        ParticleMeasure init = make_initial_particles(cfg);
        art.initial_max = init.weights.empty()
                              ? 0.0
                              : *std::max_element(init.weights.begin(), init.weights.end());
        TestFamily family = TestFamily::standard();
        CounterRng rng(base_seed, member);
        SimState state;
        state.particles = init;
        StepPlan plan{cfg.sim_dt, cfg.blob_radius_effective(), cfg.noise_enabled};
        auto on_record = [&](const SimState& st) {
            art.times.push_back(st.t);
            art.diag.push_back(
                record_particles(st.particles, init, family, cfg.output_sobolev_cutoff, st.t));
            if (opts.collect_holder)
                art.holder_blocks.push_back(particle_mode_table(st.particles, opts.holder_cutoff));
            if (!opts.out_dir.empty() && cfg.output_snapshots) {
                char name[64];
                std::snprintf(name, sizeof name, "snap_%06llu.jsonl",
                              (unsigned long long)st.step_index);
                save_particles_jsonl(opts.out_dir + "/" + name, st.particles);
            }
        };
        run_particle(state, plan, table, basis, rng, cfg.sim_T, cfg.output_every, on_record);
        if (!opts.out_dir.empty()) write_diag_csv(opts.out_dir + "/diag.csv", art.times, art.diag);
    } catch (const std::exception& e) {
        art.failed = true;
        art.error = e.what();
    }
    return art;
}

MemberArtifacts run_member_spectral(const RunConfig& cfg, uint64_t base_seed, uint64_t member,
                                    const NoiseBasis& basis, const MemberOptions& opts) {
    MemberArtifacts art;
    try {
        ensure_dir(opts.out_dir);
        GridField init = make_initial_field(cfg);
        art.initial_max = init.max_value();
        TestFamily family = TestFamily::standard();
        CounterRng rng(base_seed, member);
        SpectralState state = make_spectral_state(init);
        SpectralStepOptions sopts;
        sopts.advection = cfg.spectral_advection;
        sopts.noise_on = cfg.noise_enabled;
        sopts.c = cfg.noise_enabled ? basis.c() : 0.0;
        long steps = std::lround(cfg.sim_T / cfg.sim_dt);
        auto on_record = [&](const SpectralState& st) {
            GridField cur = synthesize(st.xi);
            art.times.push_back(st.t);
            art.diag.push_back(record_grid(cur, init, family, cfg.output_sobolev_cutoff, st.t));
            if (opts.collect_holder) art.holder_blocks.push_back(spectrum_block(st.xi, opts.holder_cutoff));
            if (!opts.out_dir.empty() && cfg.output_snapshots) {
                char name[64];
                std::snprintf(name, sizeof name, "snap_%06llu", (unsigned long long)st.step_index);
                write_grid_snapshot(opts.out_dir + "/" + name, cur, st.t);
            }
        };
        on_record(state);
        for (long s = 0; s < steps; ++s) {
            auto dW = sample_noise_increment(basis, sopts.noise_on ? cfg.sim_dt : 0.0, rng,
                                             state.step_index);
            step_ito(state, cfg.sim_dt, dW, basis, sopts);
            if ((s + 1) % cfg.output_every == 0 || s + 1 == steps) on_record(state);
        }
        if (!opts.out_dir.empty()) write_diag_csv(opts.out_dir + "/diag.csv", art.times, art.diag);
    } catch (const std::exception& e) {
        art.failed = true;
        art.error = e.what();
    }
    return art;
}

CrossRunResult run_cross(const RunConfig& cfg, uint64_t base_seed, uint64_t member,
                         const KernelTable& table, const NoiseBasis& basis,
                         const std::string& out_dir) {
    CrossRunResult res;
    ensure_dir(out_dir);
    ParticleMeasure pinit = make_initial_particles(cfg);
    GridField ginit = make_initial_field(cfg);
    TestFamily family = TestFamily::standard();
    CounterRng rng(base_seed, member);

    SimState pstate;
    pstate.particles = pinit;
    StepPlan plan{cfg.sim_dt, cfg.blob_radius_effective(), cfg.noise_enabled};
    SpectralState sstate = make_spectral_state(ginit);
    SpectralStepOptions sopts;
    sopts.advection = cfg.spectral_advection;
    sopts.noise_on = cfg.noise_enabled;
    sopts.c = cfg.noise_enabled ? basis.c() : 0.0;

    auto record = [&]() {
        GridField cur = synthesize(sstate.xi);
        res.times.push_back(pstate.t);
        res.weak_distance.push_back(weakstar_distance(pstate.particles, cur, family));
    };
    record();
    long steps = std::lround(cfg.sim_T / cfg.sim_dt);
    for (long s = 0; s < steps; ++s) {
        // one shared increment vector drives both solvers
        auto dW = sample_noise_increment(basis, cfg.noise_enabled ? cfg.sim_dt : 0.0, rng,
                                         pstate.step_index);
        step(pstate, plan, table, basis, dW);
        step_ito(sstate, cfg.sim_dt, dW, basis, sopts);
        if ((s + 1) % cfg.output_every == 0 || s + 1 == steps) record();
    }
    if (!out_dir.empty()) {
        std::ofstream os(out_dir + "/cross.csv");
        os << "t,weakstar_distance\n";
        for (std::size_t i = 0; i < res.times.size(); ++i)
            os << fmt(res.times[i]) << "," << fmt(res.weak_distance[i]) << "\n";
    }
    return res;
}

EnsembleOutcome run_ensemble(const EnsembleSpec& spec, const RunConfig& cfg,
                             const std::string& out_root, const MemberOptions& opts) {
    if (spec.members < 1) throw std::invalid_argument("run_ensemble: members must be >= 1");
    ensure_dir(out_root);
    NoiseBasis basis = make_basis(cfg.noise_beta, cfg.noise_cutoff);
    KernelTable table;
    if (spec.solver != SolverKind::spectral)
        table = build_kernel_table(cfg.sim_kernel_table_resolution, cfg.sim_kernel_cutoff);

    std::vector<MemberArtifacts> arts(spec.members);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int m = next.fetch_add(1);
            if (m >= spec.members) break;
            MemberOptions mo = opts;
            if (!out_root.empty()) {
                char sub[32];
                std::snprintf(sub, sizeof sub, "member_%03d", m);
                mo.out_dir = out_root + "/" + sub;
            }
            if (spec.solver == SolverKind::spectral)
                arts[m] = run_member_spectral(cfg, spec.base_seed, m, basis, mo);
            else
                arts[m] = run_member_particle(cfg, spec.base_seed, m, table, basis, mo);
        }
    };
    int pool = std::min(worker_pool_size(), spec.members);
    std::vector<std::thread> threads;
    for (int i = 1; i < pool; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    EnsembleOutcome out;
    out.holder.cutoff = opts.holder_cutoff;
    for (int m = 0; m < spec.members; ++m) {
        if (arts[m].failed) {
            out.member_errors.push_back("member " + std::to_string(m) + ": " + arts[m].error);
            continue;
        }
        if (out.series.times.empty()) {
            out.series.times = arts[m].times;
            out.holder.times = arts[m].times;
        }
        out.series.members.push_back(std::move(arts[m].diag));
        if (opts.collect_holder) out.holder.blocks.push_back(std::move(arts[m].holder_blocks));
    }
    if (!out.series.members.empty()) out.summary = summarize(out.series);
    if (!out_root.empty()) {
        write_summary_csv(out_root + "/summary.csv", out.summary);
        std::ofstream os(out_root + "/manifest.json");
        os << manifest_json(cfg, basis, spec.solver, spec.base_seed, spec.members) << "\n";
    }
    return out;
}

void write_diag_csv(const std::string& path, const std::vector<double>& times,
                    const std::vector<DiagnosticsRecord>& diag) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_diag_csv: cannot open " + path);
    os << "t,mass,min_weight,tv_norm,energy,enstrophy,hminus1_trunc,hminus4_trunc,weakstar_dist_to_"
          "init\n";
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const auto& r = diag[i];
        os << fmt(times[i]) << "," << fmt(r.mass) << "," << fmt(r.min_weight) << "," << fmt(r.tv_norm)
           << "," << fmt(r.energy) << "," << fmt(r.enstrophy) << "," << fmt(r.hminus1_trunc) << ","
           << fmt(r.hminus4_trunc) << "," << fmt(r.weakstar_dist_to_init) << "\n";
    }
}

void write_summary_csv(const std::string& path, const EnsembleSummary& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_summary_csv: cannot open " + path);
    os << "t";
    for (const char* name : {"mass", "min_weight", "tv_norm", "energy", "enstrophy", "hminus1",
                             "hminus4", "weakstar"})
        os << ",mean_" << name << ",se_" << name;
    os << "\n";
    auto put = [&](const MeanSe& m) { os << "," << fmt(m.mean) << "," << fmt(m.se); };
    for (std::size_t t = 0; t < s.times.size(); ++t) {
        os << fmt(s.times[t]);
        put(s.mass[t]);
        put(s.min_weight[t]);
        put(s.tv_norm[t]);
        put(s.energy[t]);
        put(s.enstrophy[t]);
        put(s.hminus1[t]);
        put(s.hminus4[t]);
        put(s.wdist[t]);
        os << "\n";
    }
}

std::string manifest_json(const RunConfig& cfg, const NoiseBasis& basis, SolverKind solver,
                          uint64_t base_seed, int members) {
    nlohmann::ordered_json j;
    j["format"] = "sel-manifest";
    j["code_version"] = "0.1.0";
    j["solver"] = to_string(solver);
    j["base_seed"] = base_seed;
    j["members"] = members;
    nlohmann::ordered_json c;
    c["sim"]["dt"] = cfg.sim_dt;
    c["sim"]["T"] = cfg.sim_T;
    c["sim"]["particles"] = cfg.sim_particles;
    c["sim"]["seed"] = cfg.sim_seed;
    c["sim"]["blob_radius"] = cfg.sim_blob_radius;
    c["sim"]["kernel_cutoff"] = cfg.sim_kernel_cutoff;
    c["sim"]["kernel_table_resolution"] = cfg.sim_kernel_table_resolution;
    c["noise"]["beta"] = cfg.noise_beta;
    c["noise"]["cutoff"] = cfg.noise_cutoff;
    c["noise"]["enabled"] = cfg.noise_enabled;
    c["spectral"]["resolution"] = cfg.spectral_resolution;
    c["spectral"]["enabled"] = cfg.spectral_enabled;
    c["spectral"]["advection"] = cfg.spectral_advection;
    c["init"]["kind"] = cfg.init_kind;
    c["init"]["mass"] = cfg.init_mass;
    c["init"]["mass_bound"] = cfg.init_mass_bound;
    c["init"]["epsilon"] = cfg.init_epsilon;
    c["init"]["radius"] = cfg.init_radius;
    c["init"]["file"] = cfg.init_file;
    c["output"]["every"] = cfg.output_every;
    c["output"]["dir"] = cfg.output_dir;
    c["output"]["sobolev_cutoff"] = cfg.output_sobolev_cutoff;
    c["output"]["snapshots"] = cfg.output_snapshots;
    j["config"] = c;
    j["noise_basis"]["mode_count"] = basis.size();
    j["noise_basis"]["c_measured"] = basis.c();
    j["noise_basis"]["c_effective"] = cfg.noise_enabled ? basis.c() : 0.0;
    j["noise_basis"]["c1_sum"] = basis.c1_sum();
    j["derived"]["blob_radius"] = cfg.blob_radius_effective();
    j["derived"]["dealias"] = cfg.spectral_resolution / 3;
    return j.dump(2);
}

void write_grid_snapshot(const std::string& path_base, const GridField& f, double t) {
    {
        std::ofstream os(path_base + ".f64", std::ios::binary);
        os.write(reinterpret_cast<const char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
    }
    nlohmann::ordered_json j;
    j["kind"] = "grid_snapshot";
    j["resolution"] = f.n;
    j["t"] = t;
    j["layout"] = "row-major float64";
    std::ofstream os(path_base + ".json");
    os << j.dump() << "\n";
}

void write_verify_csv(const std::string& path, const VerifyReport& report) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_verify_csv: cannot open " + path);
    os << "case,metric,value,tolerance,pass\n";
    for (const auto& r : report.rows)
        os << r.case_name << "," << r.metric << "," << fmt(r.value) << "," << fmt(r.tolerance) << ","
           << (r.pass ? "1" : "0") << "\n";
}

}  // namespace sel
