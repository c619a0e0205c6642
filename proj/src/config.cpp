#include "sel/config.hpp"

#include "sel/torus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sel {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ", key '" + key + "': " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) fail(line, key, "expected a real number, got '" + v + "'");
        return d;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, key, "expected a real number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, int line, const std::string& key) {
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(line, key, "expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    fail(line, key, "expected a boolean, got '" + v + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&, int)>> setters;
    auto dbl = [&](const char* key, double* dst) {
        setters[key] = [dst, key](const std::string& v, int line) { *dst = parse_double(v, line, key); };
    };
    auto intk = [&](const char* key, int* dst) {
        setters[key] = [dst, key](const std::string& v, int line) {
            *dst = int(parse_int(v, line, key));
        };
    };
    auto boolk = [&](const char* key, bool* dst) {
        setters[key] = [dst, key](const std::string& v, int line) { *dst = parse_bool(v, line, key); };
    };
    auto strk = [&](const char* key, std::string* dst) {
        setters[key] = [dst](const std::string& v, int) { *dst = v; };
    };

    dbl("sim.dt", &cfg.sim_dt);
    dbl("sim.T", &cfg.sim_T);
    intk("sim.particles", &cfg.sim_particles);
    setters["sim.seed"] = [&cfg](const std::string& v, int line) {
        cfg.sim_seed = uint64_t(parse_int(v, line, "sim.seed"));
    };
    dbl("sim.blob_radius", &cfg.sim_blob_radius);
    intk("sim.kernel_cutoff", &cfg.sim_kernel_cutoff);
    intk("sim.kernel_table_resolution", &cfg.sim_kernel_table_resolution);
    dbl("noise.beta", &cfg.noise_beta);
    intk("noise.cutoff", &cfg.noise_cutoff);
    boolk("noise.enabled", &cfg.noise_enabled);
    intk("spectral.resolution", &cfg.spectral_resolution);
    boolk("spectral.enabled", &cfg.spectral_enabled);
    boolk("spectral.advection", &cfg.spectral_advection);
    strk("init.kind", &cfg.init_kind);
    dbl("init.mass", &cfg.init_mass);
    dbl("init.mass_bound", &cfg.init_mass_bound);
    dbl("init.epsilon", &cfg.init_epsilon);
    dbl("init.radius", &cfg.init_radius);
    strk("init.file", &cfg.init_file);
    intk("output.every", &cfg.output_every);
    strk("output.dir", &cfg.output_dir);
    intk("output.sobolev_cutoff", &cfg.output_sobolev_cutoff);
    boolk("output.snapshots", &cfg.output_snapshots);

    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                                   ": malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value, got '" +
                              s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        std::string full = key.find('.') != std::string::npos || section.empty()
                               ? key
                               : section + "." + key;
        auto it = setters.find(full);
        if (it == setters.end())
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + full + "'");
        it->second(value, lineno);
    }

    // constraint validation
    auto require = [](bool ok, const std::string& key, const std::string& msg) {
        if (!ok) throw ConfigError("config key '" + key + "': " + msg);
    };
    require(cfg.sim_dt > 0.0, "sim.dt", "must be > 0");
    require(cfg.sim_T >= 0.0, "sim.T", "must be >= 0");
    require(cfg.sim_particles >= 1, "sim.particles", "must be >= 1");
    require(cfg.sim_blob_radius >= 0.0, "sim.blob_radius", "must be >= 0");
    require(cfg.sim_kernel_cutoff >= 1, "sim.kernel_cutoff", "must be >= 1");
    require(cfg.sim_kernel_table_resolution >= 64 &&
                (cfg.sim_kernel_table_resolution & (cfg.sim_kernel_table_resolution - 1)) == 0,
            "sim.kernel_table_resolution", "must be a power of two >= 64");
    require(cfg.sim_kernel_cutoff <= cfg.sim_kernel_table_resolution / 2, "sim.kernel_cutoff",
            "must be <= kernel_table_resolution/2 (aliasing)");
    require(cfg.noise_beta > 3.0, "noise.beta",
            "must be > 3 (the C^1 sum of the noise basis diverges otherwise)");
    require(cfg.noise_cutoff >= 1, "noise.cutoff", "must be >= 1");
    require(cfg.spectral_resolution >= 16 &&
                (cfg.spectral_resolution & (cfg.spectral_resolution - 1)) == 0,
            "spectral.resolution", "must be a power of two >= 16");
    require(cfg.init_kind == "sheet_circle" || cfg.init_kind == "sheet_segment" ||
                cfg.init_kind == "blob_grid" || cfg.init_kind == "file",
            "init.kind", "must be one of sheet_circle, sheet_segment, blob_grid, file");
    require(cfg.init_mass >= 0.0, "init.mass", "must be >= 0");
    require(cfg.init_mass_bound >= cfg.init_mass, "init.mass_bound", "must be >= init.mass");
    require(cfg.init_epsilon > 0.0, "init.epsilon", "must be > 0");
    require(cfg.init_radius > 0.0 && cfg.init_radius < kPi, "init.radius", "must be in (0, pi)");
    require(cfg.output_every >= 1, "output.every", "must be >= 1");
    require(cfg.output_sobolev_cutoff >= 1, "output.sobolev_cutoff", "must be >= 1");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[sim]\n";
    os << "dt = " << fmt_double(cfg.sim_dt) << "\n";
    os << "T = " << fmt_double(cfg.sim_T) << "\n";
    os << "particles = " << cfg.sim_particles << "\n";
    os << "seed = " << cfg.sim_seed << "\n";
    os << "blob_radius = " << fmt_double(cfg.sim_blob_radius) << "\n";
    os << "kernel_cutoff = " << cfg.sim_kernel_cutoff << "\n";
    os << "kernel_table_resolution = " << cfg.sim_kernel_table_resolution << "\n";
    os << "\n[noise]\n";
    os << "beta = " << fmt_double(cfg.noise_beta) << "\n";
    os << "cutoff = " << cfg.noise_cutoff << "\n";
    os << "enabled = " << (cfg.noise_enabled ? "true" : "false") << "\n";
    os << "\n[spectral]\n";
    os << "resolution = " << cfg.spectral_resolution << "\n";
    os << "enabled = " << (cfg.spectral_enabled ? "true" : "false") << "\n";
    os << "advection = " << (cfg.spectral_advection ? "true" : "false") << "\n";
    os << "\n[init]\n";
    os << "kind = " << cfg.init_kind << "\n";
    os << "mass = " << fmt_double(cfg.init_mass) << "\n";
    os << "mass_bound = " << fmt_double(cfg.init_mass_bound) << "\n";
    os << "epsilon = " << fmt_double(cfg.init_epsilon) << "\n";
    os << "radius = " << fmt_double(cfg.init_radius) << "\n";
    os << "file = " << cfg.init_file << "\n";
    os << "\n[output]\n";
    os << "every = " << cfg.output_every << "\n";
    os << "dir = " << cfg.output_dir << "\n";
    os << "sobolev_cutoff = " << cfg.output_sobolev_cutoff << "\n";
    os << "snapshots = " << (cfg.output_snapshots ? "true" : "false") << "\n";
    return os.str();
}

}  // namespace sel
