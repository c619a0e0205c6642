#include "sel/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace sel {

namespace {

double pairwise(const std::vector<double>& a, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(a, lo, mid) + pairwise(a, mid, hi);
}

double pairwise(const std::vector<double>& a) { return a.empty() ? 0.0 : pairwise(a, 0, a.size()); }

}  // namespace

void ParticleMeasure::validate() const {
    if (positions.size() != weights.size())
        throw std::invalid_argument("ParticleMeasure: positions/weights size mismatch");
    if (declared_mass_bound > 0.0) {
        double tv = sel::total_variation(*this);
        if (tv > declared_mass_bound * (1.0 + 1e-12))
            throw std::invalid_argument("ParticleMeasure: total variation exceeds declared bound");
    }
}

bool ParticleMeasure::all_nonnegative() const {
    return std::all_of(weights.begin(), weights.end(), [](double w) { return w >= 0.0; });
}

double ParticleMeasure::mass() const { return pairwise(weights); }

double ParticleMeasure::min_weight() const {
    return weights.empty() ? 0.0 : *std::min_element(weights.begin(), weights.end());
}

double total_variation(const ParticleMeasure& mu) {
    // Merge atoms at bitwise-identical reduced positions before taking |.|.
    std::map<std::pair<double, double>, double> merged;
    for (std::size_t j = 0; j < mu.size(); ++j)
        merged[{mu.positions[j].x1, mu.positions[j].x2}] += mu.weights[j];
    std::vector<double> mags;
    mags.reserve(merged.size());
    for (const auto& [pos, w] : merged) mags.push_back(std::abs(w));
    return pairwise(mags);
}

std::complex<double> fourier_coefficient(const ParticleMeasure& mu, Mode k) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        double t = k.dot(mu.positions[j]);
        re += mu.weights[j] * std::cos(t);
        im -= mu.weights[j] * std::sin(t);
    }
    double s = 1.0 / (kTwoPi * kTwoPi);
    return {re * s, im * s};
}

std::vector<std::complex<double>> particle_mode_table(const ParticleMeasure& mu, int cutoff) {
    const int w = 2 * cutoff + 1;
    std::vector<std::complex<double>> table(std::size_t(w) * w, 0.0);
    std::vector<std::complex<double>> p1(w), p2(w);
    for (std::size_t j = 0; j < mu.size(); ++j) {
        // phase rows e^{-i t x} built by recurrence, t = -cutoff..cutoff
        std::complex<double> e1 = std::polar(1.0, -mu.positions[j].x1);
        std::complex<double> e2 = std::polar(1.0, -mu.positions[j].x2);
        p1[cutoff] = 1.0;
        p2[cutoff] = 1.0;
        for (int t = 1; t <= cutoff; ++t) {
            p1[cutoff + t] = p1[cutoff + t - 1] * e1;
            p1[cutoff - t] = std::conj(p1[cutoff + t]);
            p2[cutoff + t] = p2[cutoff + t - 1] * e2;
            p2[cutoff - t] = std::conj(p2[cutoff + t]);
        }
        double wj = mu.weights[j];
        for (int a = 0; a < w; ++a) {
            std::complex<double> f = wj * p1[a];
            for (int b = 0; b < w; ++b) table[std::size_t(a) * w + b] += f * p2[b];
        }
    }
    double s = 1.0 / (kTwoPi * kTwoPi);
    for (auto& v : table) v *= s;
    return table;
}

double sobolev_norm_of_table(const std::vector<std::complex<double>>& table, int cutoff, double s) {
    const int w = 2 * cutoff + 1;
    std::vector<double> terms;
    terms.reserve(table.size());
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            double n2 = double(k1) * k1 + double(k2) * k2;
            if (n2 > double(cutoff) * cutoff) continue;
            auto v = table[std::size_t(k1 + cutoff) * w + (k2 + cutoff)];
            terms.push_back(std::pow(1.0 + n2, s) * std::norm(v));
        }
    return std::sqrt(pairwise(terms));
}

double sobolev_norm(const ParticleMeasure& mu, double s, int cutoff) {
    if (s > 0.0) throw std::invalid_argument("sobolev_norm: s must be <= 0");
    if (cutoff < 1) throw std::invalid_argument("sobolev_norm: cutoff must be >= 1");
    return sobolev_norm_of_table(particle_mode_table(mu, cutoff), cutoff, s);
}

double sobolev_norm(const GridField& f, double s, int cutoff) {
    if (s > 0.0) throw std::invalid_argument("sobolev_norm: s must be <= 0");
    if (cutoff < 1) throw std::invalid_argument("sobolev_norm: cutoff must be >= 1");
    cutoff = std::min(cutoff, f.n / 2);
    Spectrum spec = analyze(f);
    std::vector<double> terms;
    for_modes_in_disc(f.n, cutoff, [&](int a, int b, Mode k) {
        terms.push_back(std::pow(1.0 + k.norm2(), s) * std::norm(spec.at(a, b)));
    });
    return std::sqrt(pairwise(terms));
}

double TestMode::eval(TorusPoint x) const {
    double t = k.dot(x);
    return is_sin ? std::sin(t) : std::cos(t);
}

Vec2 TestMode::grad(TorusPoint x) const {
    double t = k.dot(x);
    double d = is_sin ? std::cos(t) : -std::sin(t);
    return {k.k1 * d, k.k2 * d};
}

double TestMode::laplacian(TorusPoint x) const { return -k.norm2() * eval(x); }

TestFamily TestFamily::standard(int count) {
    TestFamily fam;
    fam.modes.push_back({{0, 0}, false});  // constant 1
    // half-lattice representatives, sorted by |k| then lexicographically
    std::vector<Mode> half;
    int reach = 8;
    for (int k1 = 0; k1 <= reach; ++k1)
        for (int k2 = -reach; k2 <= reach; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            half.push_back({k1, k2});
        }
    std::sort(half.begin(), half.end(), [](Mode a, Mode b) {
        return std::array{a.norm2(), double(a.k1), double(a.k2)} <
               std::array{b.norm2(), double(b.k1), double(b.k2)};
    });
    for (Mode k : half) {
        if (int(fam.modes.size()) >= count) break;
        fam.modes.push_back({k, false});
        if (int(fam.modes.size()) >= count) break;
        fam.modes.push_back({k, true});
    }
    return fam;
}

double MeasureRef::pair(const TestMode& phi) const {
    if (pm_) {
        std::vector<double> terms(pm_->size());
        for (std::size_t j = 0; j < pm_->size(); ++j)
            terms[j] = pm_->weights[j] * phi.eval(pm_->positions[j]);
        return pairwise(terms);
    }
    const GridField& g = *gf_;
    std::vector<double> terms(g.v.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) terms[std::size_t(i) * g.n + j] = g.at(i, j) * phi.eval(g.point(i, j));
    return g.cell_area() * pairwise(terms);
}

double MeasureRef::mass() const { return pm_ ? pm_->mass() : gf_->integral(); }

double MeasureRef::total_variation() const { return pm_ ? sel::total_variation(*pm_) : gf_->l1_norm(); }

std::vector<double> family_pairings(const TestFamily& family, MeasureRef mu) {
    int reach = 0;
    for (const auto& m : family.modes)
        reach = std::max({reach, std::abs(m.k.k1), std::abs(m.k.k2)});
    std::vector<double> out(family.size());
    const double scale = kTwoPi * kTwoPi;
    if (mu.is_particle()) {
        auto table = particle_mode_table(*mu.particles(), reach);
        const int w = 2 * reach + 1;
        for (std::size_t j = 0; j < family.size(); ++j) {
            const TestMode& m = family.modes[j];
            auto v = table[std::size_t(m.k.k1 + reach) * w + (m.k.k2 + reach)];
            out[j] = m.is_sin ? -scale * v.imag() : scale * v.real();
        }
    } else {
        Spectrum spec = analyze(*mu.grid());
        for (std::size_t j = 0; j < family.size(); ++j) {
            const TestMode& m = family.modes[j];
            auto v = spec.mode(m.k.k1, m.k.k2);
            out[j] = m.is_sin ? -scale * v.imag() : scale * v.real();
        }
    }
    return out;
}

double weakstar_distance(MeasureRef mu, MeasureRef nu, const TestFamily& family) {
    for (const MeasureRef& m : {mu, nu}) {
        const ParticleMeasure* pm = m.particles();
        if (pm && pm->declared_mass_bound > 0.0 &&
            sel::total_variation(*pm) > pm->declared_mass_bound * (1.0 + 1e-12))
            throw std::invalid_argument("weakstar_distance: measure outside its declared mass ball");
    }
    auto pa = family_pairings(family, mu);
    auto pb = family_pairings(family, nu);
    double d = 0.0;
    for (std::size_t j = 0; j < family.size(); ++j) d += family.weight(j) * std::abs(pa[j] - pb[j]);
    return d;
}

GridField mollify(const ParticleMeasure& mu, double epsilon, int resolution) {
    if (epsilon <= 0.0) throw std::invalid_argument("mollify: epsilon must be > 0");
    if (epsilon * resolution < 4.0)
        throw std::invalid_argument("mollify: resolution too coarse (epsilon * resolution < 4)");
    const int n = resolution;
    Spectrum s(n);
    // rank-1 phase accumulation per atom over the full grid band
    std::vector<std::complex<double>> p1(n), p2(n);
    for (std::size_t j = 0; j < mu.size(); ++j) {
        std::complex<double> e1 = std::polar(1.0, -mu.positions[j].x1);
        std::complex<double> e2 = std::polar(1.0, -mu.positions[j].x2);
        p1[0] = 1.0;
        p2[0] = 1.0;
        for (int t = 1; t <= n / 2; ++t) {
            p1[t] = p1[t - 1] * e1;
            p2[t] = p2[t - 1] * e2;
            if (t < n / 2) {
                p1[n - t] = std::conj(p1[t]);
                p2[n - t] = std::conj(p2[t]);
            }
        }
        double w = mu.weights[j];
        for (int a = 0; a < n; ++a) {
            std::complex<double> f = w * p1[a];
            for (int b = 0; b < n; ++b) s.c[std::size_t(a) * n + b] += f * p2[b];
        }
    }
    const double scale = 1.0 / (kTwoPi * kTwoPi);
    for (auto& v : s.c) v *= scale;
    // exact mass at mode 0, Gaussian damping elsewhere, Nyquist dropped
    s.c[0] = mu.mass() * scale;
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            if (k1 == 0 && k2 == 0) continue;
            if (std::abs(k1) == n / 2 || std::abs(k2) == n / 2) {
                s.at(a, b) = 0.0;
                continue;
            }
            double n2 = double(k1) * k1 + double(k2) * k2;
            s.at(a, b) *= std::exp(-0.5 * epsilon * epsilon * n2);
        }
    }
    return synthesize(s);
}

ParticleMeasure mollify_particles(const ParticleMeasure& mu, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("mollify_particles: epsilon must be > 0");
    // 3-point Gauss-Hermite rule for the unit Gaussian: nodes 0, +-sqrt(3),
    // weights 2/3, 1/6, 1/6.
    const double node = std::sqrt(3.0);
    const double offs[3] = {-node, 0.0, node};
    const double wts[3] = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    ParticleMeasure out;
    out.declared_mass_bound = mu.declared_mass_bound;
    out.positions.reserve(mu.size() * 9);
    out.weights.reserve(mu.size() * 9);
    for (std::size_t j = 0; j < mu.size(); ++j) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                out.positions.push_back(mu.positions[j].shifted({epsilon * offs[a], epsilon * offs[b]}));
                out.weights.push_back(mu.weights[j] * wts[a] * wts[b]);
            }
    }
    return out;
}

ParticleMeasure sample_vortex_sheet(const CurveSpec& curve, int n, double total_mass) {
    if (n < 2) throw std::invalid_argument("sample_vortex_sheet: need n >= 2");
    if (total_mass < 0.0) throw std::invalid_argument("sample_vortex_sheet: total_mass must be >= 0");
    ParticleMeasure mu;
    mu.declared_mass_bound = total_mass;
    mu.weights.assign(std::size_t(n), total_mass / n);
    switch (curve.kind) {
        case CurveSpec::Kind::circle: {
            if (!(curve.radius > 0.0 && curve.radius < kPi))
                throw std::invalid_argument("sample_vortex_sheet: circle radius must be in (0, pi)");
            for (int j = 0; j < n; ++j) {
                double th = kTwoPi * j / n;
                mu.positions.push_back(TorusPoint::wrap(curve.center.x1 + curve.radius * std::cos(th),
                                                        curve.center.x2 + curve.radius * std::sin(th)));
            }
            break;
        }
        case CurveSpec::Kind::segment: {
            Vec2 d = displacement(curve.b, curve.a);
            if (d.norm() == 0.0)
                throw std::invalid_argument("sample_vortex_sheet: degenerate segment");
            for (int j = 0; j < n; ++j) {
                double t = (j + 0.5) / n;  // midpoint partition
                mu.positions.push_back(curve.a.shifted(d * t));
            }
            break;
        }
    }
    return mu;
}

ParticleMeasure particles_from_grid(const GridField& f, double mass_bound) {
    ParticleMeasure mu;
    mu.declared_mass_bound = mass_bound;
    double area = f.cell_area();
    mu.positions.reserve(f.v.size());
    mu.weights.reserve(f.v.size());
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) {
            mu.positions.push_back(f.point(i, j));
            mu.weights.push_back(f.at(i, j) * area);
        }
    return mu;
}

void save_particles_jsonl(const std::string& path, const ParticleMeasure& mu) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_particles_jsonl: cannot open " + path);
    nlohmann::ordered_json header;
    header["kind"] = "particle_measure";
    header["mass_bound"] = mu.declared_mass_bound;
    header["count"] = mu.size();
    os << header.dump() << "\n";
    for (std::size_t j = 0; j < mu.size(); ++j) {
        nlohmann::ordered_json rec;
        rec["x1"] = mu.positions[j].x1;
        rec["x2"] = mu.positions[j].x2;
        rec["w"] = mu.weights[j];
        os << rec.dump() << "\n";
    }
    if (!os) throw std::runtime_error("save_particles_jsonl: write failed for " + path);
}

ParticleMeasure load_particles_jsonl(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_particles_jsonl: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("load_particles_jsonl: empty file " + path);
    auto header = nlohmann::json::parse(line);
    if (header.value("kind", "") != "particle_measure")
        throw std::runtime_error("load_particles_jsonl: not a particle measure file: " + path);
    ParticleMeasure mu;
    mu.declared_mass_bound = header.value("mass_bound", 0.0);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto rec = nlohmann::json::parse(line);
        mu.positions.push_back(TorusPoint::wrap(rec.at("x1").get<double>(), rec.at("x2").get<double>()));
        mu.weights.push_back(rec.at("w").get<double>());
    }
    mu.validate();
    return mu;
}

}  // namespace sel
