#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sel/grid.hpp"
#include "sel/torus.hpp"

namespace sel {

/// Weighted point-vortex cloud representing a vorticity measure.
struct ParticleMeasure {
    std::vector<TorusPoint> positions;
    std::vector<double> weights;  // signed
    double declared_mass_bound = 0.0;

    std::size_t size() const { return positions.size(); }
    /// Throws if sizes mismatch or sum |w| exceeds the declared bound.
    void validate() const;
    bool all_nonnegative() const;
    /// sum w_j (pairwise summation; exact mass functional).
    double mass() const;
    double min_weight() const;
};

/// sum |w_j| with coincident atoms (bitwise equal reduced positions) merged
/// first.
double total_variation(const ParticleMeasure& mu);

/// muhat(k) = (2pi)^{-2} sum_j w_j e^{-i k.x_j}.
std::complex<double> fourier_coefficient(const ParticleMeasure& mu, Mode k);

/// Dense table of muhat over the square |k1|,|k2| <= cutoff,
/// index (k1 + cutoff) * (2 cutoff + 1) + (k2 + cutoff).
std::vector<std::complex<double>> particle_mode_table(const ParticleMeasure& mu, int cutoff);

/// Truncated negative Sobolev norm under the frozen convention:
/// ( sum_{|k|<=cutoff} (1+|k|^2)^s |muhat(k)|^2 )^{1/2}, s <= 0.
double sobolev_norm(const ParticleMeasure& mu, double s, int cutoff);
double sobolev_norm(const GridField& f, double s, int cutoff);
double sobolev_norm_of_table(const std::vector<std::complex<double>>& table, int cutoff, double s);

/// One sine/cosine test mode phi(x) = cos(k.x) or sin(k.x) (sup norm 1).
struct TestMode {
    Mode k;
    bool is_sin = false;

    double eval(TorusPoint x) const;
    Vec2 grad(TorusPoint x) const;
    double laplacian(TorusPoint x) const;
    double lipschitz() const { return std::sqrt(k.norm2()); }
};

/// The weak-* metric family: constant first, then cos/sin of half-lattice
/// modes ordered by |k| then lexicographically; d = sum_j 2^{-j} |<mu-nu, phi_j>|.
struct TestFamily {
    std::vector<TestMode> modes;

    static TestFamily standard(int count = 40);
    std::size_t size() const { return modes.size(); }
    double weight(std::size_t j) const { return std::ldexp(1.0, -int(j) - 1); }  // 2^{-(j+1)}
};

/// Non-owning view of a measure in either representation.
class MeasureRef {
  public:
    MeasureRef(const ParticleMeasure& m) : pm_(&m) {}
    MeasureRef(const GridField& g) : gf_(&g) {}

    bool is_particle() const { return pm_ != nullptr; }
    const ParticleMeasure* particles() const { return pm_; }
    const GridField* grid() const { return gf_; }

    double pair(const TestMode& phi) const;  // <mu, phi>
    double mass() const;
    double total_variation() const;

  private:
    const ParticleMeasure* pm_ = nullptr;
    const GridField* gf_ = nullptr;
};

/// <mu, phi_j> for every family member, evaluated through Fourier
/// coefficients (identical to the direct quadrature up to rounding).
std::vector<double> family_pairings(const TestFamily& family, MeasureRef mu);

double weakstar_distance(MeasureRef mu, MeasureRef nu, const TestFamily& family);

/// Periodic-heat-kernel smoothing synthesized on a grid: coefficients
/// muhat(k) e^{-eps^2 |k|^2 / 2}, mode 0 untouched (mass preserved exactly).
/// The nonnegativity floor (-1e-12 for nonnegative input) requires the
/// Gaussian tail at the grid band to be below the floor, i.e. eps*resolution
/// comfortably above the minimum enforced here.
/// Throws if eps <= 0 or eps * resolution < 4 (aliasing).
GridField mollify(const ParticleMeasure& mu, double epsilon, int resolution);

/// Particle-side heat-kernel smoothing: each atom is replaced by a 3x3
/// Gauss-Hermite cloud at scale eps. Mass and sign are preserved exactly.
ParticleMeasure mollify_particles(const ParticleMeasure& mu, double epsilon);

struct CurveSpec {
    enum class Kind { circle, segment };
    Kind kind = Kind::circle;
    TorusPoint center{kPi, kPi};
    double radius = 1.0;          // circle
    TorusPoint a{kPi / 2, kPi};   // segment endpoints
    TorusPoint b{3 * kPi / 2, kPi};
};

/// n equal-arclength atoms of weight total_mass/n on a preset C^1 curve.
/// Circle radius must lie in (0, pi) so the curve is embedded.
ParticleMeasure sample_vortex_sheet(const CurveSpec& curve, int n, double total_mass);

/// Cell atoms w = f * cell_area at grid nodes.
ParticleMeasure particles_from_grid(const GridField& f, double mass_bound);

/// JSON-lines: header record {"kind","mass_bound","count"}, then one
/// {"x1","x2","w"} per atom.
void save_particles_jsonl(const std::string& path, const ParticleMeasure& mu);
ParticleMeasure load_particles_jsonl(const std::string& path);

}  // namespace sel
