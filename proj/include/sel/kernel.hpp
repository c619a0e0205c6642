#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sel/grid.hpp"
#include "sel/torus.hpp"

namespace sel {

/// Spectral multiplier of the inverse Laplacian on mean-zero functions:
/// -1/|k|^2 for k != 0, and 0 at k = 0 (zero-mean convention).
inline double green_coefficient(Mode k) {
    double n2 = k.norm2();
    return n2 == 0.0 ? 0.0 : -1.0 / n2;
}

/// Truncated Fourier synthesis of the Biot-Savart kernel grad^perp G:
///   K(x) = (2pi)^{-2} sum_{0<|k|<=cutoff} (k^perp / |k|^2) sin(k.x),
/// with k^perp = (-k2, k1). Odd in x term by term. The argument is a raw
/// displacement vector (typically the [-pi,pi)^2 representative).
Vec2 kernel_eval(Vec2 x, int cutoff);

/// Samples of K on a uniform grid plus a periodic bicubic B-spline
/// interpolant (O(h^4), C^2). The sample array is exactly antisymmetric
/// under x -> -x and zero at the origin.
class KernelTable {
  public:
    KernelTable() = default;
    KernelTable(int resolution, int cutoff, std::vector<double> samples);

    int resolution() const { return resolution_; }
    int cutoff() const { return cutoff_; }
    double cell() const { return kTwoPi / resolution_; }
    Vec2 sample(int i, int j) const;

    /// Interpolated K at a raw displacement (wrapped internally).
    Vec2 operator()(Vec2 x) const;

    /// Flat binary format: "SEKT", version u32, resolution u32, cutoff u32,
    /// then row-major float64 (Kx, Ky) pairs.
    void save(const std::string& path) const;
    static KernelTable load(const std::string& path);

  private:
    void build_coefficients();

    int resolution_ = 0;
    int cutoff_ = 0;
    std::vector<double> samples_;  // 2 per node
    std::vector<double> coeff_;    // B-spline coefficients, same layout
};

/// Samples kernel_eval on the grid (spectral synthesis, exact up to
/// rounding) and prepares the interpolant.
/// Requires resolution a power of two >= 64 and cutoff <= resolution/2.
KernelTable build_kernel_table(int resolution, int cutoff);

/// Both components of K sampled on an n x n grid at the given cutoff.
std::pair<GridField, GridField> kernel_grid(int n, int cutoff);

/// u(k) = -i (k^perp/|k|^2) xi(k) for k != 0, u(0) = 0; Nyquist modes are
/// dropped (no well-defined derivative there). Output is divergence-free,
/// mean-zero, and curl u = xi - mean(xi).
std::pair<Spectrum, Spectrum> velocity_spectrum(const Spectrum& xi);
std::pair<GridField, GridField> velocity_from_vorticity(const GridField& xi);

}  // namespace sel
