#include "sel/kernel.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "sel/fft.hpp"

namespace sel {

namespace {

constexpr double kInvFourPiSq = 1.0 / (kTwoPi * kTwoPi);

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Cardinal cubic B-spline weights for fractional offset u in [0,1),
// covering stencil points {-1, 0, 1, 2}.
inline void bspline_weights(double u, double w[4]) {
    double u2 = u * u, u3 = u2 * u;
    w[0] = (1.0 - 3.0 * u + 3.0 * u2 - u3) / 6.0;
    w[1] = (4.0 - 6.0 * u2 + 3.0 * u3) / 6.0;
    w[2] = (1.0 + 3.0 * u + 3.0 * u2 - 3.0 * u3) / 6.0;
    w[3] = u3 / 6.0;
}

}  // namespace

Vec2 kernel_eval(Vec2 x, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("kernel_eval: cutoff must be >= 1");
    // (k^perp/|k|^2) sin(k.x) is even under k -> -k, so sum a half lattice
    // twice. Term-wise sin(-t) = -sin(t) keeps oddness in x exact.
    double sx = 0.0, sy = 0.0;
    for (int k1 = 0; k1 <= cutoff; ++k1) {
        int k2lo = (k1 == 0) ? 1 : -cutoff;
        for (int k2 = k2lo; k2 <= cutoff; ++k2) {
            double n2 = double(k1) * k1 + double(k2) * k2;
            if (n2 > double(cutoff) * cutoff) continue;
            double s = std::sin(k1 * x.x + k2 * x.y) / n2;
            sx -= k2 * s;
            sy += k1 * s;
        }
    }
    return {2.0 * kInvFourPiSq * sx, 2.0 * kInvFourPiSq * sy};
}

std::pair<GridField, GridField> kernel_grid(int n, int cutoff) {
    Spectrum kx(n), ky(n);
    for_modes_in_disc(n, cutoff, [&](int a, int b, Mode k) {
        if (k.k1 == 0 && k.k2 == 0) return;
        // Khat(k) = -i k^perp (2pi)^{-2} / |k|^2
        double f = kInvFourPiSq / k.norm2();
        kx.at(a, b) = std::complex<double>(0.0, k.k2 * f);
        ky.at(a, b) = std::complex<double>(0.0, -k.k1 * f);
    });
    GridField gx = synthesize(kx);
    GridField gy = synthesize(ky);
    // Enforce the exact oddness of K on the sample grid (kills FFT rounding
    // asymmetry and pins the origin cell to zero).
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int im = (n - i) % n, jm = (n - j) % n;
            if (std::make_pair(i, j) > std::make_pair(im, jm)) continue;
            if (i == im && j == jm) {
                gx.at(i, j) = 0.0;
                gy.at(i, j) = 0.0;
                continue;
            }
            double ax = 0.5 * (gx.at(i, j) - gx.at(im, jm));
            double ay = 0.5 * (gy.at(i, j) - gy.at(im, jm));
            gx.at(i, j) = ax;
            gx.at(im, jm) = -ax;
            gy.at(i, j) = ay;
            gy.at(im, jm) = -ay;
        }
    }
    return {std::move(gx), std::move(gy)};
}

KernelTable::KernelTable(int resolution, int cutoff, std::vector<double> samples)
    : resolution_(resolution), cutoff_(cutoff), samples_(std::move(samples)) {
    if (samples_.size() != 2 * std::size_t(resolution_) * resolution_)
        throw std::invalid_argument("KernelTable: sample array has wrong size");
    build_coefficients();
}

Vec2 KernelTable::sample(int i, int j) const {
    std::size_t base = 2 * (std::size_t(i) * resolution_ + j);
    return {samples_[base], samples_[base + 1]};
}

void KernelTable::build_coefficients() {
    // Periodic B-spline prefilter: divide the spectrum by the filter
    // eigenvalues (4 + 2 cos(2pi k / n)) / 6 along each axis.
    int n = resolution_;
    std::vector<double> comp(std::size_t(n) * n);
    coeff_.assign(samples_.size(), 0.0);
    std::vector<std::complex<double>> spec, vals;
    std::vector<double> eig(n);
    for (int a = 0; a < n; ++a) eig[a] = (4.0 + 2.0 * std::cos(kTwoPi * a / n)) / 6.0;
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = samples_[2 * i + c];
        dft_forward(n, comp, spec);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) spec[std::size_t(a) * n + b] /= eig[a] * eig[b];
        dft_backward(n, spec, vals);
        for (std::size_t i = 0; i < comp.size(); ++i) coeff_[2 * i + c] = vals[i].real();
    }
}

Vec2 KernelTable::operator()(Vec2 x) const {
    const int n = resolution_;
    const double scale = n / kTwoPi;
    double tx = wrap_coordinate(x.x) * scale;
    double ty = wrap_coordinate(x.y) * scale;
    int i0 = int(tx), j0 = int(ty);
    if (i0 >= n) i0 = n - 1;  // guard against rounding at the wrap seam
    if (j0 >= n) j0 = n - 1;
    double wx[4], wy[4];
    bspline_weights(tx - i0, wx);
    bspline_weights(ty - j0, wy);
    double vx = 0.0, vy = 0.0;
    for (int a = 0; a < 4; ++a) {
        int i = (i0 - 1 + a + n) % n;
        double rowx = 0.0, rowy = 0.0;
        for (int b = 0; b < 4; ++b) {
            int j = (j0 - 1 + b + n) % n;
            std::size_t base = 2 * (std::size_t(i) * n + j);
            rowx += wy[b] * coeff_[base];
            rowy += wy[b] * coeff_[base + 1];
        }
        vx += wx[a] * rowx;
        vy += wx[a] * rowy;
    }
    return {vx, vy};
}

KernelTable build_kernel_table(int resolution, int cutoff) {
    if (!is_power_of_two(resolution) || resolution < 64)
        throw std::invalid_argument("build_kernel_table: resolution must be a power of two >= 64");
    if (cutoff < 1) throw std::invalid_argument("build_kernel_table: cutoff must be >= 1");
    if (cutoff > resolution / 2)
        throw std::invalid_argument("build_kernel_table: cutoff > resolution/2 would alias");
    auto [gx, gy] = kernel_grid(resolution, cutoff);
    std::vector<double> samples(2 * std::size_t(resolution) * resolution);
    for (std::size_t i = 0; i < gx.v.size(); ++i) {
        samples[2 * i] = gx.v[i];
        samples[2 * i + 1] = gy.v[i];
    }
    return KernelTable(resolution, cutoff, std::move(samples));
}

namespace {
constexpr char kMagic[4] = {'S', 'E', 'K', 'T'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
uint32_t read_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
}  // namespace

void KernelTable::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("KernelTable::save: cannot open " + path);
    os.write(kMagic, 4);
    write_u32(os, kVersion);
    write_u32(os, uint32_t(resolution_));
    write_u32(os, uint32_t(cutoff_));
    os.write(reinterpret_cast<const char*>(samples_.data()),
             std::streamsize(samples_.size() * sizeof(double)));
    if (!os) throw std::runtime_error("KernelTable::save: write failed for " + path);
}

KernelTable KernelTable::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("KernelTable::load: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("KernelTable::load: bad magic in " + path);
    uint32_t version = read_u32(is);
    if (version != kVersion) throw std::runtime_error("KernelTable::load: unsupported version");
    uint32_t res = read_u32(is);
    uint32_t cut = read_u32(is);
    std::vector<double> samples(2 * std::size_t(res) * res);
    is.read(reinterpret_cast<char*>(samples.data()), std::streamsize(samples.size() * sizeof(double)));
    if (!is) throw std::runtime_error("KernelTable::load: truncated file " + path);
    return KernelTable(int(res), int(cut), std::move(samples));
}

std::pair<Spectrum, Spectrum> velocity_spectrum(const Spectrum& xi) {
    int n = xi.n;
    Spectrum ux(n), uy(n);
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            if ((k1 == 0 && k2 == 0) || k1 == n / 2 || k2 == n / 2) continue;
            double n2 = double(k1) * k1 + double(k2) * k2;
            std::complex<double> f = std::complex<double>(0.0, -1.0 / n2) * xi.at(a, b);
            ux.at(a, b) = -double(k2) * f;
            uy.at(a, b) = double(k1) * f;
        }
    }
    return {std::move(ux), std::move(uy)};
}

std::pair<GridField, GridField> velocity_from_vorticity(const GridField& xi) {
    auto [ux, uy] = velocity_spectrum(analyze(xi));
    return {synthesize(ux), synthesize(uy)};
}

}  // namespace sel
