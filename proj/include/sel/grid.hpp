#pragma once

#include <complex>
#include <vector>

#include "sel/torus.hpp"

namespace sel {

/// Real scalar field sampled on the uniform n x n periodic grid,
/// v[i*n+j] = f(2pi i / n, 2pi j / n).
struct GridField {
    int n = 0;
    std::vector<double> v;

    GridField() = default;
    explicit GridField(int n_) : n(n_), v(std::size_t(n_) * n_, 0.0) {}

    double& at(int i, int j) { return v[std::size_t(i) * n + j]; }
    double at(int i, int j) const { return v[std::size_t(i) * n + j]; }
    TorusPoint point(int i, int j) const { return {kTwoPi * i / n, kTwoPi * j / n}; }
    double cell_area() const { return (kTwoPi / n) * (kTwoPi / n); }

    double integral() const;  // exact for band-limited fields (trapezoid on torus)
    double mean() const { return integral() / (kTwoPi * kTwoPi); }
    double min_value() const;
    double max_value() const;
    double l1_norm() const;  // int |f| dx, grid quadrature
    double l2_norm_sq() const;
};

/// Full complex mode array, c[a*n+b] = fhat(k1(a), k2(b)) with
/// k(a) = a for a <= n/2, a - n otherwise.
struct Spectrum {
    int n = 0;
    std::vector<std::complex<double>> c;

    Spectrum() = default;
    explicit Spectrum(int n_) : n(n_), c(std::size_t(n_) * n_, 0.0) {}

    static int mode_of_index(int a, int n) { return a <= n / 2 ? a : a - n; }
    int index_of_mode(int k) const { return k >= 0 ? k : k + n; }

    std::complex<double>& at(int a, int b) { return c[std::size_t(a) * n + b]; }
    std::complex<double> at(int a, int b) const { return c[std::size_t(a) * n + b]; }
    std::complex<double>& mode(int k1, int k2) { return at(index_of_mode(k1), index_of_mode(k2)); }
    std::complex<double> mode(int k1, int k2) const { return at(index_of_mode(k1), index_of_mode(k2)); }

    /// Parseval: int |f|^2 dx = (2pi)^2 sum |fhat|^2.
    double l2_norm_sq() const;
};

Spectrum analyze(const GridField& f);

/// Synthesis sum_k c(k) e^{i k.x} on the grid; the imaginary residue is
/// discarded (max |imag| reported through max_imag when non-null).
GridField synthesize(const Spectrum& s, double* max_imag = nullptr);

/// Visit every index pair (a,b) whose signed mode satisfies |k| <= cutoff.
template <typename F>
void for_modes_in_disc(int n, int cutoff, F&& f) {
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        if (k1 * k1 > cutoff * cutoff) continue;
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            if (k1 * k1 + k2 * k2 > cutoff * cutoff) continue;
            f(a, b, Mode{k1, k2});
        }
    }
}

}  // namespace sel
