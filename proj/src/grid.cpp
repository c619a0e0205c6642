#include "sel/grid.hpp"

#include <algorithm>
#include <cmath>

#include "sel/fft.hpp"

namespace sel {

namespace {

// Pairwise (cascade) summation: deterministic and accurate for long sums.
double pairwise_sum(const double* a, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(a, h) + pairwise_sum(a + h, n - h);
}

}  // namespace

double GridField::integral() const { return cell_area() * pairwise_sum(v.data(), v.size()); }

double GridField::min_value() const { return *std::min_element(v.begin(), v.end()); }

double GridField::max_value() const { return *std::max_element(v.begin(), v.end()); }

double GridField::l1_norm() const {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
    return cell_area() * pairwise_sum(a.data(), a.size());
}

double GridField::l2_norm_sq() const {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = v[i] * v[i];
    return cell_area() * pairwise_sum(a.data(), a.size());
}

double Spectrum::l2_norm_sq() const {
    std::vector<double> a(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) a[i] = std::norm(c[i]);
    return kTwoPi * kTwoPi * pairwise_sum(a.data(), a.size());
}

Spectrum analyze(const GridField& f) {
    Spectrum s(f.n);
    dft_forward(f.n, f.v, s.c);
    return s;
}

GridField synthesize(const Spectrum& s, double* max_imag) {
    std::vector<std::complex<double>> vals;
    dft_backward(s.n, s.c, vals);
    GridField f(s.n);
    double mi = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        f.v[i] = vals[i].real();
        mi = std::max(mi, std::abs(vals[i].imag()));
    }
    if (max_imag) *max_imag = mi;
    return f;
}

}  // namespace sel
