#include "sel/nonlinear.hpp"

#include <cmath>
#include <stdexcept>

#include "sel/fft.hpp"

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

bool same_position(TorusPoint a, TorusPoint b) { return a.x1 == b.x1 && a.x2 == b.x2; }

template <typename Kernel>
double particle_double_sum(const ParticleMeasure& mu, const TestFunction& phi, Kernel&& kernel) {
    const std::size_t n = mu.size();
    std::vector<Vec2> grads(n);
    for (std::size_t j = 0; j < n; ++j) grads[j] = phi.grad(mu.positions[j]);
    std::vector<double> rows(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (same_position(mu.positions[i], mu.positions[j])) continue;
            Vec2 d = displacement(mu.positions[i], mu.positions[j]);
            Vec2 K = kernel(d);
            row += mu.weights[j] * 0.5 * K.dot(grads[i] - grads[j]);
        }
        rows[i] = mu.weights[i] * row;
    }
    return pairwise(rows);
}

// conv_m = sum_n K(m-n) f_n  (circular, plain sum without cell weights)
GridField circular_convolution(const GridField& kern, const GridField& f) {
    Spectrum a = analyze(kern);
    Spectrum b = analyze(f);
    Spectrum prod(kern.n);
    double nn = double(kern.n) * kern.n;
    for (std::size_t i = 0; i < prod.c.size(); ++i) prod.c[i] = a.c[i] * b.c[i] * nn;
    return synthesize(prod);
}

}  // namespace

TestFunction TestFunction::trig(Mode k, bool is_sin) {
    TestFunction t;
    TestMode m{k, is_sin};
    t.f = [m](TorusPoint x) { return m.eval(x); };
    t.grad = [m](TorusPoint x) { return m.grad(x); };
    t.laplacian = [m](TorusPoint x) { return m.laplacian(x); };
    t.c2_norm = std::max(1.0, k.norm2());
    return t;
}

double f_phi(TorusPoint x, TorusPoint y, const TestFunction& phi, int cutoff) {
    if (same_position(x, y)) return 0.0;
    Vec2 K = kernel_eval(displacement(x, y), cutoff);
    return 0.5 * K.dot(phi.grad(x) - phi.grad(y));
}

double f_phi(TorusPoint x, TorusPoint y, const TestFunction& phi, const KernelTable& table) {
    if (same_position(x, y)) return 0.0;
    Vec2 K = table(displacement(x, y));
    return 0.5 * K.dot(phi.grad(x) - phi.grad(y));
}

double nonlinear_functional(const ParticleMeasure& mu, const TestFunction& phi, int cutoff) {
    return particle_double_sum(mu, phi, [cutoff](Vec2 d) { return kernel_eval(d, cutoff); });
}

double nonlinear_functional(const ParticleMeasure& mu, const TestFunction& phi, const KernelTable& table) {
    return particle_double_sum(mu, phi, [&table](Vec2 d) { return table(d); });
}

double nonlinear_functional(const GridField& xi, const TestFunction& phi, int cutoff) {
    const int n = xi.n;
    auto [kx, ky] = kernel_grid(n, cutoff);
    GridField gx(n), gy(n), xgx(n), xgy(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec2 g = phi.grad(xi.point(i, j));
            gx.at(i, j) = g.x;
            gy.at(i, j) = g.y;
            xgx.at(i, j) = xi.at(i, j) * g.x;
            xgy.at(i, j) = xi.at(i, j) * g.y;
        }
    GridField cx = circular_convolution(kx, xi);
    GridField cy = circular_convolution(ky, xi);
    GridField dx = circular_convolution(kx, xgx);
    GridField dy = circular_convolution(ky, xgy);
    std::vector<double> terms(xi.v.size());
    for (std::size_t i = 0; i < xi.v.size(); ++i)
        terms[i] = xi.v[i] * (gx.v[i] * cx.v[i] + gy.v[i] * cy.v[i] - dx.v[i] - dy.v[i]);
    double h2 = xi.cell_area();
    return 0.5 * h2 * h2 * pairwise(terms);
}

double nonlinear_functional_direct(const GridField& xi, const TestFunction& phi, int cutoff) {
    const int n = xi.n;
    auto [kx, ky] = kernel_grid(n, cutoff);
    std::vector<Vec2> grads(xi.v.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) grads[std::size_t(i) * n + j] = phi.grad(xi.point(i, j));
    std::vector<double> rows(xi.v.size(), 0.0);
    for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < n; ++j1) {
            std::size_t m = std::size_t(i1) * n + j1;
            double row = 0.0;
            for (int i2 = 0; i2 < n; ++i2)
                for (int j2 = 0; j2 < n; ++j2) {
                    std::size_t q = std::size_t(i2) * n + j2;
                    int di = (i1 - i2 + n) % n, dj = (j1 - j2 + n) % n;
                    Vec2 K{kx.at(di, dj), ky.at(di, dj)};
                    row += xi.v[q] * 0.5 * K.dot(grads[m] - grads[q]);
                }
            rows[m] = xi.v[m] * row;
        }
    double h2 = xi.cell_area();
    return h2 * h2 * pairwise(rows);
}

BoundReport n_bound_check(MeasureRef mu, const TestFunction& phi, int cutoff) {
    BoundReport rep;
    double tv = mu.total_variation();
    if (tv == 0.0) return rep;
    double value;
    if (mu.is_particle())
        value = nonlinear_functional(*mu.particles(), phi, cutoff);
    else
        value = nonlinear_functional(*mu.grid(), phi, cutoff);
    rep.ratio = std::abs(value) / (tv * tv * phi.c2_norm);
    rep.flagged = rep.ratio > rep.bound;
    return rep;
}

ContinuityReport continuity_experiment(const std::vector<ParticleMeasure>& sequence,
                                       const ParticleMeasure& target, const TestFunction& phi,
                                       const KernelTable& table, const TestFamily& family) {
    if (!target.all_nonnegative())
        throw std::invalid_argument("continuity_experiment: target has negative weights");
    for (const auto& mu : sequence)
        if (!mu.all_nonnegative())
            throw std::invalid_argument("continuity_experiment: sequence member has negative weights");
    ContinuityReport rep;
    double n_target = nonlinear_functional(target, phi, table);
    for (const auto& mu : sequence) {
        rep.weak_distance.push_back(weakstar_distance(mu, target, family));
        rep.nonlinear_delta.push_back(std::abs(nonlinear_functional(mu, phi, table) - n_target));
    }
    if (!rep.nonlinear_delta.empty())
        rep.trend_ok = rep.nonlinear_delta.back() <= 0.5 * rep.nonlinear_delta.front();
    return rep;
}

}  // namespace sel
