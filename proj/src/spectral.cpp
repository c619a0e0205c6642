#include "sel/spectral.hpp"

#include <cmath>

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

// physical gradient fields of xi from its spectrum
void gradient_fields(const Spectrum& xi, GridField& dx1, GridField& dx2) {
    int n = xi.n;
    Spectrum g1(n), g2(n);
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            std::complex<double> v = xi.at(a, b);
            g1.at(a, b) = std::complex<double>(0.0, k1) * v;
            g2.at(a, b) = std::complex<double>(0.0, k2) * v;
        }
    }
    dx1 = synthesize(g1);
    dx2 = synthesize(g2);
}

// Vhat assembly: sigma_k = f v with fhat(k) = (1-i)/2, fhat(-k) = (1+i)/2.
void noise_field_spectra(const NoiseBasis& basis, const std::vector<double>& dW, Spectrum& vx,
                         Spectrum& vy) {
    const std::complex<double> half_m(0.5, -0.5), half_p(0.5, 0.5);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (dW[i] == 0.0) continue;
        Mode k = basis.modes()[i];
        Vec2 v = basis.amplitude(i);
        vx.mode(k.k1, k.k2) += dW[i] * half_m * v.x;
        vy.mode(k.k1, k.k2) += dW[i] * half_m * v.y;
        vx.mode(-k.k1, -k.k2) += dW[i] * half_p * v.x;
        vy.mode(-k.k1, -k.k2) += dW[i] * half_p * v.y;
    }
}

}  // namespace

void apply_dealias_mask(Spectrum& s, int dealias) {
    int n = s.n;
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            if (std::abs(k1) > dealias || std::abs(k2) > dealias) s.at(a, b) = 0.0;
        }
    }
}

SpectralState make_spectral_state(const GridField& xi0) {
    SpectralState st;
    st.xi = analyze(xi0);
    st.dealias = xi0.n / 3;
    apply_dealias_mask(st.xi, st.dealias);
    return st;
}

GridField rhs_drift(const SpectralState& state, double c, bool advection) {
    const int n = state.n();
    Spectrum out(n);
    if (advection) {
        auto [uxs, uys] = velocity_spectrum(state.xi);
        GridField ux = synthesize(uxs), uy = synthesize(uys);
        GridField d1(n), d2(n);
        gradient_fields(state.xi, d1, d2);
        GridField adv(n);
        for (std::size_t i = 0; i < adv.v.size(); ++i) adv.v[i] = ux.v[i] * d1.v[i] + uy.v[i] * d2.v[i];
        out = analyze(adv);
        apply_dealias_mask(out, state.dealias);
        for (auto& v : out.c) v = -v;
    }
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            double n2 = double(k1) * k1 + double(k2) * k2;
            out.at(a, b) += -0.5 * c * n2 * state.xi.at(a, b);
        }
    }
    out.c[0] = 0.0;  // advection and Laplacian are mean-free
    return synthesize(out);
}

void step_ito(SpectralState& state, double dt, const std::vector<double>& dW, const NoiseBasis& basis,
              const SpectralStepOptions& opts) {
    if (dt <= 0.0) throw std::invalid_argument("step_ito: dt must be > 0");
    if (opts.noise_on && basis.cutoff() > state.dealias)
        throw std::invalid_argument("step_ito: noise cutoff exceeds the dealias band");
    const int n = state.n();
    GridField d1(n), d2(n);
    if (opts.advection || opts.noise_on) gradient_fields(state.xi, d1, d2);

    Spectrum update(n);  // dt * advection + noise, to subtract
    if (opts.advection) {
        auto [uxs, uys] = velocity_spectrum(state.xi);
        GridField ux = synthesize(uxs), uy = synthesize(uys);
        double umax = 0.0;
        for (std::size_t i = 0; i < ux.v.size(); ++i)
            umax = std::max(umax, std::hypot(ux.v[i], uy.v[i]));
        double cfl = dt * umax * n / kTwoPi;
        if (cfl > 0.5)
            throw CflViolation("advective CFL violated: dt*max|u|*n/(2pi) = " + std::to_string(cfl) +
                               " > 0.5 at t = " + std::to_string(state.t));
        GridField adv(n);
        for (std::size_t i = 0; i < adv.v.size(); ++i) adv.v[i] = ux.v[i] * d1.v[i] + uy.v[i] * d2.v[i];
        Spectrum a = analyze(adv);
        for (std::size_t i = 0; i < update.c.size(); ++i) update.c[i] += dt * a.c[i];
    }
    if (opts.noise_on) {
        Spectrum vxs(n), vys(n);
        noise_field_spectra(basis, dW, vxs, vys);
        GridField vx = synthesize(vxs), vy = synthesize(vys);
        GridField nz(n);
        for (std::size_t i = 0; i < nz.v.size(); ++i) nz.v[i] = vx.v[i] * d1.v[i] + vy.v[i] * d2.v[i];
        Spectrum b = analyze(nz);
        for (std::size_t i = 0; i < update.c.size(); ++i) update.c[i] += b.c[i];
    }
    apply_dealias_mask(update, state.dealias);

    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            if (k1 == 0 && k2 == 0) continue;  // mean mode untouched, bitwise
            if (std::abs(k1) > state.dealias || std::abs(k2) > state.dealias) continue;
            double n2 = double(k1) * k1 + double(k2) * k2;
            double damp = std::exp(-0.5 * opts.c * n2 * dt);
            state.xi.at(a, b) = damp * (state.xi.at(a, b) - update.at(a, b));
        }
    }
    state.t += dt;
    state.step_index += 1;
}

double spectral_energy(const Spectrum& xi) {
    std::vector<double> terms;
    terms.reserve(xi.c.size());
    int n = xi.n;
    for (int a = 0; a < n; ++a) {
        int k1 = Spectrum::mode_of_index(a, n);
        for (int b = 0; b < n; ++b) {
            int k2 = Spectrum::mode_of_index(b, n);
            if (k1 == 0 && k2 == 0) continue;
            double n2 = double(k1) * k1 + double(k2) * k2;
            terms.push_back(std::norm(xi.at(a, b)) / n2);
        }
    }
    return kTwoPi * kTwoPi * pairwise(terms);
}

double spectral_enstrophy(const Spectrum& xi) {
    std::vector<double> terms(xi.c.size());
    for (std::size_t i = 0; i < xi.c.size(); ++i) terms[i] = std::norm(xi.c[i]);
    return kTwoPi * kTwoPi * pairwise(terms);
}

double spectral_grad_u_sq(const Spectrum& xi) {
    std::vector<double> terms;
    terms.reserve(xi.c.size());
    for (std::size_t i = 0; i < xi.c.size(); ++i)
        if (i != 0) terms.push_back(std::norm(xi.c[i]));
    return kTwoPi * kTwoPi * pairwise(terms);
}

SpectralTrajectory run_recorded_spectral(const GridField& xi0, double dt, int steps,
                                         const NoiseBasis& basis, const CounterRng& rng,
                                         const SpectralStepOptions& opts) {
    SpectralTrajectory traj;
    traj.dt = dt;
    SpectralState st = make_spectral_state(xi0);
    traj.dealias = st.dealias;
    traj.states.push_back(st.xi);
    for (int s = 0; s < steps; ++s) {
        auto dW = sample_noise_increment(basis, opts.noise_on ? dt : 0.0, rng, st.step_index);
        step_ito(st, dt, dW, basis, opts);
        traj.increments.push_back(std::move(dW));
        traj.states.push_back(st.xi);
    }
    return traj;
}

std::vector<EnergyBalanceRow> energy_balance_residual(const SpectralTrajectory& traj,
                                                      const NoiseBasis& basis, double c) {
    std::vector<EnergyBalanceRow> rows;
    const std::size_t steps = traj.increments.size();
    if (steps == 0) return rows;
    const int n = traj.states.front().n;
    const int dealias = traj.dealias;

    for (std::size_t s = 0; s < steps; ++s) {
        const Spectrum& xi = traj.states[s];
        EnergyBalanceRow row;
        row.t = double(s) * traj.dt;
        row.delta_energy = spectral_energy(traj.states[s + 1]) - spectral_energy(xi);
        row.dissipation = -c * spectral_grad_u_sq(xi) * traj.dt;

        // nonlinear term -2 <u, u.grad u> dt via grid quadrature
        auto [uxs, uys] = velocity_spectrum(xi);
        GridField ux = synthesize(uxs), uy = synthesize(uys);
        GridField ux1(n), ux2(n), uy1(n), uy2(n);
        gradient_fields(uxs, ux1, ux2);
        gradient_fields(uys, uy1, uy2);
        std::vector<double> nl(ux.v.size());
        for (std::size_t i = 0; i < nl.size(); ++i)
            nl[i] = ux.v[i] * (ux.v[i] * ux1.v[i] + uy.v[i] * ux2.v[i]) +
                    uy.v[i] * (ux.v[i] * uy1.v[i] + uy.v[i] * uy2.v[i]);
        row.nonlinear = -2.0 * traj.dt * ux.cell_area() * pairwise(nl);

        // per-mode h_k = P(sigma_k . grad xi): two shifted copies of ik.xi
        const std::complex<double> half_m(0.5, -0.5), half_p(0.5, 0.5);
        double qv = 0.0;
        double mart = 0.0;
        for (std::size_t kidx = 0; kidx < basis.size(); ++kidx) {
            Mode k = basis.modes()[kidx];
            Vec2 v = basis.amplitude(kidx);
            std::vector<double> qv_terms;
            std::vector<double> mart_terms;
            for (int a = 0; a < n; ++a) {
                int m1 = Spectrum::mode_of_index(a, n);
                if (std::abs(m1) > dealias) continue;
                for (int b = 0; b < n; ++b) {
                    int m2 = Spectrum::mode_of_index(b, n);
                    if (std::abs(m2) > dealias) continue;
                    if (m1 == 0 && m2 == 0) continue;
                    auto shifted = [&](int s1, int s2) -> std::complex<double> {
                        int q1 = m1 - s1, q2 = m2 - s2;
                        if (std::abs(q1) > dealias || std::abs(q2) > dealias) return {0.0, 0.0};
                        std::complex<double> val = xi.mode(q1, q2);
                        double dot = v.x * q1 + v.y * q2;
                        return std::complex<double>(0.0, dot) * val;
                    };
                    std::complex<double> h = half_m * shifted(k.k1, k.k2) + half_p * shifted(-k.k1, -k.k2);
                    double m2norm = double(m1) * m1 + double(m2) * m2;
                    qv_terms.push_back(std::norm(h) / m2norm);
                    // <u, K*h> with uhat = -i m^perp xihat / |m|^2 and
                    // (K*h)hat = -i m^perp hhat / |m|^2
                    std::complex<double> uh = xi.at(a, b);
                    mart_terms.push_back(std::real(std::conj(uh) * h) / m2norm);
                }
            }
            double norm_sq = kTwoPi * kTwoPi * pairwise(qv_terms);
            qv += traj.dt * norm_sq;
            mart += -2.0 * kTwoPi * kTwoPi * pairwise(mart_terms) * traj.increments[s][kidx];
        }
        row.quad_variation = qv;
        row.martingale = mart;
        row.residual =
            row.delta_energy - (row.nonlinear + row.dissipation + row.quad_variation + row.martingale);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sel
