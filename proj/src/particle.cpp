#include "sel/particle.hpp"

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

Vec2 pairwise_vec(const std::vector<Vec2>& a, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        Vec2 s{0.0, 0.0};
        for (std::size_t i = lo; i < hi; ++i) s += a[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_vec(a, lo, mid) + pairwise_vec(a, mid, hi);
}

}  // namespace

Vec2 drift(const ParticleMeasure& particles, std::size_t j, const KernelTable& table,
           double blob_radius) {
    const std::size_t n = particles.size();
    std::vector<Vec2> terms(n, Vec2{0.0, 0.0});
    TorusPoint xj = particles.positions[j];
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;  // self-interaction excluded
        Vec2 d = displacement(xj, particles.positions[i]);
        double r = d.norm();
        if (r == 0.0) continue;  // coincident atoms: K odd, contribution 0
        Vec2 K;
        if (r < blob_radius)
            K = table(d * (blob_radius / r));  // cap at the blob circle value
        else
            K = table(d);
        terms[i] = particles.weights[i] * K;
    }
    return pairwise_vec(terms, 0, n);
}

void step(SimState& state, const StepPlan& plan, const KernelTable& table, const NoiseBasis& basis,
          const std::vector<double>& dW) {
    if (plan.dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
    const std::size_t n = state.particles.size();
    std::vector<Vec2> disp(n);
    double maxdisp = 0.0;
    // drift from a read-only snapshot of positions, then a single commit
    for (std::size_t j = 0; j < n; ++j) {
        Vec2 v = drift(state.particles, j, table, plan.blob_radius);
        Vec2 d = v * plan.dt;
        if (plan.noise_on) d += basis.noise_field(dW, state.particles.positions[j]);
        disp[j] = d;
        maxdisp = std::max(maxdisp, std::max(std::abs(d.x), std::abs(d.y)));
    }
    if (maxdisp > kPi / 2)
        throw StepRejected(state.step_index,
                           "step rejected: max displacement " + std::to_string(maxdisp) +
                               " exceeds pi/2 at step " + std::to_string(state.step_index));
    for (std::size_t j = 0; j < n; ++j)
        state.particles.positions[j] = state.particles.positions[j].shifted(disp[j]);
    if (state.brownian_path.size() != dW.size()) state.brownian_path.assign(dW.size(), 0.0);
    for (std::size_t k = 0; k < dW.size(); ++k) state.brownian_path[k] += plan.noise_on ? dW[k] : 0.0;
    state.t += plan.dt;
    state.step_index += 1;
}

ParticleTrajectory run_recorded(const ParticleMeasure& init, const StepPlan& plan,
                                const KernelTable& table, const NoiseBasis& basis, const CounterRng& rng,
                                int steps) {
    ParticleTrajectory traj;
    traj.dt = plan.dt;
    SimState state;
    state.particles = init;
    traj.states.push_back(state.particles);
    for (int s = 0; s < steps; ++s) {
        auto dW = sample_noise_increment(basis, plan.noise_on ? plan.dt : 0.0, rng, state.step_index);
        step(state, plan, table, basis, dW);
        traj.increments.push_back(std::move(dW));
        traj.states.push_back(state.particles);
    }
    return traj;
}

void run_particle(SimState& state, const StepPlan& plan, const KernelTable& table,
                  const NoiseBasis& basis, const CounterRng& rng, double T, int record_every,
                  const std::function<void(const SimState&)>& on_record) {
    if (record_every < 1) throw std::invalid_argument("run_particle: record_every must be >= 1");
    long steps = std::lround(T / plan.dt);
    on_record(state);
    for (long s = 0; s < steps; ++s) {
        auto dW = sample_noise_increment(basis, plan.noise_on ? plan.dt : 0.0, rng, state.step_index);
        step(state, plan, table, basis, dW);
        if ((s + 1) % record_every == 0 || s + 1 == steps) on_record(state);
    }
}

std::vector<double> weak_form_residual(const ParticleTrajectory& traj, const TestFunction& phi,
                                       const NoiseBasis& basis, const KernelTable& table, double c) {
    const std::size_t steps = traj.increments.size();
    auto pair_phi = [&](const ParticleMeasure& mu) {
        std::vector<double> t(mu.size());
        for (std::size_t j = 0; j < mu.size(); ++j) t[j] = mu.weights[j] * phi.f(mu.positions[j]);
        return pairwise(t, 0, t.size());
    };
    auto pair_lap = [&](const ParticleMeasure& mu) {
        std::vector<double> t(mu.size());
        for (std::size_t j = 0; j < mu.size(); ++j)
            t[j] = mu.weights[j] * phi.laplacian(mu.positions[j]);
        return pairwise(t, 0, t.size());
    };
    double base = pair_phi(traj.states.front());
    std::vector<double> residuals(steps, 0.0);
    double integral = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        const ParticleMeasure& mu = traj.states[s];
        double nval = nonlinear_functional(mu, phi, table);
        double noise_term = 0.0;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (traj.increments[s][k] == 0.0) continue;
            std::vector<double> t(mu.size());
            for (std::size_t j = 0; j < mu.size(); ++j)
                t[j] = mu.weights[j] * basis.sigma(k, mu.positions[j]).dot(phi.grad(mu.positions[j]));
            noise_term += pairwise(t, 0, t.size()) * traj.increments[s][k];
        }
        integral += nval * traj.dt + noise_term + 0.5 * c * pair_lap(mu) * traj.dt;
        residuals[s] = pair_phi(traj.states[s + 1]) - base - integral;
    }
    return residuals;
}

}  // namespace sel
