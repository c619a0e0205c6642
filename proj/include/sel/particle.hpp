#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sel/kernel.hpp"
#include "sel/measure.hpp"
#include "sel/noise.hpp"
#include "sel/nonlinear.hpp"
#include "sel/rng.hpp"

namespace sel {

struct StepPlan {
    double dt = 1e-3;
    double blob_radius = 0.0;  // must be >= kernel table cell
    bool noise_on = true;
};

/// Flow state: push-forward moves positions only, weights stay those of t=0.
struct SimState {
    double t = 0.0;
    uint64_t step_index = 0;
    ParticleMeasure particles;
    std::vector<double> brownian_path;  // accumulated W^k per mode
};

struct StepRejected : std::runtime_error {
    uint64_t step_index;
    StepRejected(uint64_t step, const std::string& what) : std::runtime_error(what), step_index(step) {}
};

/// Velocity of particle j: sum_{i != j} w_i K(x_j - x_i), pairs inside the
/// blob radius capped by rescaling onto the blob circle.
Vec2 drift(const ParticleMeasure& particles, std::size_t j, const KernelTable& table, double blob_radius);

/// One Euler-Maruyama step with ONE shared increment vector for all
/// particles (transport noise, not independent diffusion). Rejects steps
/// whose max displacement exceeds pi/2.
void step(SimState& state, const StepPlan& plan, const KernelTable& table, const NoiseBasis& basis,
          const std::vector<double>& dW);

/// Full recording (per-step states + increments) for residual diagnostics;
/// intended for small test runs.
struct ParticleTrajectory {
    double dt = 0.0;
    std::vector<ParticleMeasure> states;       // length steps+1
    std::vector<std::vector<double>> increments;  // length steps
};

ParticleTrajectory run_recorded(const ParticleMeasure& init, const StepPlan& plan,
                                const KernelTable& table, const NoiseBasis& basis, const CounterRng& rng,
                                int steps);

/// Fixed-dt loop to T; on_record fires at step 0, every `record_every`
/// steps, and at the final step.
void run_particle(SimState& state, const StepPlan& plan, const KernelTable& table,
                  const NoiseBasis& basis, const CounterRng& rng, double T, int record_every,
                  const std::function<void(const SimState&)>& on_record);

/// Per recorded step m: <xi_m,phi> - <xi_0,phi>
///   - sum_{s<m} [ <N(xi_s),phi> dt + sum_k <xi_s, sigma_k.grad phi> dW_k(s)
///                 + (c/2) <xi_s, lap phi> dt ].
std::vector<double> weak_form_residual(const ParticleTrajectory& traj, const TestFunction& phi,
                                       const NoiseBasis& basis, const KernelTable& table, double c);

}  // namespace sel
