#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sel/grid.hpp"
#include "sel/kernel.hpp"
#include "sel/noise.hpp"

namespace sel {

/// Pseudo-spectral state: vorticity modes with a 2/3-rule mask
/// (|k1|,|k2| <= n/3); masked modes are exactly zero.
struct SpectralState {
    double t = 0.0;
    uint64_t step_index = 0;
    Spectrum xi;
    int dealias = 0;

    int n() const { return xi.n; }
};

struct CflViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SpectralState make_spectral_state(const GridField& xi0);

void apply_dealias_mask(Spectrum& s, int dealias);

/// Drift part of the Ito equation, -u.grad(xi) + (c/2) lap(xi), products
/// formed in physical space and dealiased, Laplacian spectral.
GridField rhs_drift(const SpectralState& state, double c, bool advection = true);

struct SpectralStepOptions {
    bool advection = true;
    bool noise_on = true;
    double c = 0.0;  // measured A.2 constant; 0 when noise is off
};

/// Euler-Maruyama with exact integrating-factor damping for (c/2) lap.
/// The mean mode is carried over bitwise. Enforces the advective CFL
/// dt * max|u| * n / (2pi) <= 0.5.
void step_ito(SpectralState& state, double dt, const std::vector<double>& dW, const NoiseBasis& basis,
              const SpectralStepOptions& opts);

/// ||u||_{L^2}^2 = (2pi)^2 sum_{k!=0} |xihat|^2 / |k|^2.
double spectral_energy(const Spectrum& xi);
/// ||xi||_{L^2}^2 = (2pi)^2 sum_k |xihat|^2.
double spectral_enstrophy(const Spectrum& xi);
/// ||grad u||^2 = ||xi - mean||^2 for divergence-free u.
double spectral_grad_u_sq(const Spectrum& xi);

struct SpectralTrajectory {
    double dt = 0.0;
    std::vector<Spectrum> states;                 // length steps+1
    std::vector<std::vector<double>> increments;  // length steps
    int dealias = 0;
};

SpectralTrajectory run_recorded_spectral(const GridField& xi0, double dt, int steps,
                                         const NoiseBasis& basis, const CounterRng& rng,
                                         const SpectralStepOptions& opts);

/// Terms of the energy identity per step, all on the velocity side.
struct EnergyBalanceRow {
    double t = 0.0;
    double delta_energy = 0.0;   // E_{n+1} - E_n
    double nonlinear = 0.0;      // -2 <u, u.grad u> dt   (vanishes to quadrature tol)
    double dissipation = 0.0;    // -c ||grad u||^2 dt
    double quad_variation = 0.0; // dt sum_k ||K * P(sigma_k.grad xi)||^2
    double martingale = 0.0;     // -2 sum_k <u, K * P(sigma_k.grad xi)> dW_k
    double residual = 0.0;       // delta_energy - (sum of the four terms)
};

std::vector<EnergyBalanceRow> energy_balance_residual(const SpectralTrajectory& traj,
                                                      const NoiseBasis& basis, double c);

}  // namespace sel
