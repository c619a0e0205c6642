#pragma once

#include <array>
#include <vector>

#include "sel/rng.hpp"
#include "sel/torus.hpp"

namespace sel {

/// 2x2 infinitesimal covariance matrix a(x,y) = sum_k sigma_k(x) (x) sigma_k(y).
struct CovMatrix {
    double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double max_abs() const;
};

/// Finite family of divergence-free transport-noise fields
///   sigma_k(x) = (cos(k.x) + sin(k.x)) k^perp / |k|^beta,
/// over all k in Z^2_* with |k| <= cutoff (both half-lattices retained, so
/// a(x,x) = c I and the diagonal y-derivative vanish identically).
class NoiseBasis {
  public:
    NoiseBasis() = default;

    double beta() const { return beta_; }
    int cutoff() const { return cutoff_; }
    std::size_t size() const { return modes_.size(); }
    const std::vector<Mode>& modes() const { return modes_; }

    /// Measured A.2 constant: diagonal of a(x,x) by direct summation.
    double c() const { return c_; }
    /// sum_k ||sigma_k||_{C^1}^2 with ||sigma_k||_{C^1} = sup|sigma_k| + sup|D sigma_k|
    /// = sqrt(2) (|k|^{1-beta} + |k|^{2-beta}).
    double c1_sum() const { return c1_sum_; }

    Vec2 sigma(std::size_t i, TorusPoint x) const;
    /// Amplitude direction k^perp / |k|^beta of mode i.
    Vec2 amplitude(std::size_t i) const;
    /// Jacobian of sigma_i at x (row-major d sigma^j / d x_l in [j][l]).
    std::array<std::array<double, 2>, 2> sigma_jacobian(std::size_t i, TorusPoint x) const;

    /// V(x) = sum_k dW_k sigma_k(x); modes are paired (k, -k) so each pair
    /// costs one sin/cos evaluation.
    Vec2 noise_field(const std::vector<double>& dW, TorusPoint x) const;

  private:
    friend NoiseBasis make_basis(double beta, int cutoff);

    double beta_ = 0.0;
    int cutoff_ = 0;
    double c_ = 0.0;
    double c1_sum_ = 0.0;
    std::vector<Mode> modes_;      // sorted by (|k|^2, k1, k2)
    std::vector<int> pair_index_;  // position of -k
};

/// Rejects beta <= 3 (the C^1 sum would diverge as cutoff grows).
NoiseBasis make_basis(double beta, int cutoff);

CovMatrix covariance(const NoiseBasis& basis, TorusPoint x, TorusPoint y);

/// d a_{ij}(x,y) / d y_l at y = x, flattened as [i][j][l] -> 4i + 2j + l.
std::array<double, 8> covariance_y_derivative_at_diagonal(const NoiseBasis& basis, TorusPoint x);

/// (1/2) sum_k (sigma_k . grad) sigma_k, by analytic differentiation.
Vec2 strat_drift_correction(const NoiseBasis& basis, TorusPoint x);

/// One Brownian increment per mode: N(0, dt) i.i.d., addressed by step.
std::vector<double> sample_noise_increment(const NoiseBasis& basis, double dt, const CounterRng& rng,
                                           uint64_t step);

}  // namespace sel
