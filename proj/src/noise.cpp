#include "sel/noise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sel {

double CovMatrix::max_abs() const {
    double r = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r = std::max(r, std::abs(m[i][j]));
    return r;
}

Vec2 NoiseBasis::amplitude(std::size_t i) const {
    Mode k = modes_[i];
    double scale = std::pow(std::sqrt(k.norm2()), -beta_);
    return k.perp() * scale;
}

Vec2 NoiseBasis::sigma(std::size_t i, TorusPoint x) const {
    Mode k = modes_[i];
    double t = k.dot(x);
    return amplitude(i) * (std::cos(t) + std::sin(t));
}

std::array<std::array<double, 2>, 2> NoiseBasis::sigma_jacobian(std::size_t i, TorusPoint x) const {
    Mode k = modes_[i];
    Vec2 v = amplitude(i);
    double t = k.dot(x);
    double df = std::cos(t) - std::sin(t);  // f' along k
    return {{{v.x * k.k1 * df, v.x * k.k2 * df}, {v.y * k.k1 * df, v.y * k.k2 * df}}};
}

Vec2 NoiseBasis::noise_field(const std::vector<double>& dW, TorusPoint x) const {
    Vec2 out{0.0, 0.0};
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        int j = pair_index_[i];
        if (int(i) > j) continue;  // handled with its partner
        Mode k = modes_[i];
        double t = k.dot(x);
        double c = std::cos(t), s = std::sin(t);
        // sigma_{-k} = (cos - sin)(k.x) * (-v_k)
        double coef = (dW[i] - dW[j]) * c + (dW[i] + dW[j]) * s;
        out += amplitude(i) * coef;
    }
    return out;
}

NoiseBasis make_basis(double beta, int cutoff) {
    if (!(beta > 3.0)) throw std::invalid_argument("make_basis: beta must be > 3");
    if (cutoff < 1) throw std::invalid_argument("make_basis: cutoff must be >= 1");
    NoiseBasis b;
    b.beta_ = beta;
    b.cutoff_ = cutoff;
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (double(k1) * k1 + double(k2) * k2 > double(cutoff) * cutoff) continue;
            b.modes_.push_back({k1, k2});
        }
    std::sort(b.modes_.begin(), b.modes_.end(), [](Mode a, Mode c) {
        return std::array{a.norm2(), double(a.k1), double(a.k2)} <
               std::array{c.norm2(), double(c.k1), double(c.k2)};
    });
    std::map<std::pair<int, int>, int> where;
    for (std::size_t i = 0; i < b.modes_.size(); ++i) where[{b.modes_[i].k1, b.modes_[i].k2}] = int(i);
    b.pair_index_.resize(b.modes_.size());
    for (std::size_t i = 0; i < b.modes_.size(); ++i)
        b.pair_index_[i] = where.at({-b.modes_[i].k1, -b.modes_[i].k2});

    for (Mode k : b.modes_) {
        double kn = std::sqrt(k.norm2());
        double c1 = std::sqrt(2.0) * (std::pow(kn, 1.0 - beta) + std::pow(kn, 2.0 - beta));
        b.c1_sum_ += c1 * c1;
    }
    // The operational c: measured diagonal of a(x,x) at a reference point
    // (not the closed-form half-lattice sum, whose index set is ambiguous).
    CovMatrix axx = covariance(b, {0.3, 1.1}, {0.3, 1.1});
    b.c_ = 0.5 * (axx.m[0][0] + axx.m[1][1]);
    return b;
}

CovMatrix covariance(const NoiseBasis& basis, TorusPoint x, TorusPoint y) {
    CovMatrix a;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Vec2 sx = basis.sigma(i, x);
        Vec2 sy = basis.sigma(i, y);
        a.m[0][0] += sx.x * sy.x;
        a.m[0][1] += sx.x * sy.y;
        a.m[1][0] += sx.y * sy.x;
        a.m[1][1] += sx.y * sy.y;
    }
    return a;
}

std::array<double, 8> covariance_y_derivative_at_diagonal(const NoiseBasis& basis, TorusPoint x) {
    std::array<double, 8> d{};
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Vec2 s = basis.sigma(i, x);
        auto jac = basis.sigma_jacobian(i, x);
        double si[2] = {s.x, s.y};
        for (int a = 0; a < 2; ++a)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) d[4 * a + 2 * j + l] += si[a] * jac[j][l];
    }
    return d;
}

Vec2 strat_drift_correction(const NoiseBasis& basis, TorusPoint x) {
    Vec2 out{0.0, 0.0};
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Vec2 s = basis.sigma(i, x);
        auto jac = basis.sigma_jacobian(i, x);
        out.x += s.x * jac[0][0] + s.y * jac[0][1];
        out.y += s.x * jac[1][0] + s.y * jac[1][1];
    }
    return out * 0.5;
}

std::vector<double> sample_noise_increment(const NoiseBasis& basis, double dt, const CounterRng& rng,
                                           uint64_t step) {
    if (dt < 0.0) throw std::invalid_argument("sample_noise_increment: dt must be >= 0");
    return rng.gaussians(step, basis.size(), dt);
}

}  // namespace sel
