#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sel {

/// Philox4x32-10 counter-based generator (Salmon et al. constants).
///
/// Streams are addressed, not advanced: the draw at (key, counter) is a pure
/// function, so ensemble members and steps can be evaluated in any order, on
/// any number of threads, with bitwise identical results.
namespace philox {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

using Counter = std::array<uint32_t, 4>;
using Key = std::array<uint32_t, 2>;

inline Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        uint64_t p0 = uint64_t(kMul0) * ctr[0];
        uint64_t p1 = uint64_t(kMul1) * ctr[2];
        Counter next;
        next[0] = uint32_t(p1 >> 32) ^ ctr[1] ^ key[0];
        next[1] = uint32_t(p1);
        next[2] = uint32_t(p0 >> 32) ^ ctr[3] ^ key[1];
        next[3] = uint32_t(p0);
        ctr = next;
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

}  // namespace philox

/// Uniform in (0,1): 53 random bits, offset so 0 is excluded.
inline double uniform_from_bits(uint32_t hi, uint32_t lo) {
    uint64_t bits = (uint64_t(hi) << 32) | lo;
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Addressed Gaussian stream for one ensemble member.
///
/// The counter layout is (step, index, salt, 0); each Philox block yields two
/// independent N(0,1) variates via Box-Muller.
class CounterRng {
  public:
    CounterRng() = default;
    CounterRng(uint64_t base_seed, uint64_t member_index)
        : key_{uint32_t(base_seed), uint32_t(base_seed >> 32)}, member_(member_index) {}

    uint64_t member() const { return member_; }

    /// Two standard Gaussians for (step, pair_index) within salt stream.
    std::array<double, 2> gaussian_pair(uint64_t step, uint32_t pair_index, uint32_t salt = 0) const {
        philox::Counter ctr = {uint32_t(step), uint32_t(step >> 32) ^ uint32_t(member_),
                               pair_index ^ uint32_t(member_ >> 32), salt};
        auto r = philox::block(ctr, key_);
        double u1 = uniform_from_bits(r[0], r[1]);
        double u2 = uniform_from_bits(r[2], r[3]);
        double mag = std::sqrt(-2.0 * std::log(u1));
        return {mag * std::cos(kTau * u2), mag * std::sin(kTau * u2)};
    }

    /// n independent N(0, variance) draws for one step.
    std::vector<double> gaussians(uint64_t step, std::size_t n, double variance, uint32_t salt = 0) const {
        std::vector<double> out(n);
        if (variance == 0.0) return out;  // exact zeros, not tiny numbers
        double sd = std::sqrt(variance);
        for (std::size_t i = 0; i < n; i += 2) {
            auto g = gaussian_pair(step, uint32_t(i / 2), salt);
            out[i] = sd * g[0];
            if (i + 1 < n) out[i + 1] = sd * g[1];
        }
        return out;
    }

  private:
    static constexpr double kTau = 6.283185307179586476925286766559;
    philox::Key key_ = {0, 0};
    uint64_t member_ = 0;
};

}  // namespace sel
