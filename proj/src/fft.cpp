#include "sel/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace sel {

namespace {

// FFTW plan creation is not thread-safe; execution on private buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanPair {
    int n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit PlanPair(int n_) : n(n_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        in = fftw_alloc_complex(std::size_t(n) * n);
        out = fftw_alloc_complex(std::size_t(n) * n);
        fwd = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
    ~PlanPair() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(out);
    }
};

PlanPair& plans_for(int n) {
    if (n < 2) throw std::invalid_argument("fft: grid size must be >= 2");
    thread_local std::unordered_map<int, std::unique_ptr<PlanPair>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanPair>(n)).first;
    return *it->second;
}

}  // namespace

void dft_forward(int n, const std::vector<std::complex<double>>& values,
                 std::vector<std::complex<double>>& coeffs) {
    auto& p = plans_for(n);
    const std::size_t nn = std::size_t(n) * n;
    if (values.size() != nn) throw std::invalid_argument("fft: size mismatch");
    for (std::size_t i = 0; i < nn; ++i) {
        p.in[i][0] = values[i].real();
        p.in[i][1] = values[i].imag();
    }
    fftw_execute(p.fwd);
    coeffs.resize(nn);
    const double scale = 1.0 / double(nn);
    for (std::size_t i = 0; i < nn; ++i) coeffs[i] = {p.out[i][0] * scale, p.out[i][1] * scale};
}

void dft_forward(int n, const std::vector<double>& values, std::vector<std::complex<double>>& coeffs) {
    auto& p = plans_for(n);
    const std::size_t nn = std::size_t(n) * n;
    if (values.size() != nn) throw std::invalid_argument("fft: size mismatch");
    for (std::size_t i = 0; i < nn; ++i) {
        p.in[i][0] = values[i];
        p.in[i][1] = 0.0;
    }
    fftw_execute(p.fwd);
    coeffs.resize(nn);
    const double scale = 1.0 / double(nn);
    for (std::size_t i = 0; i < nn; ++i) coeffs[i] = {p.out[i][0] * scale, p.out[i][1] * scale};
}

void dft_backward(int n, const std::vector<std::complex<double>>& coeffs,
                  std::vector<std::complex<double>>& values) {
    auto& p = plans_for(n);
    const std::size_t nn = std::size_t(n) * n;
    if (coeffs.size() != nn) throw std::invalid_argument("fft: size mismatch");
    for (std::size_t i = 0; i < nn; ++i) {
        p.in[i][0] = coeffs[i].real();
        p.in[i][1] = coeffs[i].imag();
    }
    fftw_execute(p.bwd);
    values.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) values[i] = {p.out[i][0], p.out[i][1]};
}

}  // namespace sel
