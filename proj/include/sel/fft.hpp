#pragma once

#include <complex>
#include <vector>

namespace sel {

/// Normalized 2D DFT pair under the frozen convention
///   f(x) = sum_k fhat(k) e^{i k.x},   fhat(k) = (2pi)^{-2} int f e^{-i k.x} dx.
/// On an n x n grid (x_m = 2pi m / n) this is forward = DFT / n^2 and
/// backward = plain inverse DFT synthesis.
///
/// Plans are FFTW_ESTIMATE and cached per thread, so results are bitwise
/// reproducible and independent of how work is scheduled across threads.
void dft_forward(int n, const std::vector<double>& values, std::vector<std::complex<double>>& coeffs);
void dft_forward(int n, const std::vector<std::complex<double>>& values,
                 std::vector<std::complex<double>>& coeffs);
void dft_backward(int n, const std::vector<std::complex<double>>& coeffs,
                  std::vector<std::complex<double>>& values);

}  // namespace sel
