#pragma once

#include <functional>
#include <vector>

#include "sel/kernel.hpp"
#include "sel/measure.hpp"
#include "sel/torus.hpp"

namespace sel {

/// C^2 test function with analytic gradient.
/// c2_norm is the frozen convention max(sup|phi|, sup|grad phi|, sup|Hess phi|).
struct TestFunction {
    std::function<double(TorusPoint)> f;
    std::function<Vec2(TorusPoint)> grad;
    std::function<double(TorusPoint)> laplacian;
    double c2_norm = 1.0;

    static TestFunction trig(Mode k, bool is_sin);
    static TestFunction from_mode(const TestMode& m) { return trig(m.k, m.is_sin); }
};

/// Symmetrized kernel F_phi(x,y) = (1/2) K(x-y) . (grad phi(x) - grad phi(y))
/// for x != y (positions compared exactly after modular reduction), 0 on the
/// diagonal. K is the truncated-Fourier kernel at `cutoff`, or the given
/// table's interpolant.
double f_phi(TorusPoint x, TorusPoint y, const TestFunction& phi, int cutoff);
double f_phi(TorusPoint x, TorusPoint y, const TestFunction& phi, const KernelTable& table);

/// <N(mu), phi>: exact double sum over atom pairs (diagonal vanishes by the
/// indicator). With a table the interpolated kernel replaces the direct sum.
double nonlinear_functional(const ParticleMeasure& mu, const TestFunction& phi, int cutoff);
double nonlinear_functional(const ParticleMeasure& mu, const TestFunction& phi, const KernelTable& table);

/// Tensor quadrature of the double integral on a grid density, evaluated via
/// circular convolution (identical sums, FFT-accelerated).
double nonlinear_functional(const GridField& xi, const TestFunction& phi, int cutoff);
/// Literal O(N^4) pair loop; reference for the convolution route.
double nonlinear_functional_direct(const GridField& xi, const TestFunction& phi, int cutoff);

/// Frozen regression constant for sup |F_phi| / ||phi||_{C^2} with the
/// smoothed kernel (calibration sweep over random pairs and cutoffs <= 32).
inline constexpr double kFphiRegressionBound = 0.75;

struct BoundReport {
    double ratio = 0.0;       // |<N(mu),phi>| / (tv^2 ||phi||_C2)
    double bound = kFphiRegressionBound;
    bool flagged = false;     // ratio exceeds the frozen constant
};
BoundReport n_bound_check(MeasureRef mu, const TestFunction& phi, int cutoff);

struct ContinuityReport {
    std::vector<double> weak_distance;    // d(mu_n, target)
    std::vector<double> nonlinear_delta;  // |<N(mu_n) - N(target), phi>|
    bool trend_ok = false;                // deltas decay overall (last <= first/2)
};

/// Requires non-negative measures (the continuity claim needs positivity).
ContinuityReport continuity_experiment(const std::vector<ParticleMeasure>& sequence,
                                       const ParticleMeasure& target, const TestFunction& phi,
                                       const KernelTable& table, const TestFamily& family);

}  // namespace sel
