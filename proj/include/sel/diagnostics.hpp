#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sel/grid.hpp"
#include "sel/measure.hpp"

namespace sel {

/// Per-step scalars tracked along every run. For particle runs enstrophy is
/// NaN (grid only); for grid runs min_weight holds the min grid value.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double min_weight = 0.0;
    double tv_norm = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
    double hminus1_trunc = 0.0;
    double hminus4_trunc = 0.0;
    double weakstar_dist_to_init = 0.0;
};

DiagnosticsRecord record_particles(const ParticleMeasure& cur, const ParticleMeasure& init,
                                   const TestFamily& family, int sobolev_cutoff, double t);
DiagnosticsRecord record_grid(const GridField& cur, const GridField& init, const TestFamily& family,
                              int sobolev_cutoff, double t);

struct CheckRow {
    std::string check;
    double time = 0.0;
    double statistic = 0.0;
    double envelope = 0.0;
    double margin = 0.0;  // envelope - statistic (>= 0 when passing)
    bool pass = true;
};

struct CheckReport {
    std::string name;
    bool pass = true;
    bool degenerate = false;
    std::vector<CheckRow> rows;

    void add(CheckRow row) {
        pass = pass && row.pass;
        rows.push_back(std::move(row));
    }
};

/// Mass conservation plus positivity along one trajectory (particles: min
/// weight >= 0; grids: min value >= -budget * max xi_0).
CheckReport check_mass_positivity(const std::vector<DiagnosticsRecord>& traj, bool particle_run,
                                  double max_xi0 = 0.0, double undershoot_budget_frac = 0.01,
                                  double mass_rel_tol = 1e-12);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

struct EnsembleSeries {
    std::vector<double> times;
    std::vector<std::vector<DiagnosticsRecord>> members;  // member -> per time
};

struct EnsembleSummary {
    int members = 0;
    std::vector<double> times;
    std::vector<MeanSe> mass, min_weight, tv_norm, energy, enstrophy, hminus1, hminus4, wdist;
    std::optional<double> holder_slope;
    std::optional<double> holder_r2;
};

EnsembleSummary summarize(const EnsembleSeries& series);

/// mean ||u_t||^2 <= ||u_0||^2 exp(t c1_sum) (1 + 3 relSE): the Gronwall
/// envelope with the measured noise constants. Requires >= 16 members.
CheckReport check_energy_bound(const EnsembleSummary& summary, double c1_sum);

/// mean H^-1_trunc(t) <= exp(t c1_sum / 2) (hm1(0) + tv(0)) + 3 SE(t).
CheckReport check_hminus1_uniform(const EnsembleSummary& summary, double c1_sum);

/// Low-mode coefficient snapshots for Holder-increment statistics:
/// blocks[member][time] is the dense table over |k1|,|k2| <= cutoff.
struct HolderSeries {
    int cutoff = 0;
    std::vector<double> times;  // uniform spacing required
    std::vector<std::vector<std::vector<std::complex<double>>>> blocks;
};

struct HolderFit {
    double slope = 0.0;
    double r2 = 0.0;
    int lags = 0;
    bool degenerate = false;  // all increments zero
    std::vector<double> lag_values;
    std::vector<double> mean_sq_increment;
};

/// Fits log E ||xi_t - xi_s||^2_{H^s,trunc} against log(t-s) over dyadic
/// lags in [lag_min, lag_max]. Requires >= 5 lags (configuration error
/// otherwise) and >= min_members members.
HolderFit fit_holder(const HolderSeries& series, double s, double lag_min, double lag_max,
                     int min_members = 32);

CheckReport check_holder_scaling(const HolderSeries& series, double s, double lag_min, double lag_max,
                                 double slope_lo, double slope_hi, int min_members = 32);

}  // namespace sel
