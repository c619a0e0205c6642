#include "sel/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sel/spectral.hpp"

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

double pairwise(const std::vector<double>& a) { return a.empty() ? 0.0 : pairwise(a, 0, a.size()); }

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    r.mean = pairwise(xs) / double(xs.size());
    if (xs.size() > 1) {
        std::vector<double> sq(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - r.mean) * (xs[i] - r.mean);
        double var = pairwise(sq) / double(xs.size() - 1);
        r.se = std::sqrt(var / double(xs.size()));
    }
    return r;
}

}  // namespace

DiagnosticsRecord record_particles(const ParticleMeasure& cur, const ParticleMeasure& init,
                                   const TestFamily& family, int sobolev_cutoff, double t) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.mass = cur.mass();
    rec.min_weight = cur.min_weight();
    rec.tv_norm = total_variation(cur);
    auto table = particle_mode_table(cur, sobolev_cutoff);
    rec.hminus1_trunc = sobolev_norm_of_table(table, sobolev_cutoff, -1.0);
    rec.hminus4_trunc = sobolev_norm_of_table(table, sobolev_cutoff, -4.0);
    // truncated energy of u = K * mu: (2pi)^2 sum |muhat|^2 / |k|^2
    {
        const int w = 2 * sobolev_cutoff + 1;
        std::vector<double> terms;
        for (int k1 = -sobolev_cutoff; k1 <= sobolev_cutoff; ++k1)
            for (int k2 = -sobolev_cutoff; k2 <= sobolev_cutoff; ++k2) {
                double n2 = double(k1) * k1 + double(k2) * k2;
                if (n2 == 0.0 || n2 > double(sobolev_cutoff) * sobolev_cutoff) continue;
                terms.push_back(std::norm(table[std::size_t(k1 + sobolev_cutoff) * w + (k2 + sobolev_cutoff)]) / n2);
            }
        rec.energy = kTwoPi * kTwoPi * pairwise(terms);
    }
    rec.enstrophy = std::numeric_limits<double>::quiet_NaN();
    rec.weakstar_dist_to_init = weakstar_distance(cur, init, family);
    return rec;
}

DiagnosticsRecord record_grid(const GridField& cur, const GridField& init, const TestFamily& family,
                              int sobolev_cutoff, double t) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.mass = cur.integral();
    rec.min_weight = cur.min_value();
    rec.tv_norm = cur.l1_norm();
    Spectrum spec = analyze(cur);
    rec.energy = spectral_energy(spec);
    rec.enstrophy = spectral_enstrophy(spec);
    rec.hminus1_trunc = sobolev_norm(cur, -1.0, sobolev_cutoff);
    rec.hminus4_trunc = sobolev_norm(cur, -4.0, sobolev_cutoff);
    rec.weakstar_dist_to_init = weakstar_distance(cur, init, family);
    return rec;
}

CheckReport check_mass_positivity(const std::vector<DiagnosticsRecord>& traj, bool particle_run,
                                  double max_xi0, double undershoot_budget_frac, double mass_rel_tol) {
    CheckReport rep;
    rep.name = "mass_positivity";
    if (traj.empty()) {
        rep.pass = false;
        return rep;
    }
    double mass0 = traj.front().mass;
    double scale = std::max(std::abs(mass0), 1e-300);
    double floor_val = -undershoot_budget_frac * max_xi0;
    for (const auto& r : traj) {
        double dev = std::abs(r.mass - mass0) / scale;
        rep.add({"mass_conservation", r.t, dev, mass_rel_tol, mass_rel_tol - dev, dev <= mass_rel_tol});
        if (particle_run)
            rep.add({"min_weight_nonnegative", r.t, r.min_weight, 0.0, r.min_weight, r.min_weight >= 0.0});
        else
            rep.add({"grid_min_budget", r.t, r.min_weight, floor_val, r.min_weight - floor_val,
                     r.min_weight >= floor_val});
    }
    return rep;
}

EnsembleSummary summarize(const EnsembleSeries& series) {
    EnsembleSummary s;
    s.members = int(series.members.size());
    s.times = series.times;
    const std::size_t nt = series.times.size();
    auto collect = [&](auto field) {
        std::vector<MeanSe> out(nt);
        std::vector<double> xs(series.members.size());
        for (std::size_t t = 0; t < nt; ++t) {
            for (std::size_t m = 0; m < series.members.size(); ++m) xs[m] = field(series.members[m][t]);
            out[t] = mean_se(xs);
        }
        return out;
    };
    s.mass = collect([](const DiagnosticsRecord& r) { return r.mass; });
    s.min_weight = collect([](const DiagnosticsRecord& r) { return r.min_weight; });
    s.tv_norm = collect([](const DiagnosticsRecord& r) { return r.tv_norm; });
    s.energy = collect([](const DiagnosticsRecord& r) { return r.energy; });
    s.enstrophy = collect([](const DiagnosticsRecord& r) { return r.enstrophy; });
    s.hminus1 = collect([](const DiagnosticsRecord& r) { return r.hminus1_trunc; });
    s.hminus4 = collect([](const DiagnosticsRecord& r) { return r.hminus4_trunc; });
    s.wdist = collect([](const DiagnosticsRecord& r) { return r.weakstar_dist_to_init; });
    return s;
}

CheckReport check_energy_bound(const EnsembleSummary& summary, double c1_sum) {
    if (summary.members < 16)
        throw std::invalid_argument("check_energy_bound: needs >= 16 ensemble members");
    CheckReport rep;
    rep.name = "energy_gronwall";
    double e0 = summary.energy.front().mean;
    for (std::size_t t = 0; t < summary.times.size(); ++t) {
        double mean = summary.energy[t].mean;
        double rel_se = mean > 0 ? summary.energy[t].se / mean : 0.0;
        double env = e0 * std::exp(summary.times[t] * c1_sum) * (1.0 + 3.0 * rel_se);
        rep.add({"energy_envelope", summary.times[t], mean, env, env - mean, mean <= env});
    }
    return rep;
}

CheckReport check_hminus1_uniform(const EnsembleSummary& summary, double c1_sum) {
    CheckReport rep;
    rep.name = "hminus1_uniform";
    double h0 = summary.hminus1.front().mean;
    double tv0 = summary.tv_norm.front().mean;
    for (std::size_t t = 0; t < summary.times.size(); ++t) {
        double mean = summary.hminus1[t].mean;
        double env = std::exp(0.5 * summary.times[t] * c1_sum) * (h0 + tv0) + 3.0 * summary.hminus1[t].se;
        rep.add({"hminus1_envelope", summary.times[t], mean, env, env - mean, mean <= env});
    }
    return rep;
}

HolderFit fit_holder(const HolderSeries& series, double s, double lag_min, double lag_max,
                     int min_members) {
    HolderFit fit;
    const std::size_t members = series.blocks.size();
    const std::size_t nt = series.times.size();
    if (int(members) < min_members)
        throw std::invalid_argument("fit_holder: not enough ensemble members");
    if (nt < 3) throw std::invalid_argument("fit_holder: not enough snapshots");
    double dt_rec = series.times[1] - series.times[0];
    const int w = 2 * series.cutoff + 1;

    // dyadic lags within [lag_min, lag_max]
    std::vector<int> lag_steps;
    for (int l = 1; l < int(nt); l *= 2) {
        double lag = l * dt_rec;
        if (lag >= lag_min * (1.0 - 1e-9) && lag <= lag_max * (1.0 + 1e-9)) lag_steps.push_back(l);
    }
    if (int(lag_steps.size()) < 5)
        throw std::invalid_argument("fit_holder: fewer than 5 dyadic lags in the requested window");

    auto diff_norm_sq = [&](const std::vector<std::complex<double>>& a,
                            const std::vector<std::complex<double>>& b) {
        std::vector<double> terms;
        terms.reserve(a.size());
        for (int k1 = -series.cutoff; k1 <= series.cutoff; ++k1)
            for (int k2 = -series.cutoff; k2 <= series.cutoff; ++k2) {
                double n2 = double(k1) * k1 + double(k2) * k2;
                if (n2 > double(series.cutoff) * series.cutoff) continue;
                std::size_t idx = std::size_t(k1 + series.cutoff) * w + (k2 + series.cutoff);
                terms.push_back(std::pow(1.0 + n2, s) * std::norm(a[idx] - b[idx]));
            }
        return pairwise(terms);
    };

    std::vector<double> xs, ys;
    for (int l : lag_steps) {
        std::vector<double> samples;
        for (std::size_t m = 0; m < members; ++m)
            for (std::size_t t0 = 0; t0 + l < nt; ++t0)
                samples.push_back(diff_norm_sq(series.blocks[m][t0 + l], series.blocks[m][t0]));
        double mean = pairwise(samples) / double(samples.size());
        fit.lag_values.push_back(l * dt_rec);
        fit.mean_sq_increment.push_back(mean);
        if (mean > 0.0) {
            xs.push_back(std::log(l * dt_rec));
            ys.push_back(std::log(mean));
        }
    }
    fit.lags = int(lag_steps.size());
    if (xs.size() < 2) {
        fit.degenerate = true;  // frozen field: all increments zero
        return fit;
    }
    double n = double(xs.size());
    double sx = pairwise(xs), sy = pairwise(ys);
    double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

CheckReport check_holder_scaling(const HolderSeries& series, double s, double lag_min, double lag_max,
                                 double slope_lo, double slope_hi, int min_members) {
    CheckReport rep;
    rep.name = "holder_scaling";
    HolderFit fit = fit_holder(series, s, lag_min, lag_max, min_members);
    if (fit.degenerate) {
        rep.degenerate = true;
        rep.add({"holder_slope_degenerate", 0.0, 0.0, 0.0, 0.0, true});
        return rep;
    }
    bool ok = fit.slope >= slope_lo && fit.slope <= slope_hi;
    rep.add({"holder_slope", 0.0, fit.slope, slope_hi, fit.slope - slope_lo, ok});
    rep.add({"holder_fit_r2", 0.0, fit.r2, 1.0, fit.r2, true});
    return rep;
}

}  // namespace sel
