#pragma once

#include "qinterp/families.hpp"

namespace qinterp {

// Flat i.i.d. eigenphase samples of the interpolated random-gate component
// (worst-case phases excluded) at a fixed theta.
struct PhaseSampleSet {
    double theta = 0.0;
    std::vector<double> samples;
    double range_lo = 0.0;
    double range_hi = 0.0;
    uint64_t seed = 0;

    int count() const { return static_cast<int>(samples.size()); }
};

// Draws at least `count` phases by resampling the architecture's slot
// randomness and scaling by (1 - theta/m). Shared seeds give the exact
// deterministic map f_theta: samples(theta) = (1 - theta/m) * samples(0).
PhaseSampleSet eigenphase_samples(FamilyKind family, const Architecture& arch,
                                  QaoaPhaseDistribution dist, double theta, int count,
                                  uint64_t seed);

// Half l1 distance of equal-range histograms. The estimator carries an
// O(sqrt(bins/count)) upward bias on identical distributions; see
// self_tvd_noise_floor.
double empirical_tvd(const PhaseSampleSet& a, const PhaseSampleSet& b, int bins);

// Expected estimator value plus a 4-sigma band for two independent sample
// sets of the same distribution: 0.5642 sqrt(bins/count) + 1.70/sqrt(count).
double self_tvd_noise_floor(int bins, int count);

struct TvdRow {
    double theta = 0.0;
    int count = 0;
    int bins = 0;
    double tvd = 0.0;
    double bootstrap_lo = 0.0;
    double bootstrap_hi = 0.0;
};

struct TvdReport {
    std::vector<TvdRow> rows;
    bool monotone_within_bands = false;
    bool zero_row_consistent = false;
};

// Empirical TVD of each grid theta against a theta = 0 baseline with
// bootstrap bands; asserts the non-decreasing trend within 2-sigma bands and
// that the theta = 0 row sits at the estimator noise floor.
TvdReport tvd_scaling_report(FamilyKind family, const Architecture& arch,
                             QaoaPhaseDistribution dist, const std::vector<double>& thetas,
                             int count, int bins, uint64_t seed);

// One-sample KS statistic against the uniform CDF on [lo, hi].
double ks_statistic_uniform(const std::vector<double>& samples, double lo, double hi);

}  // namespace qinterp
