#include "qinterp/statcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qinterp/rng.hpp"

namespace qinterp {

PhaseSampleSet eigenphase_samples(FamilyKind family, const Architecture& arch,
                                  QaoaPhaseDistribution dist, double theta, int count,
                                  uint64_t seed) {
    const int m = arch.m();
    if (theta < 0.0 || theta > m) throw std::invalid_argument("theta outside [0, m]");
    const double scale = 1.0 - theta / m;
    PhaseSampleSet out;
    out.theta = theta;
    out.seed = seed;
    if (family == FamilyKind::Haar) {
        out.range_lo = -std::numbers::pi;
        out.range_hi = std::numbers::pi;
    } else {
        out.range_lo = 0.0;
        out.range_hi = 2.0 * std::numbers::pi;
    }
    out.samples.reserve(count);
    uint64_t round = 0;
    while (static_cast<int>(out.samples.size()) < count) {
        uint64_t round_seed = split_seed(seed, round++);
        if (family == FamilyKind::Haar) {
            for (size_t j = 0; j < arch.slots.size(); ++j) {
                Gate h = haar_unitary(arch.slots[j].dim(), split_seed(round_seed, j));
                for (double ph : unitary_eigenphases(h))
                    out.samples.push_back(scale * ph);
            }
        } else {
            Circuit base = trivial_base(arch, family);
            RandomDraw draw = sample_random_draw(
                family, arch, base,
                family == FamilyKind::QaoaP1 ? std::optional(dist) : std::nullopt,
                round_seed);
            for (const auto& slot_phases : draw.random.phases)
                for (double ph : slot_phases) out.samples.push_back(scale * ph);
        }
    }
    out.samples.resize(count);
    return out;
}

double empirical_tvd(const PhaseSampleSet& a, const PhaseSampleSet& b, int bins) {
    if (bins < 2) throw std::invalid_argument("empirical_tvd needs at least 2 bins");
    if (a.samples.empty() || b.samples.empty())
        throw std::invalid_argument("empirical_tvd needs non-empty sample sets");
    if (a.range_lo != b.range_lo || a.range_hi != b.range_hi)
        throw std::invalid_argument("sample sets need equal histogram ranges");
    const double lo = a.range_lo, hi = a.range_hi;
    auto histogram = [&](const std::vector<double>& xs) {
        std::vector<double> h(bins, 0.0);
        for (double x : xs) {
            int idx = static_cast<int>((x - lo) / (hi - lo) * bins);
            idx = std::clamp(idx, 0, bins - 1);
            h[idx] += 1.0;
        }
        for (double& v : h) v /= static_cast<double>(xs.size());
        return h;
    };
    std::vector<double> ha = histogram(a.samples), hb = histogram(b.samples);
    double acc = 0.0;
    for (int i = 0; i < bins; ++i) acc += std::abs(ha[i] - hb[i]);
    return 0.5 * acc;
}

double self_tvd_noise_floor(int bins, int count) {
    // E[TVD] for identical distributions: (bins/2) E|p_hat - q_hat| with
    // per-bin std sqrt(2/(bins*count)); fluctuation std 0.426/sqrt(count).
    return 0.5642 * std::sqrt(static_cast<double>(bins) / count) +
           1.70 / std::sqrt(static_cast<double>(count));
}

TvdReport tvd_scaling_report(FamilyKind family, const Architecture& arch,
                             QaoaPhaseDistribution dist, const std::vector<double>& thetas,
                             int count, int bins, uint64_t seed) {
    PhaseSampleSet base = eigenphase_samples(family, arch, dist, 0.0, count, seed);
    TvdReport rep;
    std::vector<double> sigma;
    auto eng = make_engine(split_seed(seed, 0xb00f));
    for (size_t i = 0; i < thetas.size(); ++i) {
        PhaseSampleSet s = eigenphase_samples(family, arch, dist, thetas[i], count,
                                              split_seed(seed, 1 + i));
        TvdRow row;
        row.theta = thetas[i];
        row.count = count;
        row.bins = bins;
        row.tvd = empirical_tvd(base, s, bins);

        // bootstrap over resampled indices of both sets
        constexpr int kResamples = 120;
        std::vector<double> boot(kResamples);
        for (int r = 0; r < kResamples; ++r) {
            PhaseSampleSet ra = base, rb = s;
            for (int k = 0; k < count; ++k) {
                ra.samples[k] = base.samples[eng() % count];
                rb.samples[k] = s.samples[eng() % count];
            }
            boot[r] = empirical_tvd(ra, rb, bins);
        }
        std::sort(boot.begin(), boot.end());
        row.bootstrap_lo = boot[static_cast<size_t>(0.025 * kResamples)];
        row.bootstrap_hi = boot[static_cast<size_t>(0.975 * kResamples) - 1];
        double mean = 0.0;
        for (double v : boot) mean += v;
        mean /= kResamples;
        double var = 0.0;
        for (double v : boot) var += (v - mean) * (v - mean);
        sigma.push_back(std::sqrt(var / (kResamples - 1)));
        rep.rows.push_back(row);
    }
    rep.monotone_within_bands = true;
    for (size_t i = 0; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1].tvd + 2.0 * sigma[i + 1] < rep.rows[i].tvd - 2.0 * sigma[i])
            rep.monotone_within_bands = false;
    rep.zero_row_consistent = true;
    for (const TvdRow& row : rep.rows)
        if (row.theta == 0.0 && row.tvd > self_tvd_noise_floor(bins, count))
            rep.zero_row_consistent = false;
    return rep;
}

double ks_statistic_uniform(const std::vector<double>& samples, double lo, double hi) {
    std::vector<double> xs = samples;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double cdf = (xs[i] - lo) / (hi - lo);
        d = std::max(d, std::max((i + 1) / n - cdf, cdf - i / n));
    }
    return d;
}

}  // namespace qinterp
