#include <numbers>

#include "doctest.h"
#include "qinterp/statcheck.hpp"
#include "testutil.hpp"

using namespace qinterp;
namespace tu = qinterp::testutil;

namespace {
const Architecture kQaoaArch = Architecture::qaoa_chain(3, 6);
const Architecture kHaarArch = Architecture::haar_chain(3, 6);
const QaoaPhaseDistribution kUniform = QaoaPhaseDistribution::uniform();
}  // namespace

TEST_SUITE_BEGIN("statcheck");

TEST_CASE("theta = 0 QAOA samples are uniform on [0, 2pi)") {
    PhaseSampleSet s =
        eigenphase_samples(FamilyKind::QaoaP1, kQaoaArch, kUniform, 0.0, 20000, 3);
    CHECK(s.count() == 20000);
    double ks = ks_statistic_uniform(s.samples, 0.0, 2.0 * std::numbers::pi);
    CHECK(ks < tu::ks_critical_1pct(s.samples.size()));
}

TEST_CASE("theta = m degenerates to zero phases") {
    PhaseSampleSet s =
        eigenphase_samples(FamilyKind::QaoaP1, kQaoaArch, kUniform, 6.0, 500, 4);
    for (double ph : s.samples) CHECK(ph == 0.0);
}

TEST_CASE("samples are deterministic in seed and scale exactly") {
    PhaseSampleSet a =
        eigenphase_samples(FamilyKind::Haar, kHaarArch, kUniform, 0.0, 1000, 5);
    PhaseSampleSet b =
        eigenphase_samples(FamilyKind::Haar, kHaarArch, kUniform, 0.0, 1000, 5);
    CHECK(a.samples == b.samples);
    // shared seed: samples(theta) = (1 - theta/m) * samples(0) exactly
    PhaseSampleSet c =
        eigenphase_samples(FamilyKind::Haar, kHaarArch, kUniform, 1.5, 1000, 5);
    const double scale = 1.0 - 1.5 / 6.0;
    for (int i = 0; i < 1000; ++i) CHECK(c.samples[i] == scale * a.samples[i]);
}

TEST_CASE("empirical TVD basics") {
    PhaseSampleSet a =
        eigenphase_samples(FamilyKind::QaoaP1, kQaoaArch, kUniform, 0.0, 5000, 6);
    CHECK(empirical_tvd(a, a, 64) == 0.0);

    // disjoint supports: (1 - theta/m) scaling cannot produce this, so build
    // synthetic sets
    PhaseSampleSet lo = a, hi = a;
    for (auto& v : lo.samples) v = std::fmod(v, 3.0);
    for (auto& v : hi.samples) v = 3.1 + std::fmod(v, 3.0);
    double tvd = empirical_tvd(lo, hi, 64);
    CHECK(tvd >= 1.0 - 1.0 / 5000.0);
    CHECK(tvd <= 1.0);

    PhaseSampleSet empty = a;
    empty.samples.clear();
    CHECK_THROWS_AS(empirical_tvd(a, empty, 64), std::invalid_argument);
    PhaseSampleSet other = a;
    other.range_hi = 1.0;
    CHECK_THROWS_AS(empirical_tvd(a, other, 64), std::invalid_argument);
}

TEST_CASE("self-TVD of disjoint-seed samples sits under 3/sqrt(count)") {
    const int count = 100000;
    for (FamilyKind fam : {FamilyKind::QaoaP1, FamilyKind::Iqp, FamilyKind::Haar}) {
        const Architecture& arch = fam == FamilyKind::Haar
                                       ? kHaarArch
                                       : (fam == FamilyKind::QaoaP1
                                              ? kQaoaArch
                                              : Architecture::iqp_chain(3, 6));
        PhaseSampleSet a = eigenphase_samples(fam, arch, kUniform, 0.0, count, 100);
        PhaseSampleSet b = eigenphase_samples(fam, arch, kUniform, 0.0, count, 200);
        // 8 bins keep the estimator bias below the sampling-noise cap
        CHECK(empirical_tvd(a, b, 8) <= 3.0 / std::sqrt(static_cast<double>(count)));
    }
}

TEST_CASE("TVD at theta = Delta stays under the regression cap") {
    const int count = 100000;
    for (FamilyKind fam : {FamilyKind::QaoaP1, FamilyKind::Iqp, FamilyKind::Haar}) {
        const Architecture& arch = fam == FamilyKind::Haar
                                       ? kHaarArch
                                       : (fam == FamilyKind::QaoaP1
                                              ? kQaoaArch
                                              : Architecture::iqp_chain(3, 6));
        PhaseSampleSet a = eigenphase_samples(fam, arch, kUniform, 0.0, count, 300);
        PhaseSampleSet b = eigenphase_samples(fam, arch, kUniform, 0.25, count, 400);
        CHECK(empirical_tvd(a, b, 64) <= 0.2);
    }
}

TEST_CASE("tvd scaling report") {
    TvdReport rep = tvd_scaling_report(FamilyKind::QaoaP1, kQaoaArch, kUniform,
                                       {0.0, 0.125, 0.25}, 30000, 8, 7);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.zero_row_consistent);
    CHECK(rep.monotone_within_bands);
    CHECK(rep.rows[0].tvd <= self_tvd_noise_floor(8, 30000));
    for (const TvdRow& row : rep.rows) {
        CHECK(row.bootstrap_lo <= row.bootstrap_hi);
        CHECK(row.tvd >= 0.0);
        CHECK(row.tvd <= 1.0);
    }
    // larger count shrinks the zero row
    TvdReport big = tvd_scaling_report(FamilyKind::QaoaP1, kQaoaArch, kUniform,
                                       {0.0}, 120000, 8, 7);
    CHECK(big.rows[0].tvd < rep.rows[0].tvd);
}

TEST_SUITE_END();
