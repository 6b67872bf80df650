#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qinterp/robustfit.hpp"
#include "qinterp/rng.hpp"

using namespace qinterp;

namespace {

ChebPoly random_poly(int d, double Delta, uint64_t seed) {
    auto eng = make_engine(seed);
    std::vector<double> coef(d + 1);
    for (double& c : coef) c = 2.0 * uniform01(eng) - 1.0;
    return ChebPoly(0.0, Delta, coef);
}

double sup_distance(const ChebPoly& a, const ChebPoly& b, double Delta) {
    double sup = 0.0;
    for (int g = 0; g <= 2000; ++g) {
        double x = Delta * g / 2000.0;
        sup = std::max(sup, std::abs(a(x) - b(x)));
    }
    return sup;
}

std::vector<double> oracle_values(const NoisyOracle& oracle, const SamplePlan& plan) {
    std::vector<double> ys(plan.x.size());
    for (size_t i = 0; i < ys.size(); ++i)
        ys[i] = oracle.value(static_cast<int>(i), plan.x[i]);
    return ys;
}

}  // namespace

TEST_SUITE_BEGIN("robustfit");

TEST_CASE("sample points: U = 0.5 and U = 0 map to Delta/2 and Delta") {
    // x = Delta (cos(pi U) + 1)/2
    double Delta = 0.25;
    CHECK(Delta * (std::cos(std::numbers::pi * 0.5) + 1.0) / 2.0 ==
          doctest::Approx(Delta / 2));
    CHECK(Delta * (std::cos(0.0) + 1.0) / 2.0 == doctest::Approx(Delta));
    SamplePlan plan = chebyshev_sample_points(5, Delta, 4.0, 9);
    CHECK(plan.count == static_cast<int>(std::ceil(4.0 * 5 * std::log(7.0))));
    for (double x : plan.x) {
        CHECK(x >= 0.0);
        CHECK(x <= Delta);
    }
    CHECK_THROWS_AS(chebyshev_sample_points(5, 1.5, 4.0, 9), std::invalid_argument);
}

TEST_CASE("sample points follow the arcsine law") {
    SamplePlan plan;
    plan.Delta = 0.5;
    plan.x.clear();
    auto eng = make_engine(33);
    for (int i = 0; i < 100000; ++i)
        plan.x.push_back(0.5 * (std::cos(std::numbers::pi * uniform01(eng)) + 1.0) / 2.0);
    // KS against the arcsine CDF 1 - acos(t)/pi of t = 2x/Delta - 1
    std::vector<double> t;
    for (double x : plan.x) t.push_back(2.0 * x / 0.5 - 1.0);
    std::sort(t.begin(), t.end());
    double n = static_cast<double>(t.size()), d = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        double cdf = 1.0 - std::acos(std::clamp(t[i], -1.0, 1.0)) / std::numbers::pi;
        d = std::max(d, std::max((i + 1) / n - cdf, cdf - i / n));
    }
    CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("oracle determinism and outlier rate") {
    ChebPoly truth = random_poly(3, 0.25, 1);
    NoisyOracle oracle([&truth](double x) { return truth(x); }, 1e-6, 0.2, 1.0, 5);
    CHECK(oracle.value(7, 0.1) == oracle.value(7, 0.1));
    int outliers = 0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) outliers += oracle.is_outlier(i);
    CHECK(std::abs(outliers / static_cast<double>(count) - 0.2) < 0.01);
    // inliers stay within delta
    for (int i = 0; i < 200; ++i)
        if (!oracle.is_outlier(i))
            CHECK(std::abs(oracle.value(i, 0.07) - truth(0.07)) <= 1e-6);
    CHECK_THROWS_AS(NoisyOracle([](double) { return 0.0; }, 1e-6, 0.3, 1.0, 1),
                    std::invalid_argument);
}

TEST_CASE("per-draw coupling makes outlier status global") {
    int bad_draws = 0;
    for (uint64_t s = 0; s < 400; ++s) {
        NoisyOracle oracle([](double) { return 0.5; }, 0.0, 0.2, 1.0, 4000 + s,
                           OutlierCoupling::PerDraw);
        bool first = oracle.is_outlier(0);
        for (int i = 1; i < 10; ++i) CHECK(oracle.is_outlier(i) == first);
        bad_draws += first;
    }
    CHECK(std::abs(bad_draws / 400.0 - 0.2) < 0.07);
}

TEST_CASE("noiseless samples recover the polynomial") {
    for (int d : {2, 5, 10}) {
        ChebPoly truth = random_poly(d, 0.25, 100 + d);
        SamplePlan plan = chebyshev_sample_points(d, 0.25, 4.0, 200 + d);
        std::vector<double> ys(plan.x.size());
        for (size_t i = 0; i < ys.size(); ++i) ys[i] = truth(plan.x[i]);
        ChebPoly fit = robust_fit(plan, ys, d, 0.0);
        CHECK(sup_distance(fit, truth, 0.25) <= 1e-9);
    }
}

TEST_CASE("constant polynomial with outliers: sup error <= 2.25 delta in most trials") {
    const double delta = 1e-6;
    int ok = 0;
    for (uint64_t s = 0; s < 50; ++s) {
        ChebPoly truth(0.0, 0.25, {0.5, 0, 0, 0});
        SamplePlan plan = chebyshev_sample_points(3, 0.25, 4.0, 300 + s);
        NoisyOracle oracle([&truth](double x) { return truth(x); }, delta, 0.2, 1.0,
                           900 + s);
        ChebPoly fit = robust_fit(plan, oracle_values(oracle, plan), 3, delta);
        ok += sup_distance(fit, truth, 0.25) <= 2.25 * delta;
    }
    CHECK(ok * 3 >= 100);  // >= 2/3 of 50
}

TEST_CASE("outlier-free uniform noise stays within (2+eps) delta") {
    const double delta = 1e-4;
    int ok = 0;
    for (uint64_t s = 0; s < 30; ++s) {
        ChebPoly truth = random_poly(4, 0.25, 600 + s);
        SamplePlan plan = chebyshev_sample_points(4, 0.25, 4.0, 700 + s);
        NoisyOracle oracle([&truth](double x) { return truth(x); }, delta, 0.0, 1.0,
                           800 + s);
        ChebPoly fit = robust_fit(plan, oracle_values(oracle, plan), 4, delta);
        ok += sup_distance(fit, truth, 0.25) <= 2.25 * delta;
    }
    CHECK(ok * 3 >= 60);
}

TEST_CASE("fit determinism") {
    ChebPoly truth = random_poly(5, 0.25, 41);
    SamplePlan plan = chebyshev_sample_points(5, 0.25, 4.0, 42);
    NoisyOracle oracle([&truth](double x) { return truth(x); }, 1e-6, 0.2, 1.0, 43);
    std::vector<double> ys = oracle_values(oracle, plan);
    ChebPoly a = robust_fit(plan, ys, 5, 1e-6);
    ChebPoly b = robust_fit(plan, ys, 5, 1e-6);
    CHECK(a.coefficients() == b.coefficients());
}

TEST_CASE("underdetermined or degenerate fits are rejected") {
    SamplePlan plan = chebyshev_sample_points(1, 0.25, 1.0, 1);
    std::vector<double> ys(plan.x.size(), 0.0);
    CHECK_THROWS_AS(robust_fit(plan, ys, plan.count, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(robust_fit(plan, {1.0}, 1, 0.0), std::invalid_argument);
    SamplePlan degenerate = plan;
    degenerate.Delta = 0.0;
    CHECK_THROWS_AS(robust_fit(degenerate, ys, 1, 0.0), std::invalid_argument);
}

TEST_CASE("extrapolation certificate identity and exact-fit case") {
    // certificate: log2(bound) = log2(9 delta / 4) + d log2(8m/Delta)
    ChebPoly truth = random_poly(3, 0.25, 51);
    SamplePlan plan = chebyshev_sample_points(3, 0.25, 4.0, 52);
    std::vector<double> ys(plan.x.size());
    for (size_t i = 0; i < ys.size(); ++i) ys[i] = truth(plan.x[i]);
    ChebPoly fit = robust_fit(plan, ys, 3, 0.0);
    const double m = 8.0, delta = 1e-9;
    ExtrapolationCertificate cert = extrapolate_to_m(fit, m, 0.25, delta);
    CHECK(cert.Delta_prime == doctest::Approx(0.25 / 64.0));
    CHECK(cert.delta_prime == doctest::Approx(2.25e-9));
    CHECK(cert.log2_amplification == doctest::Approx(3.0 * std::log2(8.0 * m / 0.25)));
    CHECK(cert.log2_bound ==
          doctest::Approx(std::log2(2.25e-9) + 3.0 * std::log2(8.0 * 8.0 / 0.25)));
    double measured = std::abs(cert.p_m - static_cast<double>(truth.eval_quad(m)));
    CHECK(std::log2(std::max(measured, 1e-300)) <= cert.log2_bound);
}

TEST_CASE("extrapolation stays within the certificate across seeds and degrees") {
    for (int d : {2, 3, 5}) {
        const double delta = 1e-12, Delta = 0.25, m = 8.0;
        for (uint64_t s = 0; s < 50; ++s) {
            ChebPoly truth = random_poly(d, Delta, 7000 + s);
            SamplePlan plan = chebyshev_sample_points(d, Delta, 4.0, 7100 + s);
            NoisyOracle oracle([&truth](double x) { return truth(x); }, delta, 0.0, 1.0,
                               7200 + s);
            ChebPoly fit = robust_fit(plan, oracle_values(oracle, plan), d, delta);
            ExtrapolationCertificate cert = extrapolate_to_m(fit, m, Delta, delta);
            double measured = std::abs(cert.p_m - static_cast<double>(truth.eval_quad(m)));
            CHECK(std::log2(std::max(measured, 1e-300)) <= cert.log2_bound);
        }
    }
}

TEST_CASE("coefficient norm check") {
    // zero polynomial
    ChebPoly zero(-1.0, 1.0, {0.0, 0.0, 0.0});
    CHECK(coefficient_norm_check(zero, 1e-9).pass);

    // T_d scaled by delta'
    for (int d : {3, 6, 10}) {
        std::vector<double> coef(d + 1, 0.0);
        coef[d] = 1e-6;
        CHECK(coefficient_norm_check(ChebPoly(-1.0, 1.0, coef), 1e-6).pass);
    }

    // random degree-5 polynomials normalized to sup <= delta' on a grid
    for (uint64_t s = 0; s < 100; ++s) {
        auto eng = make_engine(8000 + s);
        std::vector<double> coef(6);
        for (double& c : coef) c = 2.0 * uniform01(eng) - 1.0;
        ChebPoly p(-1.0, 1.0, coef);
        double sup = 0.0;
        for (int g = 0; g <= 500; ++g)
            sup = std::max(sup, std::abs(p.eval_normalized(-1.0 + 2.0 * g / 500.0)));
        std::vector<double> scaled = coef;
        const double dp = 1e-6;
        for (double& c : scaled) c *= dp / sup;
        CHECK(coefficient_norm_check(ChebPoly(-1.0, 1.0, scaled), dp).pass);
    }
}

TEST_SUITE_END();
