#pragma once

#include <cstdint>
#include <functional>

#include "qinterp/chebpoly.hpp"

namespace qinterp {

// Sample points x_i in [0, Delta] whose images (2 x_i / Delta) - 1 are
// Chebyshev (arcsine) distributed on [-1, 1].
struct SamplePlan {
    double Delta = 0.0;
    int count = 0;
    std::vector<double> x;
    uint64_t seed = 0;
};

SamplePlan chebyshev_sample_points(int d, double Delta, double c, uint64_t seed);

// Whether an outlier event is decided per query or once per draw (two
// readings of a failure rate over circuits: per evaluation, or per sampled
// instance).
enum class OutlierCoupling { PerQuery, PerDraw };

// y_i = p(x_i) + noise: inlier noise uniform in [-delta, delta]; with
// probability eta the value is replaced by uniform [0, outlier_magnitude].
// Evaluations are pure in (point index, seed).
class NoisyOracle {
  public:
    NoisyOracle(std::function<double(double)> exact, double delta, double eta,
                double outlier_magnitude, uint64_t seed,
                OutlierCoupling coupling = OutlierCoupling::PerQuery);

    double value(int index, double x) const;
    bool is_outlier(int index) const;  // exposed for diagnostics
    double delta() const { return delta_; }
    double eta() const { return eta_; }

  private:
    std::function<double(double)> exact_;
    double delta_;
    double eta_;
    double magnitude_;
    uint64_t seed_;
    OutlierCoupling coupling_;
};

// Extrapolated value with its log-space certificate
//   |p_m - P(m)| <= delta' (8m/Delta)^d,  delta' = 9 delta / 4.
struct ExtrapolationCertificate {
    double p_m = 0.0;
    double delta_prime = 0.0;
    double Delta_prime = 0.0;          // Delta / (8m)
    double log2_amplification = 0.0;   // d * log2(8m/Delta)
    double log2_bound = 0.0;           // log2(delta') + log2 amplification
};

// Outlier-robust degree-d fit on [0, Delta]: l1 residual minimization in the
// Chebyshev basis by iteratively reweighted least squares (weight floor
// 1e-12, at most 200 iterations). When more than 25% of residuals stay
// large, falls back to nine half-sample fits combined by coefficient-wise
// median, keeping whichever candidate has the smaller l1 objective.
// Deterministic in (plan, values, d).
ChebPoly robust_fit(const SamplePlan& plan, const std::vector<double>& values, int d,
                    double delta);

// Evaluates the fit at theta = m through its [-1,1] pre-image 2m/Delta - 1
// (quad-precision Clenshaw) and attaches the certificate.
ExtrapolationCertificate extrapolate_to_m(const ChebPoly& fit, double m, double Delta,
                                          double delta);

struct CoefficientNormReport {
    bool pass = false;
    double log2_sum = 0.0;    // log2 sum_i |a_i|
    double log2_limit = 0.0;  // 2d + log2(delta')
};

// Checks sum_i |a_i| <= 4^d delta' for the monomial coefficients of a
// residual polynomial bounded by delta' on [-1, 1].
CoefficientNormReport coefficient_norm_check(const ChebPoly& residual_poly,
                                             double delta_prime);

}  // namespace qinterp
