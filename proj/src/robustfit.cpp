#include "qinterp/robustfit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qinterp/rng.hpp"

namespace qinterp {

SamplePlan chebyshev_sample_points(int d, double Delta, double c, uint64_t seed) {
    if (!(Delta > 0.0 && Delta < 1.0))
        throw std::invalid_argument("chebyshev_sample_points needs 0 < Delta < 1");
    if (d < 1) throw std::invalid_argument("chebyshev_sample_points needs d >= 1");
    SamplePlan plan;
    plan.Delta = Delta;
    plan.seed = seed;
    plan.count = static_cast<int>(std::ceil(c * d * std::log(d + 2.0)));
    auto eng = make_engine(seed);
    plan.x.resize(plan.count);
    for (double& x : plan.x)
        x = Delta * (std::cos(std::numbers::pi * uniform01(eng)) + 1.0) / 2.0;
    return plan;
}

NoisyOracle::NoisyOracle(std::function<double(double)> exact, double delta, double eta,
                         double outlier_magnitude, uint64_t seed, OutlierCoupling coupling)
    : exact_(std::move(exact)),
      delta_(delta),
      eta_(eta),
      magnitude_(outlier_magnitude),
      seed_(seed),
      coupling_(coupling) {
    if (delta < 0.0) throw std::invalid_argument("oracle delta must be >= 0");
    if (eta < 0.0 || eta >= 0.25)
        throw std::invalid_argument("oracle eta must be a constant below 1/4");
}

bool NoisyOracle::is_outlier(int index) const {
    uint64_t stream = coupling_ == OutlierCoupling::PerDraw ? ~uint64_t{0} : uint64_t(index);
    auto eng = make_engine(split_seed(seed_, stream));
    return uniform01(eng) < eta_;
}

double NoisyOracle::value(int index, double x) const {
    auto eng = make_engine(split_seed(seed_, uint64_t(index)));
    double u_out = uniform01(eng);
    double u_val = uniform01(eng);
    bool outlier = coupling_ == OutlierCoupling::PerQuery ? (u_out < eta_) : is_outlier(index);
    if (outlier) return magnitude_ * u_val;
    return exact_(x) + delta_ * (2.0 * u_val - 1.0);
}

namespace {

Eigen::MatrixXd cheb_design(const std::vector<double>& x, double Delta, int d) {
    const int rows = static_cast<int>(x.size());
    Eigen::MatrixXd a(rows, d + 1);
    for (int i = 0; i < rows; ++i) {
        double t = 2.0 * x[i] / Delta - 1.0;
        a(i, 0) = 1.0;
        if (d >= 1) a(i, 1) = t;
        for (int k = 2; k <= d; ++k) a(i, k) = 2.0 * t * a(i, k - 1) - a(i, k - 2);
    }
    return a;
}

// IRLS for the l1 objective; weight floor 1e-12, at most 200 iterations.
Eigen::VectorXd irls_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    const int rows = static_cast<int>(a.rows());
    Eigen::VectorXd w = Eigen::VectorXd::Ones(rows);
    Eigen::VectorXd coef;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::MatrixXd aw = w.cwiseSqrt().asDiagonal() * a;
        Eigen::VectorXd yw = w.cwiseSqrt().asDiagonal() * y;
        Eigen::VectorXd next = aw.colPivHouseholderQr().solve(yw);
        if (coef.size() &&
            (next - coef).cwiseAbs().maxCoeff() <=
                1e-15 * std::max(1.0, coef.cwiseAbs().maxCoeff())) {
            coef = next;
            break;
        }
        coef = next;
        Eigen::VectorXd r = (y - a * coef).cwiseAbs();
        for (int i = 0; i < rows; ++i) w(i) = 1.0 / std::max(r(i), 1e-12);
    }
    return coef;
}

double l1_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& coef) {
    return (y - a * coef).cwiseAbs().sum();
}

}  // namespace

ChebPoly robust_fit(const SamplePlan& plan, const std::vector<double>& values, int d,
                    double delta) {
    if (values.size() != plan.x.size())
        throw std::invalid_argument("value count does not match the plan");
    if (static_cast<int>(plan.x.size()) < d + 1)
        throw std::invalid_argument("underdetermined fit: need at least d+1 samples");
    if (plan.Delta <= 0.0) throw std::invalid_argument("degenerate plan");

    Eigen::MatrixXd a = cheb_design(plan.x, plan.Delta, d);
    Eigen::VectorXd y(values.size());
    for (size_t i = 0; i < values.size(); ++i) y(static_cast<int>(i)) = values[i];

    Eigen::VectorXd coef = irls_l1(a, y);

    // Fallback: with eta < 1/4 contamination the l1 fit should leave at most
    // ~25% residuals above the inlier band; more signals a capture by
    // outliers.
    const double large = 3.0 * delta + 1e-12;
    Eigen::VectorXd resid = (y - a * coef).cwiseAbs();
    int n_large = 0;
    for (int i = 0; i < resid.size(); ++i)
        if (resid(i) > large) ++n_large;
    if (n_large > resid.size() / 4) {
        const int count = static_cast<int>(plan.x.size());
        const int half = count / 2;
        Eigen::MatrixXd fits(d + 1, 9);
        for (int k = 0; k < 9; ++k) {
            auto eng = make_engine(split_seed(plan.seed, 9000 + k));
            std::vector<int> idx(count);
            for (int i = 0; i < count; ++i) idx[i] = i;
            for (int i = count - 1; i > 0; --i)
                std::swap(idx[i], idx[eng() % (i + 1)]);
            idx.resize(half);
            Eigen::MatrixXd ah(half, d + 1);
            Eigen::VectorXd yh(half);
            for (int i = 0; i < half; ++i) {
                ah.row(i) = a.row(idx[i]);
                yh(i) = y(idx[i]);
            }
            fits.col(k) = irls_l1(ah, yh);
        }
        Eigen::VectorXd med(d + 1);
        for (int r = 0; r <= d; ++r) {
            std::vector<double> row(9);
            for (int k = 0; k < 9; ++k) row[k] = fits(r, k);
            std::nth_element(row.begin(), row.begin() + 4, row.end());
            med(r) = row[4];
        }
        if (l1_objective(a, y, med) < l1_objective(a, y, coef)) coef = med;
    }

    std::vector<double> out(coef.data(), coef.data() + coef.size());
    return ChebPoly(0.0, plan.Delta, std::move(out));
}

ExtrapolationCertificate extrapolate_to_m(const ChebPoly& fit, double m, double Delta,
                                          double delta) {
    if (fit.lo() != 0.0 || std::abs(fit.hi() - Delta) > 1e-15 * Delta)
        throw std::invalid_argument("fit interval is not [0, Delta]");
    ExtrapolationCertificate cert;
    quad t = 2 * quad(m) / quad(Delta) - 1;
    cert.p_m = static_cast<double>(fit.eval_normalized_quad(t));
    cert.delta_prime = 2.25 * delta;
    cert.Delta_prime = Delta / (8.0 * m);
    cert.log2_amplification = fit.degree() * std::log2(8.0 * m / Delta);
    cert.log2_bound = std::log2(cert.delta_prime) + cert.log2_amplification;
    return cert;
}

CoefficientNormReport coefficient_norm_check(const ChebPoly& residual_poly,
                                             double delta_prime) {
    std::vector<quad> mono = residual_poly.monomial_coefficients();
    quad sum = 0;
    for (const quad& c : mono) sum += abs(c);
    CoefficientNormReport rep;
    rep.log2_sum = sum == 0 ? -std::numeric_limits<double>::infinity()
                            : static_cast<double>(log2(sum));
    rep.log2_limit = 2.0 * residual_poly.degree() + std::log2(delta_prime);
    rep.pass = rep.log2_sum <= rep.log2_limit;
    return rep;
}

}  // namespace qinterp
