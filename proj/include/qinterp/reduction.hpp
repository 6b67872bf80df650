#pragma once

#include "qinterp/polyapprox.hpp"
#include "qinterp/robustfit.hpp"
#include "qinterp/worstcase.hpp"

namespace qinterp {

// Calibration of one end-to-end decision instance. delta follows
//   delta = (4/9) Delta'^d / 2^{2n+2},  Delta' = Delta/(8m),
// so that delta' / Delta'^d = 2^{-(2n+2)} holds exactly in log space.
struct ReductionParams {
    int n = 0;
    int m = 0;
    FamilyKind family = FamilyKind::QaoaP1;
    double Delta = 0.25;
    int d = 0;
    double delta = 0.0;        // oracle accuracy target (eq. delta)
    double log2_delta = 0.0;   // authoritative in log space
    double delta_prime = 0.0;  // 9 delta / 4
    double Delta_prime = 0.0;  // Delta / (8m)
    double eta = 0.0;          // oracle failure rate
    double epsilon = 0.25;     // fitter epsilon
    double eta_prime = 1.0 / 3.0;
    int trials = 1;
    uint64_t seed = 0;
    OutlierCoupling coupling = OutlierCoupling::PerQuery;
    double sample_constant = 4.0;  // c in count = ceil(c d ln(d+2))
};

struct InfeasibleReduction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// d from required_degree, Delta = min(Delta_cap, 1/N) with N = 4; throws
// InfeasibleReduction when delta falls below the representable range instead
// of silently clamping.
ReductionParams plan_reduction(int n, int m, FamilyKind family, double Delta_cap);

enum class Verdict { Zero, AtLeastThreshold };

struct Decision {
    Verdict verdict = Verdict::Zero;
    double p_hat_m = 0.0;
    double threshold_low = 0.0;   // 1 / 2^{2n+2}
    double threshold_high = 0.0;  // 3 / 2^{2n+2}
    ExtrapolationCertificate certificate;
};

// The worst-case instance interpolated into the family: the hard circuit of
// f (QAOA / IQP builders; for Haar the same phase-oracle construction
// compiled to generic 1- and 2-qubit gates), padded with trivial slots up to
// m gates.
RandomDraw make_reduction_draw(const SignFunction& f, const ReductionParams& params,
                               uint64_t draw_seed);

NoisyOracle make_reduction_oracle(const RandomDraw& draw, const ReductionParams& params,
                                  uint64_t oracle_seed);

// Chebyshev sampling in [0, Delta], robust fit, extrapolation, threshold
// decision at the midpoint 2 / 2^{2n+2} (ties resolve upward).
Decision run_reduction(const ReductionParams& params, const RandomDraw& draw,
                       const NoisyOracle& oracle);

// Convenience: derives draw and oracle seeds from params.seed and the trial
// index, then runs the pipeline.
Decision run_reduction_trial(const SignFunction& f, const ReductionParams& params,
                             int trial);

struct AccuracyBudgetReport {
    double max_inlier_gap = 0.0;   // max_i |y_i - p~(theta_i)| over inliers
    double max_approx_gap = 0.0;   // max_i |p(theta_i) - p~(theta_i)|
    double budget = 0.0;           // delta + 2^{-(2n+2)}
    bool pass = false;
    int grid_points = 0;
};

// Empirical check of the error composition: oracle noise and approximant
// error together stay within delta + 2^{-(2n+2)} on a grid over [0, Delta].
AccuracyBudgetReport accuracy_budget_check(const ReductionParams& params,
                                           const RandomDraw& draw,
                                           const NoisyOracle& oracle, int grid_points = 100);

// Exact n-qubit diagonal (phase table over x) as 1- and 2-qubit gates via
// the multilinear expansion; degree-3 terms use a doubly-controlled phase
// split into CNOTs and controlled phases. Needs n <= 3.
std::vector<Gate> compile_diagonal_to_two_qubit_gates(int n,
                                                      const std::vector<double>& phases);

}  // namespace qinterp
