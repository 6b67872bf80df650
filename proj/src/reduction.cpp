#include "qinterp/reduction.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <numbers>

#include "qinterp/rng.hpp"
#include "qinterp/statevector.hpp"

namespace qinterp {

namespace {
constexpr double kPi = std::numbers::pi;
}

ReductionParams plan_reduction(int n, int m, FamilyKind family, double Delta_cap) {
    if (n < 1 || m < n) throw std::invalid_argument("plan_reduction needs n >= 1, m >= n");
    const int N = 4;
    ReductionParams p;
    p.n = n;
    p.m = m;
    p.family = family;
    p.Delta = std::min(Delta_cap, 1.0 / N);
    if (!(p.Delta > 0.0)) throw std::invalid_argument("Delta cap must be positive");
    p.d = required_degree(m, n, N, family).d;
    p.Delta_prime = p.Delta / (8.0 * m);
    p.log2_delta = std::log2(4.0 / 9.0) + p.d * std::log2(p.Delta_prime) - (2.0 * n + 2.0);
    if (p.log2_delta < -1000.0)
        throw InfeasibleReduction("eq-delta accuracy is below the representable range");
    p.delta = std::exp2(p.log2_delta);
    p.delta_prime = 2.25 * p.delta;
    return p;
}

namespace {

// Multilinear coefficients of a real phase table over x in {0,1}^n.
std::vector<double> moebius_coefficients(int n, const std::vector<double>& phases) {
    std::vector<double> c = phases;
    for (int j = 0; j < n; ++j)
        for (size_t x = 0; x < c.size(); ++x)
            if ((x >> j) & 1) c[x] -= c[x & ~(size_t{1} << j)];
    return c;
}

void append_controlled_phase(std::vector<Gate>& out, int a, int b, double gamma) {
    out.push_back(gates::diag({a, b}, {0.0, 0.0, 0.0, gamma}));
}

}  // namespace

std::vector<Gate> compile_diagonal_to_two_qubit_gates(int n,
                                                      const std::vector<double>& phases) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("two-qubit diagonal compilation supports n <= 3");
    if (phases.size() != (size_t{1} << n))
        throw std::invalid_argument("phase table size mismatch");
    std::vector<double> c = moebius_coefficients(n, phases);
    // coefficients matter mod 2 pi only; the principal branch keeps 2 pi
    // artifacts of the phase-table branch cuts from becoming gates
    auto wrap = [](double x) {
        double y = std::remainder(x, 2.0 * kPi);
        return y <= -kPi ? y + 2.0 * kPi : y;
    };
    for (size_t i = 1; i < c.size(); ++i) c[i] = wrap(c[i]);
    const double tol = 1e-12;
    std::vector<Gate> out;
    // constant term onto qubit 0; degree-1 terms as single-qubit phases
    std::vector<double> lin(n, 0.0);
    for (int j = 0; j < n; ++j) lin[j] = c[size_t{1} << j];
    out.push_back(gates::diag({0}, {c[0], c[0] + lin[0]}));
    for (int j = 1; j < n; ++j) out.push_back(gates::diag({j}, {0.0, lin[j]}));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            double g = c[(size_t{1} << j) | (size_t{1} << k)];
            if (std::abs(g) > tol) append_controlled_phase(out, j, k, g);
        }
    if (n == 3) {
        double g = c[7];
        if (std::abs(g) > tol) {
            // gamma x0 x1 x2 out of controlled phases and CNOTs:
            // CP(0,2,g/2) CNOT(0->1) CP(1,2,-g/2) CNOT(0->1) CP(1,2,g/2)
            append_controlled_phase(out, 1, 2, g / 2);
            out.push_back(gates::cnot(0, 1));
            append_controlled_phase(out, 1, 2, -g / 2);
            out.push_back(gates::cnot(0, 1));
            append_controlled_phase(out, 0, 2, g / 2);
        }
    }
    return out;
}

namespace {

// Merge each gate into the latest same-support gate it commutes back to by
// qubit disjointness, and drop identities; keeps the Haar worst-case gate
// count small.
std::vector<Gate> peephole_merge(const std::vector<Gate>& in) {
    std::vector<Gate> out;
    auto as_matrix = [](const Gate& g) {
        Eigen::MatrixXcd m(g.dim(), g.dim());
        for (int r = 0; r < g.dim(); ++r)
            for (int c = 0; c < g.dim(); ++c) m(r, c) = g.entry(r, c);
        return m;
    };
    auto is_identity = [&](const Gate& g) {
        Eigen::MatrixXcd m = as_matrix(g);
        return (m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm() < 1e-12;
    };
    auto touches = [](const Gate& g, const Gate& h) {
        for (int q : g.support())
            for (int p : h.support())
                if (q == p) return true;
        return false;
    };
    for (const Gate& g : in) {
        if (is_identity(g)) continue;
        int target = -1;
        for (int j = static_cast<int>(out.size()) - 1; j >= 0; --j) {
            if (!touches(g, out[j])) continue;
            if (out[j].support() == g.support()) target = j;
            break;
        }
        if (target >= 0) {
            Eigen::MatrixXcd m = as_matrix(g) * as_matrix(out[target]);
            std::vector<cplx> flat(static_cast<size_t>(g.dim()) * g.dim());
            for (int r = 0; r < g.dim(); ++r)
                for (int c = 0; c < g.dim(); ++c) flat[r * g.dim() + c] = m(r, c);
            Gate merged = Gate::dense(g.support(), std::move(flat));
            if (is_identity(merged))
                out.erase(out.begin() + target);
            else
                out[target] = std::move(merged);
            continue;
        }
        out.push_back(g);
    }
    return out;
}

// The QAOA hard construction compiled to generic 1- and 2-qubit gates:
// H layer, the U_f diagonal, the exp(i pi/4 X) mixer layer, merged and
// padded with trivial slots.
Circuit haar_hard_circuit(const SignFunction& f, int m) {
    const int n = f.n;
    std::vector<double> phases(size_t{1} << n);
    for (size_t x = 0; x < phases.size(); ++x) {
        cplx v = std::pow(cplx(0, -1), std::popcount(x)) * static_cast<double>(f.at(x));
        phases[x] = std::arg(v);
    }
    std::vector<Gate> body;
    for (int q = 0; q < n; ++q) body.push_back(gates::h(q));
    for (Gate& g : compile_diagonal_to_two_qubit_gates(n, phases)) {
        // diagonal gates become dense so Haar slots stay generic
        if (g.kind() == Gate::Kind::Diagonal) {
            std::vector<cplx> flat(static_cast<size_t>(g.dim()) * g.dim(), 0.0);
            for (int i = 0; i < g.dim(); ++i) flat[i * g.dim() + i] = g.entry(i, i);
            body.push_back(Gate::dense(g.support(), std::move(flat)));
        } else {
            body.push_back(std::move(g));
        }
    }
    for (int q = 0; q < n; ++q) body.push_back(gates::rx(-kPi / 2, q));
    body = peephole_merge(body);
    if (static_cast<int>(body.size()) > m)
        throw std::invalid_argument("m too small for the compiled Haar hard circuit");
    int pad = m - static_cast<int>(body.size());
    for (int i = 0; i < pad; ++i) {
        if (n == 1) {
            body.push_back(Gate::dense({0}, {1, 0, 0, 1}, "I"));
        } else {
            int q = i % (n - 1);
            std::vector<cplx> id(16, 0.0);
            for (int k = 0; k < 4; ++k) id[k * 4 + k] = 1.0;
            body.push_back(Gate::dense({q, q + 1}, std::move(id), "I2"));
        }
    }
    Circuit c;
    c.n_qubits = n;
    c.init = InitState::AllZero;
    c.gates = std::move(body);
    return c;
}

Gate zdiag_identity(const GateSlot& slot) {
    return gates::diag(slot.support, std::vector<double>(slot.dim(), 0.0));
}

}  // namespace

RandomDraw make_reduction_draw(const SignFunction& f, const ReductionParams& params,
                               uint64_t draw_seed) {
    f.check();
    if (f.n != params.n) throw std::invalid_argument("sign function arity mismatch");
    const int n = params.n, m = params.m;

    if (params.family == FamilyKind::Haar) {
        Circuit base = haar_hard_circuit(f, m);
        Architecture arch;
        arch.n_qubits = n;
        for (const Gate& g : base.gates)
            arch.slots.push_back({GateSlot::Basis::Generic, g.support()});
        return sample_random_draw(FamilyKind::Haar, arch, base, std::nullopt, draw_seed);
    }

    // QAOA / IQP: slot 0 is the n-qubit U_f diagonal, then two-qubit trivial
    // Z slots, then (QAOA only) the X layer.
    Architecture arch;
    arch.n_qubits = n;
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    arch.slots.push_back({GateSlot::Basis::ZDiag, all});
    const int n_x = params.family == FamilyKind::QaoaP1 ? n : 0;
    const int pads = m - 1 - n_x;
    if (pads < 0) throw std::invalid_argument("m too small for the hard architecture");
    for (int i = 0; i < pads; ++i) {
        if (n == 1)
            arch.slots.push_back({GateSlot::Basis::ZDiag, {0}});
        else {
            int q = i % (n - 1);
            arch.slots.push_back({GateSlot::Basis::ZDiag, {q, q + 1}});
        }
    }
    for (int q = 0; q < n_x; ++q) arch.slots.push_back({GateSlot::Basis::XDiag, {q}});

    Circuit base;
    base.n_qubits = n;
    if (params.family == FamilyKind::QaoaP1) {
        base.init = InitState::AllPlus;
        std::vector<double> phases(size_t{1} << n);
        for (size_t x = 0; x < phases.size(); ++x) {
            cplx v = std::pow(cplx(0, -1), std::popcount(x)) * static_cast<double>(f.at(x));
            phases[x] = std::arg(v);
        }
        base.gates.push_back(gates::diag(all, phases));
        for (int i = 0; i < pads; ++i)
            base.gates.push_back(zdiag_identity(arch.slots[1 + i]));
        for (int q = 0; q < n; ++q) base.gates.push_back(gates::rx(-kPi / 2, q));
    } else {
        base.init = InitState::AllZero;
        std::vector<double> phases(size_t{1} << n);
        for (size_t x = 0; x < phases.size(); ++x) phases[x] = f.at(x) > 0 ? 0.0 : kPi;
        for (int q = 0; q < n; ++q) base.gates.push_back(gates::h(q));
        base.gates.push_back(gates::diag(all, phases));
        for (int i = 0; i < pads; ++i)
            base.gates.push_back(zdiag_identity(arch.slots[1 + i]));
        for (int q = 0; q < n; ++q) base.gates.push_back(gates::h(q));
    }
    return sample_random_draw(params.family, arch, base,
                              params.family == FamilyKind::QaoaP1
                                  ? std::optional(QaoaPhaseDistribution::uniform())
                                  : std::nullopt,
                              draw_seed);
}

NoisyOracle make_reduction_oracle(const RandomDraw& draw, const ReductionParams& params,
                                  uint64_t oracle_seed) {
    RandomDraw shared = draw;  // copy; draw is immutable and cheap at desk scale
    return NoisyOracle([shared](double theta) { return p_theta(shared, theta); },
                       params.delta, params.eta, 1.0, oracle_seed, params.coupling);
}

Decision run_reduction(const ReductionParams& params, const RandomDraw&,
                       const NoisyOracle& oracle) {
    SamplePlan plan = chebyshev_sample_points(params.d, params.Delta, params.sample_constant,
                                              split_seed(params.seed, 0x91a5));
    std::vector<double> ys(plan.x.size());
    for (size_t i = 0; i < plan.x.size(); ++i)
        ys[i] = oracle.value(static_cast<int>(i), plan.x[i]);
    ChebPoly fit = robust_fit(plan, ys, params.d, params.delta);
    Decision dec;
    dec.certificate = extrapolate_to_m(fit, params.m, params.Delta, params.delta);
    dec.p_hat_m = dec.certificate.p_m;
    dec.threshold_low = std::exp2(-(2.0 * params.n + 2.0));
    dec.threshold_high = 3.0 * dec.threshold_low;
    const double midpoint = 2.0 * dec.threshold_low;
    dec.verdict = dec.p_hat_m >= midpoint ? Verdict::AtLeastThreshold : Verdict::Zero;
    return dec;
}

Decision run_reduction_trial(const SignFunction& f, const ReductionParams& params,
                             int trial) {
    ReductionParams local = params;
    local.seed = split_seed(params.seed, 0x7000 + static_cast<uint64_t>(trial));
    RandomDraw draw = make_reduction_draw(f, local, split_seed(local.seed, 1));
    NoisyOracle oracle = make_reduction_oracle(draw, local, split_seed(local.seed, 2));
    return run_reduction(local, draw, oracle);
}

AccuracyBudgetReport accuracy_budget_check(const ReductionParams& params,
                                           const RandomDraw& draw, const NoisyOracle& oracle,
                                           int grid_points) {
    Interpolant approx = approximant_for_draw(draw, params.d);
    AccuracyBudgetReport rep;
    rep.grid_points = grid_points;
    rep.budget = params.delta + std::exp2(-(2.0 * params.n + 2.0));
    for (int i = 0; i < grid_points; ++i) {
        double theta = params.Delta * i / (grid_points - 1);
        double p = p_theta(draw, theta);
        double ptil = approx(theta);
        rep.max_approx_gap = std::max(rep.max_approx_gap, std::abs(p - ptil));
        if (!oracle.is_outlier(i))
            rep.max_inlier_gap =
                std::max(rep.max_inlier_gap, std::abs(oracle.value(i, theta) - ptil));
    }
    rep.pass = rep.max_inlier_gap <= rep.budget;
    return rep;
}

}  // namespace qinterp
