#include "qinterp/polyapprox.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qinterp {

namespace {
constexpr double kPi = std::numbers::pi;
const double kLog2TwoPi = std::log2(2.0 * kPi);
}  // namespace

double log2_derivative_bound(const DegreeBudget& b) {
    switch (b.family) {
        case FamilyKind::Haar:
            return 2.0 * b.m * std::log2(static_cast<double>(b.N)) + (b.d + 1) * kLog2TwoPi;
        case FamilyKind::QaoaP1:
            return b.n + (b.d + 1) * kLog2TwoPi;
        case FamilyKind::Iqp:
            return (b.d + 1) * kLog2TwoPi;
    }
    throw std::logic_error("unreachable");
}

bool degree_inequality_holds(int d, int m, int n, int N, FamilyKind family) {
    // log((d+1)!) >= prefactor + (d+1) log(2pi) + log m, natural logs
    double lhs = std::lgamma(static_cast<double>(d) + 2.0);
    double prefactor;
    switch (family) {
        case FamilyKind::Haar:
            prefactor = (2.0 * m + 2.0) * std::numbers::ln2 + 2.0 * m * std::log(N);
            break;
        case FamilyKind::QaoaP1:
            prefactor = (3.0 * n + 2.0) * std::numbers::ln2;
            break;
        case FamilyKind::Iqp:
            prefactor = (2.0 * n + 2.0) * std::numbers::ln2;
            break;
        default:
            throw std::logic_error("unreachable");
    }
    double rhs = prefactor + (d + 1.0) * std::log(2.0 * kPi) + std::log(m);
    return lhs >= rhs;
}

DegreeBudget required_degree(int m, int n, int N, FamilyKind family) {
    if (m < 2) throw std::invalid_argument("required_degree needs m >= 2");
    if (n < 1) throw std::invalid_argument("required_degree needs n >= 1");
    DegreeBudget b{m, n, N, family, 0, 0};
    for (int d = 1;; ++d) {
        if (degree_inequality_holds(d, m, n, N, family)) {
            b.d = d;
            break;
        }
        if (d > 2'000'000) throw std::runtime_error("degree search did not terminate");
    }
    b.closed_form_d =
        static_cast<int>(std::ceil(4.0 * kPi * std::numbers::e * m / std::log(m))) - 1;
    return b;
}

std::vector<double> interpolation_nodes(int d, double m) {
    if (d < 1) throw std::invalid_argument("interpolation_nodes needs d >= 1");
    if (!(m > 1.0)) throw std::invalid_argument("interpolation_nodes needs m > 1");
    std::vector<double> xs;
    if (d == 1) {
        xs.push_back(0.5);
    } else {
        for (int j = 0; j < d; ++j)
            xs.push_back(0.5 * (1.0 - std::cos(kPi * j / (d - 1))));
    }
    xs.push_back(m);
    return xs;
}

Interpolant::Interpolant(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size() || nodes_.size() < 2)
        throw std::invalid_argument("interpolant needs matching nodes and values");
    for (size_t i = 0; i < nodes_.size(); ++i)
        for (size_t j = i + 1; j < nodes_.size(); ++j)
            if (nodes_[i] == nodes_[j]) throw std::invalid_argument("duplicate nodes");

    const size_t count = nodes_.size();
    weights_.assign(count, quad(1));
    for (size_t j = 0; j < count; ++j)
        for (size_t k = 0; k < count; ++k)
            if (k != j) weights_[j] /= (quad(nodes_[j]) - quad(nodes_[k]));

    use_quad_ = degree() > 60;
    if (!use_quad_) {
        quad wmax = 0;
        for (const quad& w : weights_)
            if (abs(w) > wmax) wmax = abs(w);
        weights_dbl_.resize(count);
        for (size_t j = 0; j < count; ++j)
            weights_dbl_[j] = static_cast<double>(weights_[j] / wmax);
    }
}

double Interpolant::operator()(double x) const {
    for (size_t j = 0; j < nodes_.size(); ++j)
        if (x == nodes_[j]) return values_[j];
    if (use_quad_) {
        quad num = 0, den = 0;
        for (size_t j = 0; j < nodes_.size(); ++j) {
            quad r = weights_[j] / (quad(x) - quad(nodes_[j]));
            num += r * values_[j];
            den += r;
        }
        return static_cast<double>(num / den);
    }
    // pairwise-compensated double path
    double num = 0.0, den = 0.0, numc = 0.0, denc = 0.0;
    for (size_t j = 0; j < nodes_.size(); ++j) {
        double r = weights_dbl_[j] / (x - nodes_[j]);
        double y = r * values_[j] - numc;
        double t = num + y;
        numc = (t - num) - y;
        num = t;
        y = r - denc;
        t = den + y;
        denc = (t - den) - y;
        den = t;
    }
    return num / den;
}

ChebPoly Interpolant::to_chebpoly(double lo, double hi) const {
    const int d = degree();
    std::vector<double> xs = lobatto_points(lo, hi, d);
    std::vector<double> vals(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) vals[i] = (*this)(xs[i]);
    return ChebPoly::fit_lobatto(lo, hi, d, vals);
}

Interpolant lagrange_interpolant(const std::vector<double>& nodes,
                                 const std::vector<double>& values) {
    return Interpolant(nodes, values);
}

Interpolant approximant_for_draw(const RandomDraw& draw, int d) {
    std::vector<double> xs = interpolation_nodes(d, draw.m());
    std::vector<double> ys(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) ys[i] = p_theta(draw, xs[i]);
    return Interpolant(std::move(xs), std::move(ys));
}

double approximation_error_log2_bound(const DegreeBudget& budget,
                                      const std::vector<double>& nodes, double theta) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("the error bound is only claimed for theta in [0,1]");
    if (nodes.size() != static_cast<size_t>(budget.d) + 1)
        throw std::invalid_argument("node count does not match the degree budget");
    double log2_nodes = 0.0;
    for (double x : nodes) {
        double gap = std::abs(theta - x);
        if (gap == 0.0) return -std::numeric_limits<double>::infinity();
        log2_nodes += std::log2(gap);
    }
    double log2_fact = std::lgamma(static_cast<double>(budget.d) + 2.0) / std::numbers::ln2;
    return log2_derivative_bound(budget) - log2_fact + log2_nodes;
}

}  // namespace qinterp
