#include "qinterp/chebpoly.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qinterp {

ChebPoly::ChebPoly(double a, double b, std::vector<double> coef)
    : a_(a), b_(b), coef_(std::move(coef)) {
    if (!(a < b)) throw std::invalid_argument("ChebPoly needs a < b");
    if (coef_.empty()) throw std::invalid_argument("ChebPoly needs at least one coefficient");
}

namespace {

template <typename T>
T clenshaw(const std::vector<double>& c, const T& t) {
    T b1 = 0, b2 = 0;
    for (size_t i = c.size(); i-- > 1;) {
        T b0 = 2 * t * b1 - b2 + c[i];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

}  // namespace

double ChebPoly::eval_normalized(double t) const { return clenshaw<double>(coef_, t); }

quad ChebPoly::eval_normalized_quad(const quad& t) const { return clenshaw<quad>(coef_, t); }

double ChebPoly::operator()(double x) const {
    return eval_normalized((2.0 * x - a_ - b_) / (b_ - a_));
}

quad ChebPoly::eval_quad(double x) const {
    quad t = (2 * quad(x) - a_ - b_) / (quad(b_) - a_);
    return eval_normalized_quad(t);
}

std::vector<quad> ChebPoly::monomial_coefficients() const {
    // T_{k+1} = 2 t T_k - T_{k-1}; accumulate in quad since T_k coefficients
    // reach 2^{k-1}.
    const int d = degree();
    std::vector<std::vector<quad>> tk(d + 1);
    tk[0] = {quad(1)};
    if (d >= 1) tk[1] = {quad(0), quad(1)};
    for (int k = 2; k <= d; ++k) {
        tk[k].assign(k + 1, quad(0));
        for (int i = 0; i <= k - 1; ++i) tk[k][i + 1] += 2 * tk[k - 1][i];
        for (int i = 0; i <= k - 2; ++i) tk[k][i] -= tk[k - 2][i];
    }
    std::vector<quad> out(d + 1, quad(0));
    for (int k = 0; k <= d; ++k)
        for (int i = 0; i <= k; ++i) out[i] += coef_[k] * tk[k][i];
    return out;
}

std::vector<double> lobatto_points(double a, double b, int degree) {
    if (degree < 1) throw std::invalid_argument("lobatto_points needs degree >= 1");
    std::vector<double> xs(degree + 1);
    for (int j = 0; j <= degree; ++j) {
        double t = std::cos(std::numbers::pi * (degree - j) / degree);
        xs[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    }
    return xs;
}

ChebPoly ChebPoly::fit_lobatto(double a, double b, int degree,
                               const std::vector<double>& values) {
    if (values.size() != static_cast<size_t>(degree + 1))
        throw std::invalid_argument("fit_lobatto needs degree+1 samples");
    const int d = degree;
    std::vector<double> coef(d + 1, 0.0);
    // values arrive at increasing x; index j here matches t_j = cos(j pi / d)
    for (int k = 0; k <= d; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= d; ++j) {
            double w = (j == 0 || j == d) ? 0.5 : 1.0;
            acc += w * values[d - j] * std::cos(std::numbers::pi * k * j / d);
        }
        coef[k] = 2.0 * acc / d;
    }
    coef[0] *= 0.5;
    coef[d] *= 0.5;
    return ChebPoly(a, b, std::move(coef));
}

std::string ChebPoly::serialize() const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g %.17g", a_, b_);
    out << "interval " << buf << "\n";
    for (double c : coef_) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << buf << "\n";
    }
    return out.str();
}

ChebPoly ChebPoly::parse(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    double a, b;
    if (!(in >> word >> a >> b) || word != "interval")
        throw std::invalid_argument("polynomial text needs an interval line");
    std::vector<double> coef;
    double c;
    while (in >> c) coef.push_back(c);
    return ChebPoly(a, b, std::move(coef));
}

}  // namespace qinterp
