#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace qinterp {

// 128-bit binary float; the extrapolation point 2m/Delta - 1 turns Chebyshev
// values into numbers far beyond what double cancellation tolerates.
using quad = boost::multiprecision::cpp_bin_float_quad;

// Real polynomial of degree d on [a, b] in the Chebyshev basis of that
// interval; evaluation is Clenshaw's recurrence. Immutable.
class ChebPoly {
  public:
    ChebPoly(double a, double b, std::vector<double> coef);

    int degree() const { return static_cast<int>(coef_.size()) - 1; }
    double lo() const { return a_; }
    double hi() const { return b_; }
    const std::vector<double>& coefficients() const { return coef_; }

    // Maps x into t in [-1,1] and evaluates.
    double operator()(double x) const;
    quad eval_quad(double x) const;
    // Clenshaw directly in the normalized variable (t may lie outside [-1,1]).
    double eval_normalized(double t) const;
    quad eval_normalized_quad(const quad& t) const;

    // Coefficients a_0..a_d of the monomial expansion in the normalized
    // variable t; exact integer combinations of the Chebyshev coefficients.
    std::vector<quad> monomial_coefficients() const;

    // Interpolates samples of f at the d+1 Chebyshev-Lobatto points of [a,b].
    static ChebPoly fit_lobatto(double a, double b, int degree,
                                const std::vector<double>& values);

    std::string serialize() const;  // decimal text, round-trips to 1e-15 relative
    static ChebPoly parse(const std::string& text);

  private:
    double a_, b_;
    std::vector<double> coef_;
};

// Chebyshev-Lobatto points cos(j pi / d) of [a, b], increasing, j = d..0.
std::vector<double> lobatto_points(double a, double b, int degree);

}  // namespace qinterp
