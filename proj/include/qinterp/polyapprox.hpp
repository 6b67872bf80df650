#pragma once

#include "qinterp/chebpoly.hpp"
#include "qinterp/families.hpp"

namespace qinterp {

// Degree selection for the low-degree approximant of p(theta). d is the
// smallest degree whose factorial inequality holds (checked with lgamma);
// closed_form_d is ceil(4 pi e m / ln m) - 1, reported for comparison.
struct DegreeBudget {
    int m = 0;
    int n = 0;
    int N = 4;
    FamilyKind family = FamilyKind::Haar;
    int d = 0;
    int closed_form_d = 0;
};

// log2 of the family's (d+1)-st derivative bound on p:
//   Haar: N^{2m} (2pi)^{d+1};  QAOA: 2^n (2pi)^{d+1};  IQP: (2pi)^{d+1}.
double log2_derivative_bound(const DegreeBudget& budget);

// Whether (d+1)! >= 2^{2m+2} N^{2m} (2pi)^{d+1} m (Haar) resp. the
// 2^{3n+2} / 2^{2n+2} variants (QAOA / IQP), evaluated in log space.
bool degree_inequality_holds(int d, int m, int n, int N, FamilyKind family);

DegreeBudget required_degree(int m, int n, int N, FamilyKind family);

// d Chebyshev points of the second kind on [0,1] plus the point m.
std::vector<double> interpolation_nodes(int d, double m);

// Degree-(count-1) interpolant in barycentric form. Weights are carried in
// quad precision; evaluation uses the second barycentric formula, which is
// exact at the nodes. Double arithmetic with scaled weights below degree 60,
// the quad path above (the weight spread exceeds double range there).
class Interpolant {
  public:
    Interpolant(std::vector<double> nodes, std::vector<double> values);

    double operator()(double x) const;
    int degree() const { return static_cast<int>(nodes_.size()) - 1; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }

    // Chebyshev-basis projection over [lo, hi]; exact for the represented
    // polynomial up to evaluation roundoff.
    ChebPoly to_chebpoly(double lo, double hi) const;

  private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<quad> weights_;
    bool use_quad_ = false;
    std::vector<double> weights_dbl_;  // scaled copy for the double path
};

Interpolant lagrange_interpolant(const std::vector<double>& nodes,
                                 const std::vector<double>& values);

// Interpolant of p(theta) for a draw at interpolation_nodes(d, m); p~(m) =
// p(m) holds by node inclusion.
Interpolant approximant_for_draw(const RandomDraw& draw, int d);

// log2 of |p^{(d+1)}| / (d+1)! * prod_j |theta - x_j| for theta in [0,1].
double approximation_error_log2_bound(const DegreeBudget& budget,
                                      const std::vector<double>& nodes, double theta);

}  // namespace qinterp
