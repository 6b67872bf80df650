#include <cmath>

#include "doctest.h"
#include "qinterp/chebpoly.hpp"
#include "qinterp/rng.hpp"

using namespace qinterp;

TEST_SUITE_BEGIN("chebpoly");

TEST_CASE("clenshaw evaluates Chebyshev basis polynomials") {
    // T_3(t) = 4t^3 - 3t on [-1,1]
    ChebPoly t3(-1.0, 1.0, {0, 0, 0, 1});
    for (double t : {-0.9, -0.3, 0.0, 0.5, 1.0})
        CHECK(t3(t) == doctest::Approx(4 * t * t * t - 3 * t).epsilon(1e-14));
    // interval mapping: T_1 on [0, 4] at x=3 -> t=0.5
    ChebPoly t1(0.0, 4.0, {0, 1});
    CHECK(t1(3.0) == doctest::Approx(0.5));
}

TEST_CASE("fit_lobatto recovers coefficients") {
    auto eng = make_engine(4);
    std::vector<double> coef(9);
    for (double& c : coef) c = 2.0 * uniform01(eng) - 1.0;
    ChebPoly p(0.0, 0.25, coef);
    std::vector<double> xs = lobatto_points(0.0, 0.25, 8);
    std::vector<double> vals;
    for (double x : xs) vals.push_back(p(x));
    ChebPoly q = ChebPoly::fit_lobatto(0.0, 0.25, 8, vals);
    for (size_t i = 0; i < coef.size(); ++i)
        CHECK(q.coefficients()[i] == doctest::Approx(coef[i]).epsilon(1e-12));
}

TEST_CASE("monomial coefficients of T_k sum below 4^k") {
    for (int d : {3, 5, 8, 12}) {
        std::vector<double> coef(d + 1, 0.0);
        coef[d] = 1.0;
        ChebPoly td(-1.0, 1.0, coef);
        quad sum = 0;
        for (const quad& c : td.monomial_coefficients()) sum += abs(c);
        CHECK(static_cast<double>(sum) < std::pow(4.0, d));
        CHECK(static_cast<double>(sum) > 1.0);
    }
    // T_2 = 2t^2 - 1: |coeffs| sum to 3
    ChebPoly t2(-1.0, 1.0, {0, 0, 1});
    quad s = 0;
    for (const quad& c : t2.monomial_coefficients()) s += abs(c);
    CHECK(static_cast<double>(s) == doctest::Approx(3.0));
}

TEST_CASE("quad evaluation far outside the interval") {
    // T_5 at t = 47 via the closed form cosh(5 arccosh 47)
    std::vector<double> coef(6, 0.0);
    coef[5] = 1.0;
    ChebPoly t5(-1.0, 1.0, coef);
    double want = std::cosh(5.0 * std::acosh(47.0));
    CHECK(static_cast<double>(t5.eval_normalized_quad(quad(47))) ==
          doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("serialization round trip") {
    auto eng = make_engine(7);
    std::vector<double> coef(6);
    for (double& c : coef) c = 2.0 * uniform01(eng) - 1.0;
    ChebPoly p(0.0, 0.25, coef);
    ChebPoly q = ChebPoly::parse(p.serialize());
    CHECK(q.lo() == p.lo());
    CHECK(q.hi() == p.hi());
    for (size_t i = 0; i < coef.size(); ++i)
        CHECK(q.coefficients()[i] == p.coefficients()[i]);
    CHECK_THROWS_AS(ChebPoly::parse("garbage"), std::invalid_argument);
}

TEST_SUITE_END();
