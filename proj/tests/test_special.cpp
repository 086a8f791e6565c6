#include "doctest.h"

#include "fpt/special.hpp"

#include <cmath>

using namespace fpt;

TEST_CASE("lower incomplete gamma closed forms") {
    // gamma(1;x) = 1 - e^{-x}
    CHECK(incomplete_gamma_lower(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(incomplete_gamma_lower(1.0, 0.3) == doctest::Approx(1.0 - std::exp(-0.3)).epsilon(1e-14));
    // completeness: gamma(1/2; 700) = Gamma(1/2) = sqrt(pi) to 1e-12
    CHECK(std::fabs(incomplete_gamma_lower(0.5, 700.0) - std::sqrt(M_PI)) < 1e-12);
    // gamma(2;x) = 1 - e^{-x}(1+x)
    double x = 2.7;
    CHECK(incomplete_gamma_lower(2.0, x) ==
          doctest::Approx(1.0 - std::exp(-x) * (1 + x)).epsilon(1e-13));
}

TEST_CASE("upper + lower = Gamma") {
    for (double a : {0.5, 1.0, 2.5, 7.5}) {
        for (double x : {0.1, 1.0, 5.0, 30.0}) {
            double s = incomplete_gamma_lower(a, x) + incomplete_gamma_upper(a, x);
            CHECK(s == doctest::Approx(std::tgamma(a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("paper bounds min(1,x^a)/(a e) <= gamma(a;x) <= min(Gamma(a+1),x^a)/a") {
    for (double a : {0.25, 0.5, 1.0, 1.5, 3.5}) {
        for (double x : {0.05, 0.3, 1.0, 2.0, 8.0}) {
            double g = incomplete_gamma_lower(a, x);
            double lb = std::min(1.0, std::pow(x, a)) / (a * std::exp(1.0));
            double ub = std::min(std::tgamma(a + 1.0), std::pow(x, a)) / a;
            CHECK(g >= lb * (1 - 1e-12));
            CHECK(g <= ub * (1 + 1e-12));
        }
    }
    // the spec's spot value: a=1/2, x=1
    double g = incomplete_gamma_lower(0.5, 1.0);
    CHECK(g >= std::min(1.0, 1.0) / (0.5 * std::exp(1.0)));
    CHECK(g <= std::min(std::tgamma(1.5), 1.0) / 0.5);
}

TEST_CASE("certified integer upper gamma enclosures") {
    for (int n : {1, 2, 3, 6}) {
        for (double z : {0.2, 1.0, 4.0, 20.0}) {
            Interval g = upper_gamma_int_iv(n, Interval(z));
            CHECK(g.contains(incomplete_gamma_upper((double)n, z)));
            CHECK(g.width() < 1e-12 * std::max(1.0, g.mag()));
        }
    }
}

TEST_CASE("E1 and half-integer enclosures contain true values") {
    for (double z : {0.5, 1.0, 3.0, 10.0}) {
        Interval e1 = e1_iv(Interval(z));
        // E1 = Gamma(a;z) as a->0; use a tiny-a proxy with the cf routine
        double ref = detail::upper_gamma_cf(1e-12, z);
        CHECK(e1.lo <= ref * (1 + 1e-6));
        CHECK(e1.hi >= ref * (1 - 1e-6));
    }
    for (int n : {0, 1, 2, 4}) {
        for (double z : {0.3, 1.0, 6.0}) {
            Interval g = upper_gamma_half_iv(n, Interval(z));
            CHECK(g.contains(incomplete_gamma_upper(n + 0.5, z)));
        }
    }
}

TEST_CASE("erfc enclosure") {
    for (double x : {0.0, 0.3, 1.0, 2.5, 6.0}) {
        CHECK(erfc_iv(Interval(x)).contains(std::erfc(x)));
    }
    CHECK(erf_iv(Interval(1.0)).contains(std::erf(1.0)));
}

TEST_CASE("Gamma(n+1/2) exact") {
    CHECK(gamma_half_iv(0).contains(std::sqrt(M_PI)));
    CHECK(gamma_half_iv(1).contains(0.5 * std::sqrt(M_PI)));
    CHECK(gamma_half_iv(2).contains(0.75 * std::sqrt(M_PI)));
}

TEST_CASE("monotonicity of tail enclosures in z") {
    Interval a = upper_gamma_int_iv(2, Interval(1.0));
    Interval b = upper_gamma_int_iv(2, Interval(2.0));
    CHECK(b.hi < a.lo);
}
