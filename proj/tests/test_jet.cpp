#include "doctest.h"

#include "fpt/jet.hpp"

#include <cmath>

using namespace fpt;

using J5 = Jet<Interval, 5>;

namespace {

// derivatives of exp(sin(x)) at x, computed symbolically for the test
void exp_sin_derivs(double x, double d[5]) {
    double s = std::sin(x), c = std::cos(x), e = std::exp(s);
    d[0] = e;
    d[1] = e * c;
    d[2] = e * (c * c - s);
    d[3] = e * (c * c * c - 3 * s * c - c);
    d[4] = e * (c * c * c * c - 6 * s * c * c + 3 * s * s - 4 * c * c + s);
}

} // namespace

TEST_CASE("jet coefficients match known derivatives") {
    double x = 0.7;
    J5 j = exp(sin(jet_var<Interval, 5>(Interval(x))));
    double d[5];
    exp_sin_derivs(x, d);
    double fact = 1.0;
    for (int k = 0; k < 5; ++k) {
        if (k > 0) fact *= k;
        CHECK(j.c[k].contains(d[k] / fact));
        CHECK(j.c[k].width() < 1e-16 * 100 * std::max(1.0, std::fabs(d[k])));
    }
}

TEST_CASE("jet division and log vs closed forms") {
    double x = 1.3;
    auto v = jet_var<Interval, 5>(Interval(x));
    // f = log(1+x^2): f' = 2x/(1+x^2), f'' = (2-2x^2)/(1+x^2)^2
    J5 f = log(v * v + 1.0);
    double q = 1 + x * x;
    CHECK(f.c[0].contains(std::log(q)));
    CHECK(f.c[1].contains(2 * x / q));
    CHECK(f.c[2].contains((2 - 2 * x * x) / (q * q) / 2.0));
    // g = 1/(1+x): g^(k)/k! = (-1)^k/(1+x)^{k+1}
    J5 g = recip(v + 1.0);
    for (int k = 0; k < 5; ++k)
        CHECK(g.c[k].contains(std::pow(-1.0, k) / std::pow(1 + x, k + 1)));
    // p = x^2.5
    J5 p = pow(v, 2.5);
    CHECK(p.c[1].contains(2.5 * std::pow(x, 1.5)));
    CHECK(p.c[2].contains(2.5 * 1.5 * std::pow(x, 0.5) / 2.0));
    // atan
    J5 at = atan(v);
    CHECK(at.c[1].contains(1.0 / (1 + x * x)));
    CHECK(at.c[2].contains(-x / ((1 + x * x) * (1 + x * x))));
    // sqrt
    J5 s = sqrt(v);
    CHECK(s.c[1].contains(0.5 / std::sqrt(x)));
}

TEST_CASE("interval-seeded jets enclose derivative ranges") {
    Interval X(0.5, 1.0);
    J5 j = exp(sin(jet_var<Interval, 5>(X)));
    for (double x = 0.5; x <= 1.0; x += 0.05) {
        double d[5];
        exp_sin_derivs(x, d);
        double fact = 1.0;
        for (int k = 0; k < 5; ++k) {
            if (k > 0) fact *= k;
            CHECK(j.c[k].contains(d[k] / fact));
        }
    }
}

TEST_CASE("nested jets give mixed partials") {
    // f(x,y) = x^2 * exp(y), inner jet in y, outer in x
    using JY = Jet<Interval, 3>;
    using JXY = Jet<JY, 3>;
    double x0 = 1.5, y0 = 0.5;
    JXY x = jet_var<JY, 3>(jet_const<Interval, 3>(Interval(x0)));
    JXY y = jet_const<JY, 3>(jet_var<Interval, 3>(Interval(y0)));
    JXY f = x * x * exp(y);
    double e = std::exp(y0);
    // c[i].c[j] = d^i_x d^j_y f / (i! j!)
    CHECK(f.c[0].c[0].contains(x0 * x0 * e));
    CHECK(f.c[1].c[0].contains(2 * x0 * e));
    CHECK(f.c[0].c[1].contains(x0 * x0 * e));
    CHECK(f.c[1].c[1].contains(2 * x0 * e));
    CHECK(f.c[2].c[2].contains(e / 2.0));
}

TEST_CASE("value_of and width_of on nested jets") {
    using JY = Jet<Interval, 3>;
    using JXY = Jet<JY, 3>;
    JXY a = jet_var<JY, 3>(jet_const<Interval, 3>(Interval(1.0, 1.25)));
    JXY f = a * a;
    CHECK(value_of(f).contains(1.1 * 1.1));
    CHECK(width_of(f) >= 0.25);
}
