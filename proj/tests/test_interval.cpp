#include "doctest.h"

#include "fpt/cinterval.hpp"
#include "fpt/interval.hpp"

#include <cmath>
#include <random>

using namespace fpt;

namespace {

// cheap deterministic point sampler inside an interval
double pick(const Interval& x, double t) { return x.lo + (x.hi - x.lo) * t; }

} // namespace

TEST_CASE("basic arithmetic containment") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-10.0, 10.0), w(0.0, 2.0), t01(0.0, 1.0);
    for (int it = 0; it < 2000; ++it) {
        Interval a{u(rng), 0}, b{u(rng), 0};
        a.hi = a.lo + w(rng);
        b.hi = b.lo + w(rng);
        double xa = pick(a, t01(rng)), xb = pick(b, t01(rng));
        CHECK((a + b).contains(xa + xb));
        CHECK((a - b).contains(xa - xb));
        CHECK((a * b).contains(xa * xb));
        if (!b.contains(0.0)) CHECK((a / b).contains(xa / xb));
        CHECK(sqr(a).contains(xa * xa));
        CHECK(abs(a).contains(std::fabs(xa)));
    }
}

TEST_CASE("transcendental containment") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.01, 20.0), t01(0.0, 1.0);
    for (int it = 0; it < 2000; ++it) {
        Interval a{u(rng), 0};
        a.hi = a.lo * (1.0 + t01(rng));
        double x = pick(a, t01(rng));
        CHECK(exp(Interval(-a)).contains(std::exp(-x)));
        CHECK(log(a).contains(std::log(x)));
        CHECK(sqrt(a).contains(std::sqrt(x)));
        CHECK(atan(a).contains(std::atan(x)));
        CHECK(pow(a, 0.37).contains(std::pow(x, 0.37)));
        CHECK(pown(a, 3).contains(x * x * x));
        CHECK(sin(a).contains(std::sin(x)));
        CHECK(cos(a).contains(std::cos(x)));
    }
}

TEST_CASE("sin range handling") {
    Interval full = sin(Interval(0.0, 100.0));
    CHECK(full.lo == -1.0);
    CHECK(full.hi == 1.0);
    Interval hump = sin(Interval(0.1, 3.0));
    CHECK(hump.hi == 1.0); // contains pi/2
    CHECK(hump.lo > 0.0);
    Interval down = sin(Interval(3.3, 6.0));
    CHECK(down.lo == -1.0); // contains 3pi/2
    CHECK(down.hi < 0.0);
}

TEST_CASE("division by zero-straddling interval") {
    Interval r = Interval(1.0, 2.0) / Interval(-1.0, 1.0);
    CHECK(r.lo == -std::numeric_limits<double>::infinity());
    CHECK(r.hi == std::numeric_limits<double>::infinity());
}

TEST_CASE("constants") {
    CHECK(pi_iv().contains(3.14159265358979323846));
    CHECK(catalan_iv().contains(0.9159655941772190150546));
    CHECK(catalan_iv().width() < 1e-15);
    // paper's remark: e^{2C/pi} <= 2
    Interval f = exp(2.0 * catalan_iv() / pi_iv());
    CHECK(f.hi <= 2.0);
    CHECK(f.lo > 1.7);
}

TEST_CASE("complex rectangles") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-3.0, 3.0), t01(0.0, 1.0);
    for (int it = 0; it < 1000; ++it) {
        CInterval a{{u(rng), 0.0}, {u(rng), 0.0}};
        a.re.hi = a.re.lo + t01(rng);
        a.im.hi = a.im.lo + t01(rng);
        CInterval b{{u(rng), 0.0}, {u(rng), 0.0}};
        b.re.hi = b.re.lo + t01(rng);
        b.im.hi = b.im.lo + t01(rng);
        std::complex<double> za{pick(a.re, t01(rng)), pick(a.im, t01(rng))};
        std::complex<double> zb{pick(b.re, t01(rng)), pick(b.im, t01(rng))};
        CHECK((a * b).contains(za * zb));
        CHECK((a + b).contains(za + zb));
        if (abs2(b).lo > 1e-6) CHECK((a / b).contains(za / zb));
    }
}

TEST_CASE("complex log upper-boundary convention") {
    // approaching -4 from above: log should have imaginary part near +pi
    CInterval z{Interval(-4.0), Interval(0.0, 1e-12)};
    CInterval l = log(z);
    CHECK(l.re.contains(std::log(4.0)));
    CHECK(l.im.hi >= pi_iv().lo - 1e-9);
    CHECK(l.im.lo <= pi_iv().hi);
    // sqrt(-4 + i0) = 2i
    CInterval s = sqrt(z);
    CHECK(s.re.contains(0.0));
    CHECK(s.im.contains(2.0));
    CHECK(s.re.width() < 1e-9);
}
