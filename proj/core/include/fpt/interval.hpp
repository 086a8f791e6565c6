#pragma once

// Outward-rounded interval arithmetic. Every result interval contains the
// exact real result of the operation applied to any points of the operand
// intervals.
//
// Rounding model: operations are computed in round-to-nearest and widened by
// nextafter steps (1 ulp for +,-,*,/ and sqrt; 4 ulps for other libm calls).
// Round-to-nearest error is <= 0.5 ulp, so a 1-ulp widening is sound for the
// basic operations; glibc's transcendentals are within ~2 ulp, so 4 ulps
// leaves margin. This avoids fesetround, which is unreliable under
// optimizing compilers without -frounding-math and costly to toggle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace fpt {

static_assert(std::numeric_limits<double>::is_iec559, "IEEE 754 required");

namespace detail {

inline double down1(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double up1(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline double down_n(double x, int n) {
    for (int i = 0; i < n; ++i) x = down1(x);
    return x;
}
inline double up_n(double x, int n) {
    for (int i = 0; i < n; ++i) x = up1(x);
    return x;
}

} // namespace detail

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}
    Interval(double l, double h) : lo(l), hi(h) {}

    static Interval whole() {
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }
    static Interval empty() {
        return {std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN()};
    }

    bool is_empty() const { return std::isnan(lo) || std::isnan(hi); }
    double mid() const {
        if (lo == hi) return lo;
        double m = 0.5 * (lo + hi);
        if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
        if (!std::isfinite(m)) m = 0.0;
        return std::min(std::max(m, lo), hi);
    }
    double width() const { return detail::up1(hi - lo); }
    double rad() const { return 0.5 * width(); }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool strictly_positive() const { return lo > 0.0; }
    bool strictly_negative() const { return hi < 0.0; }
};

inline Interval hull(const Interval& a, const Interval& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval intersect(const Interval& a, const Interval& b) {
    double l = std::max(a.lo, b.lo), h = std::min(a.hi, b.hi);
    if (l > h) return Interval::empty();
    return {l, h};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator+(const Interval& a, const Interval& b) {
    return {detail::down1(a.lo + b.lo), detail::up1(a.hi + b.hi)};
}
inline Interval operator-(const Interval& a, const Interval& b) {
    return {detail::down1(a.lo - b.hi), detail::up1(a.hi - b.lo)};
}

inline Interval operator*(const Interval& a, const Interval& b) {
    // 0 * inf produces NaN; treat it as 0 (the exact product of 0 with any
    // finite point is 0, and infinite endpoints only arise as enclosure caps).
    auto m = [](double x, double y) {
        double r = x * y;
        return std::isnan(r) && (x == 0.0 || y == 0.0) ? 0.0 : r;
    };
    double p1 = m(a.lo, b.lo), p2 = m(a.lo, b.hi), p3 = m(a.hi, b.lo), p4 = m(a.hi, b.hi);
    return {detail::down1(std::min({p1, p2, p3, p4})),
            detail::up1(std::max({p1, p2, p3, p4}))};
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) {
        if (a.lo == 0.0 && a.hi == 0.0 && !(b.lo == 0.0 && b.hi == 0.0))
            return {0.0, 0.0};
        return Interval::whole();
    }
    auto d = [](double x, double y) {
        double r = x / y;
        if (std::isnan(r) && x == 0.0) return 0.0;
        return r;
    };
    double q1 = d(a.lo, b.lo), q2 = d(a.lo, b.hi), q3 = d(a.hi, b.lo), q4 = d(a.hi, b.hi);
    return {detail::down1(std::min({q1, q2, q3, q4})),
            detail::up1(std::max({q1, q2, q3, q4}))};
}

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

inline Interval sqr(const Interval& a) {
    double l1 = a.lo * a.lo, l2 = a.hi * a.hi;
    double hi = detail::up1(std::max(l1, l2));
    double lo = (a.lo <= 0.0 && a.hi >= 0.0) ? 0.0 : detail::down1(std::min(l1, l2));
    return {lo, hi};
}

inline Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return -a;
    return {0.0, std::max(-a.lo, a.hi)};
}

inline Interval min(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}
inline Interval max(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

namespace detail {
constexpr int kLibmUlps = 4;
inline Interval libm_widen(double lo, double hi) {
    return {down_n(lo, kLibmUlps), up_n(hi, kLibmUlps)};
}
} // namespace detail

inline Interval sqrt(const Interval& a) {
    double lo = a.lo < 0.0 ? 0.0 : a.lo; // clip: callers assert nonnegativity
    return {detail::down1(std::sqrt(lo)), detail::up1(std::sqrt(a.hi))};
}

inline Interval exp(const Interval& a) {
    Interval r = detail::libm_widen(std::exp(a.lo), std::exp(a.hi));
    if (r.lo < 0.0) r.lo = 0.0;
    return r;
}

inline Interval expm1(const Interval& a) {
    return detail::libm_widen(std::expm1(a.lo), std::expm1(a.hi));
}

inline Interval log(const Interval& a) {
    // domain: a.hi must be > 0; a.lo <= 0 maps to -inf endpoint
    double lo = a.lo <= 0.0 ? -std::numeric_limits<double>::infinity()
                            : detail::down_n(std::log(a.lo), detail::kLibmUlps);
    return {lo, detail::up_n(std::log(a.hi), detail::kLibmUlps)};
}

inline Interval log1p(const Interval& a) {
    double lo = a.lo <= -1.0 ? -std::numeric_limits<double>::infinity()
                             : detail::down_n(std::log1p(a.lo), detail::kLibmUlps);
    return {lo, detail::up_n(std::log1p(a.hi), detail::kLibmUlps)};
}

inline Interval atan(const Interval& a) {
    return detail::libm_widen(std::atan(a.lo), std::atan(a.hi));
}

inline Interval tanh(const Interval& a) {
    return detail::libm_widen(std::tanh(a.lo), std::tanh(a.hi));
}

inline Interval asin(const Interval& a) {
    double lo = std::max(a.lo, -1.0), hi = std::min(a.hi, 1.0);
    return detail::libm_widen(std::asin(lo), std::asin(hi));
}

// integer power
inline Interval pown(const Interval& a, int n) {
    if (n == 0) return {1.0, 1.0};
    if (n < 0) return 1.0 / pown(a, -n);
    Interval r{1.0, 1.0}, base = a;
    int k = n;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = sqr(base);
        k >>= 1;
    }
    if (n % 2 == 0 && a.lo <= 0.0 && a.hi >= 0.0) r.lo = std::max(r.lo, 0.0);
    return r;
}

// a^p for a >= 0 (monotone in a for either sign of p)
inline Interval pow(const Interval& a, double p) {
    if (p == 0.0) return {1.0, 1.0};
    if (p == 1.0) return a;
    if (p == 2.0) return sqr(a);
    if (p == 0.5) return sqrt(a);
    auto pw = [](double x, double e) {
        if (x < 0.0) x = 0.0;
        return std::pow(x, e);
    };
    double v1 = pw(a.lo, p), v2 = pw(a.hi, p);
    return detail::libm_widen(std::min(v1, v2), std::max(v1, v2));
}

inline Interval pow(const Interval& a, const Interval& p) {
    if (p.lo == p.hi) return pow(a, p.lo);
    return exp(p * log(a));
}

// pi and related constants as tight enclosures
inline Interval pi_iv() {
    return {3.1415926535897931, 3.1415926535897936};
}
inline Interval two_pi_iv() { return pi_iv() * 2.0; }
inline Interval half_pi_iv() { return pi_iv() / 2.0; }
// Catalan's constant 0.915965594177219015...
inline Interval catalan_iv() {
    return {0.91596559417721897, 0.91596559417721909};
}
inline Interval euler_e_iv() {
    return {2.7182818284590450, 2.7182818284590456};
}

namespace detail {
// sine over an interval: hull of endpoint values plus +-1 where an extremum
// pi/2 + k*pi possibly lies inside
inline Interval sin_impl(const Interval& a) {
    Interval w = a;
    if (!(std::isfinite(w.lo) && std::isfinite(w.hi))) return {-1.0, 1.0};
    if (w.width() >= two_pi_iv().lo) return {-1.0, 1.0};
    Interval s_lo = libm_widen(std::sin(w.lo), std::sin(w.lo));
    Interval s_hi = libm_widen(std::sin(w.hi), std::sin(w.hi));
    Interval r = hull(s_lo, s_hi);
    Interval pi = pi_iv();
    // candidate k with pi/2 + k*pi in [lo, hi]
    double k0 = std::floor(w.lo / pi.mid() - 0.5) - 1.0;
    double k1 = std::ceil(w.hi / pi.mid() - 0.5) + 1.0;
    for (double k = k0; k <= k1; k += 1.0) {
        Interval ext = pi * (k + 0.5);
        if (ext.hi >= w.lo && ext.lo <= w.hi) {
            long long ki = (long long)std::llround(k);
            if (ki % 2 == 0) r = hull(r, Interval(1.0));
            else r = hull(r, Interval(-1.0));
        }
    }
    r.lo = std::max(r.lo, -1.0);
    r.hi = std::min(r.hi, 1.0);
    return r;
}
} // namespace detail

inline Interval sin(const Interval& a) { return detail::sin_impl(a); }
inline Interval cos(const Interval& a) { return detail::sin_impl(a + half_pi_iv()); }

inline std::ostream& operator<<(std::ostream& os, const Interval& a) {
    return os << "[" << a.lo << ", " << a.hi << "]";
}

} // namespace fpt
