#pragma once

// Complex rectangles {re + i*im : re in RE, im in IM}. Used for boundary
// values psi^+(-s) of complete Bernstein functions, which live in the closed
// upper half-plane, and for the dagger transform at complex arguments.

#include "fpt/interval.hpp"

#include <complex>

namespace fpt {

struct CInterval {
    Interval re, im;

    CInterval() = default;
    CInterval(double x) : re(x), im(0.0) {}
    CInterval(const Interval& r) : re(r), im(0.0) {}
    CInterval(const Interval& r, const Interval& i) : re(r), im(i) {}
    CInterval(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    bool contains(std::complex<double> z) const {
        return re.contains(z.real()) && im.contains(z.imag());
    }
    double max_width() const { return std::max(re.width(), im.width()); }
};

inline CInterval operator-(const CInterval& a) { return {-a.re, -a.im}; }
inline CInterval operator+(const CInterval& a, const CInterval& b) {
    return {a.re + b.re, a.im + b.im};
}
inline CInterval operator-(const CInterval& a, const CInterval& b) {
    return {a.re - b.re, a.im - b.im};
}
inline CInterval operator*(const CInterval& a, const CInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CInterval operator*(const CInterval& a, const Interval& b) {
    return {a.re * b, a.im * b};
}
inline CInterval operator*(const Interval& a, const CInterval& b) { return b * a; }
inline CInterval operator*(const CInterval& a, double b) { return a * Interval(b); }
inline CInterval operator*(double a, const CInterval& b) { return b * Interval(a); }
inline CInterval operator+(const CInterval& a, double b) { return a + CInterval(b); }
inline CInterval operator-(const CInterval& a, double b) { return a - CInterval(b); }
inline CInterval operator-(double a, const CInterval& b) { return CInterval(a) - b; }
inline CInterval operator+(double a, const CInterval& b) { return CInterval(a) + b; }

inline Interval abs2(const CInterval& a) { return sqr(a.re) + sqr(a.im); }

inline CInterval conj(const CInterval& a) { return {a.re, -a.im}; }

inline CInterval recip(const CInterval& a) {
    Interval d = abs2(a);
    return {a.re / d, -a.im / d};
}

inline CInterval operator/(const CInterval& a, const CInterval& b) {
    return a * recip(b);
}
inline CInterval operator/(const CInterval& a, const Interval& b) {
    return {a.re / b, a.im / b};
}
inline CInterval operator/(const CInterval& a, double b) { return a / Interval(b); }
inline CInterval operator/(double a, const CInterval& b) { return Interval(a) * recip(b); }

inline CInterval sqr(const CInterval& a) {
    return {sqr(a.re) - sqr(a.im), 2.0 * (a.re * a.im)};
}

inline Interval abs(const CInterval& a) { return sqrt(abs2(a)); }

// Argument of a rectangle, with the upper-boundary convention: rectangles
// touching the negative real axis from above get arg near +pi. Sound for
// rectangles not containing 0 in their interior together with both real
// half-axes; if the rectangle contains 0 the full range [-pi, pi] is
// returned.
inline Interval arg(const CInterval& a) {
    if (a.re.contains(0.0) && a.im.contains(0.0))
        return {-pi_iv().hi, pi_iv().hi};
    // crossing the negative real axis with im spanning 0 is ambiguous
    if (a.re.hi < 0.0 && a.im.lo < 0.0 && a.im.hi > 0.0)
        return {-pi_iv().hi, pi_iv().hi};
    double corners[4][2] = {{a.re.lo, a.im.lo}, {a.re.lo, a.im.hi},
                            {a.re.hi, a.im.lo}, {a.re.hi, a.im.hi}};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto& c : corners) {
        double x = c[0], y = c[1];
        // +0 so that atan2(0, negative) = +pi (upper-boundary convention)
        if (y == 0.0) y = 0.0;
        double v = std::atan2(y, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return detail::libm_widen(lo, hi);
}

// principal log; rectangle must avoid (-inf, 0] unless it touches from above
inline CInterval log(const CInterval& a) {
    return {0.5 * log(abs2(a)), arg(a)};
}

inline CInterval log1p(const CInterval& a) { return log(a + 1.0); }

inline CInterval exp(const CInterval& a) {
    Interval r = exp(a.re);
    return {r * cos(a.im), r * sin(a.im)};
}

inline CInterval sqrt(const CInterval& a) { return exp(0.5 * log(a)); }

inline CInterval pow(const CInterval& a, double p) {
    if (p == 1.0) return a;
    if (p == 2.0) return sqr(a);
    return exp(Interval(p) * log(a));
}

inline std::ostream& operator<<(std::ostream& os, const CInterval& a) {
    return os << a.re << " + i*" << a.im;
}

} // namespace fpt
