#pragma once

// Incomplete gamma functions. Double-precision point evaluations (series /
// continued fraction) for the public API, plus certified interval bounds for
// the closed-form tail majorants used by the passage module: integer and
// half-integer upper incomplete gamma, E1, and erfc enclosures.

#include "fpt/interval.hpp"

#include <cmath>
#include <stdexcept>

namespace fpt {

namespace detail {

// regularized series for gamma(a;x), x <= a+1
inline double lower_gamma_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x));
}

// continued fraction for Gamma(a;x), x > a+1 (modified Lentz)
inline double upper_gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

} // namespace detail

// gamma(a;x) = int_0^x e^{-s} s^{a-1} ds
inline double incomplete_gamma_lower(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("incomplete_gamma_lower: a must be > 0");
    if (!(x >= 0.0)) throw std::domain_error("incomplete_gamma_lower: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::lower_gamma_series(a, x);
    return std::tgamma(a) - detail::upper_gamma_cf(a, x);
}

// Gamma(a;x) = int_x^inf e^{-s} s^{a-1} ds
inline double incomplete_gamma_upper(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("incomplete_gamma_upper: a must be > 0");
    if (!(x >= 0.0)) throw std::domain_error("incomplete_gamma_upper: x must be >= 0");
    if (x == 0.0) return std::tgamma(a);
    if (x < a + 1.0) return std::tgamma(a) - detail::lower_gamma_series(a, x);
    return detail::upper_gamma_cf(a, x);
}

// ---- certified enclosures ----

// E1(z) enclosure from (1/2) e^{-z} log(1 + 2/z) <= E1(z) <= e^{-z} log(1 + 1/z)
inline Interval e1_iv(const Interval& z) {
    Interval zl(z.lo), zh(z.hi);
    Interval lo = 0.5 * exp(-zh) * log1p(2.0 / zh);
    Interval hi = exp(-zl) * log1p(1.0 / zl);
    return {std::max(0.0, lo.lo), hi.hi};
}

// erfc(x) enclosure for x >= 0:
// 2 e^{-x^2} / (sqrt(pi) (x + sqrt(x^2+2))) <= erfc(x)
//   <= 2 e^{-x^2} / (sqrt(pi) (x + sqrt(x^2+4/pi)))
inline Interval erfc_iv(const Interval& x) {
    Interval xl(std::max(0.0, x.lo)), xh(x.hi);
    Interval spi = sqrt(pi_iv());
    Interval lo = 2.0 * exp(-sqr(xh)) / (spi * (xh + sqrt(sqr(xh) + 2.0)));
    Interval hi = 2.0 * exp(-sqr(xl)) / (spi * (xl + sqrt(sqr(xl) + 4.0 / pi_iv())));
    return {std::max(0.0, lo.lo), std::min(1.0, hi.hi)};
}

// libm-widened erf; glibc's erf is sub-ulp accurate, widened by 4 ulps
inline Interval erf_iv(const Interval& x) {
    return detail::libm_widen(std::erf(x.lo), std::erf(x.hi));
}

// Gamma(n; z) for integer n >= 0 (n = 0 means E1). Exact closed form
// (n-1)! e^{-z} sum_{k<n} z^k/k! evaluated in interval arithmetic.
inline Interval upper_gamma_int_iv(int n, const Interval& z) {
    if (n == 0) return e1_iv(z);
    Interval sum(0.0);
    Interval zk(1.0);
    double kfact = 1.0;
    for (int k = 0; k < n; ++k) {
        if (k > 0) {
            zk = zk * z;
            kfact *= k;
        }
        sum = sum + zk / kfact;
    }
    double nm1fact = 1.0;
    for (int k = 2; k < n; ++k) nm1fact *= k;
    return nm1fact * exp(-z) * sum;
}

// Gamma(n + 1/2; z), n >= 0, via Gamma(a+1;z) = a Gamma(a;z) + z^a e^{-z}
// from Gamma(1/2;z) = sqrt(pi) erfc(sqrt(z)).
inline Interval upper_gamma_half_iv(int n, const Interval& z) {
    Interval sz = sqrt(z);
    Interval g = sqrt(pi_iv()) * erfc_iv(sz);
    Interval za = sz; // z^{1/2}
    Interval ez = exp(-z);
    double a = 0.5;
    for (int k = 0; k < n; ++k) {
        g = a * g + za * ez;
        za = za * z;
        a += 1.0;
    }
    return g;
}

inline Interval factorial_iv(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return Interval(f); // exact for n <= 18
}

// Gamma(n + 1/2) exactly: (2n)! sqrt(pi) / (4^n n!)
inline Interval gamma_half_iv(int n) {
    Interval r = sqrt(pi_iv());
    for (int k = 0; k < n; ++k) r = r * (k + 0.5);
    return r;
}

} // namespace fpt
