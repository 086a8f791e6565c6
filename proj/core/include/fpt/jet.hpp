#pragma once

// Truncated Taylor series ("jets") over an arbitrary coefficient ring T,
// with T an interval type (fpt::Interval, fpt::CInterval) or another Jet.
// c[k] encloses f^(k)(x)/k!. Seeding the variable with an interval argument
// yields enclosures of derivative ranges over that interval; seeding with a
// point yields tight local Taylor coefficients. Nesting Jet<Jet<...>> gives
// mixed partials in several parameters.

#include "fpt/cinterval.hpp"
#include "fpt/interval.hpp"

#include <array>
#include <type_traits>

namespace fpt {

inline Interval recip(const Interval& x) { return 1.0 / x; }

template <class T, int N>
struct Jet {
    std::array<T, N> c{};

    Jet() = default;
    Jet(double x) { c[0] = T(x); }
    Jet(const T& x) { c[0] = x; }

    const T& operator[](int k) const { return c[k]; }
    T& operator[](int k) { return c[k]; }
    static constexpr int order = N;
};

template <class T, int N>
Jet<T, N> jet_var(const T& x) {
    Jet<T, N> j;
    j.c[0] = x;
    if constexpr (N > 1) j.c[1] = T(1.0);
    return j;
}

template <class T, int N>
Jet<T, N> jet_const(const T& x) {
    Jet<T, N> j;
    j.c[0] = x;
    return j;
}

template <class T, int N>
Jet<T, N> operator-(const Jet<T, N>& a) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) r.c[k] = -a.c[k];
    return r;
}

template <class T, int N>
Jet<T, N> operator+(const Jet<T, N>& a, const Jet<T, N>& b) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}
template <class T, int N>
Jet<T, N> operator-(const Jet<T, N>& a, const Jet<T, N>& b) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, const Jet<T, N>& b) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) {
        T s = a.c[0] * b.c[k];
        for (int j = 1; j <= k; ++j) s = s + a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, const Jet<T, N>& b) {
    Jet<T, N> q;
    T ib = recip(b.c[0]);
    q.c[0] = a.c[0] * ib;
    for (int k = 1; k < N; ++k) {
        T s = a.c[k];
        for (int j = 0; j < k; ++j) s = s - q.c[j] * b.c[k - j];
        q.c[k] = s * ib;
    }
    return q;
}

// scalar mixins
template <class T, int N>
Jet<T, N> operator+(const Jet<T, N>& a, double b) {
    Jet<T, N> r = a;
    r.c[0] = r.c[0] + T(b);
    return r;
}
template <class T, int N>
Jet<T, N> operator+(double a, const Jet<T, N>& b) { return b + a; }
template <class T, int N>
Jet<T, N> operator-(const Jet<T, N>& a, double b) { return a + (-b); }
template <class T, int N>
Jet<T, N> operator-(double a, const Jet<T, N>& b) { return (-b) + a; }
template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, double b) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) r.c[k] = a.c[k] * b;
    return r;
}
template <class T, int N>
Jet<T, N> operator*(double a, const Jet<T, N>& b) { return b * a; }
template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, const std::type_identity_t<T>& b) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) r.c[k] = a.c[k] * b;
    return r;
}
template <class T, int N>
Jet<T, N> operator*(const std::type_identity_t<T>& a, const Jet<T, N>& b) { return b * a; }
template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, double b) { return a * (1.0 / b); }

template <class T, int N>
Jet<T, N> recip(const Jet<T, N>& a) {
    return Jet<T, N>(T(1.0)) / a;
}

template <class T, int N>
Jet<T, N> sqr(const Jet<T, N>& a) { return a * a; }

template <class T, int N>
Jet<T, N> exp(const Jet<T, N>& a) {
    Jet<T, N> e;
    e.c[0] = exp(a.c[0]);
    for (int k = 1; k < N; ++k) {
        T s = a.c[1] * e.c[k - 1]; // j = 1 term, weight 1
        for (int j = 2; j <= k; ++j) s = s + (a.c[j] * double(j)) * e.c[k - j];
        e.c[k] = s / double(k);
    }
    return e;
}

// exp(a) - 1 with an accurate order-0 coefficient
template <class T, int N>
Jet<T, N> expm1(const Jet<T, N>& a) {
    Jet<T, N> e = exp(a);
    Jet<T, N> r = e;
    r.c[0] = expm1(a.c[0]);
    for (int k = 1; k < N; ++k) r.c[k] = e.c[k];
    return r;
}

template <class T, int N>
Jet<T, N> log(const Jet<T, N>& a) {
    Jet<T, N> l;
    l.c[0] = log(a.c[0]);
    T ia = recip(a.c[0]);
    for (int k = 1; k < N; ++k) {
        T s = a.c[k];
        for (int j = 1; j < k; ++j) s = s - (l.c[j] * (double(j) / double(k))) * a.c[k - j];
        l.c[k] = s * ia;
    }
    return l;
}

// log(1 + a) with an accurate order-0 coefficient
template <class T, int N>
Jet<T, N> log1p(const Jet<T, N>& a) {
    Jet<T, N> r = log(a + 1.0);
    r.c[0] = log1p(a.c[0]);
    return r;
}

template <class T, int N>
Jet<T, N> sqrt(const Jet<T, N>& a) {
    Jet<T, N> s;
    s.c[0] = sqrt(a.c[0]);
    T inv2s = recip(s.c[0] * 2.0);
    for (int k = 1; k < N; ++k) {
        T acc = a.c[k];
        for (int j = 1; j < k; ++j) acc = acc - s.c[j] * s.c[k - j];
        s.c[k] = acc * inv2s;
    }
    return s;
}

template <class T, int N>
Jet<T, N> pow(const Jet<T, N>& a, double p) {
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    Jet<T, N> s;
    s.c[0] = pow(a.c[0], p);
    T ia = recip(a.c[0]);
    for (int k = 1; k < N; ++k) {
        T acc = (s.c[0] * (p * double(k))) * a.c[k];
        for (int j = 1; j < k; ++j)
            acc = acc + (s.c[j] * (p * double(k - j) - double(j))) * a.c[k - j];
        s.c[k] = (acc * ia) / double(k);
    }
    return s;
}

template <class T, int N>
void sincos(const Jet<T, N>& a, Jet<T, N>& s, Jet<T, N>& c) {
    s.c[0] = sin(a.c[0]);
    c.c[0] = cos(a.c[0]);
    for (int k = 1; k < N; ++k) {
        T as = a.c[1] * c.c[k - 1];
        T ac = a.c[1] * s.c[k - 1];
        for (int j = 2; j <= k; ++j) {
            as = as + (a.c[j] * double(j)) * c.c[k - j];
            ac = ac + (a.c[j] * double(j)) * s.c[k - j];
        }
        s.c[k] = as / double(k);
        c.c[k] = -(ac / double(k));
    }
}

template <class T, int N>
Jet<T, N> sin(const Jet<T, N>& a) {
    Jet<T, N> s, c;
    sincos(a, s, c);
    return s;
}
template <class T, int N>
Jet<T, N> cos(const Jet<T, N>& a) {
    Jet<T, N> s, c;
    sincos(a, s, c);
    return c;
}

template <class T, int N>
Jet<T, N> tanh(const Jet<T, N>& a) {
    Jet<T, N> t, q; // q = 1 - t^2
    t.c[0] = tanh(a.c[0]);
    q.c[0] = T(1.0) - t.c[0] * t.c[0];
    for (int k = 1; k < N; ++k) {
        T s = a.c[1] * q.c[k - 1];
        for (int j = 2; j <= k; ++j) s = s + (a.c[j] * double(j)) * q.c[k - j];
        t.c[k] = s / double(k);
        T qs = t.c[0] * t.c[k];
        for (int i = 1; i <= k; ++i) qs = qs + t.c[i] * t.c[k - i];
        q.c[k] = -qs; // -(sum_{i=0..k} t_i t_{k-i})
    }
    return t;
}

template <class T, int N>
Jet<T, N> atan(const Jet<T, N>& a) {
    Jet<T, N> r;
    r.c[0] = atan(a.c[0]);
    Jet<T, N> q = a * a + 1.0;
    T iq = recip(q.c[0]);
    for (int k = 1; k < N; ++k) {
        T s = a.c[k];
        for (int j = 1; j < k; ++j) s = s - (r.c[j] * (double(j) / double(k))) * q.c[k - j];
        r.c[k] = s * iq;
    }
    return r;
}

// widths, for adaptive error control on jet-valued integrals
inline double width_of(const Interval& x) { return x.width(); }
inline double width_of(const CInterval& x) { return x.max_width(); }
template <class T, int N>
double width_of(const Jet<T, N>& a) {
    double w = 0.0;
    for (int k = 0; k < N; ++k) w = std::max(w, width_of(a.c[k]));
    return w;
}

// value-component extraction through arbitrary nesting
inline const Interval& value_of(const Interval& x) { return x; }
template <class T, int N>
auto value_of(const Jet<T, N>& a) -> decltype(value_of(a.c[0])) {
    return value_of(a.c[0]);
}

// broadcast-multiply by an interval scalar through arbitrary nesting
inline Interval mul_iv(const Interval& a, const Interval& s) { return a * s; }
inline CInterval mul_iv(const CInterval& a, const Interval& s) { return a * s; }
template <class T, int N>
Jet<T, N> mul_iv(const Jet<T, N>& a, const Interval& s) {
    Jet<T, N> r;
    for (int k = 0; k < N; ++k) r.c[k] = mul_iv(a.c[k], s);
    return r;
}

// overwrite the innermost order-0 value component
inline void set_value(Interval& a, const Interval& v) { a = v; }
template <class T, int N>
void set_value(Jet<T, N>& a, const Interval& v) {
    set_value(a.c[0], v);
}

// promote an interval to a constant through a nesting shape
template <class R>
R promote_iv(const Interval& v) {
    if constexpr (std::is_same_v<R, Interval>)
        return v;
    else {
        R r{};
        r.c[0] = promote_iv<std::remove_cvref_t<decltype(r.c[0])>>(v);
        return r;
    }
}

// attach an interval-valued error to the order-0 coefficient
inline Interval add_error(const Interval& a, const Interval& e) { return a + e; }
inline CInterval add_error(const CInterval& a, const Interval& e) {
    return {a.re + e, a.im};
}
template <class T, int N>
Jet<T, N> add_error(const Jet<T, N>& a, const Interval& e) {
    Jet<T, N> r = a;
    r.c[0] = add_error(r.c[0], e);
    return r;
}

} // namespace fpt
