#pragma once

// Adaptive quadrature with certified enclosures.
//
// On each cell [m-h, m+h] the integrand's Taylor jet at the midpoint gives a
// polynomial that is integrated exactly; the Lagrange remainder comes from
// the top coefficient of a jet evaluated over the whole cell (an enclosure
// of f^(d)(cell)/d!). With jets of size NQ the remainder order is d = NQ-1:
//
//   integral = sum_{k even <= d-1} mid.c[k] * 2 h^{k+1}/(k+1)
//            + cell.c[d] * 2 h^{d+1}/(d+1)          (d even)
//
// An integrand may decline to provide jets on a cell (has_jet = false, e.g.
// near a removable singularity); the cell then falls back to the first-order
// range rule c[0] * 2h. Cells are split largest-error-first until the total
// enclosure width meets the tolerance.
//
// The coefficient ring T may itself be a jet in outer parameters, in which
// case the result carries enclosures of parameter derivatives of the
// integral.

#include "fpt/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace fpt {

struct QuadOptions {
    double tol = 1e-10;
    int max_cells = 40000;
    double max_cell_width = std::numeric_limits<double>::infinity();
    std::vector<double> split_points; // forced cell boundaries
    int init_cells = 8;
};

template <class T>
struct QuadResult {
    T value{};
    double achieved = std::numeric_limits<double>::infinity();
    int cells = 0;
    bool converged = false;
};

template <class T, int NQ>
struct CellEval {
    Jet<T, NQ> jet{};
    bool has_jet = true;
};

// wraps a formula f(jet) -> jet into the engine's integrand concept
template <int NQ, class F>
auto smooth_integrand(F f) {
    return [f](const Interval& x) {
        auto j = f(jet_var<Interval, NQ>(x));
        return CellEval<std::remove_cv_t<std::remove_reference_t<decltype(j.c[0])>>, NQ>{j, true};
    };
}

namespace detail {

template <int NQ, class T, class FI>
T cell_rule(FI&& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const Interval h = Interval(b) - Interval(m); // outward half-width
    constexpr int d = NQ - 1;
    static_assert(NQ == 1 || d % 2 == 0, "remainder order must be even (NQ odd)");

    CellEval<T, NQ> cell = f(Interval(a, b));
    if constexpr (NQ == 1) {
        return cell.jet.c[0] * (2.0 * h);
    } else {
        if (!cell.has_jet) return cell.jet.c[0] * (2.0 * h);
        CellEval<T, NQ> mid = f(Interval(m));
        if (!mid.has_jet) return cell.jet.c[0] * (2.0 * h);
        Interval hk = 2.0 * h; // 2 h^{k+1}
        T acc = mid.jet.c[0] * hk;
        for (int k = 2; k <= d - 1; k += 2) {
            hk = hk * sqr(h);
            acc = acc + mid.jet.c[k] * (hk / double(k + 1));
        }
        Interval hd = 2.0 * h;
        for (int k = 0; k < d; k += 2) hd = hd * sqr(h);
        acc = acc + cell.jet.c[d] * (hd / double(d + 1));
        return acc;
    }
}

} // namespace detail

// f : (const Interval& cell) -> CellEval<T, NQ>
template <int NQ, class T, class FI>
QuadResult<T> integrate_cells(FI&& f, double a, double b, const QuadOptions& opt = {}) {
    struct Cell {
        double a, b;
        T contrib;
        double w;
    };
    QuadResult<T> res;
    if (!(b > a)) {
        res.converged = true;
        res.achieved = 0.0;
        return res;
    }

    std::vector<double> bounds;
    bounds.push_back(a);
    for (double s : opt.split_points)
        if (s > a && s < b) bounds.push_back(s);
    bounds.push_back(b);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    std::vector<Cell> cells;
    auto push_uniform = [&](double x0, double x1) {
        int n = 1;
        double w = x1 - x0;
        if (w > opt.max_cell_width)
            n = (int)std::min<double>(std::ceil(w / opt.max_cell_width), 4e6);
        for (int i = 0; i < n; ++i) {
            double c0 = x0 + w * i / n, c1 = x0 + w * (i + 1) / n;
            if (i == n - 1) c1 = x1;
            Cell c{c0, c1, detail::cell_rule<NQ, T>(f, c0, c1), 0.0};
            c.w = width_of(c.contrib);
            cells.push_back(std::move(c));
        }
    };
    auto push_segment = [&](double x0, double x1) {
        // wide positive segments start from log-spaced cells so endpoint
        // singularities and slow tails refine in log scale; cap the count
        if (x0 > 0.0 && x1 / x0 >= 16.0) {
            double decades = std::log2(x1 / x0);
            int n = (int)std::min(48.0, std::ceil(decades));
            double r = std::pow(x1 / x0, 1.0 / n);
            double lo = x0;
            for (int i = 0; i < n; ++i) {
                double hi = i + 1 == n ? x1 : lo * r;
                push_uniform(lo, hi);
                lo = hi;
            }
            return;
        }
        double w = x1 - x0;
        int base = std::max(1, (int)(opt.init_cells / std::max<size_t>(1, bounds.size() - 1)));
        for (int i = 0; i < base; ++i) {
            double c0 = x0 + w * i / base, c1 = x0 + w * (i + 1) / base;
            if (i == base - 1) c1 = x1;
            push_uniform(c0, c1);
        }
    };
    for (size_t i = 0; i + 1 < bounds.size(); ++i) push_segment(bounds[i], bounds[i + 1]);

    using Entry = std::pair<double, size_t>; // (width at push time, index)
    std::priority_queue<Entry> pq;
    double total_w = 0.0;
    for (size_t i = 0; i < cells.size(); ++i) {
        total_w += cells[i].w;
        pq.push({cells[i].w, i});
    }

    while (total_w > opt.tol && (int)cells.size() < opt.max_cells && !pq.empty()) {
        auto [w_at_push, i] = pq.top();
        pq.pop();
        Cell& c = cells[i];
        if (c.w != w_at_push) continue; // stale entry
        double min_cell = 1e-13 * std::max({std::fabs(c.a), std::fabs(c.b), 1e-300});
        if (!(c.w > 0.0) || (c.b - c.a) <= min_cell) continue;
        double m = 0.5 * (c.a + c.b);
        Cell left{c.a, m, detail::cell_rule<NQ, T>(f, c.a, m), 0.0};
        left.w = width_of(left.contrib);
        Cell right{m, c.b, detail::cell_rule<NQ, T>(f, m, c.b), 0.0};
        right.w = width_of(right.contrib);
        total_w += left.w + right.w - c.w;
        c = left;
        pq.push({c.w, i});
        cells.push_back(std::move(right));
        pq.push({cells.back().w, cells.size() - 1});
    }

    T sum{};
    for (auto& c : cells) sum = sum + c.contrib;
    res.value = sum;
    res.achieved = width_of(sum);
    res.cells = (int)cells.size();
    res.converged = res.achieved <= opt.tol;
    return res;
}

// plain interval-valued integration of a smooth formula (order-4 rule)
template <class FJ>
QuadResult<Interval> integrate(FJ&& f, double a, double b, const QuadOptions& opt = {}) {
    return integrate_cells<5, Interval>(smooth_integrand<5>(std::forward<FJ>(f)), a, b, opt);
}

// first-order range rule for integrands without jets
template <class FR>
QuadResult<Interval> integrate_range(FR&& f, double a, double b, const QuadOptions& opt = {}) {
    auto wrap = [&f](const Interval& x) {
        CellEval<Interval, 1> ce;
        ce.jet.c[0] = f(x);
        return ce;
    };
    return integrate_cells<1, Interval>(wrap, a, b, opt);
}

// Semi-infinite integral on (a, inf): the cutoff grows until the
// caller-supplied tail majorant drops below tol/2. tail(X) must bound
// |int_X^inf f|; for nonnegative integrands the tail attaches one-sidedly.
template <class FJ, class Tail>
QuadResult<Interval> integrate_semiinfinite(FJ&& f, double a, Tail&& tail,
                                            const QuadOptions& opt = {},
                                            double cutoff0 = 1.0,
                                            bool nonnegative = false) {
    double X = std::max(cutoff0, a + 1.0);
    double tb = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        tb = tail(X);
        if (tb <= 0.5 * opt.tol) break;
        X *= 2.0;
    }
    QuadOptions o = opt;
    o.tol = 0.5 * opt.tol;
    auto r = integrate(std::forward<FJ>(f), a, X, o);
    if (nonnegative)
        r.value = r.value + Interval(0.0, tb);
    else
        r.value = r.value + Interval(-tb, tb);
    r.achieved = r.value.width();
    r.converged = r.achieved <= opt.tol;
    return r;
}

// Range enclosure of f over an interval; with monotone=true only the
// endpoints are evaluated.
template <class FR>
Interval enclose_on(FR&& f, const Interval& x, bool monotone = false) {
    if (monotone) return hull(f(Interval(x.lo)), f(Interval(x.hi)));
    return f(x);
}

// N/D with a removable common zero at x0: cells within `radius` of x0 (or
// containing it) are enclosed through Cauchy's mean value theorem,
// (N(x)-N(x0))/(D(x)-D(x0)) = N'(eta)/D'(eta), evaluated over the hull of
// the cell and x0; elsewhere jets divide normally.
template <int NQ, class FN, class FD>
auto ratio_removable_zero(FN n, FD d, double x0, double radius) {
    return [n, d, x0, radius](const Interval& x) -> CellEval<Interval, NQ> {
        bool near = x.contains(x0) || std::min(std::fabs(x.lo - x0), std::fabs(x.hi - x0)) < radius;
        CellEval<Interval, NQ> ce;
        if (near) {
            Interval H = hull(x, Interval(x0));
            auto nj = n(jet_var<Interval, NQ>(H));
            auto dj = d(jet_var<Interval, NQ>(H));
            ce.jet.c[0] = nj.c[1] / dj.c[1];
            ce.has_jet = false;
        } else {
            auto v = jet_var<Interval, NQ>(x);
            ce.jet = n(v) / d(v);
        }
        return ce;
    };
}

} // namespace fpt
