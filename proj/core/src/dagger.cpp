#include "fpt/dagger.hpp"

#include "fpt/special.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>

namespace fpt {

namespace {

constexpr double kSliverEdge = 1e-100; // analytic below, quadrature above

// |d^k/dxi^k  xi/(xi^2+z^2)| <= k!/z^{k+1} and <= k!/xi^{k+1}
// (partial fractions: K = (1/2)(1/(xi-iz) + 1/(xi+iz)), |xi +- iz| >= max(xi,z))

} // namespace

// Bounds for |d^j/dlambda^j log psi_lambda(w)| / j!, j = 1..3, uniform over a
// w-class, with |dw/dlambda| <= mu w/lambda (mu = 0: fixed w; mu = 2:
// w = c lambda^2). Writing l = lambda^2:
//
//   log psi_lambda(w) = Phi(lambda) +/- [log|l-w| - log|psi(l)-psi(w)|],
//   Phi = log(psi(l)/l).
//
// Phi:  Phi1 = (2/lambda)(r1 - 1), r1 = l psi1/psi in [0,1], so
//       |Phi1| <= 2/lambda; r1' = (2/lambda) r1 (1 + l psi2/psi1 - r1) with
//       |l psi2/psi1| <= 2 gives |r1'| <= 8/lambda and |Phi2| <= 18/lambda^2;
//       one more level with |psi3| <= 6 psi1/l^2 gives |Phi3| <= 150/lambda^3.
// A = log|l-w|  (small class w <= l/4, so l-w >= 3l/4):
//       |A1| <= (2 lambda + mu w/lambda)/(3l/4) <= (8+mu)/(3 lambda);
//       |A2| <= 15/lambda^2, |A3| <= 120/lambda^3 (numerator derivative
//       <= 2 + 2w/lambda^2 plus the squared first-order term).
//       Large class (w >= 4l, w-l >= 3w/4 >= 3l): same shapes.
// G = log|psi(l)-psi(w)|:
//   small: gap >= (3l/4) psi1(l) (mean value, psi1 decreasing);
//       |dgap| <= 2 lambda psi1(l) + mu psi(l)/lambda, so
//       |G1| <= (8/3 + (4 mu/3)/r1)/lambda; the second order adds
//       (40/3)(1 + 1/r1)/lambda^2 + G1^2; third assembled the same way.
//   large: gap >= (3/16) l psi1(l)  (psi1(4l) >= psi1(l)/16 from
//       (log psi1)' >= -2/x), and psi(w)/gap <= 1 + (16/3)/r1, which folds
//       the unbounded psi(w) factors from |d_lambda psi(w)| <= mu psi(w)/lambda.
//
// These multiply sliver masses ~1e-98 and e^{-2Y} far-tail factors, so the
// generous constants cost nothing.
std::array<Interval, 4> lambda_log_deriv_bounds(const Cbf& spec, const Interval& lam,
                                                bool w_small, double mu) {
    Interval l = sqr(lam);
    Interval psi = spec.psi(l), dpsi = spec.psi1(l);
    Interval r1 = intersect(l * dpsi / psi, Interval(0.0, 1.0));
    if (r1.is_empty()) r1 = Interval(0.0, 1.0);
    Interval inv_r1 = 1.0 / Interval(std::max(r1.lo, 1e-300), 1.0);
    Interval il = 1.0 / Interval(lam.lo);
    Interval one(1.0);

    Interval phi1 = 2.0 * il;
    Interval phi2 = 18.0 * sqr(il);
    Interval phi3 = 150.0 * sqr(il) * il;

    Interval a1, a2, a3, g1, g2, g3;
    a2 = 15.0 * sqr(il);
    a3 = 120.0 * sqr(il) * il;
    if (w_small) {
        a1 = (8.0 + mu) / 3.0 * il;
        g1 = (8.0 / 3.0 + (4.0 * mu / 3.0) * inv_r1) * il;
        g2 = (40.0 / 3.0) * (one + inv_r1) * sqr(il) + sqr(g1);
        g3 = 160.0 * (one + inv_r1) * sqr(il) * il + 3.0 * g1 * g2 + 2.0 * g1 * sqr(g1);
    } else {
        a1 = (2.0 / 3.0 + 4.0 * mu / 3.0) * il;
        Interval fac = one + (16.0 / 3.0) * inv_r1;
        g1 = (mu * fac + 32.0 / 3.0) * il;
        g2 = (20.0 * fac + 20.0) * sqr(il) + sqr(g1);
        g3 = (200.0 * fac + 200.0) * sqr(il) * il + 3.0 * g1 * g2 + 2.0 * g1 * sqr(g1);
    }
    std::array<Interval, 4> H;
    H[0] = Interval(0.0);
    H[1] = phi1 + a1 + g1;
    H[2] = (phi2 + a2 + g2) / 2.0;
    H[3] = (phi3 + a3 + g3) / 6.0;
    for (int j = 1; j <= 3; ++j) H[j] = Interval(0.0, H[j].hi);
    return H;
}

// ------------------------------------------------------------ phase shift

namespace {

template <int NQ, class TL>
struct ThetaIntegrand {
    const Cbf& spec;
    Jet<TL, NQ> lam2; // promoted constant

    CellEval<TL, NQ> operator()(const Interval& y) const {
        using R = Jet<TL, NQ>;
        R yj = jet_var<TL, NQ>(promote_iv<TL>(y));
        R z = tanh(yj);
        R z2 = z * z;
        CellEval<TL, NQ> ce;
        ce.jet = detail_theta::theta_n(spec, lam2, z2);
        return ce;
    }
};

// far end in u = e^{-2y}: int_Y^inf N dy = int_0^U N(u)/(2u) du, U = e^{-2Y},
// with z = (1-u)/(1+u). N(0) = 0 for every lambda, so each lambda-order row
// obeys its own mean-value identity and the u-slope jet covers the cell.
template <class TL>
TL theta_far_tail(const Cbf& spec, const TL& lam2cfg, double U) {
    using R = Jet<TL, 3>;
    R u = jet_var<TL, 3>(promote_iv<TL>(Interval(0.0, U)));
    R z = (1.0 - u) / (u + 1.0);
    R z2 = z * z;
    R lam2 = jet_const<TL, 3>(lam2cfg);
    R n = detail_theta::theta_n(spec, lam2, z2);
    TL slope = n.c[1] * 0.5;
    return mul_iv(slope, Interval(0.0, U));
}

} // namespace

template <class TL>
TL phase_shift_jet(const Cbf& spec, const TL& lam, const ThetaOptions& opt) {
    TL lam2 = lam * lam;
    Interval lv = value_of(lam);

    // head (0, y0]: N <= 4 log(1/tanh y) <= 4(log(1/y) + y^2); hull-evaluate
    // the lambda rows over [ylo, y0] and close (0, ylo] with the bound trees
    double y0 = std::max(1e-13, std::min(1e-4, opt.tol / 64.0));
    double ylo = 1e-100;
    TL head{};
    {
        Interval yh(ylo, y0);
        Interval zh = tanh(yh);
        TL n = detail_theta::theta_n(spec, lam2, promote_iv<TL>(sqr(zh)));
        head = mul_iv(n, Interval(0.0, y0 - ylo));
        Interval v_all(0.0, 4.0 * y0 * (std::log(1.0 / y0) + 1.0) + y0 * y0 * y0);
        Interval vh = intersect(value_of(head), v_all);
        set_value(head, vh.is_empty() ? v_all : vh);
        if constexpr (!std::is_same_v<TL, Interval>) {
            auto Hs = lambda_log_deriv_bounds(spec, lv, true, 2.0);
            auto Hl = lambda_log_deriv_bounds(spec, lv, false, 2.0);
            TL sliver{};
            sliver.c[0] = Interval(0.0, 4.0 * ylo * (std::log(1.0 / ylo) + 1.0));
            for (int j = 1; j < TL::order && j <= 3; ++j) {
                double hb = (Hs[j] + Hl[j]).hi * 2.0 * ylo;
                sliver.c[j] = Interval(-hb, hb);
            }
            head = head + sliver;
        }
    }

    double U = std::min(1e-3, std::max(opt.tol, 1e-13));
    double Y = 0.5 * std::log(1.0 / U);
    TL far = theta_far_tail(spec, lam2, U);

    ThetaIntegrand<5, TL> f{spec, jet_const<TL, 5>(lam2)};
    QuadOptions q;
    q.tol = opt.tol * 0.5;
    q.max_cells = opt.max_cells;
    q.split_points = {0.01, 0.1, 1.0};
    auto body = integrate_cells<5, TL>(f, y0, Y, q);

    TL total = mul_iv(body.value + head + far, 1.0 / pi_iv());
    Interval v = intersect(value_of(total), Interval(0.0, half_pi_iv().hi));
    if (!v.is_empty()) set_value(total, v);
    return total;
}

template Interval phase_shift_jet<Interval>(const Cbf&, const Interval&, const ThetaOptions&);
template J3 phase_shift_jet<J3>(const Cbf&, const J3&, const ThetaOptions&);
template J4 phase_shift_jet<J4>(const Cbf&, const J4&, const ThetaOptions&);

Interval phase_shift(const Cbf& spec, double lambda, double tol) {
    ThetaOptions o;
    o.tol = tol;
    return phase_shift_jet<Interval>(spec, Interval(lambda), o);
}

ThetaBounds phase_shift_bounds(const Cbf& spec, double lambda) {
    Interval l = sqr(Interval(lambda));
    Interval psi = spec.psi(l), d1 = spec.psi1(l), d2 = abs(spec.psi2(l));
    ThetaBounds b;
    Interval arg_up = intersect(sqrt(l * d1 / psi), Interval(0.0, 1.0));
    b.upper = half_pi_iv() - asin(arg_up);
    // three-arcsin lower bound, with the 1/pi factor from its derivation:
    // a1^2 = psi/(l psi1), a2^2 = l|psi2|/(2 psi1), a^2 = a1^2 - 1
    Interval a1s = psi / (l * d1);
    Interval a2s = intersect(l * d2 / (2.0 * d1), Interval(0.0, 1.0));
    Interval as = a1s - 1.0;
    if (as.hi <= 0.0) {
        b.lower = Interval(0.0);
    } else {
        Interval asx(std::max(as.lo, 1e-300), as.hi);
        Interval t1 = sqr(asin(sqrt(a2s)));
        Interval t2 = sqr(asin(sqrt(intersect(a1s * a2s / asx, Interval(0.0, 1.0)))));
        Interval t3 = sqr(asin(sqrt(intersect(a2s / asx, Interval(0.0, 1.0)))));
        b.lower = max(Interval(0.0), (t1 + t2 - t3) / pi_iv());
    }
    b.global_upper = check_condition_a1(spec).theta_bound;
    return b;
}

// ------------------------------------------------------------- log dagger

namespace {

// P1: zeta in (0,1]: K(xi,zeta) m(zeta^2);  P2: v in (0,1]: xi/(1+xi^2v^2) m(1/v^2)
template <int NQ, class TXL>
struct DaggerIntegrand {
    const Cbf& spec;
    std::optional<TXL> lam2;
    TXL xi;
    bool second_piece;

    CellEval<TXL, NQ> operator()(const Interval& t) const {
        using R = Jet<TXL, NQ>;
        R tj = jet_var<TXL, NQ>(promote_iv<TXL>(t));
        R xij = jet_const<TXL, NQ>(xi);
        CellEval<TXL, NQ> ce;
        R w = second_piece ? recip(tj * tj) : tj * tj;
        R m = lam2 ? log_psi_lambda(spec, jet_const<TXL, NQ>(*lam2), w)
                   : log(spec.psi(w));
        R ker = second_piece ? xij / ((xij * xij) * (tj * tj) + 1.0)
                             : xij / (xij * xij + tj * tj);
        ce.jet = ker * m;
        return ce;
    }
};

struct SliverBounds {
    std::array<Interval, 5> xi_k;  // per xi-order, mass included
    std::array<Interval, 4> lam_j; // relative lambda factors (j=0 -> 1)
};

// residual of one piece over (0, a]: the integrand is K(xi,t) m_lambda(w(t)),
// a product of a lambda-free and a xi-free factor, so mixed bounds multiply
SliverBounds dagger_sliver(const Cbf& spec, const std::optional<Interval>& lam,
                           const Interval& xi, double a, bool second_piece) {
    SliverBounds sb;
    Interval w_edge = second_piece ? 1.0 / sqr(Interval(a)) : sqr(Interval(a));
    Interval m_edge = lam ? log_psi_lambda(spec, sqr(*lam), w_edge) : log(spec.psi(w_edge));
    double mbar = std::max(std::fabs(m_edge.lo), std::fabs(m_edge.hi));
    double mass = a * (mbar + 2.0); // int_0^a (|m(edge)| + 2 log(a/t)) dt
    for (int k = 0; k < 5; ++k) {
        double kb;
        if (second_piece)
            kb = k == 0 ? xi.hi * mass : std::pow(a, k - 1) * mass;
        else
            kb = mass / std::pow(xi.lo, k + 1);
        sb.xi_k[k] = Interval(-kb, kb);
    }
    sb.lam_j[0] = Interval(1.0);
    if (lam) {
        auto H = lambda_log_deriv_bounds(spec, *lam, !second_piece, 0.0);
        for (int j = 1; j <= 3; ++j)
            sb.lam_j[j] = Interval(-1.0, 1.0) * (H[j].hi / (mbar + 2.0) + 1e-300);
    } else {
        for (int j = 1; j <= 3; ++j) sb.lam_j[j] = Interval(0.0);
    }
    return sb;
}

template <int N>
struct ResidualInjectXi {
    static Jet<Interval, N> make(const SliverBounds& sb) {
        Jet<Interval, N> r;
        for (int k = 0; k < N; ++k) r.c[k] = sb.xi_k[std::min(k, 4)];
        return r;
    }
};
template <int N>
struct ResidualInjectLam {
    static Jet<Interval, N> make(const SliverBounds& sb) {
        Jet<Interval, N> r;
        for (int j = 0; j < N; ++j)
            r.c[j] = sb.xi_k[0] * (j == 0 ? Interval(1.0) : sb.lam_j[std::min(j, 3)]);
        return r;
    }
};
template <int NX, int NL>
struct ResidualInjectMixed {
    static Jet<Jet<Interval, NL>, NX> make(const SliverBounds& sb) {
        Jet<Jet<Interval, NL>, NX> r;
        for (int k = 0; k < NX; ++k)
            for (int j = 0; j < NL; ++j)
                r.c[k].c[j] = sb.xi_k[std::min(k, 4)] *
                              (j == 0 ? Interval(1.0) : sb.lam_j[std::min(j, 3)]);
        return r;
    }
};

QuadOptions dagger_quad_opts(double tol, int max_cells) {
    QuadOptions q;
    q.tol = tol;
    q.max_cells = max_cells;
    q.split_points = {1e-60, 1e-30, 1e-15, 1e-8, 1e-4, 1e-2, 0.1};
    q.init_cells = 8;
    return q;
}

template <int NQ, class TXL, class Inject>
TXL log_dagger_core(const Cbf& spec, const std::optional<TXL>& lam2jet,
                    const std::optional<Interval>& lamiv, const TXL& xijet,
                    const Interval& xiiv, const DaggerOptions& opt, Inject inject) {
    TXL total{};
    for (int piece = 0; piece < 2; ++piece) {
        DaggerIntegrand<NQ, TXL> f{spec, lam2jet, xijet, piece == 1};
        auto q = dagger_quad_opts(opt.tol * 0.45, opt.max_cells);
        auto r = integrate_cells<NQ, TXL>(f, kSliverEdge, 1.0, q);
        SliverBounds sb = dagger_sliver(spec, lamiv, xiiv, kSliverEdge, piece == 1);
        total = total + r.value + inject(sb);
    }
    return mul_iv(total, 1.0 / pi_iv());
}

} // namespace

Interval log_dagger_value(const Cbf& spec, const std::optional<Interval>& lam,
                          const Interval& xi, const DaggerOptions& opt) {
    std::optional<Interval> lam2;
    if (lam) lam2 = sqr(*lam);
    return log_dagger_core<5, Interval>(spec, lam2, lam, xi, xi, opt,
                                        [](const SliverBounds& sb) { return sb.xi_k[0]; });
}

template <int N>
Jet<Interval, N> log_dagger_lamjet(const Cbf& spec, const Jet<Interval, N>& lam,
                                   const Interval& xi, const DaggerOptions& opt) {
    std::optional<Jet<Interval, N>> lam2 = lam * lam;
    Interval lamiv = value_of(lam);
    Jet<Interval, N> xij = jet_const<Interval, N>(xi);
    return log_dagger_core<5, Jet<Interval, N>>(
        spec, lam2, lamiv, xij, xi, opt,
        [](const SliverBounds& sb) { return ResidualInjectLam<N>::make(sb); });
}
template J3 log_dagger_lamjet<3>(const Cbf&, const J3&, const Interval&, const DaggerOptions&);
template J4 log_dagger_lamjet<4>(const Cbf&, const J4&, const Interval&, const DaggerOptions&);

template <int N>
Jet<Interval, N> log_dagger_xijet(const Cbf& spec, const std::optional<Interval>& lam,
                                  const Jet<Interval, N>& xi, const DaggerOptions& opt) {
    std::optional<Jet<Interval, N>> lam2;
    if (lam) lam2 = jet_const<Interval, N>(sqr(*lam));
    return log_dagger_core<5, Jet<Interval, N>>(
        spec, lam2, lam, xi, value_of(xi), opt,
        [](const SliverBounds& sb) { return ResidualInjectXi<N>::make(sb); });
}
template J3 log_dagger_xijet<3>(const Cbf&, const std::optional<Interval>&, const J3&,
                                const DaggerOptions&);

template <int NX, int NL>
Jet<Jet<Interval, NL>, NX> log_dagger_mixed(const Cbf& spec, const Jet<Interval, NL>& lam,
                                            const Interval& xi, const DaggerOptions& opt) {
    using TL = Jet<Interval, NL>;
    using TXL = Jet<TL, NX>;
    std::optional<TXL> lam2 = jet_const<TL, NX>(lam * lam);
    Interval lamiv = value_of(lam);
    TXL xij = jet_var<TL, NX>(promote_iv<TL>(xi));
    return log_dagger_core<5, TXL>(
        spec, lam2, lamiv, xij, xi, opt,
        [](const SliverBounds& sb) { return ResidualInjectMixed<NX, NL>::make(sb); });
}
template Jet<Jet<Interval, 4>, 4> log_dagger_mixed<4, 4>(const Cbf&, const Jet<Interval, 4>&,
                                                         const Interval&, const DaggerOptions&);

// -------------------------------------------------------------- wrappers

Interval dagger(const Cbf& spec, double xi, double tol) {
    DaggerOptions o;
    o.tol = tol;
    Interval ld = log_dagger_value(spec, std::nullopt, Interval(xi), o);
    Interval v = exp(ld);
    Interval s = sqrt(spec.psi(sqr(Interval(xi))));
    Interval band((exp(-2.0 * catalan_iv() / pi_iv()) * s).lo,
                  (exp(2.0 * catalan_iv() / pi_iv()) * s).hi);
    Interval w = intersect(v, band);
    if (w.is_empty())
        throw std::runtime_error("dagger: sandwich violated (bug) for " + spec.descriptor());
    return w;
}

Interval psi_lambda_dagger(const Cbf& spec, double lambda, double xi, double tol) {
    DaggerOptions o;
    o.tol = tol;
    Interval ld = log_dagger_value(spec, Interval(lambda), Interval(xi), o);
    Interval v = exp(ld);
    Interval lam2 = sqr(Interval(lambda));
    Interval pl = exp(log_psi_lambda(spec, lam2, sqr(Interval(xi))));
    Interval band((exp(-2.0 * catalan_iv() / pi_iv()) * sqrt(pl)).lo,
                  (exp(2.0 * catalan_iv() / pi_iv()) * sqrt(pl)).hi);
    Interval w = intersect(v, band);
    if (w.is_empty()) throw std::runtime_error("psi_lambda_dagger: sandwich violated (bug)");
    return w;
}

ImagAxisValue psi_lambda_dagger_imag(const Cbf& spec, double lambda, double tol) {
    ImagAxisValue r;
    Interval lam2 = sqr(Interval(lambda));
    Interval diag = spec.psi(lam2) / (lam2 * spec.psi1(lam2));
    r.modulus = sqrt(diag);
    r.argument = phase_shift(spec, lambda, tol);
    return r;
}

// ---------------------------------------------------- complex dagger

CInterval dagger_complex(const Cbf& spec, const CInterval& w, double tol) {
    if (!(w.re.lo > 0.0)) throw std::invalid_argument("dagger_complex: Re w must be > 0");
    Interval wa = abs(w);
    double cut = 8.0 * wa.hi;
    CInterval w2 = sqr(w);

    auto f = [&](const Interval& z) {
        using R = Jet<CInterval, 5>;
        R zj = jet_var<CInterval, 5>(CInterval(z));
        R m;
        {
            Jet<Interval, 5> zr = jet_var<Interval, 5>(z);
            Jet<Interval, 5> lr = log(spec.psi(zr * zr));
            for (int k = 0; k < 5; ++k) m.c[k] = CInterval(lr.c[k]);
        }
        R ker = jet_const<CInterval, 5>(w) / (jet_const<CInterval, 5>(w2) + zj * zj);
        CellEval<CInterval, 5> ce;
        ce.jet = ker * m;
        return ce;
    };
    QuadOptions q = dagger_quad_opts(tol * 0.4, 60000);
    auto main = integrate_cells<5, CInterval>(f, kSliverEdge, cut, q);

    double kb = (wa / Interval(std::max(1e-300, (abs(w2) - sqr(Interval(kSliverEdge))).lo))).hi;
    Interval me = log(spec.psi(sqr(Interval(kSliverEdge))));
    double mass = kSliverEdge * (std::max(std::fabs(me.lo), std::fabs(me.hi)) + 2.0) * kb;
    CInterval sliver{Interval(-mass, mass), Interval(-mass, mass)};

    Interval mc = log(spec.psi(sqr(Interval(cut))));
    double mbar = std::max(std::fabs(mc.lo), std::fabs(mc.hi));
    double fac = 1.0 / (1.0 - (abs2(w) / sqr(Interval(cut))).hi);
    double tb = (wa.hi * fac * (mbar + 4.0)) / cut;
    CInterval tail{Interval(-tb, tb), Interval(-tb, tb)};

    CInterval ld = (main.value + sliver + tail) / pi_iv();
    return exp(ld);
}

namespace {

// boundary argument of psi^dagger on the imaginary axis: the phase-shift
// integral with psi in place of psi_lambda
Interval boundary_arg_psi(const Cbf& spec, double y, double tol) {
    Interval y2 = sqr(Interval(y));
    auto f = [&](const Interval& t) {
        using R = Jet<Interval, 5>;
        R tj = jet_var<Interval, 5>(t);
        R z2 = sqr(tanh(tj));
        R w_hi = jet_const<Interval, 5>(y2) / z2;
        R w_lo = jet_const<Interval, 5>(y2) * z2;
        CellEval<Interval, 5> ce;
        ce.jet = log(spec.psi(w_hi)) - log(spec.psi(w_lo));
        return ce;
    };
    double y0 = std::max(1e-13, tol / 64.0);
    double U = std::min(1e-3, std::max(tol, 1e-13));
    double Y = 0.5 * std::log(1.0 / U);
    QuadOptions q;
    q.tol = 0.5 * tol;
    q.max_cells = 40000;
    auto body = integrate_cells<5, Interval>(f, y0, Y, q);
    Interval head(0.0, 4.0 * y0 * (std::log(1.0 / y0) + 1.0) + y0 * y0 * y0);
    Interval far;
    {
        using R = Jet<Interval, 3>;
        R u = jet_var<Interval, 3>(Interval(0.0, U));
        R z2 = sqr((1.0 - u) / (u + 1.0));
        R w_hi = jet_const<Interval, 3>(y2) / z2;
        R w_lo = jet_const<Interval, 3>(y2) * z2;
        R n = log(spec.psi(w_hi)) - log(spec.psi(w_lo));
        far = mul_iv(n.c[1] * 0.5, Interval(0.0, U));
    }
    return (body.value + head + far) / pi_iv();
}

// psi^dagger on Re w < 0 through the Stieltjes representation: density
// Im psi^+(-s^2)/psi^dagger(s); requires the family's tail certificate
std::optional<CInterval> dagger_left_halfplane(const Cbf& spec, std::complex<double> w,
                                               double tol) {
    double wabs = std::abs(w);
    double S = std::max(8.0 * wabs, 8.0);
    auto dt = spec.duality_tail(S, wabs);
    if (!dt) return std::nullopt;
    while (dt->hi > 0.25 * tol && S < 1e12) {
        S *= 2.0;
        auto d2 = spec.duality_tail(S, wabs);
        if (!d2) break;
        dt = d2;
    }
    CInterval wi{Interval(w.real()), Interval(w.imag())};

    // head (0, delta] by dyadic pieces: |kernel| <= |w|/((|w|-delta) s),
    // m_hat on each dyadic s-interval from the boundary hull and the lower
    // dagger sandwich; decaying families exit early
    double delta = std::min(1e-3, 0.25 * wabs);
    Interval head(0.0);
    {
        Interval acc(0.0);
        double hi_s = delta;
        Interval kfac = Interval(wabs) / (wabs - delta);
        for (int k = 0; k < 400 && hi_s > 1e-250; ++k) {
            double lo_s = hi_s / 2.0;
            CInterval bb = spec.boundary(Interval(lo_s * lo_s, hi_s * hi_s));
            Interval im(0.0, std::max(0.0, bb.im.hi));
            Interval dag_lo =
                exp(-2.0 * catalan_iv() / pi_iv()) * sqrt(spec.psi(Interval(lo_s * lo_s)));
            Interval piece = (im / dag_lo) * kfac * ((hi_s - lo_s) / lo_s);
            acc = acc + Interval(0.0, piece.hi);
            hi_s = lo_s;
            if (piece.hi < 1e-18 * std::max(1.0, acc.hi)) break;
        }
        head = Interval(0.0, acc.hi + 1e-200);
    }

    auto f = [&](const Interval& s) {
        using R = Jet<CInterval, 3>;
        Jet<Interval, 3> sj = jet_var<Interval, 3>(s);
        CellEval<CInterval, 3> ce;
        auto bj = spec.boundary_jet3(sj * sj);
        if (!bj) {
            CInterval b = spec.boundary(sqr(s));
            Interval im(0.0, std::max(0.0, b.im.hi));
            Interval dag = exp(log_dagger_value(spec, std::nullopt, s, {.tol = 1e-7}));
            CInterval ker = wi / ((wi + CInterval(s)) * s);
            ce.jet = Jet<CInterval, 3>(ker * CInterval(im / dag));
            ce.has_jet = false;
            return ce;
        }
        R sc;
        for (int k = 0; k < 3; ++k) sc.c[k] = CInterval(sj.c[k]);
        R ker = jet_const<CInterval, 3>(wi) / ((jet_const<CInterval, 3>(wi) + sc) * sc);
        Jet<Interval, 3> im;
        for (int k = 0; k < 3; ++k) im.c[k] = bj->c[k].im;
        Jet<Interval, 3> dag = exp(log_dagger_xijet<3>(spec, std::nullopt, sj, {.tol = 1e-8}));
        Jet<Interval, 3> mh = im / dag;
        R mhat;
        for (int k = 0; k < 3; ++k) mhat.c[k] = CInterval(mh.c[k]);
        ce.jet = ker * mhat;
        return ce;
    };
    QuadOptions q;
    q.tol = 0.25 * tol;
    q.max_cells = 6000;
    for (double sp : spec.boundary_splits()) {
        double r = std::sqrt(sp);
        if (r > delta && r < S) q.split_points.push_back(r);
    }
    auto main = integrate_cells<3, CInterval>(f, delta, S, q);

    Interval tail_box(-dt->hi, dt->hi);
    Interval head_box(-head.hi, head.hi);
    CInterval integral = main.value + CInterval(head_box, head_box) + CInterval(tail_box, tail_box);
    CbfInfo info = spec.info();
    CInterval c2 = CInterval(Interval(std::sqrt(info.c2_at_inf))) * wi;
    Interval c1(0.0, sqrt(spec.psi(Interval(1e-280))).hi);
    return CInterval(c1, Interval(0.0)) + c2 + integral / pi_iv();
}

} // namespace

Interval duality_residual(const Cbf& spec, std::complex<double> z, double tol) {
    if (z.imag() == 0.0) throw std::invalid_argument("duality_residual: Im z != 0 required");
    auto value_at = [&](std::complex<double> p) -> CInterval {
        if (p.real() > 0.0) return dagger_complex(spec, CInterval(p), tol * 0.1);
        if (p.real() == 0.0) {
            double y = std::fabs(p.imag());
            Interval mod = sqrt(spec.psi(sqr(Interval(y))));
            Interval arg = boundary_arg_psi(spec, y, tol * 0.1);
            if (p.imag() < 0.0) arg = -arg;
            return {mod * cos(arg), mod * sin(arg)};
        }
        auto v = dagger_left_halfplane(spec, p, tol * 0.5);
        if (!v)
            throw std::runtime_error("duality_residual: no left-half-plane certificate for " +
                                     spec.descriptor());
        return *v;
    };
    CInterval a = value_at(z);
    CInterval b = value_at(-z);
    std::complex<double> mz2 = -z * z;
    CInterval target;
    if (std::fabs(mz2.imag()) < 1e-300 && mz2.real() < 0.0)
        target = spec.boundary(Interval(-mz2.real()));
    else
        target = spec.psic(CInterval(mz2));
    CInterval diff = a * b - target;
    return sqrt(abs2(diff));
}

// ------------------------------------------------------------- the table

struct LogDaggerTable::Impl {
    CbfPtr spec;
    double build_tol;

    struct Cell {
        double l0, l1, x0, x1;
        Jet<Jet<Interval, 4>, 4> mid;  // tight at midpoint
        Jet<Jet<Interval, 4>, 4> wide; // whole-cell enclosures
        std::unique_ptr<Cell> a, b;
        bool split_in_lambda = false;
        bool has_data = false;
    };

    std::map<std::pair<int, int>, std::unique_ptr<Cell>> roots;
    std::mutex mu;
    int cells = 0;

    void build(Cell& c) {
        if (c.has_data) return;
        DaggerOptions o;
        o.tol = build_tol;
        double lm = 0.5 * (c.l0 + c.l1), xm = 0.5 * (c.x0 + c.x1);
        c.mid =
            log_dagger_mixed<4, 4>(*spec, jet_var<Interval, 4>(Interval(lm)), Interval(xm), o);
        c.wide = log_dagger_mixed<4, 4>(*spec, jet_var<Interval, 4>(Interval(c.l0, c.l1)),
                                        Interval(c.x0, c.x1), o);
        c.has_data = true;
        ++cells;
    }

    using QJ = LogDaggerTable::QJ;
    using TL = Jet<Interval, 3>;

    static QJ qj_pow(const QJ& d, int k) {
        QJ r{};
        r.c[0] = TL(Interval(1.0));
        for (int i = 0; i < k; ++i) r = r * d;
        return r;
    }

    QJ expand(Cell& c, const TL& lam, const TL& xi) {
        build(c);
        double lm = 0.5 * (c.l0 + c.l1), xm = 0.5 * (c.x0 + c.x1);
        QJ dl = jet_const<TL, 3>(lam - TL(Interval(lm)));
        QJ dx{};
        for (int k = 0; k < 3; ++k) dx.c[k] = TL(xi.c[k]);
        dx.c[0] = TL(xi.c[0] - Interval(xm));

        std::array<QJ, 4> dxp, dlp;
        for (int k = 0; k <= 3; ++k) dxp[k] = qj_pow(dx, k);
        for (int j = 0; j <= 3; ++j) dlp[j] = qj_pow(dl, j);

        QJ acc{};
        for (int k = 0; k <= 2; ++k) {
            for (int j = 0; j <= 2; ++j) acc = acc + mul_iv(dxp[k] * dlp[j], c.mid.c[k].c[j]);
            acc = acc + mul_iv(dxp[k] * dlp[3], c.wide.c[k].c[3]);
        }
        for (int j = 0; j <= 3; ++j) acc = acc + mul_iv(dxp[3] * dlp[j], c.wide.c[3].c[j]);
        return acc;
    }

    static double promise(const Cell& c, const Interval& lr, const Interval& xr) {
        double lm = 0.5 * (c.l0 + c.l1), xm = 0.5 * (c.x0 + c.x1);
        double hl = std::max(std::fabs(lr.hi - lm), std::fabs(lr.lo - lm));
        double hx = std::max(std::fabs(xr.hi - xm), std::fabs(xr.lo - xm));
        double w = 0.0;
        for (int k = 0; k <= 2; ++k)
            w += (c.wide.c[k].c[3].mag() * 2.0) * std::pow(hx, k) * hl * hl * hl;
        for (int j = 0; j <= 3; ++j)
            w += (c.wide.c[3].c[j].mag() * 2.0) * hx * hx * hx * std::pow(hl, j);
        for (int k = 0; k <= 2; ++k)
            for (int j = 0; j <= 2; ++j)
                w += c.mid.c[k].c[j].width() * std::pow(hx, k) * std::pow(hl, j);
        return w;
    }

    QJ query_rec(Cell& c, const TL& lam, const TL& xi, double want, int depth) {
        Interval lr = value_of(lam), xr = value_of(xi);
        if (c.a) {
            bool in_a, in_b;
            if (c.split_in_lambda) {
                double m = c.a->l1;
                in_a = lr.lo < m;
                in_b = lr.hi > m;
            } else {
                double m = c.a->x1;
                in_a = xr.lo < m;
                in_b = xr.hi > m;
            }
            if (in_a && !in_b) return query_rec(*c.a, lam, xi, want, depth);
            if (in_b && !in_a) return query_rec(*c.b, lam, xi, want, depth);
            QJ ra = query_rec(*c.a, lam, xi, want, depth);
            QJ rb = query_rec(*c.b, lam, xi, want, depth);
            QJ h;
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j) h.c[k].c[j] = hull(ra.c[k].c[j], rb.c[k].c[j]);
            return h;
        }
        build(c);
        if (depth < 16 && promise(c, lr, xr) > want && (c.l1 - c.l0) > 1e-5 * c.l1 &&
            (c.x1 - c.x0) > 1e-5 * c.x1) {
            double hl = 0.5 * (c.l1 - c.l0), hx = 0.5 * (c.x1 - c.x0);
            double wl = 0.0, wx = 0.0;
            for (int k = 0; k <= 2; ++k)
                wl += c.wide.c[k].c[3].mag() * std::pow(hx, k) * hl * hl * hl;
            for (int j = 0; j <= 3; ++j)
                wx += c.wide.c[3].c[j].mag() * hx * hx * hx * std::pow(hl, j);
            c.split_in_lambda = wl >= wx;
            c.a = std::make_unique<Cell>();
            c.b = std::make_unique<Cell>();
            c.a->l0 = c.l0;
            c.a->l1 = c.split_in_lambda ? 0.5 * (c.l0 + c.l1) : c.l1;
            c.a->x0 = c.x0;
            c.a->x1 = c.split_in_lambda ? c.x1 : 0.5 * (c.x0 + c.x1);
            c.b->l0 = c.split_in_lambda ? c.a->l1 : c.l0;
            c.b->l1 = c.l1;
            c.b->x0 = c.split_in_lambda ? c.x0 : c.a->x1;
            c.b->x1 = c.x1;
            return query_rec(c, lam, xi, want, depth + 1);
        }
        return expand(c, lam, xi);
    }

    QJ query(const TL& lam, const TL& xi, double want) {
        std::lock_guard<std::mutex> lock(mu);
        Interval lr = value_of(lam), xr = value_of(xi);
        if (!(lr.lo > 0.0 && xr.lo > 0.0))
            throw std::runtime_error("LogDaggerTable: query needs positive ranges");
        QJ out;
        bool first = true;
        int l0 = (int)std::floor(std::log2(lr.lo)), l1 = (int)std::floor(std::log2(lr.hi));
        int x0 = (int)std::floor(std::log2(xr.lo)), x1 = (int)std::floor(std::log2(xr.hi));
        for (int il = l0; il <= l1; ++il) {
            for (int ix = x0; ix <= x1; ++ix) {
                auto& slot = roots[{il, ix}];
                if (!slot) {
                    slot = std::make_unique<Cell>();
                    slot->l0 = std::exp2(il);
                    slot->l1 = std::exp2(il + 1);
                    slot->x0 = std::exp2(ix);
                    slot->x1 = std::exp2(ix + 1);
                }
                Interval lcl = intersect(lr, Interval(slot->l0, slot->l1));
                Interval xcl = intersect(xr, Interval(slot->x0, slot->x1));
                if (lcl.is_empty() || xcl.is_empty()) continue;
                TL lam_c = lam, xi_c = xi;
                set_value(lam_c, lcl);
                set_value(xi_c, xcl);
                QJ r = query_rec(*slot, lam_c, xi_c, want, 0);
                if (first) {
                    out = r;
                    first = false;
                } else {
                    for (int k = 0; k < 3; ++k)
                        for (int j = 0; j < 3; ++j) out.c[k].c[j] = hull(out.c[k].c[j], r.c[k].c[j]);
                }
            }
        }
        if (first) throw std::runtime_error("LogDaggerTable: query outside domain");
        return out;
    }
};

LogDaggerTable::LogDaggerTable(CbfPtr spec, double build_tol) {
    impl_ = std::make_shared<Impl>();
    impl_->spec = std::move(spec);
    impl_->build_tol = build_tol;
}

LogDaggerTable::QJ LogDaggerTable::query(const Jet<Interval, 3>& lam, const Jet<Interval, 3>& xi,
                                         double want) {
    return impl_->query(lam, xi, want);
}

Jet<Interval, 3> LogDaggerTable::query_lamjet(const Jet<Interval, 3>& lam, double xi,
                                              double want) {
    QJ r = query(lam, jet_const<Interval, 3>(Interval(xi)), want);
    return r.c[0];
}

Jet<Interval, 3> LogDaggerTable::query_xijet(double lambda, const Jet<Interval, 3>& xi,
                                             double want) {
    QJ full = query(jet_const<Interval, 3>(Interval(lambda)), xi, want);
    Jet<Interval, 3> r;
    for (int k = 0; k < 3; ++k) r.c[k] = full.c[k].c[0];
    return r;
}

int LogDaggerTable::cell_count() const { return impl_->cells; }

} // namespace fpt
