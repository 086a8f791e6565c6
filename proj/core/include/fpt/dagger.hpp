#pragma once

// The Wiener-Hopf half transform psi -> psi^dagger,
//
//   log psi^dagger(xi) = (1/pi) int_0^inf  xi log psi(zeta^2) / (xi^2 + zeta^2) dzeta,
//
// evaluated for psi itself and for the two-parameter family
//
//   psi_lambda(w) = (1 - w/lambda^2) / (1 - psi(w)/psi(lambda^2))
//                 = (psi(lambda^2)/lambda^2) / D(w),
//   D(w) = (psi(lambda^2) - psi(w)) / (lambda^2 - w),
//
// with jets in xi and/or lambda. D is smooth through w = lambda^2; near the
// diagonal it is evaluated by the exact mean-value forms
//   D = psi'(lambda^2 + s (w - lambda^2)),  s = [0,1]   (all jet orders), and
//   D = psi'((lambda^2+w)/2) + (w-lambda^2)^2 [0, psi'''_sup]/24  (value),
// whose widths vanish quadratically; away from it by the three-term form
// log psi_lambda = Phi - log|...| with Phi = log(psi(lambda^2)/lambda^2).
//
// The phase shift
//   theta_lambda = (1/pi) int_0^1 (1-z^2)^{-1} log( psi_lambda(l^2/z^2) /
//                                                   psi_lambda(l^2 z^2) ) dz
// is computed after the substitution z = tanh(y), which removes the
// removable singularity at z = 1 exactly and leaves an integrand decaying
// like e^{-2y}; the far end is finished in the variable u = e^{-2y} through
// a mean-value cell at the (now algebraic) removable zero at u = 0.

#include "fpt/cbf.hpp"
#include "fpt/quadrature.hpp"

#include <complex>

namespace fpt {

// ---- diagonal-safe psi_lambda -----------------------------------------

// D(w) = (psi(lam2)-psi(w))/(lam2-w) over any real ring, smooth through the
// diagonal: D = int_0^1 psi'(lam2 + s d) ds, d = w - lam2. The integral is
// split into M pieces, each enclosed by evaluating psi' with the s-subrange
// as an interval constant; every jet coefficient of each piece encloses the
// respective s-average, so the composite is sound at all orders with widths
// ~ |psi''| |d| / M. The order-0 value is tightened further by the midpoint
// form psi'((lam2+w)/2) + d^2 [0, psi'''_sup]/24.
template <class R>
R diff_quot(const Cbf& spec, const R& lam2, const R& w) {
    R d = w - lam2;
    constexpr int M = 32;
    R D{};
    for (int i = 0; i < M; ++i) {
        Interval si(double(i) / M, double(i + 1) / M);
        D = D + spec.psi1(lam2 + mul_iv(d, si));
    }
    D = D * (1.0 / M);
    Interval vl = value_of(lam2), vw = value_of(w);
    Interval mlo(std::max(1e-300, std::min(vl.lo, vw.lo)));
    Interval rem = Interval(0.0, 1.0) * (spec.psi1(mlo) / (4.0 * sqr(mlo)));
    Interval mid_arg = (vl + vw) * 0.5;
    Interval c0m = spec.psi1(mid_arg) + sqr(value_of(d)) * rem;
    Interval both = intersect(value_of(D), c0m);
    if (!both.is_empty()) set_value(D, both);
    return D;
}

// log psi_lambda(w); lam2 = lambda^2 as a ring element
template <class R>
R log_psi_lambda(const Cbf& spec, const R& lam2, const R& w) {
    Interval vw = value_of(w), vl = value_of(lam2);
    double scale = std::max(vw.mag(), vl.mag());
    R phi = log(spec.psi(lam2) / lam2);
    // the three-term form only loses ~1e-16/sep relative digits to the
    // subtraction, so it stays preferable down to tiny separations
    if (vw.hi < vl.lo && vl.lo - vw.hi > 1e-5 * scale)
        return phi + log(lam2 - w) - log(spec.psi(lam2) - spec.psi(w));
    if (vw.lo > vl.hi && vw.lo - vl.hi > 1e-5 * scale)
        return phi + log(w - lam2) - log(spec.psi(w) - spec.psi(lam2));
    return phi - log(diff_quot(spec, lam2, w));
}

// psi_lambda itself (value ring); continuous through the diagonal
inline Interval psi_lambda_value(const Cbf& spec, double lambda, const Interval& w) {
    Interval lam2 = sqr(Interval(lambda));
    return exp(log_psi_lambda(spec, lam2, w));
}

// ---- closed interior bounds shared by theta and dagger -----------------

// Bounds for |d^j/dlambda^j log psi_lambda(w)| / j!, j = 1..3, uniform over
// w in one of two classes: w <= lam2/4 ("small") or w >= 4 lam2 ("large"),
// where w may itself depend on lambda with |dw/dlambda| <= mu w / lambda
// (mu = 0: w fixed; mu = 2: w = c lambda^2). Derivations in dagger.cpp.
std::array<Interval, 4> lambda_log_deriv_bounds(const Cbf& spec, const Interval& lam,
                                                bool w_small, double mu);

// ---- phase shift -------------------------------------------------------

struct ThetaOptions {
    double tol = 1e-10;
    int max_cells = 40000;
};

namespace detail_theta {

// integrand pieces N(z) = log psi_lambda(l^2/z^2) - log psi_lambda(l^2 z^2),
// written D-wise so the Phi terms cancel exactly
template <class R>
R theta_n(const Cbf& spec, const R& lam2, const R& z2) {
    R w_lo = lam2 * z2;
    R w_hi = lam2 / z2;
    Interval vl = value_of(lam2), vlo = value_of(w_lo), vhi = value_of(w_hi);
    // the three-term form loses only ~1e-16/sep relative digits to the
    // subtractions, so it stays preferable down to tiny separations
    if (vlo.hi < vl.lo * (1.0 - 1e-5) && vhi.lo > vl.hi * (1.0 + 1e-5)) {
        // N = log((w_hi - l)/(l - w_lo)) - log((psi(w_hi)-psi(l))/(psi(l)-psi(w_lo)))
        // and the first ratio equals 1/z2 exactly:
        R a = -log(z2);
        R b = log(spec.psi(w_hi) - spec.psi(lam2)) - log(spec.psi(lam2) - spec.psi(w_lo));
        return a - b;
    }
    return log(diff_quot(spec, lam2, w_lo)) - log(diff_quot(spec, lam2, w_hi));
}

} // namespace detail_theta

// theta as a jet in lambda (TL = Interval gives the plain enclosure)
template <class TL>
TL phase_shift_jet(const Cbf& spec, const TL& lam, const ThetaOptions& opt = {});

Interval phase_shift(const Cbf& spec, double lambda, double tol = 1e-10);

// closed-form pointwise bounds (sharp for c1 xi/(c2+xi) and c xi)
struct ThetaBounds {
    Interval lower, upper;
    double global_upper; // sup-ratio * pi/4 from the a1 scan
};
ThetaBounds phase_shift_bounds(const Cbf& spec, double lambda);

// ---- log dagger ---------------------------------------------------------

struct DaggerOptions {
    double tol = 1e-10;
    int max_cells = 40000;
};

// plain value: log psi^dagger(xi) (lam absent) or log psi_lambda^dagger(xi)
Interval log_dagger_value(const Cbf& spec, const std::optional<Interval>& lam,
                          const Interval& xi, const DaggerOptions& opt = {});

// jets in lambda at fixed xi
template <int N>
Jet<Interval, N> log_dagger_lamjet(const Cbf& spec, const Jet<Interval, N>& lam,
                                   const Interval& xi, const DaggerOptions& opt = {});

// jets in xi at fixed (or absent) lambda
template <int N>
Jet<Interval, N> log_dagger_xijet(const Cbf& spec, const std::optional<Interval>& lam,
                                  const Jet<Interval, N>& xi, const DaggerOptions& opt = {});

// mixed jets: outer in xi (NX), inner in lambda (NL); for table cells
template <int NX, int NL>
Jet<Jet<Interval, NL>, NX> log_dagger_mixed(const Cbf& spec, const Jet<Interval, NL>& lam,
                                            const Interval& xi,
                                            const DaggerOptions& opt = {});

// psi^dagger(xi) with the sandwich guarantee
Interval dagger(const Cbf& spec, double xi, double tol = 1e-10);

// psi_lambda^dagger at real xi
Interval psi_lambda_dagger(const Cbf& spec, double lambda, double xi, double tol = 1e-10);

// value on the imaginary axis: psi_lambda^dagger(i lambda) =
// sqrt(psi_lambda(lambda^2)) e^{i theta_lambda}
struct ImagAxisValue {
    Interval modulus;
    Interval argument;
};
ImagAxisValue psi_lambda_dagger_imag(const Cbf& spec, double lambda, double tol = 1e-10);

// |psi^dagger(z) psi^dagger(-z) - psi(-z^2)| for Im z != 0.
// psi^dagger at Re > 0 uses the defining integral with the complex kernel;
// at Re < 0 the Stieltjes representation of psi^dagger (a complete Bernstein
// function) with density Im psi^+(-s^2) / psi^dagger(s); on the imaginary
// axis the boundary modulus/argument pair.
Interval duality_residual(const Cbf& spec, std::complex<double> z, double tol = 1e-8);

// complex dagger value for Re w > 0 (exposed for tests)
CInterval dagger_complex(const Cbf& spec, const CInterval& w, double tol = 1e-9);

// ---- lazy certified table of L(lambda, xi) = log psi_lambda^dagger(xi) ----
//
// Cells hold mixed Taylor data at the cell midpoint plus whole-cell
// derivative enclosures, so queries re-expand to jets of order <= 2 in each
// variable that remain sound anywhere inside the cell.

class LogDaggerTable {
  public:
    LogDaggerTable(CbfPtr spec, double build_tol = 1e-9);

    // jets of L at (lam-jet, xi-jet); every query value range must lie in
    // the table domain; cells refine until `want` is met or floors hit
    using QJ = Jet<Jet<Interval, 3>, 3>; // outer xi, inner lambda
    QJ query(const Jet<Interval, 3>& lam, const Jet<Interval, 3>& xi, double want);

    // lambda-only and xi-only conveniences
    Jet<Interval, 3> query_lamjet(const Jet<Interval, 3>& lam, double xi, double want);
    Jet<Interval, 3> query_xijet(double lambda, const Jet<Interval, 3>& xi, double want);

    int cell_count() const;

    struct Impl;

  private:
    std::shared_ptr<Impl> impl_;
};

} // namespace fpt
