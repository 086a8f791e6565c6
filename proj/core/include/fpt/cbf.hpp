#pragma once

// Catalog of complete Bernstein functions psi driving the Levy-Khintchine
// exponent Psi(xi) = psi(xi^2) of a symmetric Levy process (a subordinate
// Brownian motion whose subordinator has completely monotone jump density).
//
// Each family supplies:
//   * psi and psi' as templated formulas, instantiated on every interval/jet
//     ring the numerics need (nested jets give mixed parameter derivatives),
//   * psi'' on plain intervals (condition checks and local phase bounds),
//   * the boundary values psi^+(-s) := lim_{eps->0+} psi(-s + i*eps), with
//     jets where the formula is smooth, plus split points where it is not,
//   * growth certificates: closed-form upper bounds for the spectral tail
//     integrals I_n(t, X) = (4/pi) int_X^inf e^{-t psi(l^2)}
//       sqrt(psi'(l^2)) psi(l^2)^{n-1/2} dl,
//     used both for the a2 integrability check and for survival cutoffs,
//   * assorted metadata (regular variation orders, boundedness, drift).

#include "fpt/cinterval.hpp"
#include "fpt/interval.hpp"
#include "fpt/jet.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpt {

using J3 = Jet<Interval, 3>;
using J4 = Jet<Interval, 4>;
using J5 = Jet<Interval, 5>;
using J33 = Jet<J3, 3>;
using J53 = Jet<J3, 5>;
using J43 = Jet<J4, 3>;
using J44 = Jet<J4, 4>;
using J445 = Jet<J44, 5>;
using J45 = Jet<J4, 5>;
using C1 = CInterval;
using C3 = Jet<CInterval, 3>;
using C5 = Jet<CInterval, 5>;
using JB3 = Jet<Interval, 3>; // real seed for boundary jets
using JB5 = Jet<Interval, 5>;

#define FPT_REAL_RINGS(X) \
    X(Interval)           \
    X(J3)                 \
    X(J4)                 \
    X(J5)                 \
    X(J33)                \
    X(J53)                \
    X(J43)                \
    X(J44)                \
    X(J445)               \
    X(J45)
#define FPT_CPLX_RINGS(X) \
    X(C1)                 \
    X(C3)                 \
    X(C5)

struct CbfInfo {
    bool is_unbounded = true;
    std::optional<double> rv0;  // regular variation order of psi at 0
    std::optional<double> rvinf; // and at infinity (both in [0,1])
    std::optional<double> psi_sup;
    bool a2_all_t0 = false;    // a2 integral finite for every t0 > 0
    bool boundary_pole = false; // psi has poles on (-inf, 0)
    double drift_b = 0.0;      // (lim_{xi->0+} xi/psi(xi))^{1/2}
    double c2_at_inf = 0.0;    // lim psi(xi)/xi
};

struct TailBound {
    enum Kind { kBound, kDivergent, kUnknown } kind = kUnknown;
    Interval value{0.0};
    static TailBound bound(const Interval& v) { return {kBound, v}; }
    static TailBound divergent() { return {kDivergent, {}}; }
    static TailBound unknown() { return {kUnknown, {}}; }
};

class Cbf {
  public:
    virtual ~Cbf() = default;

#define FPT_DECL_PSI(R)                         \
    virtual R psi(const R& x) const = 0;        \
    virtual R psi1(const R& x) const = 0;
    FPT_REAL_RINGS(FPT_DECL_PSI)
#undef FPT_DECL_PSI

#define FPT_DECL_PSIC(R) virtual R psic(const R& z) const = 0;
    FPT_CPLX_RINGS(FPT_DECL_PSIC)
#undef FPT_DECL_PSIC

    virtual Interval psi2(const Interval& x) const = 0;

    // boundary value psi^+(-s), s > 0, approached from the upper half-plane
    virtual CInterval boundary(const Interval& s) const = 0;
    virtual std::optional<C3> boundary_jet3(const JB3& s) const = 0;
    virtual std::optional<C5> boundary_jet5(const JB5& s) const = 0;
    // points (in s) where the boundary value is not smooth
    virtual std::vector<double> boundary_splits() const { return {}; }

    virtual CbfInfo info() const = 0;

    // upper bound for I_n(t, X); valid for X >= In_tail_xmin
    virtual TailBound In_tail(int n, double t, double X) const = 0;
    virtual double In_tail_xmin(int /*n*/, double /*t*/) const { return 1.0; }

    // the gamma_lambda density formula's hypothesis holds for every lambda
    virtual bool resonance_free() const { return false; }

    // closed bounds for the renewal integrand head (0, delta] with the
    // factor (1 - e^{-x xi}) <= x xi, and tail [X, inf) with the factor <= 1
    virtual std::optional<Interval> renewal_head(double delta, double x) const {
        (void)delta;
        (void)x;
        return std::nullopt;
    }
    virtual std::optional<Interval> renewal_tail(double X) const {
        (void)X;
        return std::nullopt;
    }

    // tail of the half-plane representation integral used by dagger at
    // complex arguments with negative real part
    virtual std::optional<Interval> duality_tail(double S, double wabs) const {
        (void)S;
        (void)wabs;
        return std::nullopt;
    }

    // families with negative-axis structure (V atoms): psi evaluated at
    // negative real z (off poles), and certified zero enclosures
    virtual std::optional<Interval> eval_negative(const Interval& z) const {
        (void)z;
        return std::nullopt;
    }
    virtual std::optional<Interval> psi1_negative(const Interval& z) const {
        (void)z;
        return std::nullopt;
    }
    virtual int renewal_atom_count(double tol, double x) const {
        (void)tol;
        (void)x;
        return 0;
    }
    virtual Interval renewal_atom_location(int k) const { // z_k < 0
        (void)k;
        throw std::logic_error("no atoms");
    }
    virtual Interval renewal_atom_tail(int K, double x) const {
        (void)K;
        (void)x;
        return Interval(0.0);
    }

    virtual std::string descriptor() const = 0;
};

using CbfPtr = std::shared_ptr<const Cbf>;

// ring classification so combinators can dispatch psi vs psic
template <class R>
struct is_complex_ring : std::false_type {};
template <>
struct is_complex_ring<CInterval> : std::true_type {};
template <class T, int N>
struct is_complex_ring<Jet<T, N>> : is_complex_ring<T> {};

template <class R>
R cbf_eval(const Cbf& c, const R& x) {
    if constexpr (is_complex_ring<R>::value)
        return c.psic(x);
    else
        return c.psi(x);
}

// CRTP shim: families implement `template<class R> R f(const R&)`,
// `template<class R> R f1(const R&)`, `Interval f2(const Interval&)`, and
// `template<int N> std::optional<Jet<CInterval,N>> fplus(const Jet<Interval,N>&)`.
template <class D>
class CbfImpl : public Cbf {
  public:
#define FPT_IMPL_PSI(R)                                                              \
    R psi(const R& x) const override { return self().template f<R>(x); }             \
    R psi1(const R& x) const override { return self().template f1<R>(x); }
    FPT_REAL_RINGS(FPT_IMPL_PSI)
#undef FPT_IMPL_PSI

#define FPT_IMPL_PSIC(R)                                                             \
    R psic(const R& z) const override { return self().template f<R>(z); }
    FPT_CPLX_RINGS(FPT_IMPL_PSIC)
#undef FPT_IMPL_PSIC

    Interval psi2(const Interval& x) const override { return self().f2(x); }

    CInterval boundary(const Interval& s) const override {
        auto j = self().template fplus<1>(jet_const<Interval, 1>(s));
        if (!j) throw std::runtime_error("no boundary extension: " + self().descriptor());
        return j->c[0];
    }
    std::optional<C3> boundary_jet3(const JB3& s) const override {
        return self().template fplus<3>(s);
    }
    std::optional<C5> boundary_jet5(const JB5& s) const override {
        return self().template fplus<5>(s);
    }

  private:
    const D& self() const { return *static_cast<const D*>(this); }
};

// ---- factories (definitions in cbf.cpp) ----

CbfPtr make_stable(double alpha);
CbfPtr make_relativistic(double alpha, double m);
CbfPtr make_geometric_stable(double alpha);
CbfPtr make_variance_gamma(); // = geometric stable with alpha = 2
CbfPtr make_iterated_geometric(double alpha, int n);
CbfPtr make_compound_poisson_laplace();
CbfPtr make_series_irregular();
CbfPtr make_sum(const std::vector<CbfPtr>& parts, const std::vector<double>& weights);
CbfPtr make_scale_val(double c, CbfPtr inner);  // c * psi(xi)
CbfPtr make_scale_arg(double c, CbfPtr inner);  // psi(c * xi)
CbfPtr make_compose(CbfPtr outer, CbfPtr inner); // outer(inner(xi))

// the full built-in family list used by validation sweeps
std::vector<CbfPtr> catalog_specs();

// ---- condition checks ----

struct ConditionA1 {
    double sup_estimate = 0.0; // grid + endpoint-limit estimate of sup xi|psi''|/psi'
    bool passes = false;
    double theta_bound = 0.0;  // sup * pi/4, the quantity the engine needs
};

// Grid scan (512 log-spaced points on [1e-8, 1e8], margin 1e-9) plus
// analytic endpoint limits 1 - rv0 and 1 - rvinf where the orders are known.
// A finite procedure cannot certify the true supremum for arbitrary psi;
// catalog families have monotone or unimodal ratio, for which this is sharp.
ConditionA1 check_condition_a1(const Cbf& spec);

struct ConditionA2 {
    Interval integral{0.0};
    bool passes = false;
};

ConditionA2 check_condition_a2(const Cbf& spec, double t0, double tol = 1e-8);

} // namespace fpt
