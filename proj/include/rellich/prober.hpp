#pragma once

// Numerical probing of the inequality
//
//   int |D^{m/2} u|^p t^{k-1-gamma} dt
//     >=  A int |u|^p t^{k-1-gamma-mp} dt
//       + B sum_{i>=1} int |u|^p t^{k-1-gamma-mp} X_1^2...X_i^2(t/D) dt
//
// along the minimizing family u = chi * t^{s_0} prod X_j^{s_j}.  The left side
// is evaluated exactly (jet arithmetic through the iterated operator); every
// right-hand integral is an X-weight integral:
//
//   Gamma_ij = int t^{eps_0 - 1} prod_l X_l^{p s_l + y_l} chi^p dt,
//   y_l = 2 (l <= i), 1 (i < l <= j), 0 (l > j),
//
// so the leading right-hand term is A * Gamma_00 and the i-th series term is
// B * Gamma_ii.  Sharpness is probed by driving eps -> 0 (for A: a single
// eps_0; for B: the sequential schedule eps_0 -> 0 at fixed eps_1, then
// eps_1 -> 0) with Richardson extrapolation in eps_0.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rellich/constants.hpp"
#include "rellich/params.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/radial.hpp"
#include "rellich/scalar.hpp"

namespace rellich {

// ----------------------------------------------------------------------------
// Gamma integrals along a test family
// ----------------------------------------------------------------------------

template <class Real>
XWeightSpec<Real> gamma_spec(const TestFamily<Real>& tf, int i, int j, bool with_cutoff = true) {
    const int r = int(tf.s.size()) - 1;
    if (i < 0 || j < i || j > r) throw std::domain_error("gamma_spec: need 0 <= i <= j <= r");
    XWeightSpec<Real> spec;
    spec.t_power = tf.eps[0] - 1;
    for (int l = 1; l <= r; ++l) {
        Real y = (l <= i) ? Real(2) : (l <= j ? Real(1) : Real(0));
        spec.x_powers.push_back(tf.params.p * tf.s[l] + y);
    }
    spec.scale = tf.params.scale();
    if (with_cutoff) {
        spec.cutoff_power = tf.params.p;
        spec.cutoff = tf.cutoff;
    }
    return spec;
}

template <class Real>
IntegralResult<Real> gamma_integral(const TestFamily<Real>& tf, int i, int j,
                                    bool with_cutoff = true, IntegrateOptions<Real> opts = {}) {
    return integrate_x_weight(gamma_spec(tf, i, j, with_cutoff), Real(0), tf.params.R,
                              std::move(opts));
}

// ----------------------------------------------------------------------------
// left-hand side: |D^{m/2} u|^p t^{-gamma}, integrated against t^{k-1}
// ----------------------------------------------------------------------------

namespace detail {

// bisect a bracketed sign change of f down to ~relative 1e-40
template <class Real>
Real bisect_zero(const std::function<Real(const Real&)>& f, Real lo, Real hi, Real flo) {
    for (int it = 0; it < 160; ++it) {
        const Real mid = lo + (hi - lo) / 2;
        if (mid == lo || mid == hi) break;
        const Real fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < scalar_abs(mid) * pow_integer(Real(10), -40)) break;
    }
    return lo + (hi - lo) / 2;
}

}  // namespace detail

// locate sign changes of the (signed) operator profile; these are interior
// kinks of |g|^p and become quadrature breakpoints
template <class Real>
std::vector<Real> operator_sign_changes(const RadialProfile<Real>& op, const Real& r_hi) {
    using std::exp;
    std::function<Real(const Real&)> f = [&op](const Real& t) { return op.eval(t, 0).value(); };
    std::vector<Real> grid;
    // log-spaced sweep deep toward 0 (t = r_hi e^{1 - 1/u})
    for (int j = 1; j < 64; ++j) {
        const Real u = Real(j) / 64;
        grid.push_back(r_hi * exp(Real(1) - Real(1) / u));
    }
    // linear sweep across the cutoff transition half
    for (int j = 0; j <= 32; ++j)
        grid.push_back(r_hi / 2 + (r_hi / 2) * Real(j) / 32 * Real(2097151) / Real(2097152));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<Real> zeros;
    Real prev_t = grid.front();
    Real prev_v = f(prev_t);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const Real v = f(grid[i]);
        if (v == 0) {
            zeros.push_back(grid[i]);
        } else if (prev_v != 0 && (v > 0) != (prev_v > 0)) {
            zeros.push_back(detail::bisect_zero<Real>(f, prev_t, grid[i], prev_v));
        }
        prev_t = grid[i];
        prev_v = v;
    }
    return zeros;
}

// log-form integrand |g(t)|^p t^{-gamma} for the iterated operator g applied
// to the family; negligibility guard keeps jet evaluation away from the
// far-underflow region (contributions there are < e^{-2000})
template <class Real>
LogMap<Real> operator_power_map(const RadialProfile<Real>& op, const Real& p, const Real& gamma,
                                const Real& eps0) {
    using std::log;
    return [op, p, gamma, eps0](const Real& t, const Real& ln_t) -> LogValue<Real> {
        if (!(t > 0) || !op.in_support(t)) return {Real(0), 0};
        if (eps0 * ln_t < Real(-2000)) return {Real(0), 0};
        const Real g = op.eval(t, 0).value();
        if (g == 0) return {Real(0), 0};
        // |g|^p is nonnegative; zeros of g are only kinks (handled as breakpoints)
        return {p * log(scalar_abs(g)) - gamma * ln_t, 1};
    };
}

template <class Real>
IntegralResult<Real> lhs_integral(const TestFamily<Real>& tf, IntegrateOptions<Real> opts = {}) {
    auto op = iterated_operator(tf.u, tf.params.m, tf.params.k);
    auto zeros = operator_sign_changes(op, tf.params.R);
    for (const Real& z : zeros) opts.breakpoints.push_back(z);
    opts.breakpoints.push_back(tf.cutoff.r_flat);
    auto map = operator_power_map(op, tf.params.p, tf.params.gamma, tf.eps[0]);
    return integrate_radial(map, tf.params.k, Real(0), tf.params.R, std::move(opts));
}

// ----------------------------------------------------------------------------
// both sides of the inequality
// ----------------------------------------------------------------------------

template <class Real>
struct SidesReport {
    Params<Real> params;
    std::vector<Real> eps;
    Real a_const{0}, b_const{0};
    IntegralResult<Real> lhs;
    IntegralResult<Real> leading;              // Gamma_00 with cutoff
    std::vector<IntegralResult<Real>> series;  // Gamma_ii with cutoff, i = 1..terms
    Real rhs_total{0};
    Real remainder{0};      // lhs - A*leading - B*sum(series)
    Real error_budget{0};   // propagated quadrature error estimates
    bool all_converged{true};
};

template <class Real>
SidesReport<Real> inequality_sides(const Params<Real>& params, const std::vector<Real>& eps,
                                   int series_terms = -1, IntegrateOptions<Real> opts = {},
                                   bool allow_star_violation = false) {
    validate_for_probe(params);
    if (!allow_star_violation && !star_condition(params.m, params.p, params.gamma, params.k))
        throw std::domain_error("inequality_sides: condition (*) fails for these parameters");
    if (eps.empty()) throw std::domain_error("inequality_sides: need eps_0 at least");
    for (const Real& e : eps)
        if (!(e > 0)) throw std::domain_error("inequality_sides: all eps must be positive");

    SidesReport<Real> rep;
    rep.params = params;
    rep.eps = eps;
    rep.a_const = constant_A(params.m, params.p, params.gamma, params.k);
    rep.b_const = constant_B(params.m, params.p, params.gamma, params.k);

    auto tf = test_family(params, eps);
    const int r = int(eps.size()) - 1;
    if (series_terms < 0) series_terms = r;
    if (series_terms > r)
        throw std::domain_error("inequality_sides: series_terms exceeds family depth r");

    rep.lhs = lhs_integral(tf, opts);
    rep.leading = gamma_integral(tf, 0, 0, true, opts);
    for (int i = 1; i <= series_terms; ++i)
        rep.series.push_back(gamma_integral(tf, i, i, true, opts));

    rep.rhs_total = rep.a_const * rep.leading.value;
    rep.error_budget = rep.lhs.error + rep.a_const * rep.leading.error;
    rep.all_converged = rep.lhs.converged && rep.leading.converged;
    for (const auto& s : rep.series) {
        rep.rhs_total += rep.b_const * s.value;
        rep.error_budget += rep.b_const * s.error;
        rep.all_converged = rep.all_converged && s.converged;
    }
    rep.remainder = rep.lhs.value - rep.rhs_total;
    return rep;
}

// ----------------------------------------------------------------------------
// sharpness of the leading constant A: r = 0 family, quotient -> A as eps_0 -> 0
// ----------------------------------------------------------------------------

template <class Real>
struct SharpnessAPoint {
    Real eps0{0};
    Real quotient{0};
    bool converged{true};
};

template <class Real>
struct SharpnessAReport {
    Params<Real> params;
    Real a_exact{0};
    std::vector<SharpnessAPoint<Real>> points;  // coarse -> fine
    Real gap_ratio{0};    // (q(coarse) - A)/(q(fine) - A)
    Real richardson{0};   // linear extrapolation from the last two points
    bool all_converged{true};
};

template <class Real>
Real sharpness_a_quotient(const Params<Real>& params, const Real& eps0,
                          IntegrateOptions<Real> opts = {}, bool* converged = nullptr) {
    auto tf = test_family(params, std::vector<Real>{eps0});
    auto num = lhs_integral(tf, opts);
    auto den = gamma_integral(tf, 0, 0, true, opts);
    if (converged) *converged = num.converged && den.converged;
    return num.value / den.value;
}

template <class Real>
SharpnessAReport<Real> sharpness_a_sweep(const Params<Real>& params,
                                         std::vector<Real> eps_grid = {},
                                         IntegrateOptions<Real> opts = {}) {
    validate_for_probe(params);
    if (eps_grid.empty())
        eps_grid = {pow_integer(Real(10), -2), pow_integer(Real(10), -3)};
    if (eps_grid.size() < 2) throw std::domain_error("sharpness_a_sweep: need >= 2 eps values");

    SharpnessAReport<Real> rep;
    rep.params = params;
    rep.a_exact = constant_A(params.m, params.p, params.gamma, params.k);
    for (const Real& e : eps_grid) {
        bool ok = true;
        Real q = sharpness_a_quotient(params, e, opts, &ok);
        rep.points.push_back({e, q, ok});
        rep.all_converged = rep.all_converged && ok;
    }
    const auto& c = rep.points[rep.points.size() - 2];
    const auto& f = rep.points.back();
    if (f.quotient != rep.a_exact)
        rep.gap_ratio = (c.quotient - rep.a_exact) / (f.quotient - rep.a_exact);
    // q(e) = L + c e + O(e^2): eliminate the linear term
    rep.richardson = (f.quotient * c.eps0 - c.quotient * f.eps0) / (c.eps0 - f.eps0);
    return rep;
}

// ----------------------------------------------------------------------------
// sharpness of the series constant B (sequential limit, r = 1 by default)
//
// For each eps_1 in the schedule, extrapolate over eps_0 the quotient
//     (lhs - A * Gamma_00) / Gamma_final,
// where Gamma_final is Gamma_rr with the last X-weight y_r replaced by theta
// (theta = 2 recovers Gamma_rr, the weight of the series term; theta = 1 is
// the critically-weaker weight for which the quotient must collapse to 0).
//
// The numerator behaves like B * Gamma_rr + O(1): the quotient's error term
// is the O(1)-to-Gamma_rr ratio, and Gamma_rr grows only like log(1/eps_0),
// so the two-point elimination has to be linear in 1/Gamma_final (measured),
// not in eps_0 itself -- a polynomial-in-eps_0 model would need eps_0 beyond
// exp(-1/eps_1) to see the limit.
// ----------------------------------------------------------------------------

template <class Real>
struct SharpnessBStep {
    Real eps1{0};
    std::vector<Real> eps0_grid;
    std::vector<Real> quotients;     // one per eps_0, same order
    std::vector<Real> denominators;  // Gamma_final per eps_0 (extrapolation weights)
    Real extrapolated{0};
    bool converged{true};
};

template <class Real>
struct SharpnessBReport {
    Params<Real> params;
    Real theta{2};
    Real b_exact{0};
    std::vector<SharpnessBStep<Real>> steps;  // along the eps_1 schedule
    bool decreasing{true};
    bool all_converged{true};
};

template <class Real>
Real sharpness_b_quotient(const Params<Real>& params, const Real& eps0, const Real& eps1,
                          const Real& theta, IntegrateOptions<Real> opts = {},
                          bool* converged = nullptr, Real* den_out = nullptr) {
    auto tf = test_family(params, std::vector<Real>{eps0, eps1});
    const Real a_const = constant_A(params.m, params.p, params.gamma, params.k);

    auto lhs = lhs_integral(tf, opts);
    auto g00 = gamma_integral(tf, 0, 0, true, opts);

    auto den_spec = gamma_spec(tf, 1, 1, true);
    den_spec.x_powers.back() = params.p * tf.s.back() + theta;
    auto den = integrate_x_weight(den_spec, Real(0), params.R, opts);

    if (converged) *converged = lhs.converged && g00.converged && den.converged;
    if (den_out) *den_out = den.value;
    return (lhs.value - a_const * g00.value) / den.value;
}

template <class Real>
SharpnessBReport<Real> sharpness_b_schedule(const Params<Real>& params, const Real& theta = Real(2),
                                            std::vector<Real> eps1_schedule = {},
                                            std::vector<Real> eps0_grid = {},
                                            IntegrateOptions<Real> opts = {}) {
    validate_for_probe(params);
    if (eps1_schedule.empty())
        eps1_schedule = {pow_integer(Real(10), -1), pow_integer(Real(10), -2),
                         pow_integer(Real(10), -3)};
    if (eps0_grid.empty())
        eps0_grid = {pow_integer(Real(10), -3), pow_integer(Real(10), -4)};
    if (eps0_grid.size() < 2)
        throw std::domain_error("sharpness_b_schedule: need >= 2 eps_0 values");

    SharpnessBReport<Real> rep;
    rep.params = params;
    rep.theta = theta;
    rep.b_exact = constant_B(params.m, params.p, params.gamma, params.k);
    for (const Real& e1 : eps1_schedule) {
        SharpnessBStep<Real> step;
        step.eps1 = e1;
        step.eps0_grid = eps0_grid;
        for (const Real& e0 : eps0_grid) {
            bool ok = true;
            Real den(0);
            step.quotients.push_back(sharpness_b_quotient(params, e0, e1, theta, opts, &ok, &den));
            step.denominators.push_back(den);
            step.converged = step.converged && ok;
        }
        // two-point elimination of the O(1)/Gamma_final error term: treat the
        // quotient as linear in x = 1/Gamma_final and read off the intercept
        const Real qc = step.quotients[step.quotients.size() - 2];
        const Real qf = step.quotients.back();
        const Real xc = Real(1) / step.denominators[step.denominators.size() - 2];
        const Real xf = Real(1) / step.denominators.back();
        step.extrapolated = (xc == xf) ? qf : (qf * xc - qc * xf) / (xc - xf);
        rep.all_converged = rep.all_converged && step.converged;
        rep.steps.push_back(std::move(step));
    }
    // "decreasing" tracks the sampled quotients: at each eps_0 grid position
    // the quotient should fall as eps_1 tightens (the extrapolated limits sit
    // on top of B and only fluctuate at the size of the eliminated term)
    for (std::size_t i = 1; i < rep.steps.size(); ++i)
        for (std::size_t j = 0; j < eps0_grid.size(); ++j)
            rep.decreasing =
                rep.decreasing && (rep.steps[i].quotients[j] < rep.steps[i - 1].quotients[j]);
    return rep;
}

// ----------------------------------------------------------------------------
// D-scale sweep: the remainder should stay nonnegative and each series term
// should shrink as the inner scale D grows
// ----------------------------------------------------------------------------

template <class Real>
struct DSweepEntry {
    Real d_scale{0};
    SidesReport<Real> sides;
};

template <class Real>
std::vector<DSweepEntry<Real>> d_scale_sweep(Params<Real> params, const std::vector<Real>& eps,
                                             const std::vector<Real>& d_values,
                                             int series_terms = -1,
                                             IntegrateOptions<Real> opts = {}) {
    std::vector<DSweepEntry<Real>> out;
    for (const Real& d : d_values) {
        params.D = d;
        out.push_back({d, inequality_sides(params, eps, series_terms, opts)});
    }
    return out;
}

}  // namespace rellich
