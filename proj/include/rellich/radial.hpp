#pragma once

// Radial calculus on profiles f(t), t = |distance|, carried as truncated
// Taylor jets so that repeated applications of the radial Laplacian
//     Delta f = f'' + (k-1)/t f'
// stay exact in the jet coefficients (no finite differencing).
//
// A profile evaluates to a jet of requested order at any t in (0, support_hi);
// beyond support_hi it is identically zero.

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rellich/iterlog.hpp"
#include "rellich/jet.hpp"
#include "rellich/params.hpp"
#include "rellich/scalar.hpp"

namespace rellich {

template <class Real>
struct RadialProfile {
    std::function<Jet<Real>(const Real&, int)> eval;
    Real support_hi{0};  // 0 = whole half line

    bool in_support(const Real& t) const {
        return support_hi == 0 || t < support_hi;
    }
    Real value(const Real& t) const {
        if (!in_support(t)) return Real(0);
        return eval(t, 0).value();
    }
};

template <class Real>
RadialProfile<Real> constant_profile(const Real& c) {
    return {[c](const Real& t, int order) { return jet_const(c, t, order); }, Real(0)};
}

// t^s for t > 0 (s need not be an integer)
template <class Real>
RadialProfile<Real> power_profile(const Real& s) {
    return {[s](const Real& t, int order) {
                if (!(t > 0)) throw std::domain_error("power_profile: t > 0 required");
                return pow(jet_var(t, order), s);
            },
            Real(0)};
}

// X_j(t/scale)^s
template <class Real>
RadialProfile<Real> x_power_profile(int level, const Real& s, const Real& scale) {
    return {[level, s, scale](const Real& t, int order) {
                return pow(x_jet(t, level, order, scale), s);
            },
            Real(0)};
}

template <class Real>
RadialProfile<Real> profile_product(RadialProfile<Real> a, RadialProfile<Real> b) {
    Real hi = a.support_hi;
    if (hi == 0 || (b.support_hi != 0 && b.support_hi < hi)) hi = b.support_hi;
    auto ea = std::move(a.eval);
    auto eb = std::move(b.eval);
    return {[ea, eb](const Real& t, int order) { return ea(t, order) * eb(t, order); }, hi};
}

// ----------------------------------------------------------------------------
// smooth cutoff
//
// chi(t) = 1 for t <= r_flat, 0 for t >= r_support, and in between
//   chi(t) = psi((r_support - t)/(r_support - r_flat)),
//   psi(s)  = g(s) / (g(s) + g(1-s)),   g(s) = exp(-1/s).
// psi is the standard smooth step: psi(0)=0, psi(1)=1, all derivatives vanish
// at both ends, so chi glues C^infty to the constant branches.
// ----------------------------------------------------------------------------

template <class Real>
struct CutoffSpec {
    Real r_flat;
    Real r_support;
};

namespace detail {

// exp(-1/s) as a jet; s must have positive value
template <class Real>
Jet<Real> bump_glue_jet(const Jet<Real>& s) {
    return exp(jet_const(Real(0), s.center, s.order()) - Real(1) / s);
}

}  // namespace detail

template <class Real>
RadialProfile<Real> cutoff_profile(const CutoffSpec<Real>& spec) {
    if (!(spec.r_flat > 0) || !(spec.r_support > spec.r_flat))
        throw std::domain_error("cutoff_profile: need 0 < r_flat < r_support");
    const Real lo = spec.r_flat, hi = spec.r_support, w = hi - lo;
    auto eval = [lo, hi, w](const Real& t, int order) {
        if (t <= lo) return jet_const(Real(1), t, order);
        if (t >= hi) return jet_const(Real(0), t, order);
        // s = (hi - t)/w, affine in t with slope -1/w
        Jet<Real> s(t, order);
        s.coeffs[0] = (hi - t) / w;
        if (order >= 1) s.coeffs[1] = Real(-1) / w;
        Jet<Real> one_minus_s(t, order);
        one_minus_s.coeffs[0] = (t - lo) / w;
        if (order >= 1) one_minus_s.coeffs[1] = Real(1) / w;
        auto ga = detail::bump_glue_jet(s);
        auto gb = detail::bump_glue_jet(one_minus_s);
        return ga / (ga + gb);
    };
    return {eval, hi};
}

// ----------------------------------------------------------------------------
// derivatives and the radial Laplacian as profile transforms
// ----------------------------------------------------------------------------

template <class Real>
RadialProfile<Real> profile_derivative(RadialProfile<Real> f) {
    auto ef = std::move(f.eval);
    return {[ef](const Real& t, int order) { return jet_derivative(ef(t, order + 1)); },
            f.support_hi};
}

// Delta f = f'' + (k-1)/t f'   (radial part of the Laplacian in R^k)
template <class Real>
RadialProfile<Real> radial_laplacian(RadialProfile<Real> f, const Real& k) {
    auto ef = std::move(f.eval);
    return {[ef, k](const Real& t, int order) {
                if (!(t > 0)) throw std::domain_error("radial_laplacian: t > 0 required");
                auto jf = ef(t, order + 2);
                auto d1 = jet_derivative(jf);
                auto d2 = jet_derivative(d1);
                auto inv_t = Real(1) / jet_var(t, order);
                return d2 + (k - Real(1)) * (inv_t * d1);
            },
            f.support_hi};
}

// D^{m/2} f: floor(m/2) radial Laplacians, plus one radial derivative when m
// is odd (for radial functions |grad g| = |g'|, so the returned profile is the
// signed quantity whose absolute value enters the integrals).
template <class Real>
RadialProfile<Real> iterated_operator(RadialProfile<Real> f, int m, const Real& k) {
    if (m < 0) throw std::domain_error("iterated_operator: m >= 0");
    RadialProfile<Real> g = std::move(f);
    for (int i = 0; i < m / 2; ++i) g = radial_laplacian(std::move(g), k);
    if (m % 2 == 1) g = profile_derivative(std::move(g));
    return g;
}

// ----------------------------------------------------------------------------
// the minimizing family
//
//   u(t) = chi(t) * t^{s_0} * prod_{j=1..r} X_j(t/D)^{s_j}
//   s_0 = (m p + gamma - k + eps_0)/p,   s_j = (-1 + eps_j)/p
//
// For eps = 0 this is the profile that saturates the inequality; small
// positive eps_j keep every integral finite.  The cutoff plateau is R/2 by
// default so derivatives of chi live only in [R/2, R].
// ----------------------------------------------------------------------------

template <class Real>
struct TestFamily {
    Params<Real> params;
    std::vector<Real> eps;  // eps_0 .. eps_r
    std::vector<Real> s;    // s_0 .. s_r
    CutoffSpec<Real> cutoff;
    RadialProfile<Real> u;        // full profile (with cutoff)
    RadialProfile<Real> u_plain;  // without the cutoff factor
};

template <class Real>
std::vector<Real> family_exponents(const Params<Real>& params, const std::vector<Real>& eps) {
    if (eps.empty()) throw std::domain_error("family_exponents: need at least eps_0");
    std::vector<Real> s(eps.size());
    s[0] = (Real(params.m) * params.p + params.gamma - params.k + eps[0]) / params.p;
    for (std::size_t j = 1; j < eps.size(); ++j) s[j] = (Real(-1) + eps[j]) / params.p;
    return s;
}

template <class Real>
TestFamily<Real> test_family(const Params<Real>& params, const std::vector<Real>& eps) {
    validate_for_probe(params);
    TestFamily<Real> tf;
    tf.params = params;
    tf.eps = eps;
    tf.s = family_exponents(params, eps);
    tf.cutoff = CutoffSpec<Real>{params.R / 2, params.R};

    const Real scale = params.scale();
    RadialProfile<Real> core = power_profile(tf.s[0]);
    for (std::size_t j = 1; j < tf.s.size(); ++j)
        core = profile_product(std::move(core), x_power_profile(int(j), tf.s[j], scale));
    tf.u_plain = core;
    tf.u = profile_product(std::move(core), cutoff_profile(tf.cutoff));
    return tf;
}

}  // namespace rellich
