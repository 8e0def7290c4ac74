#pragma once

// Adaptive quadrature for radial integrals with iterated-log weights.
//
// Two integrand routes share one panel driver:
//
//  * generic log-form maps (t, ln t) -> (ln|g|, sign): used for integrands
//    whose leading exponent at t = 0 is strictly positive (operator powers
//    along the minimizing family).  The substitution u = X_1(t/b) is applied
//    numerically; a deep-region guard discards t with ln t < -2e8, which is
//    harmless precisely because the leading exponent eps_0 bounds the lost
//    mass by e^{-eps_0 * 2e8}.
//
//  * structured X-weight integrands t^{t_power} prod X_l(t/D)^{q_l} chi^pow:
//    borderline integrals (t_power -> -1) carry their mass arbitrarily deep,
//    so the substitution is performed symbolically.  With the chain
//    w_0 = t, w_l = X_1(w_{l-1}/S_l), S_1 = b, S_{l>1} = 1, the substituted
//    integrand is exactly
//        sum_l c_l ln w_l  + scale corrections,
//        c_0 = t_power + 1, c_l = q_l - 1 (0 < l < d), c_d = q_d - 2,
//    plus q_l ln w_l for levels beyond the depth d.  Zero coefficients are
//    skipped symbolically, which is what makes the borderline cancellation
//    exact: a t^{-1} X_1 ... X_{i-1} X_i^{1+eps} oracle reduces to v^{eps-1}
//    with no catastrophic arithmetic.  Scale corrections (D != b) are the
//    bounded terms -q_l log1p(w_l g_l), g_1 = ln(D/b), g_{l+1} = log1p(w_l g_l).
//
// The finiteness test at t = 0 is lexicographic positivity of the normalized
// exponents (t_power + 1, q_1 - 1, q_2 - 1, ...), and the automatic
// substitution depth is the number of leading zeros (at least 1).
//
// Driver: panels between breakpoints, each integrated by boost tanh_sinh;
// the worst panel is bisected until the summed error estimate meets the
// target.  Deterministic: ties broken by left endpoint.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rellich/fit.hpp"
#include "rellich/iterlog.hpp"
#include "rellich/radial.hpp"
#include "rellich/scalar.hpp"

namespace rellich {

template <class Real>
struct LogValue {
    Real ln_mag{0};
    int sign{0};  // 0 means the integrand is exactly zero here
};

// weight-free radial integrand g; called with both t and ln t (t may have
// underflowed to zero when ln_t is very negative -- rely on ln_t there)
template <class Real>
using LogMap = std::function<LogValue<Real>(const Real& t, const Real& ln_t)>;

template <class Real>
struct IntegrateOptions {
    Real tol_abs{0};             // 0 -> auto from precision
    Real tol_rel{0};             // 0 -> auto from precision
    Real panel_tol{0};           // per-panel tanh-sinh tolerance, 0 -> auto
    int depth{-1};               // #substitutions u = X_1(./S); -1 auto, 0 none
    std::size_t max_evals{2000000};
    std::vector<Real> breakpoints;  // interior breakpoints, in t
};

template <class Real>
struct IntegralResult {
    Real value{0};
    Real error{0};
    std::size_t evals{0};
    std::size_t panels{0};
    int depth{0};
    bool converged{false};
    std::string note;
};

namespace detail {

template <class Real>
Real default_tol_abs() {
    return pow_integer(Real(10), -(scalar_digits10<Real>() * 2 / 3));
}

template <class Real>
Real default_tol_rel() {
    return pow_integer(Real(10), -(scalar_digits10<Real>() * 2 / 3));
}

template <class Real>
Real default_panel_tol() {
    return pow_integer(Real(10), -(scalar_digits10<Real>() / 2 + 8));
}

// ln w below which a generic (non-structured) integrand is treated as zero;
// callers must guarantee the leading exponent makes that region negligible
template <class Real>
Real unwind_guard() {
    return Real(-2e8);
}

// exp() underflow floor for the assembled integrand
template <class Real>
Real exp_floor() {
    return Real(-1e9);
}

// ceiling for the structured route: cpp_bin_float overflows near ln ~ 1.49e9,
// and the only way an x-weight integrand grows this large is the borderline
// endpoint singularity v^{c}, -1 < c < 0; the mass beyond the ceiling is
// bounded by e^{-|c| * 1.2e9}, negligible for |c| >= 1e-6
template <class Real>
Real exp_ceiling() {
    return Real(1.2e9);
}

// forward chain t -> v through `depth` substitutions (S_1 = b, then 1)
template <class Real>
Real forward_substitution(const Real& t, const Real& b, int depth) {
    if (!(t > 0)) return Real(0);  // X_1(0+) = 0 through every level
    Real w = t;
    Real scale = b;
    for (int l = 0; l < depth; ++l) {
        w = x1(w / scale);
        scale = Real(1);
    }
    return w;
}

// ----------------------------------------------------------------------------
// shared panel driver
// ----------------------------------------------------------------------------

template <class Real>
void integrate_panels(const std::function<Real(const Real&)>& raw_f, const Real& va,
                      const Real& vb, std::vector<Real> cuts, const Real& tol_abs,
                      const Real& tol_rel, const Real& panel_tol, std::size_t max_evals,
                      IntegralResult<Real>& res) {
    using std::isfinite;

    std::size_t evals = 0;
    std::size_t bad_evals = 0;
    auto F = [&](const Real& v) -> Real {
        ++evals;
        try {
            const Real y = raw_f(v);
            if (!isfinite(y)) {
                ++bad_evals;
                return Real(0);
            }
            return y;
        } catch (const std::domain_error&) {
            ++bad_evals;
            return Real(0);
        }
    };

    cuts.push_back(va);
    cuts.push_back(vb);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](const Real& c) { return c < va || c > vb; }),
               cuts.end());

    static thread_local boost::math::quadrature::tanh_sinh<Real> integ(14);

    struct Panel {
        Real lo, hi, value, err;
        bool bad;
    };
    auto eval_panel = [&](const Real& lo, const Real& hi) -> Panel {
        Panel p{lo, hi, Real(0), Real(0), false};
        try {
            Real rel_err = 0, l1 = 0;
            std::size_t levels = 0;
            p.value = integ.integrate(F, lo, hi, panel_tol, &rel_err, &l1, &levels);
            p.err = rel_err * l1;  // boost reports error relative to the L1 norm
            if (!isfinite(p.value) || !isfinite(p.err)) {
                p.bad = true;
                p.value = Real(0);
                p.err = Real(0);
            }
        } catch (const std::exception&) {
            p.bad = true;
            p.value = Real(0);
            p.err = Real(0);
        }
        return p;
    };

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        panels.push_back(eval_panel(cuts[i], cuts[i + 1]));

    const Real min_width = (vb - va) * pow_integer(Real(10), -30);
    std::string stop_note;
    for (;;) {
        Real total = 0, err_total = 0;
        bool any_bad = false;
        for (const auto& p : panels) {
            total += p.value;
            err_total += p.err;
            any_bad = any_bad || p.bad;
        }
        const Real target = (std::max)(tol_abs, tol_rel * scalar_abs(total));
        if (!any_bad && err_total <= target) {
            res.value = total;
            res.error = err_total;
            res.converged = true;
            break;
        }
        if (evals >= max_evals) {
            res.value = total;
            res.error = err_total;
            stop_note = "eval budget exhausted";
            break;
        }
        // worst panel first (bad panels before everything); ties by left edge
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            const auto& a = panels[i];
            const auto& b = panels[worst];
            const bool better = a.bad != b.bad ? a.bad
                                : a.err != b.err ? (a.err > b.err)
                                                 : (a.lo < b.lo);
            if (better) worst = i;
        }
        Panel w = panels[worst];
        if (w.hi - w.lo < min_width) {
            res.value = total;
            res.error = err_total;
            stop_note = "panel below minimum width";
            break;
        }
        const Real mid = w.lo + (w.hi - w.lo) / 2;
        panels[worst] = eval_panel(w.lo, mid);
        panels.insert(panels.begin() + worst + 1, eval_panel(mid, w.hi));
    }

    res.evals = evals;
    res.panels = panels.size();
    if (!res.converged) res.note = stop_note.empty() ? "did not converge" : stop_note;
    if (bad_evals > 0) {
        res.converged = false;
        res.note += (res.note.empty() ? "" : "; ");
        res.note += std::to_string(bad_evals) + " non-finite evaluations";
    }
}

}  // namespace detail

// ----------------------------------------------------------------------------
// generic route: integral over [a, b] of sign * exp(map.ln_mag) dt
// ----------------------------------------------------------------------------

template <class Real>
IntegralResult<Real> integrate_log_map(const LogMap<Real>& map, const Real& a, const Real& b,
                                       IntegrateOptions<Real> opts = {}) {
    using std::exp;
    using std::log;

    IntegralResult<Real> res;
    if (!(b > a)) {
        res.converged = true;
        res.note = "empty interval";
        return res;
    }
    if (a < 0) throw std::domain_error("integrate_log_map: a >= 0 required");

    const Real tol_abs = opts.tol_abs > 0 ? opts.tol_abs : detail::default_tol_abs<Real>();
    const Real tol_rel = opts.tol_rel > 0 ? opts.tol_rel : detail::default_tol_rel<Real>();
    const Real panel_tol = opts.panel_tol > 0 ? opts.panel_tol : detail::default_panel_tol<Real>();

    int depth = opts.depth;
    if (depth < 0) depth = (a == 0) ? 1 : 0;
    if (depth > 0 && !(a < b * exp(Real(1)))) depth = 0;  // substitution needs a/b < e
    res.depth = depth;

    const Real ln_b = log(b);

    auto F = [&map, ln_b, depth](const Real& v) -> Real {
        using std::exp;
        using std::log;
        if (!(v > 0)) return Real(0);
        Real t, ln_t, measure_ln(0);
        if (depth == 0) {
            t = v;
            ln_t = log(v);
        } else {
            Real w = v;
            Real ln_w = log(v);
            for (int l = depth; l >= 1; --l) {
                const Real ln_scale = (l == 1) ? ln_b : Real(0);
                const Real ln_prev = ln_scale + Real(1) - Real(1) / w;
                measure_ln += ln_prev - 2 * ln_w;
                if (ln_prev < detail::unwind_guard<Real>()) return Real(0);
                w = exp(ln_prev);
                ln_w = ln_prev;
            }
            t = w;
            ln_t = ln_w;
        }
        auto lv = map(t, ln_t);
        if (lv.sign == 0) return Real(0);
        const Real total_ln = lv.ln_mag + measure_ln;
        if (total_ln < detail::exp_floor<Real>()) return Real(0);
        if (total_ln > -detail::exp_floor<Real>())
            throw std::domain_error("integrand overflow (divergent?)");
        Real val = exp(total_ln);
        return lv.sign < 0 ? -val : val;
    };

    const Real va = (depth == 0) ? a : detail::forward_substitution(a, b, depth);
    const Real vb = (depth == 0) ? b : Real(1);
    std::vector<Real> cuts;
    for (const Real& t : opts.breakpoints)
        if (t > a && t < b)
            cuts.push_back(depth == 0 ? t : detail::forward_substitution(t, b, depth));

    detail::integrate_panels<Real>(F, va, vb, std::move(cuts), tol_abs, tol_rel, panel_tol,
                                   opts.max_evals, res);
    return res;
}

// ----------------------------------------------------------------------------
// public entry points for the generic route
// ----------------------------------------------------------------------------

// integral of g(t) t^{k-1} dt over [a, b], g given in log form
template <class Real>
IntegralResult<Real> integrate_radial(const LogMap<Real>& g, const Real& k, const Real& a,
                                      const Real& b, IntegrateOptions<Real> opts = {}) {
    LogMap<Real> with_weight = [g, k](const Real& t, const Real& ln_t) {
        auto lv = g(t, ln_t);
        if (lv.sign != 0) lv.ln_mag += (k - 1) * ln_t;
        return lv;
    };
    return integrate_log_map(with_weight, a, b, std::move(opts));
}

// same, for a plain scalar function (mild integrands; no deep-singularity support)
template <class Real>
IntegralResult<Real> integrate_radial(const std::function<Real(const Real&)>& g, const Real& k,
                                      const Real& a, const Real& b,
                                      IntegrateOptions<Real> opts = {}) {
    using std::log;
    LogMap<Real> map = [g](const Real& t, const Real& /*ln_t*/) -> LogValue<Real> {
        const Real v = g(t);
        if (v == 0) return {Real(0), 0};
        return {log(scalar_abs(v)), v > 0 ? 1 : -1};
    };
    return integrate_radial(map, k, a, b, std::move(opts));
}

// same, for a radial profile
template <class Real>
IntegralResult<Real> integrate_radial(const RadialProfile<Real>& f, const Real& k, const Real& a,
                                      const Real& b, IntegrateOptions<Real> opts = {}) {
    using std::log;
    LogMap<Real> map = [f](const Real& t, const Real& /*ln_t*/) -> LogValue<Real> {
        if (!f.in_support(t) || !(t > 0)) return {Real(0), 0};
        const Real v = f.eval(t, 0).value();
        if (v == 0) return {Real(0), 0};
        return {log(scalar_abs(v)), v > 0 ? 1 : -1};
    };
    if (f.support_hi != 0 && f.support_hi > a && f.support_hi < b)
        opts.breakpoints.push_back(f.support_hi);
    return integrate_radial(map, k, a, b, std::move(opts));
}

// ----------------------------------------------------------------------------
// structured route: iterated-log weight integrals
//
//   F(t) = t^{t_power} * prod_l X_l(t/scale)^{x_powers[l-1]} * chi(t)^{cutoff_power}
// ----------------------------------------------------------------------------

template <class Real>
struct XWeightSpec {
    Real t_power{0};
    std::vector<Real> x_powers;
    Real scale{1};
    Real cutoff_power{0};  // 0: no cutoff factor
    CutoffSpec<Real> cutoff{Real(1) / 2, Real(1)};
};

// normalized exponent vector (deviation from the borderline t^{-1} prod X_l)
template <class Real>
std::vector<Real> xweight_normalized_exponents(const XWeightSpec<Real>& spec) {
    std::vector<Real> e;
    e.push_back(spec.t_power + 1);
    for (const Real& q : spec.x_powers) e.push_back(q - 1);
    return e;
}

// lexicographic finiteness at t = 0: first nonzero normalized exponent > 0
template <class Real>
bool xweight_finite(const XWeightSpec<Real>& spec) {
    for (const Real& e : xweight_normalized_exponents(spec)) {
        if (e > 0) return true;
        if (e < 0) return false;
    }
    return false;  // exactly borderline at every level: log-divergent
}

template <class Real>
int xweight_auto_depth(const XWeightSpec<Real>& spec) {
    int zeros = 0;
    for (const Real& e : xweight_normalized_exponents(spec)) {
        if (e == 0)
            ++zeros;
        else
            break;
    }
    return (std::max)(1, zeros);
}

// direct t-space evaluation (no substitution): log form of F(t)
template <class Real>
LogMap<Real> xweight_map(const XWeightSpec<Real>& spec) {
    using std::exp;
    using std::log;
    const Real ln_scale = log(spec.scale);
    return [spec, ln_scale](const Real& t, const Real& ln_t) -> LogValue<Real> {
        Real total = spec.t_power * ln_t;
        if (!spec.x_powers.empty()) {
            const Real one_minus = Real(1) - (ln_t - ln_scale);
            if (!(one_minus > 0)) throw std::domain_error("xweight_map: t/scale >= e");
            Real lam = -log(one_minus);
            total += spec.x_powers[0] * lam;
            for (std::size_t j = 1; j < spec.x_powers.size(); ++j) {
                lam = -log(Real(1) - lam);
                total += spec.x_powers[j] * lam;
            }
        }
        if (spec.cutoff_power != 0) {
            if (t >= spec.cutoff.r_support) return {Real(0), 0};
            if (t > spec.cutoff.r_flat) {
                const Real w = spec.cutoff.r_support - spec.cutoff.r_flat;
                const Real s = (spec.cutoff.r_support - t) / w;
                const Real e1 = Real(-1) / s, e2 = Real(-1) / (1 - s);
                const Real m = (std::max)(e1, e2);
                const Real lse = m + log(exp(e1 - m) + exp(e2 - m));
                total += spec.cutoff_power * (e1 - lse);
            }
        }
        return {total, 1};
    };
}

template <class Real>
IntegralResult<Real> integrate_x_weight(const XWeightSpec<Real>& spec, const Real& a, const Real& b,
                                        IntegrateOptions<Real> opts = {}) {
    using std::exp;
    using std::log;
    using std::log1p;

    IntegralResult<Real> res;
    if (!(b > a)) {
        res.converged = true;
        res.note = "empty interval";
        return res;
    }
    if (a == 0 && !xweight_finite(spec)) {
        res.converged = false;
        res.note = "divergent by the lexicographic criterion";
        return res;
    }
    if (!(b <= spec.scale * exp(Real(1))))
        throw std::domain_error("integrate_x_weight: need b <= scale * e");

    int depth = opts.depth;
    if (depth < 0) depth = (a == 0) ? xweight_auto_depth(spec) : 0;
    if (depth == 0) {
        opts.depth = 0;
        if (spec.cutoff_power != 0 && spec.cutoff.r_flat > a && spec.cutoff.r_flat < b)
            opts.breakpoints.push_back(spec.cutoff.r_flat);
        return integrate_log_map(xweight_map(spec), a, b, std::move(opts));
    }

    const Real tol_abs = opts.tol_abs > 0 ? opts.tol_abs : detail::default_tol_abs<Real>();
    const Real tol_rel = opts.tol_rel > 0 ? opts.tol_rel : detail::default_tol_rel<Real>();
    const Real panel_tol = opts.panel_tol > 0 ? opts.panel_tol : detail::default_panel_tol<Real>();
    res.depth = depth;

    const int r = int(spec.x_powers.size());
    const int d = depth;
    auto q_of = [&spec, r](int l) { return (l >= 1 && l <= r) ? spec.x_powers[l - 1] : Real(0); };

    // combined coefficients of ln w_l after folding the substitution Jacobian
    std::vector<Real> coef(std::size_t((std::max)(d, r)) + 1, Real(0));
    coef[0] = spec.t_power + 1;
    for (int l = 1; l < d; ++l) coef[std::size_t(l)] = q_of(l) - 1;
    coef[std::size_t(d)] = q_of(d) - 2;
    for (int l = d + 1; l <= r; ++l) coef[std::size_t(l)] = q_of(l);

    const Real ln_b = log(b);
    const Real g1 = log(spec.scale) - ln_b;  // scale mismatch ln(D/b)
    const bool scale_corrections = (g1 != 0);
    const Real ln_flat = log(spec.cutoff.r_flat);

    auto F = [&spec, &coef, q_of, ln_b, g1, scale_corrections, ln_flat, d, r](const Real& v) -> Real {
        using std::exp;
        using std::log;
        if (!(v > 0)) return Real(0);

        // ln w_l down from the inner variable; w underflow propagates as 0
        std::vector<Real> ln_w(std::size_t((std::max)(d, r)) + 1, Real(0));
        std::vector<Real> w(std::size_t((std::max)(d, r)) + 1, Real(0));
        ln_w[std::size_t(d)] = log(v);
        w[std::size_t(d)] = v;
        bool dead = false;  // everything below has w = 0, ln w = -inf
        int dead_from = 0;
        for (int l = d; l >= 1; --l) {
            if (dead) break;
            const Real ln_scale = (l == 1) ? ln_b : Real(0);
            if (w[std::size_t(l)] == 0) {
                dead = true;
                dead_from = l - 1;
                break;
            }
            const Real ln_prev = ln_scale + Real(1) - Real(1) / w[std::size_t(l)];
            ln_w[std::size_t(l - 1)] = ln_prev;
            if (ln_prev < detail::exp_floor<Real>()) {
                w[std::size_t(l - 1)] = Real(0);  // exp would underflow anyway
            } else {
                w[std::size_t(l - 1)] = exp(ln_prev);
            }
        }
        // forward levels beyond the substitution depth: ln w_{l} = -log(1 - ln w_{l-1})
        for (int l = d + 1; l <= r; ++l) {
            const Real om = Real(1) - ln_w[std::size_t(l - 1)];
            ln_w[std::size_t(l)] = -log(om);
            w[std::size_t(l)] = Real(1) / om;
        }

        Real total(0);
        for (int l = 0; l <= (std::max)(d, r); ++l) {
            const Real c = coef[std::size_t(l)];
            if (c == 0) continue;  // skipped symbolically; never touches huge ln w
            if (dead && l <= dead_from) {
                // ln w_l = -inf here: positive coefficient kills the integrand,
                // a negative one means the integral diverges
                if (c > 0) return Real(0);
                throw std::domain_error("x-weight integrand blows up under the substitution");
            }
            total += c * ln_w[std::size_t(l)];
        }

        if (scale_corrections) {
            Real g = g1;
            for (int l = 1; l <= r; ++l) {
                const Real wg = w[std::size_t(l)] * g;
                if (wg == 0) break;  // g_{l+1} = log1p(w_l g_l) = 0: corrections vanish upward
                const Real corr = log1p(wg);
                const Real ql = q_of(l);
                if (ql != 0) total -= ql * corr;
                g = corr;
            }
        }

        if (spec.cutoff_power != 0) {
            const Real& ln_t = ln_w[0];
            if (!dead && ln_t > ln_flat) {
                const Real t = w[0];
                if (t >= spec.cutoff.r_support) return Real(0);
                const Real width = spec.cutoff.r_support - spec.cutoff.r_flat;
                const Real s = (spec.cutoff.r_support - t) / width;
                const Real e1 = Real(-1) / s, e2 = Real(-1) / (1 - s);
                const Real m = (std::max)(e1, e2);
                const Real lse = m + log(exp(e1 - m) + exp(e2 - m));
                total += spec.cutoff_power * (e1 - lse);
            }
        }

        if (total < detail::exp_floor<Real>()) return Real(0);
        if (total > detail::exp_ceiling<Real>()) return Real(0);  // see exp_ceiling()
        return exp(total);
    };

    const Real va = detail::forward_substitution(a, b, d);
    std::vector<Real> cuts;
    if (spec.cutoff_power != 0 && spec.cutoff.r_flat > a && spec.cutoff.r_flat < b)
        cuts.push_back(detail::forward_substitution(spec.cutoff.r_flat, b, d));
    for (const Real& t : opts.breakpoints)
        if (t > a && t < b) cuts.push_back(detail::forward_substitution(t, b, d));

    detail::integrate_panels<Real>(F, va, Real(1), std::move(cuts), tol_abs, tol_rel, panel_tol,
                                   opts.max_evals, res);
    return res;
}

// ----------------------------------------------------------------------------
// log-log divergence rate: fit ln I(eps) ~ slope * ln(eps) + c on a grid
// ----------------------------------------------------------------------------

template <class Real>
struct SlopeFit {
    Real slope{0};
    Real intercept{0};
    Real max_residual{0};
    bool all_converged{true};
};

template <class Real>
SlopeFit<Real> divergence_rate(const std::function<IntegralResult<Real>(const Real&)>& family,
                               const std::vector<Real>& eps_grid) {
    using std::log;
    if (eps_grid.size() < 2) throw std::domain_error("divergence_rate: need >= 2 grid points");
    SlopeFit<Real> out;
    std::vector<Real> mat, rhs;
    for (const Real& e : eps_grid) {
        auto r = family(e);
        out.all_converged = out.all_converged && r.converged;
        mat.push_back(log(e));
        mat.push_back(Real(1));
        rhs.push_back(log(scalar_abs(r.value)));
    }
    auto c = solve_lstsq(mat, rhs, eps_grid.size(), 2);
    out.slope = c[0];
    out.intercept = c[1];
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const Real pred = c[0] * mat[2 * i] + c[1];
        out.max_residual = (std::max)(out.max_residual, scalar_abs(pred - rhs[i]));
    }
    return out;
}

}  // namespace rellich
