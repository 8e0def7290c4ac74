#pragma once

// The iterated-logarithm scale X_i and the three series built from it.
//
//   X_1(t) = (1 - log t)^{-1},   X_i = X_1 o X_{i-1}      (t in (0,1])
//
// Writing P_i = X_1 X_2 ... X_i, the series
//
//   eta   = sum_{i>=1} P_i
//   zeta  = sum_{i>=1} P_i^2
//   theta = sum_{i>=1} sum_{j<=i} P_i^2 P_j
//
// converge for t < 1, and the differentiation rule
//
//   d/dt X_i^beta = (beta/t) X_1 ... X_{i-1} X_i^{beta+1}
//
// gives the closed identities  eta' = (eta^2 + zeta)/(2t),  zeta' = 2 theta/t.
// Both identities hold *exactly* for uniformly truncated partial sums (cut
// every series at the same depth N), which is how they are verified.
//
// Term decay is only ~ c(t)/i^2 (the factors X_i increase to 1), so plain
// summation cannot reach tight tolerances.  The exact self-similarity
//
//   sum_{i>N} P_i = P_N * eta(X_N(t))
//
// (and its zeta/theta analogues) reduces the tail to the behaviour of the
// series near 1, where eta(y) = 2/(1-y) + O(log(1-y)) etc.  We fit the few
// unknown correction coefficients of that expansion to checkpointed partial
// sums and use the fitted model for the tail, reporting an honest bound.

#include <algorithm>
#include <string>
#include <vector>

#include "rellich/fit.hpp"
#include "rellich/jet.hpp"
#include "rellich/scalar.hpp"

namespace rellich {

// ---------------------------------------------------------------- values ---

// X_1(tau) with a domain check (needs log tau < 1, i.e. tau < e).
template <class Real>
Real x1(const Real& tau) {
    if (!(tau > 0)) throw std::domain_error("x1: needs tau > 0");
    Real z = 1 - log(tau);
    if (!(z > 0)) throw std::domain_error("x1: needs tau < e");
    return 1 / z;
}

// X_1(t/scale), ..., X_r(t/scale).
template <class Real>
std::vector<Real> x_values(const Real& t, int r, const Real& scale = Real(1)) {
    if (r < 0) throw std::domain_error("x_values: r < 0");
    std::vector<Real> xs;
    xs.reserve(r);
    if (r == 0) return xs;
    Real x = x1(t / scale);
    xs.push_back(x);
    for (int i = 2; i <= r; ++i) {
        x = x1(x);
        xs.push_back(x);
    }
    return xs;
}

// prod_j X_j(t/scale)^{q_j} evaluated through logarithms: computing the
// X-chain already produces log X_j as a byproduct, so the weighted product
// costs one extra exp.  Safe down to extremely small t (the X_j underflow
// nowhere, only log t grows).
template <class Real>
Real weighted_x_product(const Real& t, const std::vector<Real>& q, const Real& scale = Real(1)) {
    if (q.empty()) return Real(1);
    Real z = 1 - log(t / scale);  // 1/X_1
    if (!(z > 0)) throw std::domain_error("weighted_x_product: needs t/scale < e");
    Real lx = -log(z);  // log X_1
    Real acc = q[0] * lx;
    for (std::size_t j = 1; j < q.size(); ++j) {
        lx = -log(1 - lx);  // log X_{j+1} = -log(1 - log X_j)
        acc += q[j] * lx;
    }
    return exp(acc);
}

// -------------------------------------------------------------------- jets ---

// Jet (in t) of X_i(t/scale).  Built bottom-up: the jet of log(t/scale) has
// the closed coefficients (-1)^{j-1}/(j t^j), then X_1 = 1/(1 - log), and
// each further level is X_{i} = 1/(1 - log X_{i-1}) with jet log/div.
template <class Real>
Jet<Real> x_jet(const Real& t, int i, int order, const Real& scale = Real(1)) {
    if (i < 1) throw std::domain_error("x_jet: i >= 1");
    Jet<Real> lg(t, order);
    lg.coeffs[0] = log(t / scale);
    Real tp = t;
    for (int j = 1; j <= order; ++j) {
        lg.coeffs[j] = (j % 2 ? Real(1) : Real(-1)) / (Real(j) * tp);
        tp *= t;
    }
    Jet<Real> x = Real(1) / (Real(1) - lg);
    for (int lvl = 2; lvl <= i; ++lvl) x = Real(1) / (Real(1) - log(x));
    return x;
}

// Closed form of d/dt X_i(t/scale)^beta = (beta/t) X_1 ... X_{i-1} X_i^{beta+1}.
// (The inner scale cancels: the chain rule factor 1/scale combines with
// 1/(t/scale) to 1/t.)
template <class Real>
Real x_derivative(const Real& t, int i, const Real& beta, const Real& scale = Real(1)) {
    if (i < 1) throw std::domain_error("x_derivative: i >= 1");
    std::vector<Real> q(i, Real(1));
    q[i - 1] = beta + 1;
    return beta / t * weighted_x_product(t, q, scale);
}

// ------------------------------------------------------------------ series ---

template <class Real>
struct IterLogSums {
    Real eta{0}, zeta{0}, theta{0};
    long long terms{0};     // truncation depth actually summed
    Real tail_bound{0};     // bound/estimate for the dropped tails (absolute)
    bool tail_fitted{false};
    bool converged{false};
    std::string note;
};

// Exact uniformly-truncated partial sums (depth N); the identity checks use
// these.  theta_N = sum_{i<=N} P_i^2 * (sum_{j<=i} P_j) accumulated in one
// pass with a running prefix sum.
template <class Real>
IterLogSums<Real> eta_zeta_theta_truncated(const Real& t, long long N) {
    if (!(t > 0) || !(t < 1)) throw std::domain_error("eta_zeta_theta: needs 0 < t < 1");
    IterLogSums<Real> out;
    Real z = 1 - log(t);
    Real lx = -log(z);
    Real P = exp(lx);  // P_1 = X_1
    Real prefix(0);
    for (long long i = 1; i <= N; ++i) {
        prefix += P;
        out.eta = prefix;
        out.zeta += P * P;
        out.theta += P * P * prefix;
        if (i < N) {
            lx = -log(1 - lx);
            P *= exp(lx);
        }
    }
    out.terms = N;
    out.converged = true;  // exact for the truncated objects by construction
    return out;
}

namespace detail {

template <class Real>
struct SeriesCheckpoint {
    long long N;
    Real P;       // P_N
    Real delta;   // 1 - X_N
    Real eta, zeta, theta;  // partial sums at depth N
};

// model bases near delta -> 0 (leading coefficients included as unknowns so
// the fit is self-correcting; theory predicts ~2/delta, ~2/(3 delta),
// ~1/(3 delta^2) for eta, zeta, theta).  Each order delta^j carries a log
// polynomial one degree higher than the previous order.
template <class Real>
std::vector<Real> eta_basis(const Real& d) {
    Real ld = log(d);
    return {1 / d,
            ld,
            Real(1),
            d * ld * ld,
            d * ld,
            d,
            d * d * ld * ld * ld,
            d * d * ld * ld,
            d * d * ld,
            d * d};
}
template <class Real>
std::vector<Real> theta_basis(const Real& d) {
    Real ld = log(d);
    return {1 / (d * d),
            ld / d,
            1 / d,
            ld * ld,
            ld,
            Real(1),
            d * ld * ld * ld,
            d * ld * ld,
            d * ld,
            d};
}

// Fit tail-model coefficients from checkpoint differences.
//   s_{N_b} - s_{N_a} = T_{N_a} - T_{N_b},   T_N = sum_l c_l w_N basis_l(delta_N)
// where w_N is the self-similarity weight (P_N for eta, P_N^2 for zeta, ...).
// Returns coefficients; fills max absolute equation residual.
template <class Real>
std::vector<Real> fit_tail(const std::vector<Real>& weights, const std::vector<Real>& partials,
                           const std::vector<std::vector<Real>>& bases,
                           const std::vector<Real>& known_part, Real& max_residual) {
    const std::size_t K = partials.size();
    const std::size_t L = bases[0].size();
    if (K < L + 2) throw std::domain_error("fit_tail: too few checkpoints");
    const std::size_t m = K - 1;
    std::vector<Real> A(m * L), b(m);
    for (std::size_t e = 0; e + 1 < K; ++e) {
        // checkpoints are ordered by increasing N: a = e, b = e+1
        b[e] = (partials[e + 1] - partials[e]) - (known_part[e] - known_part[e + 1]);
        for (std::size_t l = 0; l < L; ++l)
            A[e * L + l] = weights[e] * bases[e][l] - weights[e + 1] * bases[e + 1][l];
    }
    auto c = solve_lstsq<Real>(A, b, m, L);
    max_residual = 0;
    for (std::size_t e = 0; e < m; ++e) {
        Real pred(0);
        for (std::size_t l = 0; l < L; ++l) pred += A[e * L + l] * c[l];
        Real r = scalar_abs(pred - b[e]);
        if (r > max_residual) max_residual = r;
    }
    return c;
}

}  // namespace detail

namespace detail {

// run the three tail fits against the current checkpoints and assemble the
// corrected sums; returns false if the linear algebra degenerates
template <class Real>
bool try_tail_fit(const std::vector<SeriesCheckpoint<Real>>& cps, IterLogSums<Real>& out) {
    const std::size_t K = cps.size();
    std::vector<Real> wE(K), partE(K), knownZero(K, Real(0)), wZ(K), partZ(K), partT(K);
    std::vector<std::vector<Real>> basE(K), basT(K);
    for (std::size_t k2 = 0; k2 < K; ++k2) {
        wE[k2] = cps[k2].P;
        wZ[k2] = cps[k2].P * cps[k2].P;
        partE[k2] = cps[k2].eta;
        partZ[k2] = cps[k2].zeta;
        partT[k2] = cps[k2].theta;
        basE[k2] = eta_basis(cps[k2].delta);
        basT[k2] = theta_basis(cps[k2].delta);
    }
    Real rE, rZ, rT;
    std::vector<Real> cE, cZ, cT;
    try {
        cE = fit_tail(wE, partE, basE, knownZero, rE);
        cZ = fit_tail(wZ, partZ, basE, knownZero, rZ);  // same basis shape as eta

        // theta: known part carries the fitted zeta(y) coupling, weight P_N^3
        std::vector<Real> knownT(K), wT(K);
        for (std::size_t k2 = 0; k2 < K; ++k2) {
            Real zy(0);
            for (std::size_t l = 0; l < cZ.size(); ++l) zy += cZ[l] * basE[k2][l];
            knownT[k2] = cps[k2].eta * wZ[k2] * zy;
            wT[k2] = cps[k2].P * wZ[k2];
        }
        cT = fit_tail(wT, partT, basT, knownT, rT);
    } catch (const std::exception&) {
        return false;
    }

    // evaluate the fitted tails at the deepest checkpoint
    const auto& last = cps.back();
    auto bE = eta_basis(last.delta);
    auto bT = theta_basis(last.delta);
    Real eta_y(0), zeta_y(0), theta_y(0);
    for (std::size_t l = 0; l < cE.size(); ++l) eta_y += cE[l] * bE[l];
    for (std::size_t l = 0; l < cZ.size(); ++l) zeta_y += cZ[l] * bE[l];
    for (std::size_t l = 0; l < cT.size(); ++l) theta_y += cT[l] * bT[l];

    out.eta = last.eta + last.P * eta_y;
    out.zeta = last.zeta + last.P * last.P * zeta_y;
    out.theta =
        last.theta + last.eta * last.P * last.P * zeta_y + last.P * last.P * last.P * theta_y;
    out.terms = last.N;
    out.tail_fitted = true;
    // conservative: residuals enter tails of all three series; scale by 8
    out.tail_bound = 8 * (rE + rZ + rT) + 8 * rZ * last.eta;
    return true;
}

}  // namespace detail

// Tail-corrected sums.  Sums directly with geometric (~sqrt 2) checkpoints;
// once enough checkpoints exist the tails are closed with fitted near-1
// expansions via the self-similarity identities
//   eta  - eta_N  = P_N   * eta(y),
//   zeta - zeta_N = P_N^2 * zeta(y),
//   theta- theta_N= eta_N * P_N^2 * zeta(y) + P_N^3 * theta(y),   y = X_N(t),
// refitting at each further checkpoint until the residual-driven tail bound
// meets tol or the term budget runs out (then converged=false, honest bound).
template <class Real>
IterLogSums<Real> eta_zeta_theta(const Real& t, const Real& tol,
                                 long long term_budget = (1LL << 19)) {
    if (!(t > 0)) throw std::domain_error("eta_zeta_theta: needs t > 0");
    if (!(t < Real(1) - Real("1e-6"))) {
        IterLogSums<Real> out;
        out.converged = false;
        out.note = "t too close to 1: series converge too slowly to evaluate";
        return out;
    }

    const std::size_t basis_len = detail::eta_basis(Real(1) / 2).size();
    const std::size_t min_checkpoints = basis_len + 2;

    std::vector<detail::SeriesCheckpoint<Real>> cps;
    Real z = 1 - log(t);
    Real lx = -log(z);
    Real x = exp(lx);
    Real P = x;
    Real eta = P, zeta = P * P, theta = P * P * P;
    long long next_cp = 64;
    long long i = 1;
    IterLogSums<Real> out;
    IterLogSums<Real> fitted;
    bool have_fit = false;
    while (true) {
        if (i == next_cp) {
            cps.push_back({i, P, 1 - x, eta, zeta, theta});
            next_cp += (std::max)((long long)1, (next_cp * 414214LL) / 1000000LL);
            if (cps.size() >= min_checkpoints) {
                // fit on a trailing window: early checkpoints carry the largest
                // model truncation error and would pin the residual
                const std::size_t W = (std::min)(cps.size(), min_checkpoints + 2);
                std::vector<detail::SeriesCheckpoint<Real>> win(cps.end() - std::ptrdiff_t(W),
                                                                cps.end());
                IterLogSums<Real> attempt;
                if (detail::try_tail_fit(win, attempt)) {
                    if (!have_fit || attempt.tail_bound < fitted.tail_bound) fitted = attempt;
                    have_fit = true;
                    if (fitted.tail_bound <= tol) {
                        fitted.converged = true;
                        return fitted;
                    }
                }
            }
        }
        if (i >= term_budget) break;
        // next term
        lx = -log(1 - lx);
        x = exp(lx);
        P *= x;
        ++i;
        eta += P;
        zeta += P * P;
        theta += P * P * eta;
        // direct exit for loose tolerances: T <= P_N * eta(X_N) <= 4 P/(1-x)
        // per series factor in the regime where this can trigger
        if (i >= 4 && 4 * P / (1 - x) * (1 + eta + eta * eta) < tol) {
            out.eta = eta;
            out.zeta = zeta;
            out.theta = theta;
            out.terms = i;
            out.tail_bound = 4 * P / (1 - x) * (1 + eta + eta * eta);
            out.converged = true;
            return out;
        }
    }

    if (have_fit) {
        fitted.converged = fitted.tail_bound <= tol;
        if (!fitted.converged) fitted.note = "tail fit residual above tolerance at term budget";
        return fitted;
    }
    out.eta = eta;
    out.zeta = zeta;
    out.theta = theta;
    out.terms = i;
    out.tail_bound = 4 * P / (1 - x) * (1 + eta + eta * eta);
    out.converged = out.tail_bound <= tol;
    out.note = "budget too small for tail fit";
    return out;
}

}  // namespace rellich
