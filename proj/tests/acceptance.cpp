// Acceptance gate: one self-contained check per release criterion.
//
// Usage:  acceptance [N ...]
// With no arguments every criterion runs.  Each prints exactly one line,
//   criterion N: PASS — summary [12.3s]
// or FAIL with the first offending detail.  Exit code is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rellich/constants.hpp"
#include "rellich/iterlog.hpp"
#include "rellich/param_sampler.hpp"
#include "rellich/prober.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/radial.hpp"

using namespace rellich;

namespace {

struct Outcome {
    bool pass{true};
    std::string summary;

    void fail(const std::string& why) {
        if (pass) summary = why;  // keep the first failure front and center
        pass = false;
    }
};

template <class Real>
Real to_real(const rational& q) {
    return Real(mp::numerator(q).str()) / Real(mp::denominator(q).str());
}

double dbl(const real60& v) { return static_cast<double>(v); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. product structure, Q^p identity and the order-reduction recursions on
//    random rational parameter tuples
// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome out;
    auto tuples = sample_rational_tuples(2024, 50, 8);
    int recursion_tuples = 0;
    for (const auto& tup : tuples) {
        const rational p(tup.p), g = tup.gamma, k = tup.k;
        std::ostringstream ps;
        ps << "(m=" << tup.m << " p=" << tup.p << " gamma=" << g << " k=" << k << ")";

        // independent re-evaluation of both factor families
        rational ap(1), as(1);
        for (int i = 0; i <= (tup.m - 1) / 2; ++i)
            ap *= pow_integer((k - g - rational(tup.m - 2 * i) * p) / p, tup.p);
        for (int j = 1; j <= tup.m / 2; ++j)
            as *= pow_integer((p * k - k + g + rational(tup.m - 2 * j) * p) / p, tup.p);

        if (constant_A_prime(tup.m, p, g, k) != ap || constant_A_second(tup.m, p, g, k) != as)
            out.fail("factor product mismatch at " + ps.str());
        if (constant_A(tup.m, p, g, k) != ap * as)
            out.fail("A != A' * A'' at " + ps.str());
        if (pow_integer(q_factor(p, g, k), tup.p) != constant_A(2, p, g, k))
            out.fail("Q^p != A(2,gamma) at " + ps.str());

        if (tup.m >= 3) {
            ++recursion_tuples;
            for (const auto& rec : verify_recursions(tup.m, p, g, k))
                if (!rec.exact || !rec.pass)
                    out.fail(rec.identity + " failed at " + ps.str());
        }
    }
    if (out.pass) {
        std::ostringstream os;
        os << tuples.size() << " rational tuples exact (A = A'A'', Q^p = A(2,gamma); "
           << recursion_tuples << " with m >= 3 recursed)";
        out.summary = os.str();
    }
    return out;
}

// ---------------------------------------------------------------------------
// 2. one-dimensional reduction: |alpha_m(s*)| against the factor product of
//    A(2m,0), the |B| identity in floating point, and two spot values
// ---------------------------------------------------------------------------

Outcome criterion2() {
    Outcome out;
    const std::vector<rational> ps{rational(2), rational(5) / 2, rational(3)};
    const std::vector<int> ks{8, 12, 20};
    int exact_records = 0, float_records = 0;
    for (int m_lap : {1, 2}) {
        for (const auto& p : ps) {
            for (int k : ks) {
                std::ostringstream at;
                at << "(m=" << m_lap << " p=" << p << " k=" << k << ")";
                for (const auto& rec : verify_radio(m_lap, p, rational(k))) {
                    ++exact_records;
                    if (!rec.exact || !rec.pass)
                        out.fail(rec.identity + " not exact at " + at.str());
                }
                auto pr = to_real<real60>(p);
                for (const auto& rec : verify_radio(m_lap, pr, real60(k), 1e-12)) {
                    ++float_records;
                    if (!rec.pass)
                        out.fail(rec.identity + " rel err " + fmt(rec.rel_err) + " at " +
                                 at.str());
                }
            }
        }
    }
    // spot values
    if (constant_A(2, rational(2), rational(0), rational(12)) != 576 ||
        constant_B(2, rational(2), rational(0), rational(12)) != 13)
        out.fail("spot A(2,0)=576, B=13 at p=2, k=12 failed");
    if (constant_A(2, rational(2), rational(0), rational(8)) != 64 ||
        constant_B(2, rational(2), rational(0), rational(8)) != 5)
        out.fail("spot A(2,0)=64, B=5 at p=2, k=8 failed");
    if (out.pass) {
        std::ostringstream os;
        os << exact_records << " exact + " << float_records
           << " floating identities over m={1,2}, p={2,5/2,3}, k={8,12,20}; spot values hit";
        out.summary = os.str();
    }
    return out;
}

// ---------------------------------------------------------------------------
// 3. substitution coefficients: r1 and r2 vanish, r2' = B + mu A
// ---------------------------------------------------------------------------

Outcome criterion3() {
    Outcome out;
    auto pool = sample_rational_tuples(777, 400, 2);
    int used = 0;
    double worst = 0;
    for (const auto& tup : pool) {
        if (used >= 100) break;
        const rational p(tup.p);
        if (!(tup.k - tup.gamma - 2 * p > 0)) continue;
        ++used;

        // exact route
        auto rq = proof_r_coefficients(p, tup.gamma, tup.k, tup.beta, tup.mu);
        if (rq.r1 != 0) out.fail("rational r1 != 0");
        if (rq.r2 != 0) out.fail("rational r2 != 0");
        if (rq.r2p != constant_B(2, p, tup.gamma, tup.k) +
                          tup.mu * constant_A(2, p, tup.gamma, tup.k))
            out.fail("rational r2' != B + mu A");

        // floating route at 60 digits, relative to the canceled term sizes
        using R = real60;
        R pf(tup.p), gf = to_real<R>(tup.gamma), kf = to_real<R>(tup.k);
        R bf = to_real<R>(tup.beta), mf = to_real<R>(tup.mu);
        auto rc = proof_r_coefficients(pf, gf, kf, bf, mf);
        R a = kf - gf - 2 * pf, b = pf * kf - kf + gf, c = b - a;
        R q = a * b / (pf * pf);
        R lam = pow_signed(q, pf - 1), lpp = q * lam;
        R alpha = (pf - 1) * c / (a * b);
        R scale1 = pf * lpp * alpha;
        R scale2 = lam * (scalar_abs(c * alpha / (2 * pf)) + 2 * pf * q * bf +
                          pf * q * alpha * alpha / (2 * (pf - 1)));
        R want2p = constant_B(2, pf, gf, kf) + mf * constant_A(2, pf, gf, kf);
        double e1 = dbl(scalar_abs(rc.r1) / scale1);
        double e2 = dbl(scalar_abs(rc.r2) / scale2);
        double e3 = dbl(scalar_abs(rc.r2p - want2p) / want2p);
        worst = std::max({worst, e1, e2, e3});
        if (e1 > 1e-25) out.fail("float r1 residual " + fmt(e1));
        if (e2 > 1e-25) out.fail("float r2 residual " + fmt(e2));
        if (e3 > 1e-25) out.fail("float r2' residual " + fmt(e3));
    }
    if (used < 100) out.fail("only " + std::to_string(used) + " admissible tuples drawn");
    if (out.pass)
        out.summary = "100 tuples: r1 = r2 = 0 exactly, r2' = B + mu A; worst float residual " +
                      fmt(worst);
    return out;
}

// ---------------------------------------------------------------------------
// 4. iterated-log calculus: the derivative rule and the sum identities on a
//    logarithmic grid, against finite-difference oracles
// ---------------------------------------------------------------------------

Outcome criterion4() {
    Outcome out;
    using R = real60;
    double worst = 0;
    const std::vector<R> betas{R(-3) / 2, R(1) / 2, R(2)};
    for (int j = 1; j <= 30; ++j) {
        R t = exp(R(-j));
        R h = t * pow_integer(R(10), -20);

        for (int i = 1; i <= 3; ++i) {
            for (const auto& beta : betas) {
                R lhs = x_derivative(t, i, beta);
                auto up = x_values(t + h, i), dn = x_values(t - h, i);
                R fd = (pow(up[i - 1], beta) - pow(dn[i - 1], beta)) / (2 * h);
                double rel = dbl(scalar_abs(lhs - fd) / scalar_abs(fd));
                worst = std::max(worst, rel);
                if (rel > 1e-15) {
                    std::ostringstream os;
                    os << "derivative rule residual " << fmt(rel) << " at t=e^-" << j
                       << " i=" << i;
                    out.fail(os.str());
                }
            }
        }

        for (long long N : {16LL, 256LL}) {
            auto mid = eta_zeta_theta_truncated(t, N);
            auto up = eta_zeta_theta_truncated(t + h, N);
            auto dn = eta_zeta_theta_truncated(t - h, N);
            R eta_fd = (up.eta - dn.eta) / (2 * h);
            R zeta_fd = (up.zeta - dn.zeta) / (2 * h);
            R eta_cl = (mid.eta * mid.eta + mid.zeta) / (2 * t);
            R zeta_cl = 2 * mid.theta / t;
            double r1 = dbl(scalar_abs(eta_fd - eta_cl) / eta_cl);
            double r2 = dbl(scalar_abs(zeta_fd - zeta_cl) / zeta_cl);
            worst = std::max({worst, r1, r2});
            if (r1 > 1e-15 || r2 > 1e-15) {
                std::ostringstream os;
                os << "sum identity residual " << fmt(std::max(r1, r2)) << " at t=e^-" << j
                   << " N=" << N;
                out.fail(os.str());
            }
        }
    }
    if (out.pass)
        out.summary =
            "30-point log grid, 3 ranks x 3 exponents + both sum identities at N=16,256; "
            "worst residual " + fmt(worst);
    return out;
}

// ---------------------------------------------------------------------------
// 5. singular quadrature: borderline oracles with value 1/eps and the
//    log-log divergence exponents of two singular families
// ---------------------------------------------------------------------------

Outcome criterion5() {
    Outcome out;
    using R = real60;
    double worst = 0;
    for (int i = 1; i <= 3; ++i) {
        for (int e10 = 1; e10 <= 3; ++e10) {
            R eps = pow_integer(R(10), -e10);
            XWeightSpec<R> spec;
            spec.t_power = -1;
            spec.x_powers.assign(std::size_t(i), R(1));
            spec.x_powers.back() = 1 + eps;
            auto r = integrate_x_weight(spec, R(0), R(1));
            double rel = dbl(scalar_abs(r.value - 1 / eps) * eps);
            worst = std::max(worst, rel);
            std::ostringstream at;
            at << "(i=" << i << " eps=1e-" << e10 << ")";
            if (!r.converged) out.fail("oracle integral did not converge at " + at.str());
            if (rel > 1e-20)
                out.fail("oracle off by " + fmt(rel) + " at " + at.str());
        }
    }

    const struct { double beta, slope; } fams[] = {{-1.5, -2.5}, {-0.5, -1.5}};
    for (const auto& f : fams) {
        std::function<IntegralResult<R>(const R&)> family = [&f](const R& eps) {
            XWeightSpec<R> spec;
            spec.t_power = eps - 1;
            spec.x_powers = {R(f.beta)};
            return integrate_x_weight(spec, R(0), R(1));
        };
        auto fit = divergence_rate<R>(family, {R(1) / 100, R(3) / 1000, R(1) / 1000});
        if (!fit.all_converged) out.fail("divergence family integral failed to converge");
        double rel = dbl(scalar_abs(fit.slope - R(f.slope)) / scalar_abs(R(f.slope)));
        if (rel > 0.05) {
            std::ostringstream os;
            os << "fitted exponent " << dbl(fit.slope) << " vs " << f.slope << " (off "
               << fmt(rel) << ") for X_1^" << f.beta;
            out.fail(os.str());
        }
    }
    if (out.pass)
        out.summary = "nine 1/eps oracles to " + fmt(worst) +
                      "; divergence exponents -5/2 and -3/2 recovered within 5%";
    return out;
}

// ---------------------------------------------------------------------------
// 6. the inequality itself: remainder nonnegative across the parameter cells
//    for a two-level test family
// ---------------------------------------------------------------------------

Outcome criterion6() {
    Outcome out;
    using R = real60;
    const struct { int m, k; double gamma; } cells[] = {
        {2, 12, 0.0}, {2, 12, 2.0}, {1, 8, 0.0}, {3, 16, 0.0}};
    const std::vector<R> pvals{R(2), R(5) / 2};

    IntegrateOptions<R> opts;
    opts.tol_abs = pow_integer(R(10), -22);
    opts.tol_rel = pow_integer(R(10), -22);
    opts.panel_tol = pow_integer(R(10), -26);

    int probes_run = 0;
    double min_margin = 1e300;  // min over probes of remainder / error budget
    std::uint64_t cell_seed = 9000;
    for (const auto& pv : pvals) {
        for (const auto& cell : cells) {
            Params<R> prm;
            prm.m = cell.m;
            prm.p = pv;
            prm.gamma = R(cell.gamma);
            prm.k = R(cell.k);
            prm.D = exp(R(1));
            prm.R = 1;
            if (!star_condition(prm.m, prm.p, prm.gamma, prm.k)) {
                out.fail("cell unexpectedly violates condition (*)");
                continue;
            }
            std::mt19937_64 rng(cell_seed++);
            for (int probe = 0; probe < 10; ++probe) {
                std::vector<R> eps(3);
                for (auto& e : eps)
                    e = R(5) / 100 + R(45) / 100 * R(int(rng() % 1000)) / R(999);
                auto rep = inequality_sides(prm, eps, 2, opts);
                ++probes_run;
                std::ostringstream at;
                at << "(m=" << cell.m << " p=" << dbl(pv) << " gamma=" << cell.gamma
                   << " k=" << cell.k << " eps=" << dbl(eps[0]) << "," << dbl(eps[1]) << ","
                   << dbl(eps[2]) << ")";
                if (!rep.all_converged) out.fail("integral did not converge at " + at.str());
                if (!(rep.remainder >= -10 * rep.error_budget))
                    out.fail("remainder " + fmt(dbl(rep.remainder)) + " below -10x budget " +
                             fmt(dbl(rep.error_budget)) + " at " + at.str());
                if (rep.error_budget > 0)
                    min_margin = std::min(min_margin, dbl(rep.remainder / rep.error_budget));
            }
        }
    }
    if (out.pass) {
        std::ostringstream os;
        os << probes_run << " probes over 8 cells: remainder nonnegative "
           << "(tightest remainder/budget ratio " << fmt(min_margin) << ")";
        out.summary = os.str();
    }
    return out;
}

// ---------------------------------------------------------------------------
// 7. sharpness of A: the r = 0 quotient approaches 576 linearly in eps_0
// ---------------------------------------------------------------------------

Outcome criterion7() {
    Outcome out;
    using R = real60;
    Params<R> prm;
    prm.m = 2;
    prm.p = 2;
    prm.gamma = 0;
    prm.k = 12;
    prm.D = exp(R(1));
    prm.R = 1;

    IntegrateOptions<R> opts;
    opts.tol_abs = pow_integer(R(10), -25);
    opts.tol_rel = pow_integer(R(10), -25);
    opts.panel_tol = pow_integer(R(10), -30);

    auto rep = sharpness_a_sweep(prm, {}, opts);
    if (!rep.all_converged) out.fail("a quotient integral did not converge");
    const double qc = dbl(rep.points.front().quotient);
    const double rich = dbl(rep.richardson);
    const double gap = dbl(rep.gap_ratio);
    if (!(std::abs(qc - 576.0) <= 0.05 * 576.0))
        out.fail("quotient(1e-2) = " + fmt(qc) + " not within 5% of 576");
    if (!(gap >= 5.0 && gap <= 20.0))
        out.fail("gap ratio " + fmt(gap) + " outside [5,20]");
    if (!(std::abs(rich - 576.0) <= 1e-3 * 576.0))
        out.fail("Richardson value " + fmt(rich) + " not within 1e-3 of 576");
    if (out.pass)
        out.summary = "quotient(1e-2) = " + fmt(qc) + ", gap ratio " + fmt(gap) +
                      ", Richardson " + fmt(rich);
    return out;
}

// ---------------------------------------------------------------------------
// 8. sharpness of B: sequential limit of the series quotient, and collapse
//    under the critically weaker final weight
// ---------------------------------------------------------------------------

Outcome criterion8() {
    Outcome out;
    using R = real60;
    Params<R> prm;
    prm.m = 2;
    prm.p = 2;
    prm.gamma = 0;
    prm.k = 12;
    prm.D = exp(R(1));
    prm.R = 1;

    IntegrateOptions<R> opts;
    opts.tol_abs = pow_integer(R(10), -25);
    opts.tol_rel = pow_integer(R(10), -25);
    opts.panel_tol = pow_integer(R(10), -30);

    auto rep = sharpness_b_schedule(prm, R(2), {}, {}, opts);
    if (!rep.all_converged) out.fail("B quotient integral did not converge");
    const double floor13 = 13.0 * (1.0 - 1e-3);
    for (const auto& step : rep.steps)
        for (const auto& q : step.quotients)
            if (!(dbl(q) >= floor13))
                out.fail("sampled quotient " + fmt(dbl(q)) + " dips below 13(1-1e-3)");
    if (!rep.decreasing) out.fail("extrapolated quotient not decreasing along the schedule");
    const double final_q = dbl(rep.steps.back().extrapolated);
    if (!(final_q <= 13.0 * 1.15))
        out.fail("final extrapolated quotient " + fmt(final_q) + " above 13 * 1.15");

    auto weak = sharpness_b_schedule(prm, R(1), {}, {}, opts);
    if (!weak.all_converged) out.fail("theta=1 quotient integral did not converge");
    const double weak_final = dbl(weak.steps.back().extrapolated);
    if (!(weak_final < 6.5))
        out.fail("theta=1 quotient " + fmt(weak_final) + " failed to fall below 6.5");

    if (out.pass)
        out.summary = "series quotient stays above 13 and tightens to " + fmt(final_q) +
                      "; weak-weight quotient collapses to " + fmt(weak_final);
    return out;
}

// ---------------------------------------------------------------------------
// 9. the cancellation chain of the optimality expansion
// ---------------------------------------------------------------------------

Outcome criterion9() {
    Outcome out;
    int exact_records = 0;
    for (int p : {2, 3}) {
        for (int k : {12, 20}) {
            std::ostringstream at;
            at << "(p=" << p << " k=" << k << ")";
            auto repq = cancellation_report(1, rational(p), rational(k), 2);
            for (const auto& rec : repq.records) {
                ++exact_records;
                if (!rec.exact || !rec.pass)
                    out.fail(rec.identity + " not exact at " + at.str());
            }
            auto repf = cancellation_report(1, real60(p), real60(k), 2, 1e-20);
            if (!repf.all_pass) out.fail("floating chain above 1e-20 at " + at.str());
        }
    }
    if (out.pass)
        out.summary = std::to_string(exact_records) +
                      " chain identities exact over p={2,3} x k={12,20}, and below 1e-20 in "
                      "floating point";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using Criterion = std::function<Outcome()>;
    const std::vector<Criterion> all{criterion1, criterion2, criterion3,
                                     criterion4, criterion5, criterion6,
                                     criterion7, criterion8, criterion9};

    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        int n = std::atoi(argv[i]);
        if (n < 1 || n > int(all.size())) {
            std::fprintf(stderr, "unknown criterion '%s' (valid: 1..%zu)\n", argv[i],
                         all.size());
            return 64;
        }
        which.push_back(n);
    }
    if (which.empty())
        for (int n = 1; n <= int(all.size()); ++n) which.push_back(n);

    int failures = 0;
    for (int n : which) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[std::size_t(n - 1)]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s — %s [%.1fs]\n", n, o.pass ? "PASS" : "FAIL",
                    o.summary.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
