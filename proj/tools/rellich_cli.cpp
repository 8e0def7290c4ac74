// Batch front end: sharp constants, identity suites, iterated-log tables,
// singular integrals, and the sharpness experiments, as CSV or JSON lines.
//
// Exit codes: 0 success, 1 I/O error, 2 hypothesis violation (e.g. condition
// (*) fails without --allow-star-violation, or an identity fails), 3
// quadrature non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rellich/constants.hpp"
#include "rellich/iterlog.hpp"
#include "rellich/param_sampler.hpp"
#include "rellich/params.hpp"
#include "rellich/prober.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/scalar.hpp"

namespace {

using nlohmann::json;
using namespace rellich;

constexpr const char* kToolName = "rellich-tools";
constexpr const char* kToolVersion = "0.3.0";

// ---------------------------------------------------------------------------
// output sink: one provenance header line, then rows
// ---------------------------------------------------------------------------

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

class Sink {
  public:
    Sink(const std::string& path, std::string format) : format_(std::move(format)) {
        if (path == "-" || path.empty()) {
            os_ = &std::cout;
        } else {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::ios_base::failure("cannot open output file: " + path);
            os_ = &file_;
        }
    }

    void provenance(const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
        if (format_ == "json") {
            json j;
            j["tool"] = kToolName;
            j["version"] = kToolVersion;
            j["command"] = command;
            for (const auto& [key, val] : kv) j[key] = val;
            *os_ << json{{"provenance", j}}.dump() << "\n";
        } else {
            *os_ << "# tool=" << kToolName << " version=" << kToolVersion
                 << " command=" << command;
            for (const auto& [key, val] : kv) *os_ << " " << key << "=" << val;
            *os_ << "\n";
        }
    }

    void header(const std::vector<std::string>& columns) {
        columns_ = columns;
        if (format_ == "csv") {
            for (std::size_t i = 0; i < columns.size(); ++i)
                *os_ << (i ? "," : "") << csv_escape(columns[i]);
            *os_ << "\n";
        }
    }

    void row(const std::vector<std::string>& values) {
        if (format_ == "json") {
            json j;
            for (std::size_t i = 0; i < values.size() && i < columns_.size(); ++i)
                j[columns_[i]] = values[i];
            *os_ << j.dump() << "\n";
        } else {
            for (std::size_t i = 0; i < values.size(); ++i)
                *os_ << (i ? "," : "") << csv_escape(values[i]);
            *os_ << "\n";
        }
    }

    void flush_and_check() {
        os_->flush();
        if (!*os_) throw std::ios_base::failure("write failure on output stream");
    }

  private:
    std::string format_;
    std::ofstream file_;
    std::ostream* os_{nullptr};
    std::vector<std::string> columns_;
};

// ---------------------------------------------------------------------------
// options
// ---------------------------------------------------------------------------

struct Opts {
    std::string m = "2", p = "2", gamma = "0", k = "12", D = "0", R = "1";
    int r = 1;
    std::vector<std::string> eps;
    int precision = 60;
    std::string tol = "0";
    std::string out = "-";
    std::string format = "csv";
    std::uint64_t seed = 1;
    bool allow_star = false;

    // identities
    int max_m = 8;
    int trials = 50;

    // tabulate-iterlog
    std::string t_lo = "1e-8", t_hi = "0.5";
    int count = 17;
    std::string scale = "1";

    // integrate
    std::string t_power = "-0.5";
    std::vector<std::string> x_powers;
    std::string a = "0", b = "1";
    std::string cutoff_power = "0";
    std::string cutoff_flat = "0.5", cutoff_support = "1";
    int depth = -1;
    int oracle_level = 0;
    std::string oracle_eps = "0.001";

    // sharpness / sweeps
    std::string theta = "2";
    std::vector<std::string> eps1_schedule;
    std::vector<std::string> eps0_grid;
    std::vector<std::string> d_values;
    int series_terms = -1;
};

int effective_digits(int requested) {
    if (requested <= 30) return 30;
    if (requested <= 60) return 60;
    if (requested <= 120) return 120;
    return 240;
}

template <class F>
int with_precision(int digits, F&& f) {
    switch (effective_digits(digits)) {
        case 30: return f.template operator()<real30>();
        case 60: return f.template operator()<real60>();
        case 120: return f.template operator()<real120>();
        default: return f.template operator()<real240>();
    }
}

template <class Real>
Params<Real> parse_params(const Opts& o) {
    Params<Real> p;
    p.m = int(std::stol(o.m));
    p.p = scalar_from_string<Real>(o.p);
    p.gamma = scalar_from_string<Real>(o.gamma);
    p.k = scalar_from_string<Real>(o.k);
    p.D = scalar_from_string<Real>(o.D);
    p.R = scalar_from_string<Real>(o.R);
    return p;
}

template <class Real>
std::vector<Real> parse_list(const std::vector<std::string>& in) {
    std::vector<Real> out;
    for (const auto& s : in) out.push_back(scalar_from_string<Real>(s));
    return out;
}

template <class Real>
IntegrateOptions<Real> parse_integrate_options(const Opts& o) {
    IntegrateOptions<Real> io;
    const Real tol = scalar_from_string<Real>(o.tol);
    if (tol > 0) {
        io.tol_abs = tol;
        io.tol_rel = tol;
    }
    return io;
}

std::vector<std::pair<std::string, std::string>> base_provenance(const Opts& o) {
    return {{"precision", std::to_string(effective_digits(o.precision))},
            {"format", o.format}};
}

// true if the string parses to an integer-valued rational (so the exact
// arithmetic path applies)
bool integer_valued(const std::string& s) {
    try {
        rational v = scalar_from_string<rational>(s);
        return mp::denominator(v) == 1;
    } catch (...) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

template <class Scalar>
int emit_constants(const Opts& o, Sink& sink) {
    const int m = int(std::stol(o.m));
    const Scalar p = scalar_from_string<Scalar>(o.p);
    const Scalar gamma = scalar_from_string<Scalar>(o.gamma);
    const Scalar k = scalar_from_string<Scalar>(o.k);
    auto sc = sharp_constants(m, p, gamma, k);

    sink.header({"quantity", "value"});
    sink.row({"A_prime", scalar_to_string(sc.a_prime)});
    sink.row({"A_second", scalar_to_string(sc.a_second)});
    sink.row({"A", scalar_to_string(sc.a)});
    sink.row({"B", scalar_to_string(sc.b)});
    sink.row({"Q", scalar_to_string(sc.q)});
    sink.row({"gamma_crit", scalar_to_string(sc.gamma_critical)});
    sink.row({"star_ok", sc.star_ok ? "true" : "false"});
    sink.flush_and_check();
    if (!sc.star_ok && !o.allow_star) {
        std::cerr << "condition (*) fails for these parameters (gamma_crit="
                  << scalar_to_string(sc.gamma_critical)
                  << "); pass --allow-star-violation to proceed anyway\n";
        return 2;
    }
    return 0;
}

int cmd_constants(const Opts& o) {
    Sink sink(o.out, o.format);
    auto prov = base_provenance(o);
    prov.insert(prov.end(),
                {{"m", o.m}, {"p", o.p}, {"gamma", o.gamma}, {"k", o.k}});
    const bool exact = integer_valued(o.p);
    prov.push_back({"arithmetic", exact ? "rational" : "float"});
    sink.provenance("constants", prov);
    if (exact) return emit_constants<rational>(o, sink);
    return with_precision(o.precision, [&]<class Real>() { return emit_constants<Real>(o, sink); });
}

// ---------------------------------------------------------------------------
// identities: exact random suite over rational tuples
// ---------------------------------------------------------------------------

int cmd_identities(const Opts& o) {
    Sink sink(o.out, o.format);
    auto prov = base_provenance(o);
    prov.insert(prov.end(), {{"max_m", std::to_string(o.max_m)},
                             {"trials", std::to_string(o.trials)},
                             {"seed", std::to_string(o.seed)},
                             {"arithmetic", "rational"}});
    sink.provenance("identities", prov);
    sink.header({"identity", "m", "p", "gamma", "k", "lhs", "rhs", "rel_err", "exact", "pass"});

    bool all_pass = true;
    auto emit = [&](const IdentityRecord& rec, int m, int p, const rational& gamma,
                    const rational& k) {
        all_pass = all_pass && rec.pass;
        sink.row({rec.identity, std::to_string(m), std::to_string(p), scalar_to_string(gamma),
                  scalar_to_string(k), rec.lhs, rec.rhs, rec.exact ? "0" : std::to_string(rec.rel_err),
                  rec.exact ? "true" : "false", rec.pass ? "true" : "false"});
    };

    for (const auto& tup : sample_rational_tuples(o.seed, o.trials, o.max_m)) {
        const rational p(tup.p);
        emit(make_identity_record<rational>("A_product_split", "",
                                            constant_A(tup.m, p, tup.gamma, tup.k),
                                            constant_A_prime(tup.m, p, tup.gamma, tup.k) *
                                                constant_A_second(tup.m, p, tup.gamma, tup.k),
                                            0.0),
             tup.m, tup.p, tup.gamma, tup.k);
        emit(make_identity_record<rational>("Q_pth_power", "",
                                            pow_signed(q_factor(p, tup.gamma, tup.k), p),
                                            constant_A(2, p, tup.gamma, tup.k), 0.0),
             2, tup.p, tup.gamma, tup.k);
        if (tup.m >= 3)
            for (const auto& rec : verify_recursions(tup.m, p, tup.gamma, tup.k))
                emit(rec, tup.m, tup.p, tup.gamma, tup.k);
        // the substitution coefficients need a nonzero Q factor
        if (tup.k - tup.gamma - 2 * p == 0) continue;
        auto pc = proof_r_coefficients(p, tup.gamma, tup.k, tup.beta, tup.mu);
        emit(make_identity_record<rational>("r1_zero", "", pc.r1, rational(0), 0.0), 2, tup.p,
             tup.gamma, tup.k);
        emit(make_identity_record<rational>("r2_zero", "", pc.r2, rational(0), 0.0), 2, tup.p,
             tup.gamma, tup.k);
        emit(make_identity_record<rational>(
                 "r2p_closed_form", "", pc.r2p,
                 constant_B(2, p, tup.gamma, tup.k) + tup.mu * constant_A(2, p, tup.gamma, tup.k),
                 0.0),
             2, tup.p, tup.gamma, tup.k);
    }
    sink.flush_and_check();
    return all_pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// tabulate-iterlog
// ---------------------------------------------------------------------------

int cmd_tabulate_iterlog(const Opts& o) {
    return with_precision(o.precision, [&]<class Real>() {
        using std::exp;
        using std::log;
        Sink sink(o.out, o.format);
        auto prov = base_provenance(o);
        prov.insert(prov.end(), {{"t_lo", o.t_lo},
                                 {"t_hi", o.t_hi},
                                 {"count", std::to_string(o.count)},
                                 {"r", std::to_string(o.r)},
                                 {"scale", o.scale},
                                 {"tol", o.tol}});
        sink.provenance("tabulate-iterlog", prov);

        const Real lo = scalar_from_string<Real>(o.t_lo);
        const Real hi = scalar_from_string<Real>(o.t_hi);
        const Real scale = scalar_from_string<Real>(o.scale);
        Real tol = scalar_from_string<Real>(o.tol);
        // the iterated-log series tails are closed by a fitted expansion whose
        // achievable accuracy tops out well short of full precision; default
        // to a tolerance the fit reliably reaches
        if (!(tol > 0)) tol = pow_integer(Real(10), -12);
        if (!(lo > 0) || !(hi > lo) || !(hi < scale))
            throw std::domain_error("tabulate-iterlog: need 0 < t_lo < t_hi < scale");
        if (o.count < 2) throw std::domain_error("tabulate-iterlog: count >= 2");

        std::vector<std::string> cols{"t"};
        for (int j = 1; j <= o.r; ++j) cols.push_back("X" + std::to_string(j));
        cols.insert(cols.end(), {"eta", "zeta", "theta", "terms", "converged"});
        sink.header(cols);

        bool all_ok = true;
        const Real llo = log(lo), lhi = log(hi);
        for (int i = 0; i < o.count; ++i) {
            const Real t = exp(llo + (lhi - llo) * Real(i) / Real(o.count - 1));
            auto xs = x_values(t, o.r, scale);
            auto sums = eta_zeta_theta(t / scale, tol);
            all_ok = all_ok && sums.converged;
            std::vector<std::string> row{scalar_to_string(t)};
            for (int j = 1; j <= o.r; ++j) row.push_back(scalar_to_string(xs[std::size_t(j - 1)]));
            row.insert(row.end(),
                       {scalar_to_string(sums.eta), scalar_to_string(sums.zeta),
                        scalar_to_string(sums.theta), std::to_string(sums.terms),
                        sums.converged ? "true" : "false"});
            sink.row(row);
        }
        sink.flush_and_check();
        return all_ok ? 0 : 3;
    });
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

int cmd_integrate(const Opts& o) {
    return with_precision(o.precision, [&]<class Real>() {
        Sink sink(o.out, o.format);
        auto prov = base_provenance(o);
        auto io = parse_integrate_options<Real>(o);
        io.depth = o.depth;

        XWeightSpec<Real> spec;
        bool have_expected = false;
        Real expected(0);
        if (o.oracle_level > 0) {
            const Real eps = scalar_from_string<Real>(o.oracle_eps);
            if (!(eps > 0)) throw std::domain_error("integrate: oracle eps must be positive");
            spec.t_power = Real(-1);
            spec.x_powers.assign(std::size_t(o.oracle_level), Real(1));
            spec.x_powers.back() = Real(1) + eps;
            spec.scale = Real(1);
            expected = Real(1) / eps;
            have_expected = true;
            prov.insert(prov.end(), {{"oracle_level", std::to_string(o.oracle_level)},
                                     {"oracle_eps", o.oracle_eps}});
        } else {
            spec.t_power = scalar_from_string<Real>(o.t_power);
            spec.x_powers = parse_list<Real>(o.x_powers);
            spec.scale = scalar_from_string<Real>(o.scale);
            spec.cutoff_power = scalar_from_string<Real>(o.cutoff_power);
            spec.cutoff = CutoffSpec<Real>{scalar_from_string<Real>(o.cutoff_flat),
                                           scalar_from_string<Real>(o.cutoff_support)};
            std::string xp;
            for (std::size_t i = 0; i < o.x_powers.size(); ++i)
                xp += (i ? ";" : "") + o.x_powers[i];
            prov.insert(prov.end(), {{"t_power", o.t_power},
                                     {"x_powers", xp.empty() ? "none" : xp},
                                     {"scale", o.scale},
                                     {"cutoff_power", o.cutoff_power}});
        }
        prov.insert(prov.end(), {{"a", o.a}, {"b", o.b}, {"tol", o.tol}});
        sink.provenance("integrate", prov);

        const Real a = (o.oracle_level > 0) ? Real(0) : scalar_from_string<Real>(o.a);
        const Real b = (o.oracle_level > 0) ? Real(1) : scalar_from_string<Real>(o.b);
        auto res = integrate_x_weight(spec, a, b, io);

        std::vector<std::string> cols{"value",  "error", "evals",    "panels",
                                      "depth",  "converged"};
        if (have_expected) cols.insert(cols.end(), {"expected", "rel_err"});
        sink.header(cols);
        std::vector<std::string> row{scalar_to_string(res.value), scalar_to_string(res.error),
                                     std::to_string(res.evals),   std::to_string(res.panels),
                                     std::to_string(res.depth),   res.converged ? "true" : "false"};
        if (have_expected) {
            const Real rel = scalar_abs(res.value - expected) / scalar_abs(expected);
            row.insert(row.end(), {scalar_to_string(expected), scalar_to_string(rel)});
        }
        sink.row(row);
        sink.flush_and_check();
        return res.converged ? 0 : 3;
    });
}

// ---------------------------------------------------------------------------
// check-inequality
// ---------------------------------------------------------------------------

int cmd_check_inequality(const Opts& o) {
    return with_precision(o.precision, [&]<class Real>() {
        Sink sink(o.out, o.format);
        auto params = parse_params<Real>(o);
        std::vector<Real> eps = parse_list<Real>(o.eps);
        if (eps.empty()) eps = {Real(1) / 10, Real(1) / 10};
        auto prov = base_provenance(o);
        std::string eps_str;
        for (std::size_t i = 0; i < eps.size(); ++i)
            eps_str += (i ? ";" : "") + scalar_to_string(eps[i]);
        prov.insert(prov.end(), {{"m", o.m},
                                 {"p", o.p},
                                 {"gamma", o.gamma},
                                 {"k", o.k},
                                 {"D", scalar_to_string(params.scale())},
                                 {"R", o.R},
                                 {"eps", eps_str},
                                 {"tol", o.tol}});
        sink.provenance("check-inequality", prov);

        auto rep = inequality_sides(params, eps, o.series_terms, parse_integrate_options<Real>(o),
                                    o.allow_star);
        sink.header({"quantity", "value"});
        sink.row({"A", scalar_to_string(rep.a_const)});
        sink.row({"B", scalar_to_string(rep.b_const)});
        sink.row({"lhs", scalar_to_string(rep.lhs.value)});
        sink.row({"lhs_error", scalar_to_string(rep.lhs.error)});
        sink.row({"leading", scalar_to_string(rep.leading.value)});
        sink.row({"leading_error", scalar_to_string(rep.leading.error)});
        for (std::size_t i = 0; i < rep.series.size(); ++i) {
            sink.row({"series_" + std::to_string(i + 1), scalar_to_string(rep.series[i].value)});
            sink.row({"series_" + std::to_string(i + 1) + "_error",
                      scalar_to_string(rep.series[i].error)});
        }
        sink.row({"rhs_total", scalar_to_string(rep.rhs_total)});
        sink.row({"remainder", scalar_to_string(rep.remainder)});
        sink.row({"error_budget", scalar_to_string(rep.error_budget)});
        sink.row({"all_converged", rep.all_converged ? "true" : "false"});
        sink.flush_and_check();
        return rep.all_converged ? 0 : 3;
    });
}

// ---------------------------------------------------------------------------
// sharpness-A
// ---------------------------------------------------------------------------

int cmd_sharpness_a(const Opts& o) {
    return with_precision(o.precision, [&]<class Real>() {
        Sink sink(o.out, o.format);
        auto params = parse_params<Real>(o);
        auto prov = base_provenance(o);
        prov.insert(prov.end(),
                    {{"m", o.m}, {"p", o.p}, {"gamma", o.gamma}, {"k", o.k}, {"tol", o.tol}});
        sink.provenance("sharpness-A", prov);

        auto rep = sharpness_a_sweep(params, parse_list<Real>(o.eps),
                                     parse_integrate_options<Real>(o));
        sink.header({"eps_0", "quotient_A", "gap", "gap_ratio"});
        for (std::size_t i = 0; i < rep.points.size(); ++i) {
            const auto& pt = rep.points[i];
            const Real gap = pt.quotient - rep.a_exact;
            std::string ratio;
            if (i > 0) {
                const Real prev_gap = rep.points[i - 1].quotient - rep.a_exact;
                if (gap != 0) ratio = scalar_to_string(prev_gap / gap);
            }
            sink.row({scalar_to_string(pt.eps0), scalar_to_string(pt.quotient),
                      scalar_to_string(gap), ratio});
        }
        sink.row({"richardson", scalar_to_string(rep.richardson),
                  scalar_to_string(rep.richardson - rep.a_exact), ""});
        sink.flush_and_check();
        return rep.all_converged ? 0 : 3;
    });
}

// ---------------------------------------------------------------------------
// sharpness-B
// ---------------------------------------------------------------------------

int cmd_sharpness_b(const Opts& o) {
    return with_precision(o.precision, [&]<class Real>() {
        Sink sink(o.out, o.format);
        auto params = parse_params<Real>(o);
        auto prov = base_provenance(o);
        prov.insert(prov.end(), {{"m", o.m},
                                 {"p", o.p},
                                 {"gamma", o.gamma},
                                 {"k", o.k},
                                 {"theta", o.theta},
                                 {"tol", o.tol}});
        sink.provenance("sharpness-B", prov);

        auto rep = sharpness_b_schedule(params, scalar_from_string<Real>(o.theta),
                                        parse_list<Real>(o.eps1_schedule),
                                        parse_list<Real>(o.eps0_grid),
                                        parse_integrate_options<Real>(o));
        sink.header({"eps_1", "eps_0", "quotient", "extrapolated"});
        for (const auto& step : rep.steps) {
            for (std::size_t i = 0; i < step.quotients.size(); ++i) {
                const bool last = (i + 1 == step.quotients.size());
                sink.row({scalar_to_string(step.eps1), scalar_to_string(step.eps0_grid[i]),
                          scalar_to_string(step.quotients[i]),
                          last ? scalar_to_string(step.extrapolated) : ""});
            }
        }
        sink.row({"decreasing", rep.decreasing ? "true" : "false", "", ""});
        sink.flush_and_check();
        return rep.all_converged ? 0 : 3;
    });
}

// ---------------------------------------------------------------------------
// d-sweep
// ---------------------------------------------------------------------------

int cmd_d_sweep(const Opts& o) {
    return with_precision(o.precision, [&]<class Real>() {
        using std::exp;
        Sink sink(o.out, o.format);
        auto params = parse_params<Real>(o);
        std::vector<Real> eps = parse_list<Real>(o.eps);
        if (eps.empty()) eps = {Real(1) / 10, Real(1) / 10};
        std::vector<Real> ds = parse_list<Real>(o.d_values);
        if (ds.empty()) {
            const Real base = exp(Real(1)) * params.R;
            ds = {base, 2 * base, 4 * base, 8 * base};
        }
        auto prov = base_provenance(o);
        prov.insert(prov.end(),
                    {{"m", o.m}, {"p", o.p}, {"gamma", o.gamma}, {"k", o.k}, {"tol", o.tol}});
        sink.provenance("d-sweep", prov);

        auto entries = d_scale_sweep(params, eps, ds, o.series_terms,
                                     parse_integrate_options<Real>(o));
        std::vector<std::string> cols{"D", "lhs", "rhs_total", "remainder", "error_budget"};
        const std::size_t terms = entries.empty() ? 0 : entries.front().sides.series.size();
        for (std::size_t i = 1; i <= terms; ++i) cols.push_back("series_" + std::to_string(i));
        cols.push_back("converged");
        sink.header(cols);

        bool all_ok = true;
        for (const auto& e : entries) {
            all_ok = all_ok && e.sides.all_converged;
            std::vector<std::string> row{
                scalar_to_string(e.d_scale), scalar_to_string(e.sides.lhs.value),
                scalar_to_string(e.sides.rhs_total), scalar_to_string(e.sides.remainder),
                scalar_to_string(e.sides.error_budget)};
            for (const auto& s : e.sides.series) row.push_back(scalar_to_string(s.value));
            row.push_back(e.sides.all_converged ? "true" : "false");
            sink.row(row);
        }
        sink.flush_and_check();
        return all_ok ? 0 : 3;
    });
}

// ---------------------------------------------------------------------------
// schema
// ---------------------------------------------------------------------------

int cmd_schema(const Opts& o) {
    Sink sink(o.out, "csv");  // plain text table regardless of --format
    sink.provenance("schema", base_provenance(o));
    sink.header({"command", "columns"});
    sink.row({"constants", "quantity,value"});
    sink.row({"identities", "identity,m,p,gamma,k,lhs,rhs,rel_err,exact,pass"});
    sink.row({"tabulate-iterlog", "t,X1..Xr,eta,zeta,theta,terms,converged"});
    sink.row({"integrate", "value,error,evals,panels,depth,converged[,expected,rel_err]"});
    sink.row({"check-inequality", "quantity,value"});
    sink.row({"sharpness-A", "eps_0,quotient_A,gap,gap_ratio"});
    sink.row({"sharpness-B", "eps_1,eps_0,quotient,extrapolated"});
    sink.row({"d-sweep", "D,lhs,rhs_total,remainder,error_budget,series_i...,converged"});
    sink.flush_and_check();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sharp-constant and sharpness toolkit for higher-order Hardy-Rellich inequalities"};
    app.require_subcommand(1);

    Opts o;
    // shared flags; registered per subcommand so they show in each --help
    auto add_common = [&](CLI::App* sub, bool with_params) {
        sub->add_option("--precision", o.precision, "working precision in decimal digits (>= 30)")
            ->check(CLI::Range(30, 100000));
        sub->add_option("--tol", o.tol, "quadrature tolerance (absolute and relative)");
        sub->add_option("--out", o.out, "output path, - for stdout");
        sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", o.seed, "seed for random parameter grids");
        sub->add_flag("--allow-star-violation", o.allow_star,
                      "proceed when condition (*) fails");
        if (with_params) {
            sub->add_option("--m", o.m, "inequality order");
            sub->add_option("--p", o.p, "integrability exponent");
            sub->add_option("--gamma", o.gamma, "weight exponent");
            sub->add_option("--k", o.k, "codimension");
            sub->add_option("--D", o.D, "X-scale (0: use e*R)");
            sub->add_option("--R", o.R, "support radius");
            sub->add_option("--r", o.r, "number of iterated-log levels");
            sub->add_option("--eps", o.eps, "eps_0[,eps_1,...]")->delimiter(',');
        }
    };

    auto* c_const = app.add_subcommand("constants", "sharp constants A, B and friends");
    add_common(c_const, true);

    auto* c_ident = app.add_subcommand("identities", "exact random identity suite");
    add_common(c_ident, false);
    c_ident->add_option("--max-m", o.max_m, "largest inequality order");
    c_ident->add_option("--trials", o.trials, "number of random tuples");

    auto* c_tab = app.add_subcommand("tabulate-iterlog", "table of X_i, eta, zeta, theta");
    add_common(c_tab, false);
    c_tab->add_option("--t-lo", o.t_lo);
    c_tab->add_option("--t-hi", o.t_hi);
    c_tab->add_option("--count", o.count);
    c_tab->add_option("--r", o.r, "number of X columns");
    c_tab->add_option("--scale", o.scale);

    auto* c_int = app.add_subcommand("integrate", "singular X-weight integral");
    add_common(c_int, false);
    c_int->add_option("--t-power", o.t_power);
    c_int->add_option("--x-powers", o.x_powers)->delimiter(',');
    c_int->add_option("--scale", o.scale);
    c_int->add_option("--a", o.a);
    c_int->add_option("--b", o.b);
    c_int->add_option("--cutoff-power", o.cutoff_power);
    c_int->add_option("--cutoff-flat", o.cutoff_flat);
    c_int->add_option("--cutoff-support", o.cutoff_support);
    c_int->add_option("--depth", o.depth, "substitution depth (-1: auto)");
    c_int->add_option("--oracle-level", o.oracle_level,
                      "closed-form check: integral of t^-1 X_1..X_{i-1} X_i^{1+eps} = 1/eps");
    c_int->add_option("--oracle-eps", o.oracle_eps);

    auto* c_chk = app.add_subcommand("check-inequality", "both sides along one probe");
    add_common(c_chk, true);
    c_chk->add_option("--series-terms", o.series_terms, "series terms on the right (-1: all)");

    auto* c_sa = app.add_subcommand("sharpness-A", "leading-constant sharpness sweep");
    add_common(c_sa, true);

    auto* c_sb = app.add_subcommand("sharpness-B", "series-constant sequential schedule");
    add_common(c_sb, true);
    c_sb->add_option("--theta", o.theta, "final X-weight (2: series weight, 1: critical)");
    c_sb->add_option("--eps1-schedule", o.eps1_schedule)->delimiter(',');
    c_sb->add_option("--eps0-grid", o.eps0_grid)->delimiter(',');

    auto* c_dsw = app.add_subcommand("d-sweep", "inner-scale sweep of the remainder");
    add_common(c_dsw, true);
    c_dsw->add_option("--d-values", o.d_values)->delimiter(',');
    c_dsw->add_option("--series-terms", o.series_terms);

    auto* c_schema = app.add_subcommand("schema", "column layout of every command");
    add_common(c_schema, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_const->parsed()) return cmd_constants(o);
        if (c_ident->parsed()) return cmd_identities(o);
        if (c_tab->parsed()) return cmd_tabulate_iterlog(o);
        if (c_int->parsed()) return cmd_integrate(o);
        if (c_chk->parsed()) return cmd_check_inequality(o);
        if (c_sa->parsed()) return cmd_sharpness_a(o);
        if (c_sb->parsed()) return cmd_sharpness_b(o);
        if (c_dsw->parsed()) return cmd_d_sweep(o);
        if (c_schema->parsed()) return cmd_schema(o);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
