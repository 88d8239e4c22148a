#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srqsd/srqsd.hpp"

namespace {

using ojson = nlohmann::ordered_json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const ojson& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return g17(v.get<double>());
    return v.dump();
}

struct Table {
    std::vector<std::string> names;
    std::vector<ojson> cols;

    void add(std::string name, ojson col) {
        names.push_back(std::move(name));
        cols.push_back(std::move(col));
    }
    void add(std::string name, const std::vector<double>& col) {
        add(std::move(name), ojson(col));
    }
};

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.names.size(); ++i) {
        if (i > 0) out += ',';
        out += t.names[i];
    }
    out += '\n';
    const std::size_t rows = t.cols.empty() ? 0 : t.cols.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < t.cols.size(); ++c) {
            if (c > 0) out += ',';
            out += csv_cell(t.cols[c].at(r));
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& t, ojson metadata) {
    ojson doc;
    doc["metadata"] = std::move(metadata);
    ojson cols = ojson::object();
    for (std::size_t i = 0; i < t.names.size(); ++i) cols[t.names[i]] = t.cols[i];
    doc["columns"] = std::move(cols);
    return doc.dump(2) + "\n";
}

struct CommonOpts {
    std::vector<double> As;
    std::string format = "csv";
    std::string output;
    srqsd::QuadratureSpec quad;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--A", c.As, "absorbing threshold A (repeatable)")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", c.output, "write to this file instead of stdout");
    cmd->add_option("--quad-rel-tol", c.quad.rel_tol, "quadrature relative tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--quad-abs-tol", c.quad.abs_tol, "quadrature absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

struct GridOpts {
    std::size_t points = 256;
    std::string kind = "log";
    std::vector<std::string> bounds;
};

void add_grid(CLI::App* cmd, GridOpts& g, bool with_bounds) {
    cmd->add_option("--grid-points", g.points, "number of abscissae on (A/1000, A]")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
        ->capture_default_str();
    cmd->add_option("--grid-kind", g.kind, "grid spacing")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    if (with_bounds)
        cmd->add_option("--bounds", g.bounds,
                        "comma-separated bound names to tabulate alongside the "
                        "exact curve")
            ->delimiter(',');
}

struct McOpts {
    std::size_t paths = 50000;
    std::uint64_t seed = 0;
    double dt = 1e-3;
    double t_end = 100.0;
    double r0 = -1.0;
};

void add_mc(CLI::App* cmd, McOpts& m) {
    cmd->add_option("--paths", m.paths, "simulated paths per run")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
        ->capture_default_str();
    cmd->add_option("--seed", m.seed, "base seed of the per-path substreams")
        ->capture_default_str();
    cmd->add_option("--dt", m.dt, "Euler step")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--t-end", m.t_end, "time horizon of the law checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--r0", m.r0, "start point (default A/4)");
}

unsigned env_threads() {
    const char* s = std::getenv("QSD_SR_THREADS");
    if (s == nullptr || *s == '\0') return 0;
    char* end = nullptr;
    const unsigned long v = std::strtoul(s, &end, 10);
    if (end == s || *end != '\0')
        throw std::domain_error(std::string("QSD_SR_THREADS: not a thread count: ") + s);
    return static_cast<unsigned>(v > 1024 ? 1024 : v);
}

const char* regime_name(const srqsd::EigenContext& ctx) {
    return ctx.regime == srqsd::OrderRegime::real_order ? "real-order" : "imaginary-order";
}

ojson version_block() {
    return ojson{{"srqsd", srqsd::version},
                 {"cli11", CLI11_VERSION},
                 {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

ojson metadata_for(const char* command, const std::vector<srqsd::EigenContext>& ctxs,
                   ojson seed = nullptr) {
    ojson m;
    m["command"] = command;
    if (ctxs.size() == 1) {
        m["A"] = ctxs.front().A;
        m["lambda"] = ctxs.front().lambda;
        m["regime"] = regime_name(ctxs.front());
    } else {
        ojson a = ojson::array(), l = ojson::array(), r = ojson::array();
        for (const auto& c : ctxs) {
            a.push_back(c.A);
            l.push_back(c.lambda);
            r.push_back(regime_name(c));
        }
        m["A"] = std::move(a);
        m["lambda"] = std::move(l);
        m["regime"] = std::move(r);
    }
    m["versions"] = version_block();
    m["seed"] = std::move(seed);
    return m;
}

void emit(const CommonOpts& c, const Table& t, const ojson& metadata) {
    const std::string text = c.format == "json" ? render_json(t, metadata) : render_csv(t);
    if (c.output.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        std::ofstream f(c.output, std::ios::binary);
        if (!f) throw std::domain_error("cannot open output file: " + c.output);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
    }
}

std::vector<srqsd::EigenContext> solve_all(const CommonOpts& c) {
    std::vector<srqsd::EigenContext> ctxs;
    ctxs.reserve(c.As.size());
    for (double a : c.As) ctxs.push_back(srqsd::solve_lambda(a, {}, c.quad));
    return ctxs;
}

const srqsd::EigenContext& single(const char* cmd,
                                  const std::vector<srqsd::EigenContext>& ctxs) {
    if (ctxs.size() != 1)
        throw std::domain_error(std::string(cmd) +
                                ": one --A expected (grid tables are per threshold)");
    return ctxs.front();
}

std::vector<double> command_grid(const srqsd::EigenContext& ctx, const GridOpts& g) {
    const auto kind =
        g.kind == "linear" ? srqsd::GridKind::linear : srqsd::GridKind::logarithmic;
    return srqsd::make_grid(1e-3 * ctx.A, ctx.A, g.points, kind);
}

int run_lambda(const CommonOpts& c) {
    const auto ctxs = solve_all(c);
    std::vector<double> A, lam, blo, bhi, ls, lg, ue, res;
    ojson lm = ojson::array(), reg = ojson::array();
    for (const auto& ctx : ctxs) {
        const auto [lo, hi] = srqsd::lambda_bracket_classic(ctx.A);
        A.push_back(ctx.A);
        lam.push_back(ctx.lambda);
        blo.push_back(lo);
        bhi.push_back(hi);
        ls.push_back(srqsd::lambda_lower_simple(ctx.A));
        lg.push_back(srqsd::lambda_lower_gamma(ctx.A));
        if (ctx.regime == srqsd::OrderRegime::real_order)
            lm.push_back(srqsd::lambda_lower_moment(ctx.A, c.quad));
        else
            lm.push_back(nullptr);
        ue.push_back(srqsd::lambda_upper_e1(ctx.A));
        res.push_back(ctx.residual);
        reg.push_back(regime_name(ctx));
    }
    Table t;
    t.add("A", A);
    t.add("lambda", lam);
    t.add("bracket_lo", blo);
    t.add("bracket_hi", bhi);
    t.add("lower_simple", ls);
    t.add("lower_gamma", lg);
    t.add("lower_moment", std::move(lm));
    t.add("upper_e1", ue);
    t.add("residual", res);
    t.add("regime", std::move(reg));
    emit(c, t, metadata_for("lambda", ctxs));
    return 0;
}

bool bound_applicable(const srqsd::BoundInfo& info, const srqsd::EigenContext& ctx) {
    switch (info.domain) {
    case srqsd::ThresholdDomain::any_threshold: return true;
    case srqsd::ThresholdDomain::at_or_above_order_zero: return ctx.s >= 0.0;
    case srqsd::ThresholdDomain::above_order_zero: return ctx.s > 0.0;
    }
    return false;
}

std::vector<srqsd::BoundKind> select_bounds(const GridOpts& g, const srqsd::EigenContext& ctx,
                                            const char* cmd, bool want_pdf, bool want_cdf) {
    std::vector<srqsd::BoundKind> kinds;
    if (g.bounds.empty()) {
        for (srqsd::BoundKind k : srqsd::all_bound_kinds) {
            const auto& info = srqsd::bound_info(k);
            const bool match = (info.target == srqsd::BoundTarget::pdf && want_pdf) ||
                               (info.target == srqsd::BoundTarget::cdf && want_cdf);
            if (match && bound_applicable(info, ctx)) kinds.push_back(k);
        }
        return kinds;
    }
    for (const std::string& name : g.bounds) {
        const srqsd::BoundKind k = srqsd::bound_kind_from_name(name);
        const auto& info = srqsd::bound_info(k);
        if (info.target == srqsd::BoundTarget::pdf && !want_pdf)
            throw std::domain_error(std::string(cmd) + ": " + name +
                                    " envelopes the pdf; use the pdf or bounds command");
        if (info.target == srqsd::BoundTarget::cdf && !want_cdf)
            throw std::domain_error(std::string(cmd) + ": " + name +
                                    " envelopes the cdf; use the cdf or bounds command");
        kinds.push_back(k);
    }
    return kinds;
}

void append_bound_columns(Table& t, const std::vector<srqsd::BoundKind>& kinds,
                          const srqsd::EigenContext& ctx, const std::vector<double>& xs,
                          const std::vector<double>& Q, const std::vector<double>& q,
                          const srqsd::QuadratureSpec& quad) {
    for (srqsd::BoundKind k : kinds) {
        const auto& info = srqsd::bound_info(k);
        const bool pdf_target = info.target == srqsd::BoundTarget::pdf;
        std::vector<double> vals(xs.size()), errs(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            vals[i] = pdf_target ? srqsd::pdf_bound(k, ctx, xs[i], Q[i], quad)
                                 : srqsd::cdf_bound(k, ctx, xs[i], quad);
            errs[i] = vals[i] - (pdf_target ? q[i] : Q[i]);
        }
        t.add(info.name, vals);
        t.add(std::string(info.name) + "_err", errs);
    }
}

int run_table(const char* cmd, const CommonOpts& c, const GridOpts& g, bool want_pdf,
              bool want_cdf) {
    const auto ctxs = solve_all(c);
    const auto& ctx = single(cmd, ctxs);
    const auto xs = command_grid(ctx, g);
    std::vector<double> Q(xs.size()), q(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Q[i] = srqsd::qsd_cdf(ctx, xs[i], c.quad);
        if (want_pdf) q[i] = srqsd::qsd_pdf(ctx, xs[i], srqsd::Representation::derivative_form, c.quad);
    }
    Table t;
    t.add("x", xs);
    if (want_pdf) t.add("q", q);
    if (want_cdf) t.add("Q", Q);
    const auto kinds = select_bounds(g, ctx, cmd, want_pdf, want_cdf);
    append_bound_columns(t, kinds, ctx, xs, Q, q, c.quad);
    emit(c, t, metadata_for(cmd, ctxs));
    return 0;
}

int run_gap(const CommonOpts& c, const GridOpts& g) {
    const auto ctxs = solve_all(c);
    std::vector<double> A, lam, xstar, xup, gsup, sbound;
    for (const auto& ctx : ctxs) {
        const double xs_root = srqsd::gap_xstar(ctx.A);
        double sup = 0.0;
        for (double x : command_grid(ctx, g)) {
            const double gap = srqsd::qsd_cdf(ctx, x, c.quad) - srqsd::stationary_cdf(x);
            if (gap > sup) sup = gap;
        }
        A.push_back(ctx.A);
        lam.push_back(ctx.lambda);
        xstar.push_back(xs_root);
        xup.push_back(srqsd::gap_xstar_upper(ctx.A));
        gsup.push_back(sup);
        sbound.push_back(srqsd::gap_sup_bound(ctx.A));
    }
    Table t;
    t.add("A", A);
    t.add("lambda", lam);
    t.add("xstar", xstar);
    t.add("xstar_upper", xup);
    t.add("grid_sup_gap", gsup);
    t.add("sup_bound", sbound);
    emit(c, t, metadata_for("gap", ctxs));
    return 0;
}

int run_sadd(const CommonOpts& c) {
    const auto ctxs = solve_all(c);
    std::vector<double> A, lam, ex, bg, bs, bl, qe;
    for (const auto& ctx : ctxs) {
        const srqsd::SaddResult r = srqsd::sadd_report(ctx, c.quad);
        A.push_back(r.A);
        lam.push_back(ctx.lambda);
        ex.push_back(r.sadd_exact);
        bg.push_back(r.bound_gamma);
        bs.push_back(r.bound_simple);
        bl.push_back(r.bound_l5);
        qe.push_back(r.quadrature_err);
    }
    Table t;
    t.add("A", A);
    t.add("lambda", lam);
    t.add("sadd_exact", ex);
    t.add("bound_gamma", bg);
    t.add("bound_simple", bs);
    t.add("bound_l5", bl);
    t.add("quadrature_err", qe);
    emit(c, t, metadata_for("sadd", ctxs));
    return 0;
}

int run_validate(const CommonOpts& c, const McOpts& m) {
    const unsigned threads = env_threads();
    const auto ctxs = solve_all(c);
    std::vector<double> A, paths, survivors, stat, limit;
    ojson check = ojson::array(), pass = ojson::array();
    bool all_pass = true;
    auto push = [&](double a, const char* name, std::size_t n, std::size_t surv, double s,
                    double lim) {
        A.push_back(a);
        check.push_back(name);
        paths.push_back(static_cast<double>(n));
        survivors.push_back(static_cast<double>(surv));
        stat.push_back(s);
        limit.push_back(lim);
        const bool ok = s <= lim;
        pass.push_back(ok);
        all_pass = all_pass && ok;
    };
    for (const auto& ctx : ctxs) {
        const double r0 = m.r0 >= 0.0 ? m.r0 : ctx.A / 4.0;
        srqsd::McConfig killed;
        killed.A = ctx.A;
        killed.r0 = r0;
        killed.dt = m.dt;
        killed.t_end = m.t_end;
        killed.n_paths = m.paths;
        killed.seed = m.seed;
        for (int i = 1; i <= 40; ++i)
            killed.grid.push_back(ctx.A * static_cast<double>(i) / 41.0);
        const auto ek = srqsd::simulate_killed(killed, threads);
        const double ks_k =
            ek.ks_against([&](double x) { return srqsd::qsd_cdf(ctx, x, c.quad); });
        push(ctx.A, "killed_ks", m.paths, ek.survivors, ks_k, 3.0 * ek.max_std_err());

        srqsd::McConfig open = killed;
        open.A = std::numeric_limits<double>::infinity();
        open.grid.clear();
        for (int i = 1; i <= 40; ++i) open.grid.push_back(0.5 * static_cast<double>(i));
        const auto eu = srqsd::simulate_unrestricted(open, threads);
        const double ks_u = eu.ks_against(srqsd::stationary_cdf);
        push(ctx.A, "unrestricted_ks", m.paths, eu.survivors, ks_u, 3.0 * eu.max_std_err());

        srqsd::McConfig mart = open;
        mart.t_end = 1.0;
        mart.grid.clear();
        const auto em = srqsd::simulate_unrestricted(mart, threads);
        const double drift_gap = std::fabs(em.terminal_mean() - (r0 + mart.t_end));
        const double se = em.terminal_stddev() / std::sqrt(static_cast<double>(m.paths));
        push(ctx.A, "martingale_mean", m.paths, em.survivors, drift_gap, 4.0 * se);
    }
    Table t;
    t.add("A", A);
    t.add("check", std::move(check));
    t.add("paths", paths);
    t.add("survivors", survivors);
    t.add("statistic", stat);
    t.add("limit", limit);
    t.add("pass", std::move(pass));
    emit(c, t, metadata_for("validate", ctxs, ojson(m.seed)));
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Quasi-stationary law of the Shiryaev-Roberts diffusion dR = dt + R dB killed "
        "at a level A: principal eigenvalue, pdf/cdf with analytic envelopes, "
        "stationary-gap and detection-delay reports, Monte Carlo validation."};
    app.require_subcommand(1);

    CommonOpts c_lambda, c_pdf, c_cdf, c_bounds, c_gap, c_sadd, c_validate;
    GridOpts g_pdf, g_cdf, g_bounds, g_gap;
    McOpts mc;

    auto* s_lambda =
        app.add_subcommand("lambda", "solve the principal eigenvalue with bracket and bounds");
    add_common(s_lambda, c_lambda);
    auto* s_pdf = app.add_subcommand("pdf", "tabulate the quasi-stationary pdf on a grid");
    add_common(s_pdf, c_pdf);
    add_grid(s_pdf, g_pdf, true);
    auto* s_cdf = app.add_subcommand("cdf", "tabulate the quasi-stationary cdf on a grid");
    add_common(s_cdf, c_cdf);
    add_grid(s_cdf, g_cdf, true);
    auto* s_bounds =
        app.add_subcommand("bounds", "tabulate pdf and cdf with every applicable envelope");
    add_common(s_bounds, c_bounds);
    add_grid(s_bounds, g_bounds, true);
    auto* s_gap = app.add_subcommand(
        "gap", "quantify the gap between the quasi-stationary and stationary cdfs");
    add_common(s_gap, c_gap);
    add_grid(s_gap, g_gap, false);
    auto* s_sadd = app.add_subcommand(
        "sadd", "worst-case detection delay of the quasi-stationary-start procedure");
    add_common(s_sadd, c_sadd);
    auto* s_validate =
        app.add_subcommand("validate", "cross-check the analytic laws by simulation");
    add_common(s_validate, c_validate);
    add_mc(s_validate, mc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(s_lambda)) return run_lambda(c_lambda);
        if (app.got_subcommand(s_pdf)) return run_table("pdf", c_pdf, g_pdf, true, false);
        if (app.got_subcommand(s_cdf)) return run_table("cdf", c_cdf, g_cdf, false, true);
        if (app.got_subcommand(s_bounds)) return run_table("bounds", c_bounds, g_bounds, true, true);
        if (app.got_subcommand(s_gap)) return run_gap(c_gap, g_gap);
        if (app.got_subcommand(s_sadd)) return run_sadd(c_sadd);
        if (app.got_subcommand(s_validate)) return run_validate(c_validate, mc);
    } catch (const srqsd::accuracy_error& e) {
        std::fprintf(stderr, "srqsd: %s\n", e.what());
        return 2;
    } catch (const srqsd::bracket_error& e) {
        std::fprintf(stderr, "srqsd: %s\n", e.what());
        return 2;
    } catch (const srqsd::convergence_error& e) {
        std::fprintf(stderr, "srqsd: %s\n", e.what());
        return 2;
    } catch (const srqsd::degeneracy_error& e) {
        std::fprintf(stderr, "srqsd: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "srqsd: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "srqsd: %s\n", e.what());
        return 2;
    }
    return 0;
}
