// psh: command-line front end. Artifacts are CSV (with a "# {config}" header line) or JSON.
// Exit codes: 0 success, 1 errors, 2 when a --expect assertion fails.
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psh/compose.hpp"
#include "psh/errors.hpp"
#include "psh/expr.hpp"
#include "psh/factor.hpp"
#include "psh/reproduce.hpp"

using json = nlohmann::ordered_json;
using namespace psh;

namespace {

struct Settings {
    std::string exhaustion = "paper-u";
    std::string frame = "disc";
    std::size_t grid = 4096;
    double tol_1d = 1e-8;
    double tol_2d = 1e-6;
    std::string out;
    std::string format = "csv";
    std::string expect;
    bool timestamp = false;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

QuadConfig quad_config(const Settings& s) {
    QuadConfig q;
    q.tol_1d = s.tol_1d;
    q.tol_2d = s.tol_2d;
    return q;
}

json base_config(const std::string& command, const Settings& s) {
    json c;
    c["command"] = command;
    c["exhaustion"] = s.exhaustion;
    c["frame"] = s.frame;
    c["grid"] = s.grid;
    c["tol_1d"] = s.tol_1d;
    c["tol_2d"] = s.tol_2d;
    c["format"] = s.format;
    c["out"] = s.out;
    c["expect"] = s.expect;
    c["threads"] = worker_threads();
    if (s.timestamp) c["timestamp"] = static_cast<long long>(std::time(nullptr));
    return c;
}

void write_text(const Settings& s, const std::string& text) {
    if (s.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(s.out);
    if (!f) throw Error("cannot write " + s.out);
    f << text;
}

std::string csv_text(const json& config, const Table& t) {
    std::ostringstream os;
    os << "# " << config.dump() << "\n";
    for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            std::string cell = r[k];
            if (cell.find_first_of(",\"\n") != std::string::npos) {
                std::string q = "\"";
                for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
                cell = q + "\"";
            }
            os << (k ? "," : "") << cell;
        }
        os << "\n";
    }
    return os.str();
}

void emit_table(const Settings& s, const json& config, const Table& t) {
    if (s.format == "json") {
        json j;
        j["config"] = config;
        j["columns"] = t.columns;
        j["rows"] = t.rows;
        write_text(s, j.dump(2) + "\n");
    } else {
        write_text(s, csv_text(config, t));
    }
}

void emit_json(const Settings& s, const json& config, json result) {
    json j;
    j["config"] = config;
    j["result"] = std::move(result);
    write_text(s, j.dump(2) + "\n");
}

json verdict_json(const Verdict& v) {
    json j;
    j["outcome"] = to_string(v.outcome);
    j["diagnostics"] = v.diagnostics;
    j["exponent"] = v.exponent;
    j["norm"] = v.norm ? json(*v.norm) : json(nullptr);
    if (v.witness) {
        json w;
        w["function"] = v.witness->function;
        w["parameter"] = v.witness->parameter;
        const auto& r = v.witness->report;
        w["report"] = {{"verdict", to_string(r.verdict)},
                       {"fitted_growth_exponent", r.fitted_growth_exponent},
                       {"exclusion_radii", r.exclusion_radii},
                       {"partial_values", r.partial_values},
                       {"note", r.note}};
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

// f given in domain coordinates; its trace is read at psi(e^{it})
HardyFunction function_on_frame(const std::string& expr, const ConformalFrame& frame, double q = 0.0) {
    if (frame.is_disc()) return hardy_from_expr(expr, {}, q);
    Expr e = Expr::parse(expr);
    auto f = [e, q](cplx z) { return e(z, q); };
    auto pulled = [f, frame](cplx z) { return f(frame.psi(z)); };
    HardyFunction h = hardy_from_callable(expr, f, detect_singularities(pulled),
                                          [pulled](double t) { return radial_limit(pulled, t); });
    return h;
}

BoundaryDensityPtr density(const Settings& s) {
    DensityOptions o;
    o.grid = s.grid;
    o.quad = quad_config(s);
    return boundary_density(exhaustion_from_name(s.exhaustion, ConformalFrame::from_name(s.frame)), o);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) v.push_back(parse_real(item));
    return v;
}

std::vector<cplx> parse_zeros(const std::string& text) {
    std::vector<cplx> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) v.push_back(parse_complex(item));
    return v;
}

// "a:b:step", inclusive of b up to rounding
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_real(item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) throw ParseError("grid must be a:b:step");
    std::vector<double> g;
    const int n = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (int k = 0; k <= n; ++k) g.push_back(std::round((parts[0] + k * parts[2]) * 1e12) / 1e12);
    return g;
}

int expect_code(const Settings& s, bool holds) {
    if (s.expect.empty()) return 0;
    const bool want = s.expect == "holds" || s.expect == "bounded" || s.expect == "member";
    return want == holds ? 0 : 2;
}

void add_common(CLI::App* c, Settings& s, bool with_exhaustion = true) {
    if (with_exhaustion) {
        c->add_option("--exhaustion", s.exhaustion, "green, green:<w>, paper-u or json:<path>")->capture_default_str();
        c->add_option("--frame", s.frame, "disc or poly:<eps>")->capture_default_str();
        c->add_option("--grid", s.grid, "boundary density grid size")->capture_default_str();
    }
    c->add_option("--tol-1d", s.tol_1d)->capture_default_str();
    c->add_option("--tol-2d", s.tol_2d)->capture_default_str();
    c->add_option("--out", s.out, "output path (stdout when empty)");
    c->add_option("--format", s.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    c->add_flag("--timestamp", s.timestamp, "record the wall-clock time in the config header");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hardy spaces over exhaustion functions"};
    app.require_subcommand(1);
    Settings s;

    auto* beta = app.add_subcommand("beta", "boundary density beta on its grid");
    add_common(beta, s);
    std::size_t points = 0;
    beta->add_option("--points", points, "uniform sample size instead of the density grid")->capture_default_str();

    auto* mass = app.add_subcommand("mass", "Monge-Ampere mass MA(u) and 2 pi MA(u)");
    add_common(mass, s);
    bool with_boundary = false;
    mass->add_flag("--boundary", with_boundary, "also integrate beta over the circle");

    auto* norm = app.add_subcommand("norm", "H^p_u norm by the boundary and Lelong-Jensen routes");
    add_common(norm, s);
    std::string fexpr, route = "both";
    double p = 1.0, q = 0.0;
    norm->add_option("--f", fexpr, "function of z")->required();
    norm->add_option("--p", p)->capture_default_str();
    norm->add_option("--q", q, "value bound to q in the expression")->capture_default_str();
    norm->add_option("--route", route)->check(CLI::IsMember({"boundary", "limit", "both"}))->capture_default_str();

    auto* memb = app.add_subcommand("membership", "classical and H^p_u membership verdicts");
    add_common(memb, s);
    std::string family, qgrid;
    memb->add_option("--f", fexpr, "function of z");
    memb->add_option("--family", family, "function of z and q");
    memb->add_option("--q-grid", qgrid, "a:b:step");
    memb->add_option("--q", q)->capture_default_str();
    memb->add_option("--p", p)->capture_default_str();
    memb->add_option("--expect", s.expect, "holds or fails (paper-u verdict, every row)")
        ->check(CLI::IsMember({"holds", "fails"}));

    auto* lj = app.add_subcommand("lj-check", "Lelong-Jensen pairing at levels r and its r -> 0- limit");
    add_common(lj, s);
    std::string phi = "abs(z)^2", lap = "4", levels = "-1,-0.5,-0.1";
    bool harmonic = false;
    lj->add_option("--phi", phi, "test function of z")->capture_default_str();
    lj->add_option("--laplacian", lap, "its Laplacian")->capture_default_str();
    lj->add_option("--levels", levels)->capture_default_str();
    lj->add_flag("--harmonic", harmonic, "phi is harmonic (Laplacian ignored)");

    auto* fz = app.add_subcommand("factorize", "f = B S F, factor verdicts and the H^2 split");
    add_common(fz, s);
    std::string zeros = "auto";
    fz->add_option("--f", fexpr)->required();
    fz->add_option("--zeros", zeros, "comma-separated zeros, or auto")->capture_default_str();
    fz->add_option("--p", p)->capture_default_str();
    fz->add_option("--expect", s.expect, "holds: every factor is a member")->check(CLI::IsMember({"holds", "fails"}));

    auto* cc = app.add_subcommand("compose-check", "boundedness of f -> f o phi on H^p_u");
    add_common(cc, s);
    std::string symbol, criterion = "auto";
    cc->add_option("--symbol", symbol, "mobius:A,THETA | rot:THETA | monomial:N | blaschke:A1,..[@THETA] | identity")
        ->required();
    cc->add_option("--p", p)->capture_default_str();
    cc->add_option("--criterion", criterion)->check(CLI::IsMember({"auto", "mobius", "counting"}))->capture_default_str();
    cc->add_option("--expect", s.expect, "bounded or unbounded")->check(CLI::IsMember({"bounded", "unbounded"}));

    auto* ap = app.add_subcommand("approx", "dilation gaps ||f - f_rho||");
    add_common(ap, s);
    std::string rhos = "0.9,0.99,0.999,0.9999";
    ap->add_option("--f", fexpr)->required();
    ap->add_option("--p", p)->capture_default_str();
    ap->add_option("--rhos", rhos)->capture_default_str();

    auto* rp = app.add_subcommand("reproduce", "regenerate the acceptance tables");
    add_common(rp, s, false);
    rp->add_option("--grid", s.grid)->capture_default_str();
    std::string case_id = "all", out_dir;
    rp->add_option("--case", case_id, "case id or all")->capture_default_str();
    rp->add_option("--out-dir", out_dir, "one CSV per case (stdout when empty)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const QuadConfig cfg = quad_config(s);
        const ConformalFrame frame = ConformalFrame::from_name(s.frame);

        if (*beta) {
            json c = base_config("beta", s);
            c["points"] = points;
            auto bd = density(s);
            Table t{{"t", "beta", "tag_distance"}, {}};
            std::vector<double> ts = bd->grid_t();
            if (points > 0) {
                ts.clear();
                for (std::size_t k = 0; k < points; ++k) ts.push_back(-kPi + kTwoPi * k / points);
            }
            for (double tt : ts) t.rows.push_back({fmt(tt), fmt(bd->beta(tt)), fmt(bd->tag_distance(tt))});
            emit_table(s, c, t);
            return 0;
        }
        if (*mass) {
            json c = base_config("mass", s);
            c["boundary"] = with_boundary;
            auto u = exhaustion_from_name(s.exhaustion, frame);
            const double m = ma_mass(*u, cfg);
            Table t{{"ma_mass", "raw_mass"}, {{fmt(m), fmt(kTwoPi * m)}}};
            if (with_boundary) {
                auto bd = density(s);
                t.columns.push_back("boundary_mass");
                t.rows[0].push_back(fmt(bd->boundary_mass()));
            }
            emit_table(s, c, t);
            return 0;
        }
        if (*norm) {
            json c = base_config("norm", s);
            c["f"] = fexpr;
            c["p"] = p;
            c["q"] = q;
            c["route"] = route;
            HardyFunction f = function_on_frame(fexpr, frame, q);
            Table t{{"f", "p", "norm_boundary", "norm_limit", "relative_gap", "cauchy_gap", "monotone"}, {}};
            std::vector<std::string> row{fexpr, fmt(p), "", "", "", "", ""};
            double nb = NAN;
            if (route != "limit") {
                auto bd = density(s);
                nb = norm_boundary(f, p, *bd, s.tol_1d);
                row[2] = fmt(nb);
            }
            if (route != "boundary") {
                auto u = exhaustion_from_name(s.exhaustion, frame);
                NormLimitResult nl = norm_limit(f, p, *u, default_levels(), cfg);
                row[3] = fmt(nl.norm);
                if (std::isfinite(nb)) row[4] = fmt(std::abs(nl.norm - nb) / nb);
                row[5] = fmt(nl.cauchy_gap);
                row[6] = nl.monotone ? "1" : "0";
            }
            t.rows.push_back(row);
            emit_table(s, c, t);
            return 0;
        }
        if (*memb) {
            const std::string expr = family.empty() ? fexpr : family;
            if (expr.empty()) throw ParseError("membership needs --f or --family");
            std::vector<double> qs = qgrid.empty() ? std::vector<double>{q} : parse_grid(qgrid);
            json c = base_config("membership", s);
            c["f"] = expr;
            c["p"] = p;
            c["q_grid"] = qs;
            auto bd = density(s);
            Table t{{"q", "classical_verdict", "u_verdict", "exponent", "evidence"}, {}};
            std::vector<Verdict> cl(qs.size()), uv(qs.size());
            parallel_for(qs.size(), worker_threads(), [&](std::size_t i) {
                HardyFunction f = function_on_frame(expr, frame, qs[i]);
                if (frame.is_disc()) cl[i] = classical_membership(f, p, cfg);
                uv[i] = membership(f, p, *bd, cfg);
            });
            bool all_hold = true, all_fail = true;
            for (std::size_t i = 0; i < qs.size(); ++i) {
                std::string ev = uv[i].diagnostics;
                t.rows.push_back({fmt(qs[i]), frame.is_disc() ? to_string(cl[i].outcome) : "",
                                  to_string(uv[i].outcome), fmt(uv[i].exponent), ev});
                all_hold = all_hold && uv[i].outcome == Outcome::Holds;
                all_fail = all_fail && uv[i].outcome == Outcome::Fails;
            }
            emit_table(s, c, t);
            if (s.expect == "holds") return all_hold ? 0 : 2;
            if (s.expect == "fails") return all_fail ? 0 : 2;
            return 0;
        }
        if (*lj) {
            json c = base_config("lj-check", s);
            c["phi"] = phi;
            c["laplacian"] = lap;
            c["levels"] = parse_list(levels);
            c["harmonic"] = harmonic;
            auto u = exhaustion_from_name(s.exhaustion, frame);
            Expr pe = Expr::parse(phi), le = Expr::parse(lap);
            TestFunction tf;
            tf.value = [pe](cplx z) { return pe(z).real(); };
            tf.laplacian = [le](cplx z) { return le(z).real(); };
            tf.harmonic = harmonic;
            Table t{{"r", "value"}, {}};
            for (double r : parse_list(levels)) t.rows.push_back({fmt(r), fmt(lelong_jensen_lhs(*u, r, tf, cfg))});
            t.rows.push_back({"0", fmt(lelong_jensen_limit(*u, tf, cfg))});
            emit_table(s, c, t);
            return 0;
        }
        if (*fz) {
            json c = base_config("factorize", s);
            c["format"] = "json";
            c["f"] = fexpr;
            c["zeros"] = zeros;
            c["p"] = p;
            if (!frame.is_disc()) throw DomainError("factorize works in the disc frame");
            HardyFunction f = hardy_from_expr(fexpr);
            std::vector<cplx> zs = zeros == "auto" ? find_zeros(f) : parse_zeros(zeros);
            Factorization fac = factorize(f, zs);
            auto bd = density(s);
            json r;
            json zj = json::array();
            for (cplx z : zs) zj.push_back({z.real(), z.imag()});
            r["zeros"] = zj;
            r["reconstruction_residual"] = fac.reconstruction_residual;
            r["singular_sup"] = fac.singular_sup;
            const cplx s0 = fac.singular.interior(0.0), f0 = fac.outer.interior(0.0);
            r["singular_at_0"] = {s0.real(), s0.imag()};
            r["outer_at_0"] = {f0.real(), f0.imag()};
            r["f"] = verdict_json(membership(f, p, *bd, cfg));
            FactorVerdicts v = factors_in_space(fac, p, *bd, cfg);
            r["blaschke"] = verdict_json(v.blaschke);
            r["singular"] = verdict_json(v.singular);
            r["outer"] = verdict_json(v.outer);
            r["all_factors_hold"] = v.all_hold();
            emit_json(s, c, r);
            return expect_code(s, v.all_hold());
        }
        if (*cc) {
            json c = base_config("compose-check", s);
            c["format"] = "json";
            c["symbol"] = symbol;
            c["p"] = p;
            c["criterion"] = criterion;
            Symbol sym = parse_symbol(symbol);
            auto bd = density(s);
            const bool use_mobius =
                criterion == "mobius" || (criterion == "auto" && sym.kind == SymbolKind::Mobius);
            BoundednessReport rep =
                use_mobius ? mobius_boundedness(sym, *bd, p) : general_boundedness(sym, *bd, p);
            json r;
            r["symbol"] = sym.name;
            r["criterion"] = use_mobius ? "mobius" : "counting";
            r["verdict"] = verdict_json(rep.verdict);
            r["fixed_point"] = rep.fixed_point;
            r["fixed_point_defect"] = rep.fixed_point_defect;
            r["ratio_sup"] = rep.ratio_sup;
            r["ratio_sup_jacobian"] = rep.ratio_sup_jacobian;
            r["jacobian_sup"] = rep.jacobian_sup;
            r["ratio_sup_by_depth"] = rep.ratio_sup_by_depth;
            r["ratio_stable"] = rep.ratio_stable;
            r["ratio_near_one"] = rep.ratio_near_one;
            r["worst_eta"] = rep.worst_eta;
            if (rep.witness) {
                r["witness"] = {{"function", rep.witness->function.name},
                                {"composed", rep.witness->composed.name},
                                {"function_verdict", verdict_json(rep.witness->function_verdict)},
                                {"composed_verdict", verdict_json(rep.witness->composed_verdict)},
                                {"sound", rep.witness->sound()}};
            } else {
                r["witness"] = nullptr;
            }
            emit_json(s, c, r);
            return expect_code(s, rep.verdict.outcome == Outcome::Holds);
        }
        if (*ap) {
            json c = base_config("approx", s);
            c["f"] = fexpr;
            c["p"] = p;
            c["rhos"] = parse_list(rhos);
            if (!frame.is_disc()) throw DomainError("approx works in the disc frame");
            HardyFunction f = hardy_from_expr(fexpr);
            auto bd = density(s);
            const double n = norm_boundary(f, p, *bd, s.tol_1d);
            Table t{{"rho", "gap", "relative_gap"}, {}};
            for (const auto& st : dilation_approximation(f, p, *bd, parse_list(rhos)))
                t.rows.push_back({fmt(st.rho), fmt(st.gap), fmt(st.gap / n)});
            emit_table(s, c, t);
            return 0;
        }
        if (*rp) {
            json c = base_config("reproduce", s);
            c.erase("exhaustion");
            c.erase("frame");
            c["case"] = case_id;
            c["out_dir"] = out_dir;
            std::vector<std::string> ids = case_id == "all" ? case_ids() : std::vector<std::string>{resolve_case(case_id)};
            ReproduceOptions ro;
            ro.grid = s.grid;
            ro.quad = cfg;
            ReproduceContext ctx(ro);
            int failed = 0;
            std::string all_text;
            for (const auto& id : ids) {
                CaseResult r = run_case(id, ctx);
                json cc2 = c;
                cc2["case"] = id;
                const std::string text = csv_text(cc2, {r.columns, r.rows});
                if (out_dir.empty()) {
                    all_text += text;
                } else {
                    Settings one = s;
                    one.out = out_dir + "/" + id + ".csv";
                    write_text(one, text);
                }
                std::fprintf(stderr, "%s %s\n", r.pass() ? "PASS" : "FAIL", id.c_str());
                for (const auto& ch : r.checks)
                    std::fprintf(stderr, "  [%s] %s%s%s\n", ch.pass ? "pass" : "FAIL", ch.label.c_str(),
                                 ch.detail.empty() ? "" : ": ", ch.detail.c_str());
                failed += !r.pass();
            }
            if (out_dir.empty()) write_text(s, all_text);
            return failed ? 2 : 0;
        }
    } catch (const Error& e) {
        std::cerr << "psh: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "psh: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
