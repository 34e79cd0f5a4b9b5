#include "psh/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "psh/compose.hpp"
#include "psh/corpus.hpp"
#include "psh/errors.hpp"
#include "psh/factor.hpp"
#include "psh/hardy.hpp"

namespace psh {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Check check(std::string label, bool pass, std::string detail) { return {std::move(label), pass, std::move(detail)}; }

std::string verdict_evidence(const Verdict& v) {
    std::string d = v.diagnostics;
    for (auto& c : d)
        if (c == ',' || c == '\n') c = ';';
    return d;
}

CaseResult mass_identity(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "boundary mass equals Monge-Ampere mass";
    out.columns = {"exhaustion", "ma_mass", "boundary_mass", "relative_gap", "raw_mass"};
    const auto t0 = Clock::now();
    const BoundaryDensity& g = ctx.green();
    const BoundaryDensity& p = ctx.paper();
    for (const BoundaryDensity* bd : {&g, &p}) {
        const double ma = bd->total_mass(), bm = bd->boundary_mass(), gap = std::abs(bm - ma) / ma;
        out.rows.push_back({bd->exhaustion().name, fmt(ma), fmt(bm), fmt(gap), fmt(kTwoPi * ma)});
        out.checks.push_back(check("mass balance " + bd->exhaustion().name, gap < 1e-4, "relative gap " + fmt(gap)));
    }
    out.checks.push_back(check("green mass is 1", g.total_mass() == 1.0, fmt(g.total_mass())));
    const double raw = kTwoPi * p.total_mass(), bound = 8.0 * std::pow(2.0, 0.75);
    out.checks.push_back(check("raw paper-u mass in [11.7, 11.8] and below 8*2^(3/4)",
                               raw >= 11.7 && raw <= 11.8 && raw < bound, fmt(raw) + " vs bound " + fmt(bound)));
    // t0 precedes the density build when this case runs first
    const double secs = std::max(since(t0), ctx.paper_build_seconds());
    out.checks.push_back(check("runtime under 60 s", secs < 60.0, fmt(secs) + " s including the density build"));
    return out;
}

CaseResult lelong_jensen(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "Lelong-Jensen pairing on the green exhaustion";
    out.columns = {"test_function", "r", "value", "expected", "error"};
    const Exhaustion& u = ctx.green().exhaustion();
    const QuadConfig& cfg = ctx.options().quad;
    TestFunction sq;
    sq.value = [](cplx z) { return std::norm(z); };
    sq.laplacian = [](cplx) { return 4.0; };
    double worst = 0.0;
    for (double r : {-1.0, -0.5, -0.1}) {
        const double v = lelong_jensen_lhs(u, r, sq, cfg), e = std::exp(2.0 * r), err = std::abs(v - e) / e;
        worst = std::max(worst, err);
        out.rows.push_back({"|z|^2", fmt(r), fmt(v), fmt(e), fmt(err)});
    }
    out.checks.push_back(check("|z|^2 reproduces e^{2r}", worst < 1e-8, "worst relative error " + fmt(worst)));
    const std::vector<std::pair<std::string, std::function<double(cplx)>>> harmonic = {
        {"re z", [](cplx z) { return z.real(); }},
        {"im z", [](cplx z) { return z.imag(); }},
        {"re z^2", [](cplx z) { return (z * z).real(); }},
    };
    double hw = 0.0;
    for (const auto& [name, fn] : harmonic) {
        TestFunction h;
        h.value = fn;
        h.laplacian = [](cplx) { return 0.0; };
        h.harmonic = true;
        for (double r : {-1.0, -0.5, -0.1}) {
            const double v = lelong_jensen_lhs(u, r, h, cfg);
            hw = std::max(hw, std::abs(v));
            out.rows.push_back({name, fmt(r), fmt(v), "0", fmt(std::abs(v))});
        }
    }
    out.checks.push_back(check("harmonic test functions annihilated", hw < 1e-8, "worst |value| " + fmt(hw)));
    return out;
}

CaseResult norm_equality(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "boundary norm equals the Lelong-Jensen limit norm";
    out.columns = {"exhaustion", "f", "p", "norm_boundary", "norm_limit", "relative_gap", "monotone"};
    const auto corpus = norm_corpus();
    struct Job {
        const BoundaryDensity* bd;
        std::string f;
        double p;
    };
    std::vector<Job> jobs;
    for (const BoundaryDensity* bd : {&ctx.green(), &ctx.paper()})
        for (double p : {1.0, 2.0})
            for (const auto& f : corpus) jobs.push_back({bd, f, p});
    std::vector<std::vector<std::string>> rows(jobs.size());
    std::vector<double> gaps(jobs.size());
    std::vector<char> mono(jobs.size());
    parallel_for(jobs.size(), worker_threads(ctx.options().threads), [&](std::size_t i) {
        const auto& j = jobs[i];
        HardyFunction f = hardy_from_expr(j.f);
        const double nb = norm_boundary(f, j.p, *j.bd, ctx.options().quad.tol_1d);
        const NormLimitResult nl = norm_limit(f, j.p, j.bd->exhaustion(), default_levels(), ctx.options().quad);
        gaps[i] = std::abs(nl.norm - nb) / nb;
        mono[i] = nl.monotone;
        rows[i] = {j.bd->exhaustion().name, j.f, fmt(j.p), fmt(nb), fmt(nl.norm), fmt(gaps[i]), nl.monotone ? "1" : "0"};
    });
    out.rows = std::move(rows);
    double worst = 0.0;
    bool all_mono = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        worst = std::max(worst, gaps[i]);
        all_mono = all_mono && mono[i];
    }
    out.checks.push_back(check("norm gaps below 1e-3", worst < 1e-3, "worst relative gap " + fmt(worst)));
    out.checks.push_back(check("level values nondecreasing", all_mono, all_mono ? "all monotone" : "non-monotone rows"));
    return out;
}

CaseResult strict_inclusion(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "classical versus paper-u membership of (1-z)^{-2q}";
    out.columns = {"q", "classical_verdict", "u_verdict", "exponent", "evidence"};
    const auto t0 = Clock::now();
    const BoundaryDensity& bd = ctx.paper();
    const auto qs = inclusion_q_grid();
    std::vector<Verdict> cl(qs.size()), uv(qs.size());
    parallel_for(qs.size(), worker_threads(ctx.options().threads), [&](std::size_t i) {
        HardyFunction f = hardy_from_expr(kInclusionFamily, {}, qs[i]);
        cl[i] = classical_membership(f, 1.0, ctx.options().quad);
        uv[i] = membership(f, 1.0, bd, ctx.options().quad);
    });
    bool classical_ok = true, fails_ok = true, holds_ok = true, threshold_ok = true;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        out.rows.push_back({fmt(qs[i]), to_string(cl[i].outcome), to_string(uv[i].outcome), fmt(uv[i].exponent),
                            verdict_evidence(uv[i])});
        const double q = qs[i];
        classical_ok = classical_ok && cl[i].outcome == Outcome::Holds;
        if (q > 0.275) fails_ok = fails_ok && uv[i].outcome == Outcome::Fails;
        else if (q < 0.225) holds_ok = holds_ok && uv[i].outcome == Outcome::Holds;
        else threshold_ok = threshold_ok && uv[i].outcome != Outcome::Holds;
    }
    out.checks.push_back(check("classical membership holds for every q", classical_ok, ""));
    out.checks.push_back(check("paper-u membership fails for q in {0.30, 0.35, 0.40, 0.45}", fails_ok, ""));
    out.checks.push_back(check("paper-u membership holds for q in {0.10, 0.15, 0.20}", holds_ok, ""));
    out.checks.push_back(check("q = 0.25 is not declared a member", threshold_ok, ""));
    const double secs = since(t0);
    out.checks.push_back(check("runtime under 10 min", secs < 600.0, fmt(secs) + " s"));
    return out;
}

CaseResult beta_exponent(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "log-log slope of beta at the tag";
    out.columns = {"window_lo", "window_hi", "slope"};
    const BoundaryDensity& bd = ctx.paper();
    const TagFit& fit = bd.tag_fits().at(0);
    out.rows.push_back({"1e-5", "1e-3", fmt(-fit.exponent)});
    out.rows.push_back({"1e-3", "1e-1", fmt(fit.slope_far)});
    out.rows.push_back({"0", "1e-6", fmt(-0.5 * (fit.local_minus + fit.local_plus))});
    out.checks.push_back(
        check("slope over [1e-5, 1e-3] within -0.5 +- 0.05", std::abs(-fit.exponent + 0.5) <= 0.05, fmt(-fit.exponent)));
    out.checks.push_back(check("slope over [1e-3, 1e-1] within -0.5 +- 0.05", std::abs(fit.slope_far + 0.5) <= 0.05,
                               fmt(fit.slope_far)));
    return out;
}

CaseResult factorization(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "canonical factorization and the H^2 split";
    out.columns = {"f", "residual", "f_verdict", "blaschke", "singular", "outer", "g_in_H2", "h_in_H2",
                   "norm1_f", "norm2_g_times_norm2_h", "split_residual"};
    const BoundaryDensity& bd = ctx.paper();
    const QuadConfig& cfg = ctx.options().quad;
    bool resid_ok = true, factors_ok = true, split_ok = true, cs_ok = true;
    double worst_resid = 0.0;
    for (const auto& c : factor_corpus()) {
        HardyFunction f = hardy_from_expr(c.expr);
        Factorization fac = factorize(f, c.zeros);
        worst_resid = std::max(worst_resid, fac.reconstruction_residual);
        resid_ok = resid_ok && fac.reconstruction_residual < 1e-6;
        Verdict fv = membership(f, 1.0, bd, cfg);
        std::vector<std::string> row{c.expr, fmt(fac.reconstruction_residual), to_string(fv.outcome)};
        if (fv.outcome != Outcome::Holds) {
            row.insert(row.end(), 8, "");
            out.rows.push_back(row);
            continue;
        }
        FactorVerdicts v = factors_in_space(fac, 1.0, bd, cfg);
        factors_ok = factors_ok && v.all_hold();
        H2Split sp = h2_split(f, 1.0, c.zeros);
        Verdict gv = membership(sp.g, 2.0, bd, cfg), hv = membership(sp.h, 2.0, bd, cfg);
        const bool both = gv.outcome == Outcome::Holds && hv.outcome == Outcome::Holds;
        split_ok = split_ok && both && sp.residual < 1e-8;
        double n1 = norm_boundary(f, 1.0, bd, 1e-10), prod = 0.0;
        if (both) prod = norm_boundary(sp.g, 2.0, bd, 1e-10) * norm_boundary(sp.h, 2.0, bd, 1e-10);
        cs_ok = cs_ok && both && n1 <= prod + 1e-6;
        row.insert(row.end(), {to_string(v.blaschke.outcome), to_string(v.singular.outcome), to_string(v.outer.outcome),
                               to_string(gv.outcome), to_string(hv.outcome), fmt(n1), fmt(prod), fmt(sp.residual)});
        out.rows.push_back(row);
    }
    out.checks.push_back(check("reconstruction residual below 1e-6", resid_ok, "worst " + fmt(worst_resid)));
    out.checks.push_back(check("factors of members hold in H^1_u", factors_ok, ""));
    out.checks.push_back(check("split factors hold in H^2_u with f = g h", split_ok, ""));
    out.checks.push_back(check("||f||_1 <= ||g||_2 ||h||_2 + 1e-6", cs_ok, ""));
    return out;
}

CaseResult density(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "dilation gaps in H^1_u(paper-u)";
    out.columns = {"f", "norm", "rho", "gap", "relative_gap"};
    const BoundaryDensity& bd = ctx.paper();
    bool dec = true, small = true;
    std::string worst;
    for (const auto& e : density_corpus()) {
        HardyFunction f = hardy_from_expr(e);
        const double n = norm_boundary(f, 1.0, bd);
        auto steps = dilation_approximation(f, 1.0, bd);
        for (std::size_t k = 0; k < steps.size(); ++k) {
            out.rows.push_back({e, fmt(n), fmt(steps[k].rho), fmt(steps[k].gap), fmt(steps[k].gap / n)});
            if (k && !(steps[k].gap < steps[k - 1].gap)) dec = false;
        }
        if (!(steps.back().gap < 0.01 * n)) {
            small = false;
            worst += e + " ";
        }
    }
    out.checks.push_back(check("gaps strictly decreasing", dec, ""));
    out.checks.push_back(check("final gap below 1% of the norm", small, worst));
    return out;
}

CaseResult composition(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "composition operator boundedness";
    out.columns = {"symbol", "criterion", "verdict", "phi1_defect", "ratio_sup", "ratio_near_one", "ratio_stable",
                   "witness"};
    const BoundaryDensity& bd = ctx.paper();
    BoundednessOptions opts;
    opts.threads = ctx.options().threads;
    auto row = [&](const Symbol& s, const char* crit, const BoundednessReport& r) {
        std::string w = r.witness ? (r.witness->sound() ? "sound" : "unsound") : "";
        out.rows.push_back({s.name, crit, to_string(r.verdict.outcome), fmt(r.fixed_point_defect), fmt(r.ratio_sup),
                            fmt(r.ratio_near_one), r.ratio_stable ? "1" : "0", w});
    };
    const Symbol rot = rotation_symbol(kPi / 2), m05 = mobius_symbol(0.5, 0.0), id = identity_symbol(),
                 sq = monomial_symbol(2);
    auto r_rot = mobius_boundedness(rot, bd, 1.0, opts);
    row(rot, "mobius", r_rot);
    out.checks.push_back(check("rotation by pi/2 fails with a sound witness",
                               r_rot.verdict.outcome == Outcome::Fails && r_rot.witness && r_rot.witness->sound(), ""));
    auto r_m = mobius_boundedness(m05, bd, 1.0, opts);
    auto r_id = mobius_boundedness(id, bd, 1.0, opts);
    row(m05, "mobius", r_m);
    row(id, "mobius", r_id);
    out.checks.push_back(check("Mobius(0.5, 0) and identity hold",
                               r_m.verdict.outcome == Outcome::Holds && r_id.verdict.outcome == Outcome::Holds, ""));
    auto r_sq = general_boundedness(sq, bd, 1.0, opts);
    row(sq, "counting", r_sq);
    out.checks.push_back(check("monomial 2 holds with ratio near sqrt 2 (+-0.3)",
                               r_sq.verdict.outcome == Outcome::Holds && r_sq.ratio_stable &&
                                   std::abs(r_sq.ratio_near_one - std::sqrt(2.0)) <= 0.3,
                               "ratio near 1: " + fmt(r_sq.ratio_near_one)));
    int agree = 0;
    const auto sample = random_mobius_sample();
    for (const auto& s : sample) {
        auto r = mobius_boundedness(s, bd, 1.0, opts);
        row(s, "random", r);
        agree += r.fixed_point == r.ratio_stable;
    }
    out.checks.push_back(check("fixed-point and ratio criteria agree on 20 random symbols",
                               agree == static_cast<int>(sample.size()),
                               std::to_string(agree) + "/" + std::to_string(sample.size())));
    return out;
}

CaseResult divergence_calibration(ReproduceContext& ctx) {
    CaseResult out;
    out.title = "divergence probe on |t|^{-a}";
    out.columns = {"a", "verdict", "increment_slope", "note"};
    const QuadConfig& cfg = ctx.options().quad;
    std::map<double, Convergence> verdicts;
    for (double a : {0.80, 0.90, 0.95, 1.05, 1.10, 1.20}) {
        auto fam = [a](double eps) {
            auto f = [a](double t) { return std::pow(std::abs(t), -a); };
            return integrate_circle(f, {{0.0, a}}, 1e-10, eps).value;
        };
        DivergenceReport rep = probe_divergence(fam, cfg.divergence_schedule, cfg);
        verdicts[a] = rep.verdict;
        out.rows.push_back({fmt(a), to_string(rep.verdict), fmt(rep.fitted_growth_exponent), rep.note});
    }
    bool below = true, above = true;
    for (auto [a, v] : verdicts) {
        if (a <= 0.95) below = below && v == Convergence::Converges;
        else above = above && v == Convergence::Diverges;
    }
    out.checks.push_back(check("converges for a <= 0.95", below, ""));
    out.checks.push_back(check("diverges for a >= 1.05", above, ""));
    return out;
}

using Runner = CaseResult (*)(ReproduceContext&);

const std::vector<std::pair<std::string, Runner>>& registry() {
    static const std::vector<std::pair<std::string, Runner>> r = {
        {"mass-identity", mass_identity},   {"lelong-jensen", lelong_jensen},
        {"norm-equality", norm_equality},   {"strict-inclusion", strict_inclusion},
        {"beta-exponent", beta_exponent},   {"factorization", factorization},
        {"density", density},               {"composition", composition},
        {"divergence-calibration", divergence_calibration},
    };
    return r;
}

}  // namespace

bool CaseResult::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ReproduceContext::ReproduceContext(ReproduceOptions opts) : opts_(std::move(opts)) {}

const BoundaryDensity& ReproduceContext::paper() {
    if (!paper_) {
        const auto t0 = Clock::now();
        DensityOptions o;
        o.grid = opts_.grid;
        o.threads = opts_.threads;
        o.quad = opts_.quad;
        paper_ = boundary_density(paper_exhaustion(), o);
        paper_seconds_ = since(t0);
    }
    return *paper_;
}

const BoundaryDensity& ReproduceContext::green() {
    if (!green_) {
        DensityOptions o;
        o.grid = opts_.grid;
        o.threads = opts_.threads;
        o.quad = opts_.quad;
        green_ = boundary_density(green_exhaustion(ConformalFrame::unit_disc()), o);
    }
    return *green_;
}

std::vector<std::string> case_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : registry()) ids.push_back(id);
    return ids;
}

std::string resolve_case(const std::string& name) {
    // command-line alias
    if (name == "theorem-1.3") return "strict-inclusion";
    for (const auto& [id, fn] : registry())
        if (id == name) return id;
    throw UnknownCase("unknown case '" + name + "'");
}

CaseResult run_case(const std::string& name, ReproduceContext& ctx) {
    const std::string id = resolve_case(name);
    const auto& reg = registry();
    for (std::size_t k = 0; k < reg.size(); ++k)
        if (reg[k].first == id) {
            const auto t0 = Clock::now();
            CaseResult r = reg[k].second(ctx);
            r.id = id;
            r.criterion = static_cast<int>(k) + 1;
            r.seconds = since(t0);
            return r;
        }
    throw UnknownCase("unknown case '" + name + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace psh
