#include "psh/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "psh/errors.hpp"
#include "psh/expr.hpp"

namespace psh {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

double circ_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

// Sum exponents of tags sharing a location.
std::vector<SingularityTag> merge(std::vector<SingularityTag> a, const std::vector<SingularityTag>& b) {
    for (const auto& t : b) {
        bool hit = false;
        for (auto& o : a)
            if (circ_dist(o.location, t.location) < 1e-12) {
                o.exponent += t.exponent;
                hit = true;
            }
        if (!hit) a.push_back({wrap_angle(t.location), t.exponent});
    }
    return a;
}

std::vector<SingularityTag> scaled(const std::vector<SingularityTag>& tags, double p) {
    std::vector<SingularityTag> out;
    for (const auto& t : tags)
        if (t.exponent > 0.0) out.push_back({wrap_angle(t.location), p * t.exponent});
    return out;
}

double snap_angle(double t) {
    for (int n = 1; n <= 12; ++n) {
        double k = std::round(t * n / kPi);
        double c = k * kPi / n;
        if (std::abs(t - c) < 1e-7) return wrap_angle(c);
    }
    return wrap_angle(t);
}

std::function<cplx(double)> trace_of(const std::function<cplx(cplx)>& f) {
    return [f](double t) {
        cplx v = f(std::polar(1.0, t));
        return finite(v) ? v : radial_limit(f, t);
    };
}

// Trace on the frame's boundary parameter.
cplx trace_at(const HardyFunction& f, const ConformalFrame& fr, double t) {
    if (fr.is_disc()) return f.boundary_trace(t);
    return f.interior(fr.psi(std::polar(1.0, t)));
}

double laplacian_with_step(const HardyFunction& f, double p, cplx z, double h) {
    if (p == 2.0) {
        if (f.laplacian_of_modulus_sq) return f.laplacian_of_modulus_sq(z);
        return 4.0 * std::norm(derivative_at(f, z));
    }
    const cplx c = f.interior(z);
    const cplx s[4] = {f.interior(z + h), f.interior(z - h), f.interior(z + cplx(0.0, h)), f.interior(z - cplx(0.0, h))};
    double spread = 0.0;
    for (const auto& v : s) spread = std::max(spread, std::abs(v - c));
    if (std::abs(c) <= 2.0 * spread) {
        std::ostringstream os;
        os << "stencil of width " << h << " at " << z << " reaches a zero of " << f.name;
        throw StencilNearZero(os.str());
    }
    double acc = -4.0 * std::pow(std::abs(c), p);
    for (const auto& v : s) acc += std::pow(std::abs(v), p);
    return acc / (h * h);
}

DivergenceReport classical_probe(const HardyFunction& f, double p, const QuadConfig& cfg) {
    const auto& tags = f.singularities;
    const double a = tags.empty() ? -kPi : wrap_angle(tags.front().location) - kPi;
    std::vector<QuadPoint> pts;
    for (const auto& t : tags) {
        double x = a + std::fmod(wrap_angle(t.location) - a + 2.0 * kTwoPi, kTwoPi);
        if (x > a && x < a + kTwoPi) pts.push_back({x, 0.0});
    }
    auto mean = [&](double eps) {
        const double r = 1.0 - eps;
        auto g = [&](double t) { return std::pow(std::abs(f.interior(std::polar(r, t))), p); };
        return integrate_interval(g, a, a + kTwoPi, pts, 0.01 * cfg.tol_1d, 0.0, cfg.max_panels).value / kTwoPi;
    };
    return probe_divergence(mean, cfg.divergence_schedule, cfg);
}

}  // namespace

cplx radial_limit(const std::function<cplx(cplx)>& f, double t) {
    const cplx e = std::polar(1.0, t);
    cplx a = f((1.0 - 1e-4) * e), b = f((1.0 - 1e-5) * e), c = f((1.0 - 1e-6) * e);
    cplx r1 = (10.0 * b - a) / 9.0, r2 = (10.0 * c - b) / 9.0;
    return (100.0 * r2 - r1) / 99.0;
}

std::vector<SingularityTag> detect_singularities(const std::function<cplx(cplx)>& f) {
    constexpr int n = 2048;
    const double r0 = 1.0 - 1e-3;
    std::vector<double> m(n);
    for (int j = 0; j < n; ++j) {
        cplx v = f(std::polar(r0, -kPi + kTwoPi * j / n));
        m[j] = finite(v) ? std::abs(v) : std::numeric_limits<double>::infinity();
    }
    auto radial = [&](double t, double d) { return std::abs(f(std::polar(1.0 - d, t))); };
    std::vector<SingularityTag> out;
    for (int j = 0; j < n; ++j) {
        double l = m[(j + n - 1) % n], c = m[j], r = m[(j + 1) % n];
        if (!(c >= l && c > r)) continue;
        double t = -kPi + kTwoPi * j / n;
        double probe = std::log(radial(t, 1e-4) / c) / std::log(10.0);
        if (!(probe > 0.02)) continue;
        // refine the peak on a circle closer to the boundary
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = t - kTwoPi / n, hi = t + kTwoPi / n;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = radial(x1, 1e-7), f2 = radial(x2, 1e-7);
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            if (f1 > f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = radial(x1, 1e-7);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = radial(x2, 1e-7);
            }
        }
        double loc = snap_angle(0.5 * (lo + hi));
        double alpha = std::log(radial(loc, 1e-8) / radial(loc, 1e-6)) / std::log(100.0);
        alpha = std::round(alpha * 1e6) / 1e6;
        if (!(alpha > 0.02)) continue;
        bool dup = false;
        for (const auto& o : out) dup = dup || circ_dist(o.location, loc) < 1e-9;
        if (!dup) out.push_back({loc, alpha});
    }
    return out;
}

HardyFunction hardy_from_callable(std::string name, std::function<cplx(cplx)> f, std::vector<SingularityTag> tags,
                                  std::function<cplx(double)> trace) {
    HardyFunction h;
    h.name = std::move(name);
    h.interior = f;
    h.boundary_trace = trace ? std::move(trace) : trace_of(f);
    h.singularities = std::move(tags);
    return h;
}

HardyFunction hardy_from_expr(const std::string& expr, const std::vector<SingularityTag>& tags, double q,
                              bool detect_tags) {
    Expr e = Expr::parse(expr);
    std::function<cplx(cplx)> f = [e, q](cplx z) { return e(z, q); };
    std::string name = expr;
    if (e.uses_q()) {
        std::ostringstream os;
        os << expr << " @ q=" << q;
        name = os.str();
    }
    std::vector<SingularityTag> t = tags;
    if (t.empty() && detect_tags) t = detect_singularities(f);
    return hardy_from_callable(name, f, t);
}

cplx derivative_at(const HardyFunction& f, cplx z) {
    if (f.derivative) return f.derivative(z);
    double a = std::abs(z);
    double h = a < 1.0 ? std::min(1e-3, 0.5 * (1.0 - a)) : 1e-3;
    constexpr int n = 16;
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx w = std::polar(1.0, kTwoPi * k / n);
        s += f.interior(z + h * w) / w;
    }
    return s / (double(n) * h);
}

double cauchy_riemann_defect(const HardyFunction& f) {
    const double h = 1e-5;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        cplx z = std::polar(0.9 * std::sqrt((k + 0.5) / 50.0), golden * k);
        cplx fx = (f.interior(z + h) - f.interior(z - h)) / (2.0 * h);
        cplx fy = (f.interior(z + cplx(0.0, h)) - f.interior(z - cplx(0.0, h))) / (2.0 * h);
        cplx dzbar = 0.5 * (fx + cplx(0.0, 1.0) * fy);
        worst = std::max(worst, std::abs(dzbar) / (1.0 + std::abs(fx)));
    }
    return worst;
}

HardyFunction hardy_sum(const HardyFunction& f, const HardyFunction& g) {
    HardyFunction h;
    h.name = "(" + f.name + ")+(" + g.name + ")";
    h.interior = [f, g](cplx z) { return f.interior(z) + g.interior(z); };
    h.boundary_trace = [f, g](double t) { return f.boundary_trace(t) + g.boundary_trace(t); };
    h.singularities = f.singularities;
    for (const auto& t : g.singularities) {
        bool hit = false;
        for (auto& o : h.singularities)
            if (circ_dist(o.location, t.location) < 1e-12) {
                o.exponent = std::max(o.exponent, t.exponent);
                hit = true;
            }
        if (!hit) h.singularities.push_back(t);
    }
    if (f.derivative && g.derivative) h.derivative = [f, g](cplx z) { return f.derivative(z) + g.derivative(z); };
    return h;
}

HardyFunction hardy_scale(cplx c, const HardyFunction& f) {
    HardyFunction h;
    std::ostringstream os;
    os << c << "*(" << f.name << ")";
    h.name = os.str();
    h.interior = [c, f](cplx z) { return c * f.interior(z); };
    h.boundary_trace = [c, f](double t) { return c * f.boundary_trace(t); };
    if (c != cplx(0.0)) h.singularities = f.singularities;
    if (f.derivative) h.derivative = [c, f](cplx z) { return c * f.derivative(z); };
    return h;
}

HardyFunction hardy_product(const HardyFunction& f, const HardyFunction& g) {
    HardyFunction h;
    h.name = "(" + f.name + ")*(" + g.name + ")";
    h.interior = [f, g](cplx z) { return f.interior(z) * g.interior(z); };
    h.boundary_trace = [f, g](double t) { return f.boundary_trace(t) * g.boundary_trace(t); };
    h.singularities = merge(scaled(f.singularities, 1.0), scaled(g.singularities, 1.0));
    if (f.derivative && g.derivative)
        h.derivative = [f, g](cplx z) {
            return f.derivative(z) * g.interior(z) + f.interior(z) * g.derivative(z);
        };
    return h;
}

HardyFunction hardy_dilate(const HardyFunction& f, double rho) {
    HardyFunction h;
    std::ostringstream os;
    os << f.name << " dilated by " << rho;
    h.name = os.str();
    h.interior = [f, rho](cplx z) { return f.interior(rho * z); };
    h.boundary_trace = [f, rho](double t) { return f.interior(std::polar(rho, t)); };
    if (f.derivative) h.derivative = [f, rho](cplx z) { return rho * f.derivative(rho * z); };
    return h;
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Holds: return "Holds";
        case Outcome::Fails: return "Fails";
        default: return "Inconclusive";
    }
}

std::vector<SingularityTag> combined_tags(const HardyFunction& f, double p, const BoundaryDensity& bd) {
    return merge(bd.tags(), scaled(f.singularities, p));
}

double norm_boundary(const HardyFunction& f, double p, const BoundaryDensity& bd, double tol) {
    if (!(p >= 1.0)) throw DomainError("norm_boundary needs p >= 1");
    for (const auto& t : combined_tags(f, p, bd))
        if (t.exponent >= 1.0) {
            std::ostringstream os;
            os << "|f*|^p beta has exponent " << t.exponent << " at t=" << t.location << " for " << f.name;
            throw NonIntegrable(os.str());
        }
    const ConformalFrame& fr = bd.frame();
    auto g = [&](double t) { return std::pow(std::abs(trace_at(f, fr, t)), p); };
    IntegralEstimate e = pair_with_beta(bd, g, scaled(f.singularities, p), tol);
    return std::pow(e.value, 1.0 / p);
}

std::vector<double> default_levels() {
    std::vector<double> r;
    for (int k = 1; k <= 8; ++k) r.push_back(-std::ldexp(1.0, -k));
    return r;
}

double laplacian_modulus_p(const HardyFunction& f, double p, cplx z) { return laplacian_with_step(f, p, z, 1e-4); }

NormLimitResult norm_limit(const HardyFunction& f, double p, const Exhaustion& u, const std::vector<double>& r_schedule,
                           const QuadConfig& cfg) {
    if (!(p >= 1.0)) throw DomainError("norm_limit needs p >= 1");
    const ConformalFrame& fr = u.frame;
    const double m = fr.derivative_bounds().m;
    TestFunction phi;
    phi.value = [&](cplx z) { return std::pow(std::abs(f.interior(z)), p); };
    phi.laplacian = [&](cplx z) {
        // tag-free functions extend past the boundary; otherwise keep the stencil inside
        if (f.singularities.empty()) return laplacian_with_step(f, p, z, 1e-4);
        double dist = fr.is_disc() ? 1.0 - std::abs(z) : m * (1.0 - std::abs(fr.inverse(z)));
        return laplacian_with_step(f, p, z, std::max(std::min(1e-4, 0.25 * dist), 1e-7));
    };
    NormLimitResult res;
    for (double r : r_schedule) {
        res.levels.push_back(r);
        res.values.push_back(lelong_jensen_lhs(u, r, phi, cfg));
    }
    for (std::size_t i = 1; i < res.values.size(); ++i) {
        bool up = res.levels[i] > res.levels[i - 1];
        double d = res.values[i] - res.values[i - 1];
        double slack = 1e-6 * std::max(std::abs(res.values[i]), 1e-300);
        if ((up && d < -slack) || (!up && d > slack)) res.monotone = false;
    }
    res.limit = lelong_jensen_limit(u, phi, cfg);
    res.norm = std::pow(res.limit, 1.0 / p);
    if (!res.values.empty()) res.cauchy_gap = std::abs(res.limit - res.values.back()) / std::abs(res.limit);
    return res;
}

ClassicalNorm classical_norm(const HardyFunction& f, double p, const QuadConfig& cfg) {
    if (!(p >= 1.0)) throw DomainError("classical_norm needs p >= 1");
    ClassicalNorm out;
    out.report = classical_probe(f, p, cfg);
    if (out.report.verdict == Convergence::Diverges)
        throw NonIntegrable("integral means of |" + f.name + "|^p diverge: " + out.report.note);
    double v = out.report.verdict == Convergence::Converges ? out.report.extrapolated : out.report.partial_values.back();
    out.value = std::pow(v, 1.0 / p);
    return out;
}

Verdict classical_membership(const HardyFunction& f, double p, const QuadConfig& cfg) {
    Verdict v;
    double worst = 0.0;
    for (const auto& t : f.singularities) worst = std::max(worst, p * t.exponent);
    v.exponent = worst;
    DivergenceReport rep = classical_probe(f, p, cfg);
    switch (rep.verdict) {
        case Convergence::Converges:
            v.outcome = Outcome::Holds;
            v.norm = std::pow(rep.extrapolated, 1.0 / p);
            v.diagnostics = rep.note;
            break;
        case Convergence::Diverges:
            v.outcome = Outcome::Fails;
            v.witness = Witness{f.name, p, rep};
            v.diagnostics = rep.note;
            break;
        default:
            v.outcome = Outcome::Inconclusive;
            v.diagnostics = "integral means: " + rep.note;
    }
    return v;
}

Verdict membership(const HardyFunction& f, double p, const BoundaryDensity& bd, const QuadConfig& cfg) {
    Verdict v;
    const auto tags = combined_tags(f, p, bd);
    double worst = 0.0;
    for (const auto& t : tags) worst = std::max(worst, t.exponent);
    v.exponent = worst;
    const ConformalFrame& fr = bd.frame();
    const auto ftags = scaled(f.singularities, p);
    auto g = [&](double t) { return std::pow(std::abs(trace_at(f, fr, t)), p); };
    auto probe = [&] {
        auto family = [&](double eps) { return pair_with_beta(bd, g, ftags, cfg.tol_1d, eps).value; };
        return probe_divergence(family, cfg.divergence_schedule, cfg);
    };
    std::ostringstream diag;
    diag << "combined exponent " << worst;

    if (worst < 0.9) {
        try {
            v.norm = norm_boundary(f, p, bd, cfg.tol_1d);
            v.outcome = Outcome::Holds;
            diag << " below the probe band; boundary integral converged";
        } catch (const Error& e) {
            v.outcome = Outcome::Inconclusive;
            diag << "; boundary integral failed: " << e.what();
        }
        v.diagnostics = diag.str();
        return v;
    }
    DivergenceReport rep = probe();
    if (worst > 1.1) {
        v.outcome = Outcome::Fails;
        v.witness = Witness{f.name, p, rep};
        diag << " above the probe band; probe: " << to_string(rep.verdict) << " (" << rep.note << ")";
        v.diagnostics = diag.str();
        return v;
    }
    diag << " inside the probe band; probe: " << to_string(rep.verdict) << " (" << rep.note << "), increment slope "
         << rep.fitted_growth_exponent;
    switch (rep.verdict) {
        case Convergence::Converges:
            v.outcome = Outcome::Holds;
            v.norm = std::pow(rep.extrapolated, 1.0 / p);
            break;
        case Convergence::Diverges:
            v.outcome = Outcome::Fails;
            v.witness = Witness{f.name, p, rep};
            break;
        default:
            v.outcome = Outcome::Inconclusive;
    }
    v.diagnostics = diag.str();
    return v;
}

std::vector<double> default_rhos() { return {0.9, 0.99, 0.999, 0.9999}; }

std::vector<DilationStep> dilation_approximation(const HardyFunction& f, double p, const BoundaryDensity& bd,
                                                 const std::vector<double>& rhos) {
    if (!bd.frame().is_disc()) throw DomainError("dilation needs the disc frame");
    std::vector<DilationStep> out;
    for (double rho : rhos) {
        HardyFunction d = hardy_sum(f, hardy_scale(-1.0, hardy_dilate(f, rho)));
        out.push_back({rho, norm_boundary(d, p, bd)});
    }
    return out;
}

}  // namespace psh
