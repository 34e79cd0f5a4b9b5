#include "psh/compose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "psh/errors.hpp"
#include "psh/expr.hpp"

namespace psh {

namespace {

// a+bi with 17 digits and no signed zeros
std::string format_complex(cplx c) {
    std::ostringstream os;
    os.precision(17);
    double re = c.real() + 0.0, im = c.imag() + 0.0;
    os << re << (std::signbit(im) ? "" : "+") << im << "i";
    return os.str();
}

}  // namespace

cplx MobiusFactor::operator()(cplx z) const {
    return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

cplx MobiusFactor::derivative(cplx z) const {
    cplx d = 1.0 - std::conj(a) * z;
    return std::polar(1.0, theta) * (1.0 - std::norm(a)) / (d * d);
}

cplx Symbol::operator()(cplx z) const {
    if (kind == SymbolKind::Monomial) return std::pow(z, n);
    cplx v = std::polar(1.0, rotation);
    for (const auto& f : factors) v *= f(z);
    return v;
}

cplx Symbol::derivative(cplx z) const {
    if (kind == SymbolKind::Monomial) return double(n) * std::pow(z, n - 1);
    // product rule; stays finite at the zeros of the factors
    cplx total = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        cplx term = factors[k].derivative(z);
        for (std::size_t j = 0; j < factors.size(); ++j)
            if (j != k) term *= factors[j](z);
        total += term;
    }
    return std::polar(1.0, rotation) * total;
}

int Symbol::degree() const {
    return kind == SymbolKind::Monomial ? n : static_cast<int>(factors.size());
}

cplx Symbol::inverse(cplx w) const {
    if (kind != SymbolKind::Mobius) throw DomainError("inverse is only available for Mobius symbols");
    const cplx a = factors[0].a, e = std::polar(1.0, factors[0].theta);
    return (w + e * a) / (e + std::conj(a) * w);
}

std::vector<double> Symbol::preimages(double eta) const {
    std::vector<double> out;
    switch (kind) {
    case SymbolKind::Mobius:
        out.push_back(std::arg(inverse(std::polar(1.0, eta))));
        break;
    case SymbolKind::Monomial:
        for (int j = 0; j < n; ++j) out.push_back(wrap_angle((eta + kTwoPi * j) / n));
        break;
    case SymbolKind::FiniteBlaschke: {
        // the boundary phase is continuous and increases by 2 pi n over a turn:
        // arg of e^{i theta}(e^{it} - a)/(1 - conj(a) e^{it}) is theta + t + 2 arg(1 - a e^{-it})
        auto phase = [this](double t) {
            double v = rotation;
            for (const auto& f : factors) v += f.theta + t + 2.0 * std::arg(1.0 - f.a * std::polar(1.0, -t));
            return v;
        };
        const double lo = phase(-kPi), hi = phase(kPi);
        for (double m = std::floor((lo - eta) / kTwoPi); eta + kTwoPi * m <= hi; m += 1.0) {
            const double target = eta + kTwoPi * m;
            if (target <= lo) continue;
            auto g = [&](double t) { return phase(t) - target; };
            std::uintmax_t iters = 200;
            auto [a, b] = boost::math::tools::toms748_solve(g, -kPi, kPi, g(-kPi), g(kPi),
                                                            boost::math::tools::eps_tolerance<double>(52), iters);
            out.push_back(wrap_angle(0.5 * (a + b)));
        }
        break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Symbol mobius_symbol(cplx a, double theta) {
    if (!(std::abs(a) < 1.0)) throw DomainError("Mobius parameter must lie in the open disc");
    Symbol s;
    s.kind = SymbolKind::Mobius;
    s.factors = {{a, theta}};
    std::ostringstream os;
    os.precision(17);
    os << "mobius:" << format_complex(a) << "," << theta;
    s.name = os.str();
    return s;
}

Symbol rotation_symbol(double theta) {
    Symbol s = mobius_symbol(0.0, theta);
    std::ostringstream os;
    os.precision(17);
    os << "rot:" << theta;
    s.name = os.str();
    return s;
}

Symbol identity_symbol() {
    Symbol s = mobius_symbol(0.0, 0.0);
    s.name = "identity";
    return s;
}

Symbol monomial_symbol(int n) {
    if (n < 1) throw DomainError("monomial degree must be at least 1");
    Symbol s;
    s.kind = SymbolKind::Monomial;
    s.n = n;
    s.name = "monomial:" + std::to_string(n);
    return s;
}

Symbol blaschke_symbol(std::vector<MobiusFactor> factors, double rotation) {
    if (factors.empty()) throw DomainError("Blaschke symbol needs at least one factor");
    std::ostringstream os;
    os.precision(17);
    os << "blaschke:";
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (!(std::abs(factors[k].a) < 1.0)) throw DomainError("Blaschke zero must lie in the open disc");
        os << (k ? "," : "") << format_complex(factors[k].a);
    }
    // factor angles fold into the rotation so the name round-trips
    for (auto& f : factors) {
        rotation += f.theta;
        f.theta = 0.0;
    }
    os << "@" << rotation;
    Symbol s;
    s.kind = SymbolKind::FiniteBlaschke;
    s.factors = std::move(factors);
    s.rotation = rotation;
    s.name = os.str();
    return s;
}

Symbol parse_symbol(std::string_view text) {
    const auto colon = text.find(':');
    const std::string head(text.substr(0, colon));
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= s.size(); ++k)
            if (k == s.size() || s[k] == sep) {
                parts.emplace_back(s.substr(start, k - start));
                start = k + 1;
            }
        return parts;
    };
    try {
        if (head == "identity" || head == "id") return identity_symbol();
        if (head == "rot") return rotation_symbol(parse_real(rest));
        if (head == "mobius") {
            auto parts = split(rest, ',');
            if (parts.size() != 2) throw ParseError("mobius symbol needs A,THETA");
            return mobius_symbol(parse_complex(parts[0]), parse_real(parts[1]));
        }
        if (head == "monomial") {
            double n = parse_real(rest);
            if (n != std::round(n)) throw ParseError("monomial degree must be an integer");
            return monomial_symbol(static_cast<int>(n));
        }
        if (head == "blaschke") {
            const auto at = rest.find('@');
            double rot = at == std::string_view::npos ? 0.0 : parse_real(rest.substr(at + 1));
            std::vector<MobiusFactor> fs;
            for (const auto& p : split(rest.substr(0, at), ',')) fs.push_back({parse_complex(p), 0.0});
            return blaschke_symbol(std::move(fs), rot);
        }
    } catch (const DomainError& e) {
        throw ParseError(std::string("symbol '") + std::string(text) + "': " + e.what());
    }
    throw ParseError("unknown symbol '" + std::string(text) + "'");
}

HardyFunction compose(const HardyFunction& f, const Symbol& s) {
    HardyFunction g;
    g.name = f.name + " o " + s.name;
    g.interior = [f, s](cplx z) { return f.interior(s(z)); };
    g.boundary_trace = [f, s](double t) { return f.boundary_trace(std::arg(s(std::polar(1.0, t)))); };
    for (const auto& tag : f.singularities)
        for (double t : s.preimages(tag.location)) g.singularities.push_back({t, tag.exponent});
    if (f.derivative) g.derivative = [f, s](cplx z) { return f.derivative(s(z)) * s.derivative(z); };
    return g;
}

namespace {

double preimage_sum(const Symbol& s, const BoundaryDensity& bd, double eta, bool jacobian) {
    double total = 0.0;
    for (double t : s.preimages(eta)) {
        double d = std::abs(s.derivative(std::polar(1.0, t)));
        if (d < 1e-8) {
            std::ostringstream os;
            os << "e^{i" << eta << "} is a critical value of " << s.name;
            throw CriticalValue(os.str());
        }
        total += jacobian ? bd.beta(t) / d : bd.beta(t);
    }
    return total;
}

struct GridPoint {
    double eta;
    int depth;  // 0 for the uniform background
};

std::vector<GridPoint> build_grid(const std::vector<double>& centers, int kmin, int kmax) {
    std::vector<GridPoint> g;
    for (int j = 0; j < 64; ++j) g.push_back({-kPi + kTwoPi * (j + 0.5) / 64.0, 0});
    for (double c : centers)
        for (int k = kmin; k <= kmax; ++k) {
            double h = std::ldexp(1.0, -k);
            g.push_back({wrap_angle(c - h), k});
            g.push_back({wrap_angle(c + h), k});
        }
    std::sort(g.begin(), g.end(), [](const GridPoint& x, const GridPoint& y) { return x.eta < y.eta; });
    g.erase(std::unique(g.begin(), g.end(), [](const GridPoint& x, const GridPoint& y) { return x.eta == y.eta; }),
            g.end());
    return g;
}

// Image angle of the first blow-up of beta that s does not carry onto a blow-up at least as strong.
std::optional<double> stray_tag_image(const Symbol& s, const BoundaryDensity& bd) {
    for (const auto& tag : bd.tags()) {
        if (tag.exponent <= 0.0) continue;
        const double eta = std::arg(s(std::polar(1.0, tag.location)));
        bool matched = false;
        for (const auto& other : bd.tags())
            matched = matched || (std::abs(wrap_angle(eta - other.location)) < 1e-9 && other.exponent >= tag.exponent - 1e-9);
        if (!matched) return eta;
    }
    return std::nullopt;
}

BoundednessReport analyse(const Symbol& s, const BoundaryDensity& bd, const BoundednessOptions& opts) {
    BoundednessReport rep;
    const cplx at1 = s(1.0);
    rep.fixed_point_defect = std::abs(at1 - 1.0);
    rep.fixed_point = rep.fixed_point_defect < 1e-12;

    // N/beta blows up where a preimage reaches a tag, i.e. near the tag images
    std::vector<double> centers{0.0};
    if (!rep.fixed_point) centers.push_back(std::arg(at1));
    for (const auto& tag : bd.tags()) {
        centers.push_back(tag.location);
        centers.push_back(std::arg(s(std::polar(1.0, tag.location))));
    }
    auto grid = build_grid(centers, opts.kmin, opts.kmax);
    std::vector<double> ratio(grid.size()), ratio_j(grid.size());
    parallel_for(grid.size(), worker_threads(opts.threads), [&](std::size_t i) {
        double b = bd.beta(grid[i].eta);
        ratio[i] = preimage_sum(s, bd, grid[i].eta, false) / b;
        ratio_j[i] = preimage_sum(s, bd, grid[i].eta, true) / b;
    });

    for (int depth : {opts.kmax - 6, opts.kmax - 3, opts.kmax}) {
        double m = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i].depth <= depth) m = std::max(m, ratio[i]);
        rep.ratio_sup_by_depth.push_back(m);
    }
    rep.ratio_stable = true;
    for (std::size_t k = 1; k < rep.ratio_sup_by_depth.size(); ++k) {
        double a = rep.ratio_sup_by_depth[k - 1], b = rep.ratio_sup_by_depth[k];
        rep.ratio_stable = rep.ratio_stable && std::isfinite(b) && std::abs(b - a) < opts.stability * a;
    }
    std::size_t worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (ratio[i] > ratio[worst]) worst = i;
        rep.ratio_sup_jacobian = std::max(rep.ratio_sup_jacobian, ratio_j[i]);
    }
    rep.ratio_sup = ratio[worst];
    rep.worst_eta = grid[worst].eta;

    const double h = std::ldexp(1.0, -opts.kmax);
    rep.ratio_near_one = 0.5 * (preimage_sum(s, bd, h, false) / bd.beta(h) + preimage_sum(s, bd, -h, false) / bd.beta(-h));

    for (int j = 0; j < 1024; ++j)
        rep.jacobian_sup = std::max(rep.jacobian_sup, 1.0 / std::abs(s.derivative(std::polar(1.0, kTwoPi * j / 1024.0))));
    return rep;
}

void attach_witness(BoundednessReport& rep, const Symbol& s, const BoundaryDensity& bd, double p, double eta0,
                    const BoundednessOptions& opts) {
    WitnessPair w;
    w.function = witness_function(std::polar(1.0, eta0), opts.witness_exponent);
    w.composed = compose(w.function, s);
    w.function_verdict = membership(w.function, p, bd);
    w.composed_verdict = membership(w.composed, p, bd);
    Witness wit;
    wit.function = w.function.name;
    wit.parameter = eta0;
    if (w.composed_verdict.witness) wit.report = w.composed_verdict.witness->report;
    rep.verdict.witness = wit;
    std::ostringstream os;
    os << "; witness " << w.function.name << ": F " << to_string(w.function_verdict.outcome) << ", F o phi "
       << to_string(w.composed_verdict.outcome);
    rep.verdict.diagnostics += os.str();
    rep.witness = std::move(w);
}

std::string ratio_note(const BoundednessReport& rep) {
    std::ostringstream os;
    os << "phi(1) defect " << rep.fixed_point_defect << "; grid max of N/beta " << rep.ratio_sup_by_depth[0] << " -> "
       << rep.ratio_sup_by_depth[1] << " -> " << rep.ratio_sup_by_depth[2]
       << (rep.ratio_stable ? " (stable)" : " (grows under refinement)");
    return os.str();
}

}  // namespace

double counting_function(const Symbol& s, const BoundaryDensity& bd, double eta) {
    return preimage_sum(s, bd, eta, false);
}

double counting_function_jacobian(const Symbol& s, const BoundaryDensity& bd, double eta) {
    return preimage_sum(s, bd, eta, true);
}

double boundary_degree(const Symbol& s) {
    std::vector<QuadPoint> pts;
    for (const auto& f : s.factors)
        if (std::abs(f.a) > 0.0) pts.push_back({std::arg(f.a), 0.0});
    auto r = integrate_interval([&](double t) { return std::abs(s.derivative(std::polar(1.0, t))); }, -kPi, kPi, pts,
                                1e-13);
    return r.value / kTwoPi;
}

std::vector<double> graded_eta_grid(const std::vector<double>& centers, int kmin, int kmax) {
    std::vector<double> out;
    for (const auto& g : build_grid(centers, kmin, kmax)) out.push_back(g.eta);
    return out;
}

HardyFunction witness_function(cplx xi, double exponent) {
    std::ostringstream os;
    os.precision(17);
    os << "(1-conj(" << format_complex(xi) << ")z)^-" << exponent;
    const cplx c = std::conj(xi);
    auto f = [c, exponent](cplx z) { return std::pow(1.0 - c * z, -exponent); };
    auto trace = [f](double t) { return f(std::polar(1.0, t)); };
    HardyFunction h = hardy_from_callable(os.str(), f, {{std::arg(xi), exponent}}, trace);
    h.derivative = [c, exponent](cplx z) { return exponent * c * std::pow(1.0 - c * z, -exponent - 1.0); };
    return h;
}

bool WitnessPair::sound() const {
    return function_verdict.outcome == Outcome::Holds && composed_verdict.outcome == Outcome::Fails;
}

BoundednessReport mobius_boundedness(const Symbol& s, const BoundaryDensity& bd, double p,
                                     const BoundednessOptions& opts) {
    if (s.kind != SymbolKind::Mobius) throw DomainError("mobius_boundedness needs a Mobius symbol");
    BoundednessReport rep = analyse(s, bd, opts);
    const auto stray = stray_tag_image(s, bd);
    rep.verdict.outcome = stray ? Outcome::Fails : Outcome::Holds;
    rep.verdict.diagnostics = ratio_note(rep);
    if (stray) attach_witness(rep, s, bd, p, *stray, opts);
    return rep;
}

BoundednessReport general_boundedness(const Symbol& s, const BoundaryDensity& bd, double p,
                                      const BoundednessOptions& opts) {
    BoundednessReport rep = analyse(s, bd, opts);
    const auto stray = stray_tag_image(s, bd);
    const bool holds = !stray && rep.ratio_stable;
    rep.verdict.outcome = holds ? Outcome::Holds : Outcome::Fails;
    rep.verdict.diagnostics = ratio_note(rep);
    if (!holds) attach_witness(rep, s, bd, p, stray ? *stray : rep.worst_eta, opts);
    return rep;
}

}  // namespace psh
