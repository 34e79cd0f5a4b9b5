#include "psh/exhaustion.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "psh/errors.hpp"
#include "psh/expr.hpp"

namespace psh {

namespace {

// Fourier coefficients of (1 - cos t)^{3/4} = 2^{3/4} |sin(t/2)|^{3/2}:
// c_n = 2^{3/4} (-1)^n Gamma(a+1) / (2^a Gamma(a/2+n+1) Gamma(a/2-n+1)), a = 3/2.
const std::vector<double>& data_coefficients() {
    static const std::vector<double> c = [] {
        constexpr double a = 1.5;
        constexpr std::size_t n_max = 6000;
        std::vector<double> v(n_max + 1);
        v[0] = std::pow(2.0, 0.75) * std::tgamma(a + 1.0) /
               (std::pow(2.0, a) * std::tgamma(a / 2.0 + 1.0) * std::tgamma(a / 2.0 + 1.0));
        for (std::size_t n = 0; n < n_max; ++n) v[n + 1] = v[n] * (double(n) - a / 2.0) / (double(n) + 1.0 + a / 2.0);
        return v;
    }();
    return c;
}

constexpr double kSeriesRadius = 0.9;

double boundary_or_throw(cplx z) {
    double r = std::abs(z);
    if (r > 1.0 + 1e-14) throw DomainError("point outside the closed disc");
    return r;
}

cplx golden_min_real(const std::function<double(cplx)>& f, double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double paper_boundary_data(double t) { return std::pow(1.0 - std::cos(t), 0.75); }

double paper_poisson_series(cplx z) {
    const auto& c = data_coefficients();
    double r = std::abs(z);
    std::size_t n = c.size() - 1;
    if (r < 1e-300) return c[0];
    if (r < 1.0) n = std::min<std::size_t>(n, static_cast<std::size_t>(std::log(1e-17) / std::log(r)) + 8);
    cplx s = 0.0;
    for (std::size_t k = n; k >= 1; --k) s = (s + c[k]) * z;
    return c[0] + 2.0 * s.real();
}

// The coefficients satisfy c_{n+1}/c_n = (n - 3/4)/(n + 7/4), so sum c_n z^n = c_0 2F1(-3/4, 1; 7/4; z),
// and Euler's integral with s = 1 - w^4 gives 2F1 = 3 int_0^1 w^2 (1 - z + z w^4)^{3/4} dw.
double paper_poisson_hypergeometric(cplx z) {
    const double c0 = data_coefficients()[0];
    auto e = integrate_interval([&](double w) { return 3.0 * w * w * std::pow(1.0 - z + z * (w * w * w * w), 0.75).real(); },
                                0.0, 1.0, {}, 1e-15, 1e-16, 400);
    return 2.0 * c0 * e.value - c0;
}

double paper_poisson_quadrature(cplx z, double tol) {
    std::vector<QuadPoint> pts{{0.0, 0.0}};
    if (std::abs(z) > 0.0) pts.push_back({std::arg(z), 0.0});
    auto e = integrate_interval([&](double t) { return disc_poisson(z, t) * paper_boundary_data(t); }, -kPi, kPi, pts,
                                tol, 1e-300);
    return e.value;
}

ExhaustionPtr green_exhaustion(const ConformalFrame& frame, cplx w) {
    cplx wd = frame.inverse(w);
    if (!(std::abs(wd) < 1.0)) throw DomainError("Green pole must be interior");
    auto u = std::make_shared<Exhaustion>();
    std::ostringstream nm;
    nm << "green";
    if (w != cplx(0.0, 0.0)) nm << ":" << w.real() << (w.imag() < 0 ? "" : "+") << w.imag() << "i";
    u->name = nm.str();
    u->frame = frame;
    u->value = [frame, wd](cplx z) {
        cplx a = frame.inverse(z);
        double r = boundary_or_throw(a);
        if (r >= 1.0) return 0.0;
        if (a == wd) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs((a - wd) / (1.0 - std::conj(wd) * a)));
    };
    u->laplacian_density = [](cplx) { return 0.0; };
    u->has_density = false;
    u->atoms = {{w, 1.0}};
    u->center = w;
    return u;
}

ExhaustionPtr paper_exhaustion() {
    static const ExhaustionPtr shared = [] {
        auto u = std::make_shared<Exhaustion>();
        u->name = "paper-u";
        u->frame = ConformalFrame::unit_disc();
        u->value = [](cplx z) {
            double r = boundary_or_throw(z);
            if (r >= 1.0) return 0.0;
            double x = z.real();
            double rho = r <= kSeriesRadius ? paper_poisson_series(z) : paper_poisson_hypergeometric(z);
            return kPaperScale * (rho - std::pow(1.0 - x, 0.75));
        };
        u->laplacian_density = [](cplx z) { return std::pow(1.0 - z.real(), -1.25); };
        u->has_density = true;
        u->density_boundary_tags = {{0.0, 1.25}};
        u->center = golden_min_real(u->value, 0.0, 0.95);
        return u;
    }();
    return shared;
}

ExhaustionPtr user_exhaustion(const std::string& name, const ConformalFrame& frame, const std::string& value_expr,
                              const std::string& laplacian_expr, std::vector<Atom> atoms,
                              std::vector<SingularityTag> tags, bool mass_finite, cplx center) {
    Expr v = Expr::parse(value_expr);
    auto u = std::make_shared<Exhaustion>();
    u->name = name;
    u->frame = frame;
    u->value = [v, frame](cplx z) {
        double r = boundary_or_throw(frame.inverse(z));
        if (r >= 1.0) return 0.0;
        return v(z).real();
    };
    if (!laplacian_expr.empty()) {
        Expr l = Expr::parse(laplacian_expr);
        u->laplacian_density = [l](cplx z) { return l(z).real(); };
        u->has_density = true;
    } else {
        u->laplacian_density = [](cplx) { return 0.0; };
    }
    u->atoms = std::move(atoms);
    u->density_boundary_tags = std::move(tags);
    u->ma_mass_finite = mass_finite;
    u->center = u->atoms.empty() ? center : u->atoms.front().location;
    return u;
}

ExhaustionPtr exhaustion_from_json(const std::string& json_text, const ConformalFrame& frame) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("exhaustion JSON: ") + e.what());
    }
    auto to_c = [](const nlohmann::json& v) -> cplx {
        if (v.is_string()) return parse_complex(v.get<std::string>());
        if (v.is_number()) return v.get<double>();
        if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
        throw ParseError("cannot read complex value from " + v.dump());
    };
    std::vector<Atom> atoms;
    for (const auto& a : j.value("atoms", nlohmann::json::array())) {
        if (a.is_array() && a.size() == 3)
            atoms.push_back({{a[0].get<double>(), a[1].get<double>()}, a[2].get<double>()});
        else
            atoms.push_back({{a.value("re", 0.0), a.value("im", 0.0)}, a.at("mass").get<double>()});
    }
    std::vector<SingularityTag> tags;
    for (const auto& t : j.value("tags", nlohmann::json::array())) {
        if (t.is_array())
            tags.push_back({t[0].get<double>(), t[1].get<double>()});
        else
            tags.push_back({t.at("t").get<double>(), t.at("alpha").get<double>()});
    }
    ConformalFrame fr = j.contains("frame") ? ConformalFrame::from_name(j["frame"].get<std::string>()) : frame;
    cplx center = j.contains("center") ? to_c(j["center"]) : cplx(0.0);
    return user_exhaustion(j.value("name", std::string("user")), fr, j.at("value_expr").get<std::string>(),
                           j.value("laplacian_expr", std::string()), std::move(atoms), std::move(tags),
                           j.value("ma_mass_finite", true), center);
}

ExhaustionPtr exhaustion_from_name(const std::string& name, const ConformalFrame& frame) {
    if (name == "paper-u") {
        if (!frame.is_disc()) throw DomainError("paper-u lives on the disc frame");
        return paper_exhaustion();
    }
    if (name == "green") return green_exhaustion(frame, 0.0);
    if (name.starts_with("green:")) return green_exhaustion(frame, parse_complex(name.substr(6)));
    if (name.starts_with("json:")) {
        std::ifstream in(name.substr(5));
        if (!in) throw DomainError("cannot open exhaustion file " + name.substr(5));
        std::stringstream ss;
        ss << in.rdbuf();
        return exhaustion_from_json(ss.str(), frame);
    }
    throw DomainError("unknown exhaustion: " + name);
}

Pseudoball::Pseudoball(ExhaustionPtr u, double r) : u_(std::move(u)), r_(r) {
    if (!(r < 0.0)) throw DomainError("pseudoball level must be negative");
}

bool Pseudoball::contains(cplx z) const {
    cplx a = u_->frame.inverse(z);
    if (!(std::abs(a) < 1.0)) return false;
    return u_->value(z) < r_;
}

}  // namespace psh
