#include "psh/factor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "psh/errors.hpp"

namespace psh {

namespace {

std::vector<SingularityTag> rescaled(const std::vector<SingularityTag>& tags, double s) {
    std::vector<SingularityTag> out;
    for (const auto& t : tags)
        if (s * t.exponent > 0.0) out.push_back({t.location, s * t.exponent});
    return out;
}

// Winding number of q around 0 along |z| = r. An arc is accepted when its four quarter steps
// each turn by at most 0.5 rad and add up to the end-to-end phase change; otherwise it is halved.
// Quarters catch the aliasing a single split misses (a turn of 2pi + d reads as d).
int winding(const std::function<cplx(cplx)>& q, double r, int n = 1024) {
    double total = 0.0;
    std::vector<std::pair<double, double>> stack;
    for (int k = n; k >= 1; --k) stack.emplace_back(kTwoPi * (k - 1) / n, kTwoPi * k / n);
    cplx prev = q(r);
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        cplx cur = q(std::polar(r, b));
        double d = std::arg(cur / prev);
        bool ok = std::abs(d) <= 0.5;
        double chained = 0.0;
        cplx last = prev;
        for (int j = 1; j <= 4 && ok; ++j) {
            cplx v = j == 4 ? cur : q(std::polar(r, a + 0.25 * j * (b - a)));
            double step = std::arg(v / last);
            ok = std::abs(step) <= 0.5;
            chained += step;
            last = v;
        }
        ok = ok && std::abs(chained - d) < 1e-9;
        if (!ok && b - a > 1e-12) {
            double m = 0.5 * (a + b);
            stack.emplace_back(m, b);
            stack.emplace_back(a, m);
            continue;
        }
        total += d;
        prev = cur;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

cplx BlaschkeProduct::operator()(cplx z) const {
    cplx b = rotation;
    for (cplx a : zeros) {
        if (a == cplx(0.0)) {
            b *= z;
            continue;
        }
        b *= (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
    }
    return b;
}

cplx BlaschkeProduct::derivative(cplx z) const {
    // B' = B * sum of logarithmic derivatives; away from zeros
    cplx s = 0.0;
    for (cplx a : zeros) {
        if (a == cplx(0.0)) {
            s += 1.0 / z;
            continue;
        }
        s += -1.0 / (a - z) + std::conj(a) / (1.0 - std::conj(a) * z);
    }
    return (*this)(z)*s;
}

HardyFunction BlaschkeProduct::as_function() const {
    BlaschkeProduct b = *this;
    std::ostringstream os;
    os << "Blaschke[";
    for (std::size_t k = 0; k < zeros.size(); ++k) os << (k ? "," : "") << zeros[k];
    os << "]";
    return hardy_from_callable(os.str(), [b](cplx z) { return b(z); }, {},
                               [b](double t) { return b(std::polar(1.0, t)); });
}

BlaschkeProduct blaschke_from_zeros(const std::vector<cplx>& zeros, cplx rotation) {
    for (cplx a : zeros)
        if (!(std::abs(a) < 1.0)) {
            std::ostringstream os;
            os << "Blaschke zero " << a << " is not inside the disc";
            throw DomainError(os.str());
        }
    return {zeros, rotation};
}

cplx herglotz(const std::function<double(double)>& k, cplx z, const std::vector<SingularityTag>& tags, double tol) {
    std::vector<QuadPoint> pts;
    for (const auto& t : tags) pts.push_back({wrap_angle(t.location), 0.0});
    if (std::abs(z) > 0.5) pts.push_back({std::arg(z), 0.0});
    auto kernel = [&](double t) {
        cplx e = std::polar(1.0, t);
        return (e + z) / (e - z);
    };
    // clean data converges in a few dozen panels; the cap bounds the work spent chasing
    // roundoff in traces like exp(-i cot(t/2)) near t = 0
    const std::size_t cap = 400;
    auto re = integrate_interval([&](double t) { return kernel(t).real() * k(t); }, -kPi, kPi, pts, tol, 1e-15, cap);
    auto im = integrate_interval([&](double t) { return kernel(t).imag() * k(t); }, -kPi, kPi, pts, tol, 1e-15, cap);
    return cplx(re.value, im.value) / kTwoPi;
}

HardyFunction outer_from_modulus(std::function<double(double)> log_modulus, std::vector<SingularityTag> tags,
                                 double tol) {
    std::vector<QuadPoint> pts;
    for (const auto& t : tags) pts.push_back({wrap_angle(t.location), 0.0});
    auto mass = integrate_interval([&](double t) { return std::abs(log_modulus(t)); }, -kPi, kPi, pts, 1e-8, 1e-12, 400);
    if (!std::isfinite(mass.value)) throw NonIntegrable("log-modulus is not integrable on the circle");
    HardyFunction F;
    F.name = "outer";
    F.interior = [log_modulus, tags, tol](cplx z) { return std::exp(herglotz(log_modulus, z, tags, tol)); };
    F.boundary_trace = [log_modulus](double t) { return cplx(std::exp(log_modulus(t)), 0.0); };
    F.singularities = std::move(tags);
    return F;
}

std::vector<cplx> interior_grid() {
    std::vector<cplx> g;
    for (int k = 0; k < 8; ++k)
        for (int j = 0; j < 32; ++j) g.push_back(std::polar(0.95 * (k + 1) / 8.0, kTwoPi * (j + 0.5 * (k % 2)) / 32.0));
    return g;
}

Factorization factorize(const HardyFunction& f, const std::vector<cplx>& zeros) {
    bool zero = true;
    for (int k = 0; k < 16 && zero; ++k) zero = std::abs(f.interior(std::polar(0.5, kTwoPi * k / 16.0))) == 0.0;
    if (zero) throw ZeroFunction("cannot factor the zero function");

    Factorization fac;
    fac.blaschke = blaschke_from_zeros(zeros);
    auto logmod = [f](double t) {
        double v = std::log(std::abs(f.boundary_trace(t)));
        // a node on a boundary zero or pole is a null set: read the neighbouring value
        if (!std::isfinite(v)) v = std::log(std::abs(f.boundary_trace(t + 1e-7)));
        return v;
    };
    fac.outer = outer_from_modulus(logmod, f.singularities);
    fac.log_outer = [logmod, tags = f.singularities](cplx z) { return herglotz(logmod, z, tags, 1e-11); };
    fac.outer.name = "outer part of " + f.name;

    const BlaschkeProduct B = fac.blaschke;
    const HardyFunction F = fac.outer;
    fac.singular.name = "singular part of " + f.name;
    fac.singular.interior = [f, B, F](cplx z) {
        auto quotient = [&](cplx w) { return f.interior(w) / (B(w) * F.interior(w)); };
        if (std::abs(B(z)) > 1e-10) return quotient(z);
        // removable singularity at a listed zero: mean value over a small circle
        const double rad = std::min(1e-4, 0.5 * (1.0 - std::abs(z)));
        cplx sum = 0.0;
        for (int k = 0; k < 8; ++k) sum += quotient(z + std::polar(rad, kTwoPi * (k + 0.5) / 8.0));
        return sum / 8.0;
    };
    fac.singular.boundary_trace = [f, B](double t) {
        cplx v = f.boundary_trace(t);
        return v / (B(std::polar(1.0, t)) * std::abs(v));
    };

    for (cplx z : interior_grid()) {
        cplx fz = f.interior(z), bz = B(z), Fz = F.interior(z);
        cplx s = fz / (bz * Fz);
        fac.singular_sup = std::max(fac.singular_sup, std::abs(s));
        fac.reconstruction_residual =
            std::max(fac.reconstruction_residual, std::abs(fz - bz * s * Fz) / (1.0 + std::abs(fz)));
    }
    if (fac.singular_sup > 1.0 + 1e-6) {
        std::ostringstream os;
        os << "|f/(BF)| reaches " << fac.singular_sup << " for " << f.name << "; the zero list is wrong";
        throw ResidualNotInner(os.str());
    }
    // F has no zeros, so S winds iff f and B wind differently; f is cheaper to evaluate than F
    int listed = 0;
    for (cplx a : zeros) listed += std::abs(a) < 0.95;
    if (int w = winding(f.interior, 0.95) - listed; w != 0) {
        std::ostringstream os;
        os << "f/(BF) winds " << w << " times around 0 on |z|=0.95 for " << f.name << "; zeros were missed";
        throw ResidualNotInner(os.str());
    }
    return fac;
}

std::vector<cplx> find_zeros(const HardyFunction& f, int rings, int per_ring) {
    double scale = 0.0;
    for (int k = 0; k < 32; ++k) scale = std::max(scale, std::abs(f.interior(std::polar(0.9, kTwoPi * k / 32.0))));
    std::vector<cplx> roots;
    for (int r = 0; r < rings; ++r)
        for (int j = 0; j < per_ring; ++j) {
            cplx z = std::polar(0.95 * (r + 1) / rings, kTwoPi * (j + 0.5 * (r % 2)) / per_ring);
            bool ok = false;
            for (int it = 0; it < 80; ++it) {
                cplx d = derivative_at(f, z);
                if (std::abs(d) == 0.0) break;
                cplx step = f.interior(z) / d;
                z -= step;
                if (!(std::abs(z) < 1.0)) break;
                if (std::abs(step) < 1e-15) {
                    ok = true;
                    break;
                }
            }
            if (!ok || !(std::abs(z) < 1.0 - 1e-9)) continue;
            if (std::abs(f.interior(z)) > 1e-10 * (1.0 + scale)) continue;
            // roundoff-sized parts would rotate the Blaschke normalisation |a|/a
            if (std::abs(z.real()) < 1e-14) z.real(0.0);
            if (std::abs(z.imag()) < 1e-14) z.imag(0.0);
            bool dup = false;
            for (cplx w : roots) dup = dup || std::abs(w - z) < 1e-6;
            if (dup) continue;
            double rad = std::min(1e-3, 0.5 * (1.0 - std::abs(z)));
            int m = std::max(1, winding([&](cplx w) { return f.interior(z + (w / std::abs(w)) * rad); }, 1.0, 64));
            for (int k = 0; k < m; ++k) roots.push_back(z);
        }
    return roots;
}

bool FactorVerdicts::all_hold() const {
    return blaschke.outcome == Outcome::Holds && singular.outcome == Outcome::Holds && outer.outcome == Outcome::Holds;
}

FactorVerdicts factors_in_space(const Factorization& fac, double p, const BoundaryDensity& bd, const QuadConfig& cfg) {
    FactorVerdicts v;
    v.blaschke = membership(fac.blaschke.as_function(), p, bd, cfg);
    v.singular = membership(fac.singular, p, bd, cfg);
    v.outer = membership(fac.outer, p, bd, cfg);
    return v;
}

cplx radial_log(const std::function<cplx(cplx)>& q, cplx z) {
    cplx q0 = q(0.0);
    if (std::abs(q0) == 0.0) throw BranchError("logarithm undefined: value 0 at the origin");
    cplx L = std::log(q0);
    // continue along 0 -> z, halving steps whose phase change exceeds 0.5 rad
    std::vector<std::pair<double, double>> stack;
    const int n = 16;
    for (int k = n; k >= 1; --k) stack.emplace_back(double(k - 1) / n, double(k) / n);
    cplx prev = q0;
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        cplx cur = q(b * z);
        if (!(std::abs(cur) > 0.0) || !std::isfinite(std::abs(cur))) throw BranchError("continuation hits a zero");
        double dphi = std::arg(cur / prev);
        if (std::abs(dphi) > 0.5) {
            if (b - a < 1e-9) throw BranchError("phase jumps near an undetected zero");
            double m = 0.5 * (a + b);
            stack.emplace_back(m, b);
            stack.emplace_back(a, m);
            continue;
        }
        L += cplx(std::log(std::abs(cur) / std::abs(prev)), dphi);
        prev = cur;
    }
    return L;
}

H2Split h2_split(const HardyFunction& f, double p, const std::vector<cplx>& zeros) {
    Factorization fac = factorize(f, zeros);
    const BlaschkeProduct B = fac.blaschke;
    const HardyFunction S = fac.singular;
    const auto logF = fac.log_outer;
    H2Split out;
    out.h.name = "h of " + f.name;
    out.h.interior = [logF, p](cplx z) { return std::exp(0.5 * p * logF(z)); };
    out.h.boundary_trace = [f, p](double t) { return cplx(std::pow(std::abs(f.boundary_trace(t)), 0.5 * p), 0.0); };
    out.h.singularities = rescaled(f.singularities, 0.5 * p);
    out.g.name = "g of " + f.name;
    out.g.interior = [logF, p, B, S](cplx z) {
        return B(z) * S.interior(z) * std::exp((1.0 - 0.5 * p) * logF(z));
    };
    out.g.boundary_trace = [f, p](double t) {
        return cplx(std::pow(std::abs(f.boundary_trace(t)), 1.0 - 0.5 * p), 0.0);
    };
    out.g.singularities = rescaled(f.singularities, 1.0 - 0.5 * p);
    for (cplx z : interior_grid()) {
        cplx fz = f.interior(z);
        out.residual =
            std::max(out.residual, std::abs(fz - out.g.interior(z) * out.h.interior(z)) / (1.0 + std::abs(fz)));
    }
    return out;
}

HardyFunction transport_to_frame(const HardyFunction& f, const ConformalFrame& frame) {
    HardyFunction g = f;
    g.name = f.name + " on " + frame.name();
    g.interior = [f, frame](cplx z) { return f.interior(frame.inverse(z)); };
    g.derivative = nullptr;
    g.laplacian_of_modulus_sq = nullptr;
    return g;
}

}  // namespace psh
