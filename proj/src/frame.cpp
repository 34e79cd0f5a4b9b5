#include "psh/frame.hpp"

#include <algorithm>
#include <cstdio>

#include <cmath>
#include <string>

#include "psh/errors.hpp"

namespace psh {

ConformalFrame ConformalFrame::unit_disc() { return ConformalFrame(0.0); }

ConformalFrame ConformalFrame::polynomial(double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("polynomial frame needs 0 < eps < 1/2, got " + std::to_string(eps));
    return ConformalFrame(eps);
}

ConformalFrame ConformalFrame::from_name(std::string_view name) {
    if (name == "disc") return unit_disc();
    if (name.starts_with("poly:")) {
        std::string rest(name.substr(5));
        std::size_t used = 0;
        double eps = 0.0;
        try {
            eps = std::stod(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size()) throw DomainError("bad frame name: " + std::string(name));
        return polynomial(eps);
    }
    throw DomainError("unknown frame: " + std::string(name));
}

std::string ConformalFrame::name() const {
    if (is_disc()) return "disc";
    char buf[64];
    std::snprintf(buf, sizeof buf, "poly:%.17g", eps_);
    return buf;
}

cplx ConformalFrame::inverse(cplx w) const {
    if (is_disc()) return w;
    cplx z = w;
    for (int it = 0; it < 64; ++it) {
        cplx r = psi(z) - w;
        if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(w))) break;
        z -= r / psi_prime(z);
    }
    return z;
}

BoundaryPoint ConformalFrame::boundary(double t) const {
    double tt = std::fmod(t, kTwoPi);
    if (tt < 0) tt += kTwoPi;
    cplx e = std::polar(1.0, tt);
    return {tt, psi(e), std::abs(psi_prime(e))};
}

double wrap_angle(double t) {
    if (t > -kPi && t <= kPi) return t;
    double r = std::remainder(t, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

double disc_poisson(cplx z, double t) {
    cplx e = std::polar(1.0, t);
    double x = z.real(), y = z.imag();
    double s = (1.0 - x) * (1.0 + x) - y * y;
    double d = std::norm(e - z);
    return s / (kTwoPi * d);
}

double poisson_kernel(const ConformalFrame& frame, cplx z, double t) {
    cplx zeta = frame.inverse(z);
    if (!(std::abs(zeta) < 1.0)) throw DomainError("Poisson kernel needs an interior point");
    double k = disc_poisson(zeta, t);
    if (frame.is_disc()) return k;
    return k / std::abs(frame.psi_prime(std::polar(1.0, t)));
}

double green_function(const ConformalFrame& frame, cplx z, cplx w) {
    cplx a = frame.inverse(z), b = frame.inverse(w);
    if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) throw DomainError("Green function needs interior points");
    if (a == b) throw PoleError("Green function evaluated at its pole");
    return std::log(std::abs((a - b) / (1.0 - std::conj(b) * a)));
}

}  // namespace psh
