#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace psh {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct DerivativeBounds {
    double m;
    double M;
};

struct BoundaryPoint {
    double t;      ///< parameter angle in [0, 2pi)
    cplx xi;       ///< psi(e^{it})
    double weight; ///< |psi'(e^{it})|, the arc-length Jacobian
};

/// Jordan domain given by its Riemann map psi: D -> Omega with psi(0) = 0.
/// Two shapes ship: the disc (eps = 0) and psi(z) = z + eps z^2, 0 < eps < 1/2.
class ConformalFrame {
public:
    static ConformalFrame unit_disc();
    static ConformalFrame polynomial(double eps);
    /// "disc" or "poly:<eps>"
    static ConformalFrame from_name(std::string_view name);

    cplx psi(cplx z) const { return z + eps_ * z * z; }
    cplx psi_prime(cplx z) const { return 1.0 + 2.0 * eps_ * z; }
    /// Newton iteration seeded at w (64 iterations, residual 1e-13).
    cplx inverse(cplx w) const;
    BoundaryPoint boundary(double t) const;
    DerivativeBounds derivative_bounds() const { return {1.0 - 2.0 * eps_, 1.0 + 2.0 * eps_}; }

    bool is_disc() const { return eps_ == 0.0; }
    double eps() const { return eps_; }
    std::string name() const;
    bool operator==(const ConformalFrame& o) const { return eps_ == o.eps_; }

private:
    explicit ConformalFrame(double eps) : eps_(eps) {}
    double eps_;
};

/// Disc kernel (1-|z|^2) / (2pi |e^{it}-z|^2).
double disc_poisson(cplx z, double t);

/// P_Omega(z, xi(t)) normalized against arc length on the boundary.
double poisson_kernel(const ConformalFrame& frame, cplx z, double t);

/// g_Omega(z, w) = log |(phi(z)-phi(w)) / (1 - conj(phi(w)) phi(z))|, phi = psi^{-1}.
double green_function(const ConformalFrame& frame, cplx z, cplx w);

/// Normalizes an angle to (-pi, pi].
double wrap_angle(double t);

}  // namespace psh
