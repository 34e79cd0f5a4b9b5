#pragma once

#include <functional>
#include <vector>

#include "psh/hardy.hpp"

namespace psh {

/// Finite Blaschke product rotation * prod (|a|/a) (a - z)/(1 - conj(a) z), with z for a = 0.
struct BlaschkeProduct {
    std::vector<cplx> zeros;
    cplx rotation{1.0, 0.0};

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
    HardyFunction as_function() const;
};

/// Throws DomainError unless every |a_j| < 1.
BlaschkeProduct blaschke_from_zeros(const std::vector<cplx>& zeros, cplx rotation = 1.0);

/// exp of the Herglotz transform of log_modulus. Boundary traces of the result carry
/// the modulus exp(log_modulus) with zero phase. tags mark log-singularities of log_modulus.
/// Throws NonIntegrable when log_modulus is not integrable (a modulus vanishing on an arc).
HardyFunction outer_from_modulus(std::function<double(double)> log_modulus, std::vector<SingularityTag> tags = {},
                                 double tol = 1e-11);

/// Herglotz transform (1/2pi) int (e^{it}+z)/(e^{it}-z) k(t) dt.
cplx herglotz(const std::function<double(double)>& k, cplx z, const std::vector<SingularityTag>& tags, double tol);

struct Factorization {
    BlaschkeProduct blaschke;
    HardyFunction singular;  ///< S = f / (B F), pointwise
    HardyFunction outer;     ///< F
    std::function<cplx(cplx)> log_outer;  ///< the Herglotz transform, a continuous log F
    double reconstruction_residual = 0.0;  ///< max |f - BSF| / (1 + |f|) on the interior grid
    double singular_sup = 0.0;             ///< max |S| on the interior grid
};

/// Points on 8 rings of 32 angles up to radius 0.95.
std::vector<cplx> interior_grid();

/// f = B S F. Throws ZeroFunction for f == 0 and ResidualNotInner when |S| > 1 + 1e-6
/// on the grid or S winds around 0 on |z| = 0.95 (missed zeros).
Factorization factorize(const HardyFunction& f, const std::vector<cplx>& zeros);

/// Zeros in the open disc by Newton iteration from a seeded grid.
std::vector<cplx> find_zeros(const HardyFunction& f, int rings = 6, int per_ring = 16);

struct FactorVerdicts {
    Verdict blaschke;
    Verdict singular;
    Verdict outer;
    bool all_hold() const;
};

FactorVerdicts factors_in_space(const Factorization& fac, double p, const BoundaryDensity& bd,
                                const QuadConfig& cfg = {});

struct H2Split {
    HardyFunction g;  ///< f / h
    HardyFunction h;  ///< zero-free, h^{2/p} = f / I
    double residual = 0.0;  ///< max |f - g h| / (1 + |f|) on the interior grid
};

/// For f in H^p_u with f = B S F: h = F^{p/2} and g = B S F^{1 - p/2}, powers taken through
/// the Herglotz logarithm of F, so f = g h (for p = 1, g = B S h). Throws ZeroFunction.
H2Split h2_split(const HardyFunction& f, double p, const std::vector<cplx>& zeros);

/// Continuous logarithm of q along the segment from 0 to z.
cplx radial_log(const std::function<cplx(cplx)>& q, cplx z);

/// Pulls a disc function to the frame's domain: z -> f(inverse(z)).
HardyFunction transport_to_frame(const HardyFunction& f, const ConformalFrame& frame);

}  // namespace psh
