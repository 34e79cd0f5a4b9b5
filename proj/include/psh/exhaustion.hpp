#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "psh/frame.hpp"
#include "psh/quad.hpp"

namespace psh {

struct Atom {
    cplx location;
    double mass;
};

/// Negative continuous subharmonic exhaustion of a frame's domain.
/// dd^c u = (1/2pi) lambda dA + sum of atoms; so the Green exhaustion has total mass 1.
struct Exhaustion {
    std::string name;
    ConformalFrame frame = ConformalFrame::unit_disc();
    std::function<double(cplx)> value;
    std::function<double(cplx)> laplacian_density;  ///< lambda = Delta u on the absolutely continuous part
    bool has_density = false;                       ///< false when lambda vanishes identically
    std::vector<Atom> atoms;
    /// Boundary parameters (disc coordinates) where lambda blows up, with its 2-D exponent.
    std::vector<SingularityTag> density_boundary_tags;
    bool ma_mass_finite = true;
    /// Interior point the pseudoballs are star-shaped about (the pole, or the minimum of u).
    cplx center{0.0, 0.0};
};

using ExhaustionPtr = std::shared_ptr<const Exhaustion>;

ExhaustionPtr green_exhaustion(const ConformalFrame& frame, cplx w = 0.0);

/// The paper-u exhaustion on the disc, normalized so that Delta u = (1-x)^{-5/4}:
/// u = (16/3) [ -(1-x)^{3/4} + P[(1-cos t)^{3/4}](z) ].
ExhaustionPtr paper_exhaustion();

/// Scale factor 16/3 applied to -(1-x)^{3/4} + P[...]; the unscaled
/// Laplacian is (3/16)(1-x)^{-5/4}.
inline constexpr double kPaperScale = 16.0 / 3.0;

/// Unscaled pieces of paper-u, exposed for cross-checks.
double paper_boundary_data(double t);                 ///< (1 - cos t)^{3/4}
double paper_poisson_series(cplx z);                  ///< P[data](z) from the Fourier series
double paper_poisson_quadrature(cplx z, double tol);  ///< P[data](z) by adaptive quadrature
double paper_poisson_hypergeometric(cplx z);          ///< P[data](z) from Euler's integral for 2F1

/// Exhaustion from expressions in z (Omega coordinates) with atoms and boundary tags.
ExhaustionPtr user_exhaustion(const std::string& name, const ConformalFrame& frame, const std::string& value_expr,
                              const std::string& laplacian_expr, std::vector<Atom> atoms,
                              std::vector<SingularityTag> tags, bool mass_finite = true, cplx center = 0.0);

/// JSON record {value_expr, laplacian_expr, atoms: [{re, im, mass}], tags: [{t, alpha}], frame, center}.
ExhaustionPtr exhaustion_from_json(const std::string& json_text, const ConformalFrame& frame);

/// "green", "green:<w>", "paper-u", or "json:<path>".
ExhaustionPtr exhaustion_from_name(const std::string& name, const ConformalFrame& frame);

/// Sublevel set {u < r}.
class Pseudoball {
public:
    Pseudoball(ExhaustionPtr u, double r);
    bool contains(cplx z) const;
    double level() const { return r_; }
    const Exhaustion& exhaustion() const { return *u_; }

private:
    ExhaustionPtr u_;
    double r_;
};

inline Pseudoball pseudoball(ExhaustionPtr u, double r) { return Pseudoball(std::move(u), r); }

}  // namespace psh
