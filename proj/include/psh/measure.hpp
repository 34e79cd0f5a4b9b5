#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "psh/exhaustion.hpp"
#include "psh/quad.hpp"

namespace psh {

/// Test function for the Lelong-Jensen pairing: value, Laplacian density and
/// point masses of dd^c phi (the dd^c phi = (1/2pi) Delta phi dA convention).
struct TestFunction {
    std::function<double(cplx)> value;
    std::function<double(cplx)> laplacian;
    std::vector<Atom> laplacian_atoms;
    bool harmonic = false;
};

/// Total Monge-Ampere mass: atoms plus (1/2pi) * integral of lambda. Throws
/// NonIntegrable (with the divergence evidence) when the density has infinite mass.
double ma_mass(const Exhaustion& u, const QuadConfig& cfg = {});

/// Integral of F over the pseudoball B(r) (r < 0) in polar coordinates about u.center,
/// or over the whole domain when r == 0.
IntegralEstimate region_integral(const Exhaustion& u, double r, const std::function<double(cplx)>& F, double tol,
                                double abs_tol = 0.0);

/// Right-hand side of the Lelong-Jensen formula at level r < 0:
/// int_{B(r)} phi dd^c u + int_{B(r)} (r - u) dd^c phi.
double lelong_jensen_lhs(const Exhaustion& u, double r, const TestFunction& phi, const QuadConfig& cfg = {});

/// The r -> 0- limit of the same pairing: int phi dd^c u - int u dd^c phi over the domain.
double lelong_jensen_limit(const Exhaustion& u, const TestFunction& phi, const QuadConfig& cfg = {});

struct DensityOptions {
    std::size_t grid = 4096;
    double direct_radius = 1e-3;  ///< below this distance beta comes from log-log interpolation of direct samples
    double model_radius = 1e-6;   ///< below this distance beta follows the fitted power law
    unsigned threads = 0;         ///< 0: PSH_THREADS or hardware concurrency
    QuadConfig quad{};
};

/// Behaviour of beta near a density tag: power-law fit, local exponents at the model
/// radius and the log-log samples used between the model and direct radii.
struct TagFit {
    double location;
    double exponent;          ///< gamma in beta ~ C |t - t0|^{-gamma}, fitted over [1e-5, 1e-3]
    double anchor_minus;      ///< beta(t0 - model_radius)
    double anchor_plus;       ///< beta(t0 + model_radius)
    double slope_far;         ///< log-log slope over [1e-3, 1e-1] (reported only)
    double local_minus;       ///< local exponent at t0 - model_radius
    double local_plus;
    std::vector<double> log_dist;  ///< log |t - t0| at the direct samples
    std::vector<double> log_minus, log_plus;
    std::vector<double> slope_minus, slope_plus;
};

/// beta with d mu_u = beta d sigma, sampled on a graded grid and interpolated.
class BoundaryDensity {
public:
    BoundaryDensity(ExhaustionPtr u, const DensityOptions& opts);

    double beta(double t) const;
    double beta_direct(double t) const;
    /// Density against the parameter: beta(t) |psi'(e^{it})|.
    double beta_dt(double t) const { return beta(t) * frame().boundary(t).weight; }

    const std::vector<SingularityTag>& tags() const { return tags_; }
    const std::vector<TagFit>& tag_fits() const { return fits_; }
    double total_mass() const { return total_mass_; }
    /// Integral of beta d sigma.
    double boundary_mass() const { return boundary_mass_; }
    const Exhaustion& exhaustion() const { return *u_; }
    ExhaustionPtr exhaustion_ptr() const { return u_; }
    const ConformalFrame& frame() const { return u_->frame; }
    const std::vector<double>& grid_t() const { return gt_; }
    const std::vector<double>& grid_beta() const { return gb_; }
    const DensityOptions& options() const { return opts_; }
    /// Circular distance from t to the nearest tag (pi if there are none).
    double tag_distance(double t) const;

private:
    double atoms_part(double t) const;
    double compute(double t) const;
    double interpolate(double t) const;

    ExhaustionPtr u_;
    DensityOptions opts_;
    std::vector<SingularityTag> tags_;
    std::vector<TagFit> fits_;
    std::vector<double> gt_, gb_;      // grid in [-pi, pi)
    std::vector<double> xt_, xb_, xd_; // periodic extension with Hermite slopes
    double total_mass_ = 0.0;
    double boundary_mass_ = 0.0;
    mutable std::mutex mu_;
    mutable std::map<double, double> memo_;
};

using BoundaryDensityPtr = std::shared_ptr<const BoundaryDensity>;

BoundaryDensityPtr boundary_density(ExhaustionPtr u, const DensityOptions& opts = {});

/// Integral of g(t) beta(t) d sigma with g's own tags merged into beta's.
IntegralEstimate pair_with_beta(const BoundaryDensity& bd, const std::function<double(double)>& g,
                                const std::vector<SingularityTag>& g_tags, double tol, double exclusion = 0.0);

/// |mu_{u,r}(H) - int phi_b beta d sigma| with H the harmonic extension of phi_b.
double weak_star_gap(const BoundaryDensity& bd, const std::function<double(double)>& phi_boundary, double r,
                     const QuadConfig& cfg = {});

/// Number of worker threads: PSH_THREADS if set, else hardware concurrency.
unsigned worker_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on worker threads; order of results is index-based.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace psh
