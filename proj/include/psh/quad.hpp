#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace psh {

/// Integrand behaves like C |t - location|^{-exponent} near location.
/// exponent 0 marks a point where the mesh should cluster (kinks, peaks).
struct SingularityTag {
    double location;
    double exponent;
};

struct IntegralEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

enum class Convergence { Converges, Diverges, Inconclusive };
const char* to_string(Convergence c);

struct DivergenceReport {
    std::vector<double> exclusion_radii;
    std::vector<double> partial_values;
    std::vector<double> increments;
    /// Slope of log|I(eps_{k+1}) - I(eps_k)| against log eps_k over the fit window.
    /// Equals 1 - a for |t|^{-a}; negative means power growth of the partial values.
    double fitted_growth_exponent = std::numeric_limits<double>::quiet_NaN();
    /// Limit estimate (geometric tail added) when the verdict is Converges.
    double extrapolated = std::numeric_limits<double>::quiet_NaN();
    Convergence verdict = Convergence::Inconclusive;
    std::string note;
};

struct QuadConfig {
    double tol_1d = 1e-8;
    double tol_2d = 1e-6;
    std::vector<double> divergence_schedule = default_schedule();
    double divergence_slope_threshold = -0.05;
    double convergence_slope = 0.025;
    int fit_points = 5;
    std::size_t max_panels = 4000;

    static std::vector<double> default_schedule();
};

/// Breakpoint for integrate_interval: the mesh splits there and uses
/// tanh-sinh panels on both sides; alpha > 0 declares an algebraic singularity.
struct QuadPoint {
    double x;
    double alpha = 0.0;
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Global adaptive integration over [a, b]. Endpoints a and b can be listed in
/// points to declare them singular.
IntegralEstimate integrate_interval(const Fn1& f, double a, double b, std::vector<QuadPoint> points,
                                    double rel_tol, double abs_tol = 0.0, std::size_t max_panels = 4000);

/// Integral over a full period of the circle parameter, evaluated on [-pi, pi].
/// With exclusion > 0 the parameter balls of that radius around every tag with
/// positive exponent are removed, which is the only way tags with exponent >= 1
/// are accepted.
IntegralEstimate integrate_circle(const Fn1& f, const std::vector<SingularityTag>& tags, double tol,
                                  double exclusion = 0.0, double abs_tol = 0.0);

struct DiscOptions {
    double exclusion = 0.0;          ///< removes the cap {Re(z e^{-i t0}) > 1 - exclusion} per tag
    std::vector<double> interior_x;  ///< abscissae of interior features (atoms, peaks)
    std::vector<double> interior_y;
    double abs_tol = 0.0;
};

/// Iterated integral of f(x, y) over the unit disc, x outer, y inner. Tags are
/// boundary parameters with the 2-D exponent of f near e^{i t0}; integrability
/// needs exponent - 1/2 < 1 after the inner integration.
IntegralEstimate integrate_disc(const Fn2& f, const std::vector<SingularityTag>& tags, double tol,
                                const DiscOptions& opts = {});

/// Evaluates partial integrals on a decreasing exclusion schedule and classifies
/// their behavior from the decay of successive increments.
DivergenceReport probe_divergence(const std::function<double(double)>& family, std::span<const double> schedule,
                                  const QuadConfig& cfg = {});

/// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys, double* rms = nullptr);

}  // namespace psh
