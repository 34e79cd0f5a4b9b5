#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "psh/measure.hpp"

namespace psh {

/// Holomorphic function on the domain with its boundary trace, parameterized by
/// the disc angle t of the frame (t -> f*(psi(e^{it}))).
struct HardyFunction {
    std::string name;
    std::function<cplx(cplx)> interior;
    std::function<cplx(double)> boundary_trace;
    /// Boundary blow-ups of |f|: f ~ |t - location|^{-exponent}.
    std::vector<SingularityTag> singularities;
    /// Optional f'; when absent a Cauchy-integral estimate is used.
    std::function<cplx(cplx)> derivative;
    /// Optional Delta |f|^2 = 4 |f'|^2.
    std::function<double(cplx)> laplacian_of_modulus_sq;
};

/// Builds a function from an expression in z. The trace is the closed form at e^{it}
/// with a Richardson radial limit where that is not finite. When tags is empty the
/// boundary is scanned for blow-ups and their exponents are measured.
HardyFunction hardy_from_expr(const std::string& expr, const std::vector<SingularityTag>& tags = {},
                              double q = 0.0, bool detect_tags = true);

/// Builds a function from evaluators; the trace falls back to the radial limit.
HardyFunction hardy_from_callable(std::string name, std::function<cplx(cplx)> f,
                                  std::vector<SingularityTag> tags = {},
                                  std::function<cplx(double)> trace = {});

/// Radial limit f((1-d) e^{it}) extrapolated from d in {1e-4, 1e-5, 1e-6}.
cplx radial_limit(const std::function<cplx(cplx)>& f, double t);

/// f' at z from a 16-point Cauchy integral (or the supplied derivative).
cplx derivative_at(const HardyFunction& f, cplx z);

/// Largest |df/dzbar| / (1 + |f'|) over 50 interior points (centered differences).
double cauchy_riemann_defect(const HardyFunction& f);

/// Blow-up points of |f| on the unit circle with measured exponents (exponent > 0.02).
std::vector<SingularityTag> detect_singularities(const std::function<cplx(cplx)>& f);

HardyFunction hardy_sum(const HardyFunction& f, const HardyFunction& g);
HardyFunction hardy_scale(cplx c, const HardyFunction& f);
HardyFunction hardy_product(const HardyFunction& f, const HardyFunction& g);
/// f_rho(z) = f(rho z); tag-free for rho < 1.
HardyFunction hardy_dilate(const HardyFunction& f, double rho);

enum class Outcome { Holds, Fails, Inconclusive };
const char* to_string(Outcome o);

struct Witness {
    std::string function;
    double parameter = 0.0;
    DivergenceReport report;
};

struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    std::optional<Witness> witness;
    std::string diagnostics;
    /// Combined exponent of |f*|^p beta at the worst tag (0 when tag-free).
    double exponent = 0.0;
    /// Norm when the verdict is Holds and the integral was evaluated.
    std::optional<double> norm;
};

/// Combined exponents of |f*|^p beta at each tag location (f's tags scaled by p, merged with beta's).
std::vector<SingularityTag> combined_tags(const HardyFunction& f, double p, const BoundaryDensity& bd);

/// (int |f*|^p beta dsigma)^{1/p}. Throws NonIntegrable when a combined exponent is >= 1.
double norm_boundary(const HardyFunction& f, double p, const BoundaryDensity& bd, double tol = 1e-8);

struct NormLimitResult {
    std::vector<double> levels;
    std::vector<double> values;  ///< mu_{u,r}(|f|^p) at each level
    double limit = 0.0;          ///< the r -> 0- pairing
    double norm = 0.0;           ///< limit^{1/p}
    double cauchy_gap = 0.0;     ///< |limit - last level value| / limit
    bool monotone = true;
};

std::vector<double> default_levels();

/// Norm through the Lelong-Jensen pairing along r_schedule and at r -> 0-.
/// Delta|f|^p is 4|f'|^2 for p = 2 and a 5-point stencil (h = 1e-4) otherwise;
/// the stencil throws StencilNearZero near zeros of f.
NormLimitResult norm_limit(const HardyFunction& f, double p, const Exhaustion& u,
                           const std::vector<double>& r_schedule = default_levels(), const QuadConfig& cfg = {});

/// Delta |f|^p at z via the route norm_limit uses.
double laplacian_modulus_p(const HardyFunction& f, double p, cplx z);

struct ClassicalNorm {
    double value = 0.0;  ///< limit of the integral means, to the power 1/p
    DivergenceReport report;
};

/// sup_r ((1/2pi) int |f(r e^{it})|^p dt)^{1/p} over r = 1 - 2^{-k}; disc frame.
/// Throws NonIntegrable when the means diverge.
ClassicalNorm classical_norm(const HardyFunction& f, double p, const QuadConfig& cfg = {});

/// Classical H^p verdict (Holds when classical_norm is finite).
Verdict classical_membership(const HardyFunction& f, double p, const QuadConfig& cfg = {});

/// H^p_u verdict from the boundary integral. Combined exponents in [0.9, 1.1] go to the
/// divergence probe; elsewhere the exponent rule decides and the probe report is attached.
Verdict membership(const HardyFunction& f, double p, const BoundaryDensity& bd, const QuadConfig& cfg = {});

struct DilationStep {
    double rho;
    double gap;
};

std::vector<double> default_rhos();

/// ||f - f_rho||_{H^p_u} along the schedule; disc frame.
std::vector<DilationStep> dilation_approximation(const HardyFunction& f, double p, const BoundaryDensity& bd,
                                                 const std::vector<double>& rhos = default_rhos());

}  // namespace psh
