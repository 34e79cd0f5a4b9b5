#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psh/hardy.hpp"

namespace psh {

enum class SymbolKind { Mobius, FiniteBlaschke, Monomial };

/// e^{i theta} (z - a) / (1 - conj(a) z).
struct MobiusFactor {
    cplx a{0.0, 0.0};
    double theta = 0.0;

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
};

/// Holomorphic self-map of the disc that is unimodular on the circle.
struct Symbol {
    SymbolKind kind = SymbolKind::Mobius;
    std::string name;
    std::vector<MobiusFactor> factors;  ///< one factor for Mobius
    double rotation = 0.0;              ///< extra e^{i rotation} for FiniteBlaschke
    int n = 1;                          ///< Monomial degree

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
    int degree() const;
    /// Angles t in (-pi, pi] with s(e^{it}) = e^{i eta}, ascending.
    std::vector<double> preimages(double eta) const;
    /// Mobius inverse; DomainError for other kinds.
    cplx inverse(cplx w) const;
};

Symbol mobius_symbol(cplx a, double theta);
Symbol rotation_symbol(double theta);
Symbol identity_symbol();
Symbol monomial_symbol(int n);
/// Throws DomainError for an empty factor list or a factor with |a| >= 1.
Symbol blaschke_symbol(std::vector<MobiusFactor> factors, double rotation = 0.0);

/// "mobius:A,THETA", "rot:THETA", "monomial:N", "identity",
/// "blaschke:A1,A2,...[@THETA]". A is a complex constant, THETA a real one (pi allowed).
Symbol parse_symbol(std::string_view text);

/// f o s. Tags of f move to their boundary preimages with unchanged exponents.
HardyFunction compose(const HardyFunction& f, const Symbol& s);

/// Sum of beta over the boundary preimages of e^{i eta}. Throws CriticalValue when
/// |s'| < 1e-8 at a preimage.
double counting_function(const Symbol& s, const BoundaryDensity& bd, double eta);

/// Same sum with each term weighted by 1/|s'(xi_j)|, the Jacobian of the local inverse.
double counting_function_jacobian(const Symbol& s, const BoundaryDensity& bd, double eta);

/// (1/2pi) int |s'(e^{it})| dt; equals the number of preimages of every boundary point.
double boundary_degree(const Symbol& s);

/// Boundary angles center +- 2^{-k} for k in [kmin, kmax], plus a uniform background of 64.
std::vector<double> graded_eta_grid(const std::vector<double>& centers, int kmin = 3, int kmax = 20);

/// (1 - conj(xi) z)^{-exponent}: the witness with a boundary blow-up at xi.
HardyFunction witness_function(cplx xi, double exponent = 0.75);

struct WitnessPair {
    HardyFunction function;  ///< F, expected in H^p_u
    HardyFunction composed;  ///< F o s, expected outside
    Verdict function_verdict;
    Verdict composed_verdict;
    bool sound() const;
};

struct BoundednessOptions {
    int kmin = 3;
    int kmax = 20;
    double witness_exponent = 0.75;
    /// Relative change of the grid maximum allowed per refinement (kmax - 6, kmax - 3, kmax).
    double stability = 0.1;
    unsigned threads = 0;
};

struct BoundednessReport {
    Verdict verdict;
    bool fixed_point = false;        ///< phi(1) = 1 within 1e-12
    double fixed_point_defect = 0.0; ///< |phi(1) - 1|
    double ratio_sup = 0.0;          ///< max of N/beta over the grid
    double ratio_sup_jacobian = 0.0; ///< same with the Jacobian of the inverse
    double jacobian_sup = 0.0;       ///< max 1/|s'| on the circle
    std::vector<double> ratio_sup_by_depth;  ///< grid maxima at kmax - 6, kmax - 3, kmax
    bool ratio_stable = false;
    double ratio_near_one = 0.0;     ///< N/beta at eta = +-2^{-kmax}, averaged
    double worst_eta = 0.0;          ///< grid angle of the largest ratio
    std::optional<WitnessPair> witness;
};

/// Decides boundedness of C_s for a Mobius symbol by whether s carries every blow-up of beta
/// onto one at least as strong (for paper-u: phi(1) = 1; tag-free densities always hold), and
/// corroborates with the ratio beta(s^{-1} eta) / beta(eta) on graded grids. Fails carry a witness pair.
BoundednessReport mobius_boundedness(const Symbol& s, const BoundaryDensity& bd, double p,
                                     const BoundednessOptions& opts = {});

/// Counting-function criterion: Holds iff the blow-ups of beta are carried as above and the
/// grid maximum of N/beta is stable under refinement. Fails carry the witness at the offending boundary point.
BoundednessReport general_boundedness(const Symbol& s, const BoundaryDensity& bd, double p,
                                      const BoundednessOptions& opts = {});

}  // namespace psh
