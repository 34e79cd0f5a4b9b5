#pragma once

#include <string>
#include <vector>

#include "psh/measure.hpp"

namespace psh {

struct ReproduceOptions {
    std::size_t grid = 4096;
    unsigned threads = 0;
    QuadConfig quad{};
};

struct Check {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct CaseResult {
    std::string id;
    int criterion = 0;
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool pass() const;
};

/// Shared inputs: the two shipped exhaustions on the disc and their densities, built on demand.
class ReproduceContext {
public:
    explicit ReproduceContext(ReproduceOptions opts = {});
    const BoundaryDensity& paper();
    const BoundaryDensity& green();
    /// Seconds spent building the paper-u density (0 until built).
    double paper_build_seconds() const { return paper_seconds_; }
    const ReproduceOptions& options() const { return opts_; }

private:
    ReproduceOptions opts_;
    BoundaryDensityPtr paper_, green_;
    double paper_seconds_ = 0.0;
};

/// Case ids in criterion order: mass-identity, lelong-jensen, norm-equality, strict-inclusion,
/// beta-exponent, factorization, density, composition, divergence-calibration.
std::vector<std::string> case_ids();

/// Canonical id for a case name or alias; throws UnknownCase.
std::string resolve_case(const std::string& name);

CaseResult run_case(const std::string& id, ReproduceContext& ctx);

/// 17 significant digits.
std::string fmt(double v);

}  // namespace psh
