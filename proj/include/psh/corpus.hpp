#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psh/compose.hpp"

namespace psh {

/// Ten tag-free functions, holomorphic past the closed disc and zero-free on it.
std::vector<std::string> norm_corpus();

struct FactorCase {
    std::string expr;
    std::vector<cplx> zeros;  ///< closed-form zero list in the open disc
};

/// Functions with known zeros: outer tails, a singular inner factor, a bounded polynomial.
std::vector<FactorCase> factor_corpus();

/// Five members of H^1_u(paper-u) whose dilations converge fast enough to reach 1%.
std::vector<std::string> density_corpus();

/// The family (1 - z)^{-2q} and its q-grid 0.10, 0.15, ..., 0.45.
inline const char* kInclusionFamily = "pow(1-z,-2*q)";
std::vector<double> inclusion_q_grid();

/// Seeded Mobius sample; even indices have theta chosen so that phi(1) = 1, odd ones are
/// redrawn until |phi(1) - 1| >= 0.05.
std::vector<Symbol> random_mobius_sample(int count = 20, std::uint32_t seed = 12345);

}  // namespace psh
