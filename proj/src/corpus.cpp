#include "psh/corpus.hpp"

#include <cmath>
#include <random>

namespace psh {

std::vector<std::string> norm_corpus() {
    return {"1",      "1+z/2",      "exp(z)",     "2+z^2",     "1/(2-z)",
            "(3+z)^2/4", "cos(z)", "exp(z/2)+1", "3+z-z^3/2", "pow(2+z,0.5)"};
}

std::vector<FactorCase> factor_corpus() {
    return {
        {"z*pow(1-z,-0.4)", {0.0}},
        {"exp((z+1)/(z-1))", {}},
        {"(z-0.5)*(z+0.3i)*(z-0.2+0.6i)", {0.5, cplx(0.0, -0.3), cplx(0.2, -0.6)}},
        {"pow(1-z,-0.4)", {}},
        {"(z-0.5)*exp(z)", {0.5}},
        {"z", {0.0}},
    };
}

std::vector<std::string> density_corpus() {
    return {"1/(2-z)", "exp(z)", "z^3-2*z", "pow(1-z,0.3)", "pow(1-z,-0.05)"};
}

std::vector<double> inclusion_q_grid() {
    std::vector<double> q;
    for (int k = 0; k < 8; ++k) q.push_back(std::round((0.10 + 0.05 * k) * 1e12) / 1e12);
    return q;
}

std::vector<Symbol> random_mobius_sample(int count, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Symbol> out;
    for (int k = 0; k < count; ++k) {
        const double rad = 0.9 * std::sqrt(U(rng));
        const cplx a = std::polar(rad, kTwoPi * U(rng));
        double theta;
        if (k % 2 == 0) {
            // e^{i theta} (1 - a)/(1 - conj a) = 1
            theta = std::arg((1.0 - std::conj(a)) / (1.0 - a));
        } else {
            do theta = kTwoPi * U(rng) - kPi;
            while (std::abs(mobius_symbol(a, theta)(1.0) - 1.0) < 0.05);
        }
        out.push_back(mobius_symbol(a, theta));
    }
    return out;
}

}  // namespace psh
