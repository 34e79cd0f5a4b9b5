#include <cmath>
#include <vector>

#include "common.hpp"
#include "psh/quad.hpp"

using namespace psh;

TEST_CASE("endpoint singularity x^{-1/2} on [0, 1]") {
    auto r = integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {{0.0, 0.5}}, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("smooth periodic integrands") {
    // int exp(cos t) dt = 2 pi I0(1)
    auto r = integrate_circle([](double t) { return std::exp(std::cos(t)); }, {}, 1e-13);
    CHECK(r.value == doctest::Approx(kTwoPi * std::cyl_bessel_i(0.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("tagged circle integral of |t|^{-a}") {
    for (double a : {0.3, 0.5, 0.8}) {
        auto r = integrate_circle([a](double t) { return std::pow(std::abs(t), -a); }, {{0.0, a}}, 1e-10);
        const double exact = 2.0 * std::pow(kPi, 1.0 - a) / (1.0 - a);
        CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("interior tag away from the origin") {
    // |t - 1|^{-1/2} over [-pi, pi]
    auto r = integrate_circle([](double t) { return 1.0 / std::sqrt(std::abs(t - 1.0)); }, {{1.0, 0.5}}, 1e-10);
    const double exact = 2.0 * (std::sqrt(kPi - 1.0) + std::sqrt(kPi + 1.0));
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("disc integral: area and a radial weight") {
    auto area = integrate_disc([](double, double) { return 1.0; }, {}, 1e-10);
    CHECK(area.value == doctest::Approx(kPi).epsilon(1e-9));
    auto r2 = integrate_disc([](double x, double y) { return x * x + y * y; }, {}, 1e-10);
    CHECK(r2.value == doctest::Approx(kPi / 2).epsilon(1e-9));
    // (1 - x)^{-5/4} integrates to 2^{7/4} B(3/2, 1/4)
    auto w = integrate_disc([](double x, double) { return std::pow(1.0 - x, -1.25); }, {{0.0, 1.25}}, 1e-8);
    const double exact = 2.0 * std::pow(2.0, 0.75) * std::beta(1.5, 0.25);
    CHECK(w.value == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("divergence probe classifies |t|^{-a}") {
    QuadConfig cfg;
    for (double a : {0.5, 0.8}) {
        auto rep = probe_divergence(
            [a](double eps) {
                return integrate_circle([a](double t) { return std::pow(std::abs(t), -a); }, {{0.0, a}}, 1e-10, eps).value;
            },
            cfg.divergence_schedule, cfg);
        CHECK(rep.verdict == Convergence::Converges);
        CHECK(rep.fitted_growth_exponent == doctest::Approx(1.0 - a).epsilon(0.05));
        CHECK(rep.extrapolated == doctest::Approx(2.0 * std::pow(kPi, 1.0 - a) / (1.0 - a)).epsilon(1e-3));
    }
    for (double a : {1.0, 1.2}) {
        auto rep = probe_divergence(
            [a](double eps) {
                return integrate_circle([a](double t) { return std::pow(std::abs(t), -a); }, {{0.0, a}}, 1e-10, eps).value;
            },
            cfg.divergence_schedule, cfg);
        CHECK(rep.verdict == Convergence::Diverges);
    }
}

TEST_CASE("fit_slope recovers a line") {
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    double rms = 1.0;
    CHECK(fit_slope(x, y, &rms) == doctest::Approx(2.0));
    CHECK(rms < 1e-12);
}
