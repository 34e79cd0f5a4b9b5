#include <cmath>

#include "common.hpp"
#include "psh/errors.hpp"
#include "psh/hardy.hpp"

using namespace psh;
using psh::test::green_density;
using psh::test::paper_density;
using psh::test::rel;

TEST_CASE("green H^2 norm is the l^2 norm of Taylor coefficients") {
    // sum 1/(k!)^2 = I0(2)
    auto f = hardy_from_expr("exp(z)");
    CHECK(norm_boundary(f, 2.0, green_density()) == doctest::Approx(std::sqrt(std::cyl_bessel_i(0.0, 2.0))).epsilon(1e-9));
    // sum 4^{-k-1} = 1/3
    CHECK(norm_boundary(hardy_from_expr("1/(2-z)"), 2.0, green_density()) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("green H^1 norm of 1/(2-z) through an elliptic integral") {
    // (1/pi) int_0^pi (5 - 4 cos t)^{-1/2} dt = (2/(3 pi)) K(sqrt(8/9))
    const double exact = 2.0 / (3.0 * kPi) * std::comp_ellint_1(std::sqrt(8.0 / 9.0));
    CHECK(norm_boundary(hardy_from_expr("1/(2-z)"), 1.0, green_density()) == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("tags are detected with their exponents") {
    auto f = hardy_from_expr("pow(1-z,-0.4)");
    REQUIRE(f.singularities.size() == 1);
    CHECK(std::abs(f.singularities[0].location) < 1e-6);
    CHECK(f.singularities[0].exponent == doctest::Approx(0.4).epsilon(0.02));
    CHECK(hardy_from_expr("exp(z)").singularities.empty());
}

TEST_CASE("traces, radial limits and derivatives") {
    auto f = hardy_from_expr("exp(z)");
    for (double t : {0.0, 1.0, -2.5}) {
        CHECK(std::abs(f.boundary_trace(t) - std::exp(std::polar(1.0, t))) < 1e-13);
        CHECK(std::abs(radial_limit(f.interior, t) - std::exp(std::polar(1.0, t))) < 1e-9);
    }
    CHECK(std::abs(derivative_at(f, cplx(0.3, 0.1)) - std::exp(cplx(0.3, 0.1))) < 1e-9);
    CHECK(cauchy_riemann_defect(f) < 1e-5);
    CHECK(cauchy_riemann_defect(hardy_from_expr("conj(z)")) > 0.1);
}

TEST_CASE("algebra on functions") {
    auto f = hardy_from_expr("1+z"), g = hardy_from_expr("exp(z)");
    cplx z(0.2, -0.5);
    CHECK(std::abs(hardy_sum(f, g).interior(z) - (1.0 + z + std::exp(z))) < 1e-14);
    CHECK(std::abs(hardy_product(f, g).interior(z) - (1.0 + z) * std::exp(z)) < 1e-14);
    CHECK(std::abs(hardy_scale(2.0, f).interior(z) - 2.0 * (1.0 + z)) < 1e-14);
    CHECK(std::abs(hardy_dilate(g, 0.5).interior(z) - std::exp(0.5 * z)) < 1e-14);
}

TEST_CASE("Cauchy-Schwarz: ||f g||_1 <= ||f||_2 ||g||_2 on paper-u") {
    const auto& bd = paper_density();
    for (auto [a, b] : {std::pair{"1+z/2", "exp(z)"}, std::pair{"cos(z)", "1/(2-z)"}}) {
        auto f = hardy_from_expr(a), g = hardy_from_expr(b);
        CHECK(norm_boundary(hardy_product(f, g), 1.0, bd) <= norm_boundary(f, 2.0, bd) * norm_boundary(g, 2.0, bd) + 1e-9);
    }
}

TEST_CASE("boundary and Lelong-Jensen norms agree on paper-u") {
    const auto& bd = paper_density();
    for (const char* e : {"1/(2-z)", "exp(z/2)+1"}) {
        auto f = hardy_from_expr(e);
        for (double p : {1.0, 2.0}) {
            auto nl = norm_limit(f, p, bd.exhaustion());
            CHECK(rel(nl.norm, norm_boundary(f, p, bd)) < 1e-3);
            CHECK(nl.monotone);
        }
    }
}

TEST_CASE("classical H^2 membership of (1-z)^{-a}") {
    CHECK(classical_membership(hardy_from_expr("pow(1-z,-0.4)"), 2.0).outcome == Outcome::Holds);
    CHECK(classical_membership(hardy_from_expr("pow(1-z,-0.6)"), 2.0).outcome == Outcome::Fails);
    // ||(1-z)^{-1/4}||_2^2 = sum binom(k-3/4, k)^2 = Gamma(1/2) / Gamma(3/4)^2
    const double exact = std::sqrt(std::tgamma(0.5) / std::pow(std::tgamma(0.75), 2));
    CHECK(classical_norm(hardy_from_expr("pow(1-z,-0.25)"), 2.0).value == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("paper-u membership follows the combined exponent") {
    const auto& bd = paper_density();
    auto in = membership(hardy_from_expr("pow(1-z,-0.2)"), 1.0, bd);
    CHECK(in.outcome == Outcome::Holds);
    CHECK(in.exponent == doctest::Approx(0.2 + bd.tag_fits()[0].exponent).epsilon(1e-3));
    auto out = membership(hardy_from_expr("pow(1-z,-0.6)"), 1.0, bd);
    CHECK(out.outcome == Outcome::Fails);
    REQUIRE(out.witness.has_value());
    CHECK(out.witness->report.verdict == Convergence::Diverges);
    CHECK_THROWS_AS(norm_boundary(hardy_from_expr("pow(1-z,-0.6)"), 1.0, bd), NonIntegrable);
    // strict inclusion: a classical member outside the weighted space
    auto f = hardy_from_expr("pow(1-z,-0.6)");
    CHECK(classical_membership(f, 1.0).outcome == Outcome::Holds);
}

TEST_CASE("dilations converge for members") {
    const auto& bd = paper_density();
    auto f = hardy_from_expr("exp(z)");
    auto steps = dilation_approximation(f, 1.0, bd, {0.9, 0.99, 0.999});
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].gap > steps[1].gap);
    CHECK(steps[1].gap > steps[2].gap);
    CHECK(steps[2].gap < 0.01 * norm_boundary(f, 1.0, bd));
}
