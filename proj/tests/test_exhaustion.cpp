#include <cmath>

#include "common.hpp"
#include "psh/errors.hpp"
#include "psh/exhaustion.hpp"

using namespace psh;

TEST_CASE("green exhaustion is log|z| on the disc") {
    auto u = green_exhaustion(ConformalFrame::unit_disc());
    for (cplx z : {cplx(0.5, 0.0), cplx(0.1, -0.7), cplx(-0.99, 0.0)}) CHECK(u->value(z) == doctest::Approx(std::log(std::abs(z))));
    REQUIRE(u->atoms.size() == 1);
    CHECK(u->atoms[0].mass == 1.0);
    CHECK_FALSE(u->has_density);
}

TEST_CASE("shifted pole") {
    auto u = exhaustion_from_name("green:0.3+0.2i", ConformalFrame::unit_disc());
    cplx w(0.3, 0.2), z(-0.2, 0.5);
    CHECK(u->value(z) == doctest::Approx(std::log(std::abs((z - w) / (1.0 - std::conj(w) * z)))));
}

TEST_CASE("three routes to the Poisson integral of (1 - cos t)^{3/4} agree") {
    for (cplx z : {cplx(0.0, 0.0), cplx(0.5, 0.2), cplx(-0.8, 0.1), cplx(0.95, 0.0)}) {
        const double a = paper_poisson_series(z), b = paper_poisson_quadrature(z, 1e-12), c = paper_poisson_hypergeometric(z);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
        CHECK(c == doctest::Approx(b).epsilon(1e-9));
    }
    // mean value at 0; 1 - cos t = 2 sin^2(t/2) gives 2^{3/4} B(5/4, 1/2) / pi
    const double mean = std::pow(2.0, 0.75) * std::beta(1.25, 0.5) / kPi;
    CHECK(paper_poisson_series(0.0) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("paper-u: negative inside, zero on the circle, Laplacian (1-x)^{-5/4}") {
    auto u = paper_exhaustion();
    for (cplx z : {cplx(0.0, 0.0), cplx(0.5, 0.5), cplx(-0.9, 0.0), cplx(0.9, 0.0)}) CHECK(u->value(z) < 0.0);
    CHECK(std::abs(u->value(std::polar(1.0 - 1e-9, 2.0))) < 1e-6);
    const cplx z(0.3, -0.4);
    const double h = 1e-3;
    const double lap = (u->value(z + h) + u->value(z - h) + u->value(z + cplx(0, h)) + u->value(z - cplx(0, h)) -
                        4.0 * u->value(z)) / (h * h);
    CHECK(lap == doctest::Approx(std::pow(1.0 - z.real(), -1.25)).epsilon(1e-5));
    CHECK(u->laplacian_density(z) == doctest::Approx(std::pow(0.7, -1.25)));
}

TEST_CASE("pseudoballs are nested sublevel sets") {
    auto u = paper_exhaustion();
    for (cplx z : {cplx(0.2, 0.1), cplx(0.7, -0.5), cplx(-0.95, 0.0)}) {
        const double v = u->value(z);
        CHECK(pseudoball(u, v + 1e-6).contains(z));
        CHECK_FALSE(pseudoball(u, v - 1e-6).contains(z));
    }
    CHECK_THROWS_AS(Pseudoball(u, 0.1), DomainError);
}

TEST_CASE("user exhaustion from JSON") {
    auto u = exhaustion_from_json(
        R"J({"value_expr":"log(abs(z))","laplacian_expr":"0","atoms":[{"re":0,"im":0,"mass":1}],"tags":[]})J",
        ConformalFrame::unit_disc());
    CHECK(u->value(0.5) == doctest::Approx(std::log(0.5)));
    CHECK(u->atoms.size() == 1);
    CHECK_THROWS(exhaustion_from_name("nope", ConformalFrame::unit_disc()));
}
