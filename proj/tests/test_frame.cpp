#include <cmath>

#include "common.hpp"
#include "psh/errors.hpp"
#include "psh/frame.hpp"
#include "psh/quad.hpp"

using namespace psh;

TEST_CASE("frame names round-trip") {
    CHECK(ConformalFrame::from_name("disc").is_disc());
    auto f = ConformalFrame::from_name("poly:0.2");
    CHECK(f.eps() == doctest::Approx(0.2));
    CHECK(ConformalFrame::from_name(f.name()) == f);
    CHECK_THROWS_AS(ConformalFrame::from_name("poly:0.7"), DomainError);
    CHECK_THROWS_AS(ConformalFrame::from_name("square"), Error);
}

TEST_CASE("inverse undoes psi inside the domain") {
    auto f = ConformalFrame::polynomial(0.3);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.6, 0.3), cplx(0.0, -0.9), cplx(0.95, 0.0)})
        CHECK(std::abs(f.inverse(f.psi(z)) - z) < 1e-12);
}

TEST_CASE("boundary weight is |psi'|") {
    auto f = ConformalFrame::polynomial(0.25);
    for (double t : {0.0, 1.0, 2.5, -2.0}) {
        auto b = f.boundary(t);
        CHECK(std::abs(b.xi - f.psi(std::polar(1.0, t))) < 1e-15);
        CHECK(b.weight == doctest::Approx(std::abs(1.0 + 0.5 * std::polar(1.0, t))).epsilon(1e-14));
    }
}

TEST_CASE("Poisson kernel reproduces constants and harmonic data") {
    for (double eps : {0.0, 0.3}) {
        auto f = eps == 0.0 ? ConformalFrame::unit_disc() : ConformalFrame::polynomial(eps);
        for (cplx z : {cplx(0.0, 0.0), cplx(0.4, -0.3), cplx(-0.7, 0.1)}) {
            auto one = integrate_circle([&](double t) { return poisson_kernel(f, z, t) * f.boundary(t).weight; }, {}, 1e-12);
            CHECK(one.value == doctest::Approx(1.0).epsilon(1e-10));
            // Re(w) is harmonic on Omega
            auto re = integrate_circle(
                [&](double t) { return f.boundary(t).xi.real() * poisson_kernel(f, z, t) * f.boundary(t).weight; }, {},
                1e-12);
            CHECK(re.value == doctest::Approx(z.real()).epsilon(1e-9));
        }
    }
}

TEST_CASE("disc Poisson kernel at the origin") {
    CHECK(disc_poisson(0.0, 1.3) == doctest::Approx(1.0 / kTwoPi));
}

TEST_CASE("Green function: symmetric, vanishing on the boundary, log singular at the pole") {
    auto f = ConformalFrame::polynomial(0.2);
    cplx a(0.1, 0.3), b(-0.4, 0.2);
    CHECK(green_function(f, a, b) == doctest::Approx(green_function(f, b, a)).epsilon(1e-11));
    CHECK(std::abs(green_function(f, f.psi(std::polar(1.0 - 1e-10, 0.7)), a)) < 1e-8);
    CHECK_THROWS_AS(green_function(f, f.boundary(0.7).xi, a), DomainError);
    const double d = 1e-6;
    auto disc = ConformalFrame::unit_disc();
    CHECK(green_function(disc, d, 0.0) == doctest::Approx(std::log(d)));
    CHECK(green_function(disc, 0.5, 0.0) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_angle(10.0) == doctest::Approx(10.0 - 2 * kTwoPi));
}
