#include <cmath>

#include "common.hpp"
#include "psh/errors.hpp"
#include "psh/expr.hpp"
#include "psh/frame.hpp"

using namespace psh;

TEST_CASE("arithmetic and functions") {
    cplx z(0.3, -0.2);
    CHECK(std::abs(Expr::parse("z^2 + 3*z - 1")(z) - (z * z + 3.0 * z - 1.0)) < 1e-15);
    CHECK(std::abs(Expr::parse("exp(z)/(2-z)")(z) - std::exp(z) / (2.0 - z)) < 1e-15);
    CHECK(std::abs(Expr::parse("pow(1-z,-0.4)")(z) - std::pow(1.0 - z, -0.4)) < 1e-15);
    CHECK(std::abs(Expr::parse("abs(z)^2")(z) - std::norm(z)) < 1e-15);
}

TEST_CASE("juxtaposition multiplies") {
    CHECK(Expr::parse("2q")(0.0, 3.0).real() == doctest::Approx(6.0));
    CHECK(Expr::parse("2pi")(0.0).real() == doctest::Approx(kTwoPi));
    CHECK(Expr::parse("3(z+1)")(1.0).real() == doctest::Approx(6.0));
}

TEST_CASE("family parameter q") {
    auto e = Expr::parse("pow(1-z,-2*q)");
    CHECK(e.uses_q());
    CHECK(std::abs(e(0.5, 0.25) - std::pow(0.5, -0.5)) < 1e-14);
    CHECK_FALSE(Expr::parse("z+1").uses_q());
}

TEST_CASE("constants") {
    CHECK(parse_real("pi/2") == doctest::Approx(kPi / 2));
    cplx c = parse_complex("0.3+0.1i");
    CHECK(c.real() == doctest::Approx(0.3));
    CHECK(c.imag() == doctest::Approx(0.1));
    CHECK(parse_complex("-0.3i").imag() == doctest::Approx(-0.3));
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(Expr::parse("1+"), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(z)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("(z"), ParseError);
    CHECK_THROWS_AS(parse_real("z"), ParseError);
}
