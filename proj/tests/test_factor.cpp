#include <cmath>
#include <random>

#include "common.hpp"
#include "psh/corpus.hpp"
#include "psh/errors.hpp"
#include "psh/factor.hpp"

using namespace psh;
using psh::test::paper_density;

TEST_CASE("Blaschke products are unimodular with the listed zeros") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-0.7, 0.7);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> zs;
        for (int k = 0; k <= trial; ++k) zs.emplace_back(U(rng), U(rng));
        auto B = blaschke_from_zeros(zs);
        for (double t = -3.0; t < 3.2; t += 0.37) CHECK(std::abs(B(std::polar(1.0, t))) == doctest::Approx(1.0).epsilon(1e-13));
        for (cplx a : zs) CHECK(std::abs(B(a)) < 1e-14);
        CHECK(std::abs(B(0.2)) < 1.0);
    }
    CHECK_THROWS_AS(blaschke_from_zeros({cplx(1.0, 0.0)}), DomainError);
}

TEST_CASE("outer function from |2 - e^{it}|") {
    auto F = outer_from_modulus([](double t) { return std::log(std::abs(2.0 - std::polar(1.0, t))); });
    for (cplx z : {cplx(0.0, 0.0), cplx(0.3, 0.4), cplx(-0.8, 0.1)}) CHECK(std::abs(F.interior(z) - (2.0 - z)) < 1e-9);
    CHECK_THROWS_AS(outer_from_modulus([](double t) { return std::abs(t) < 1.0 ? -INFINITY : 0.0; }), NonIntegrable);
}

TEST_CASE("canonical factorization of the corpus") {
    for (const auto& c : factor_corpus()) {
        INFO(c.expr);
        auto fac = factorize(hardy_from_expr(c.expr), c.zeros);
        CHECK(fac.reconstruction_residual < 1e-6);
        CHECK(fac.singular_sup <= 1.0 + 1e-6);
        CHECK(fac.blaschke.zeros.size() == c.zeros.size());
    }
}

TEST_CASE("singular inner factor of exp((z+1)/(z-1))") {
    auto fac = factorize(hardy_from_expr("exp((z+1)/(z-1))"), {});
    CHECK(std::abs(fac.singular.interior(0.0) - std::exp(-1.0)) < 1e-8);
    CHECK(std::abs(fac.outer.interior(0.3) - 1.0) < 1e-8);
}

TEST_CASE("outer part is positive at the origin") {
    auto fac = factorize(hardy_from_expr("z*pow(1-z,-0.4)"), {0.0});
    const cplx F0 = fac.outer.interior(0.0);
    CHECK(F0.real() > 0.0);
    CHECK(std::abs(F0.imag()) < 1e-10);
    CHECK(std::abs(fac.singular.interior(0.0) - 1.0) < 1e-8);
}

TEST_CASE("factorization errors") {
    CHECK_THROWS_AS(factorize(hardy_from_expr("0*z"), {}), ZeroFunction);
    // zero at 0.5 left out
    CHECK_THROWS_AS(factorize(hardy_from_expr("z*(z-0.5)"), {0.0}), ResidualNotInner);
}

TEST_CASE("zero finder") {
    auto zs = find_zeros(hardy_from_expr("(z-0.5)*(z+0.3i)*(z-0.2+0.6i)"));
    REQUIRE(zs.size() == 3);
    for (cplx a : {cplx(0.5, 0.0), cplx(0.0, -0.3), cplx(0.2, -0.6)}) {
        double best = 1.0;
        for (cplx z : zs) best = std::min(best, std::abs(z - a));
        CHECK(best < 1e-10);
    }
    CHECK(find_zeros(hardy_from_expr("exp(z)")).empty());
}

TEST_CASE("factors of members stay in H^1_u") {
    const auto& bd = paper_density();
    auto fac = factorize(hardy_from_expr("z*pow(1-z,-0.4)"), {0.0});
    auto v = factors_in_space(fac, 1.0, bd);
    CHECK(v.all_hold());
}

TEST_CASE("H^2 split: f = g h with both in H^2_u") {
    const auto& bd = paper_density();
    auto f = hardy_from_expr("z*pow(1-z,-0.4)");
    auto sp = h2_split(f, 1.0, {0.0});
    CHECK(sp.residual < 1e-8);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.4)}) CHECK(std::abs(sp.g.interior(z) * sp.h.interior(z) - f.interior(z)) < 1e-9);
    CHECK(membership(sp.g, 2.0, bd).outcome == Outcome::Holds);
    CHECK(membership(sp.h, 2.0, bd).outcome == Outcome::Holds);
    const double n1 = norm_boundary(f, 1.0, bd, 1e-10);
    CHECK(n1 <= norm_boundary(sp.g, 2.0, bd, 1e-10) * norm_boundary(sp.h, 2.0, bd, 1e-10) + 1e-6);
}
