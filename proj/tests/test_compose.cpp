#include <cmath>

#include "common.hpp"
#include "psh/compose.hpp"
#include "psh/corpus.hpp"
#include "psh/errors.hpp"

using namespace psh;
using psh::test::paper_density;

namespace {

std::vector<Symbol> symbols() {
    return {parse_symbol("mobius:0.5,0"), parse_symbol("mobius:0.3+0.4i,1.2"), parse_symbol("rot:pi/2"),
            parse_symbol("identity"),     parse_symbol("monomial:3"),          parse_symbol("blaschke:0.5,-0.3i@0.4")};
}

}  // namespace

TEST_CASE("symbols are unimodular on the circle and map the disc into itself") {
    for (const auto& s : symbols()) {
        INFO(s.name);
        for (double t = -3.1; t < 3.2; t += 0.29) CHECK(std::abs(s(std::polar(1.0, t))) == doctest::Approx(1.0).epsilon(1e-13));
        for (cplx z : {cplx(0.0, 0.0), cplx(0.5, -0.6), cplx(-0.9, 0.1)}) CHECK(std::abs(s(z)) < 1.0);
    }
}

TEST_CASE("preimages: count equals degree and each maps to eta") {
    for (const auto& s : symbols()) {
        INFO(s.name);
        CHECK(boundary_degree(s) == doctest::Approx(s.degree()).epsilon(1e-8));
        for (double eta : {-2.0, 0.0, 0.7, 3.0}) {
            auto pre = s.preimages(eta);
            CHECK(static_cast<int>(pre.size()) == s.degree());
            for (std::size_t k = 0; k < pre.size(); ++k) {
                CHECK(std::abs(s(std::polar(1.0, pre[k])) - std::polar(1.0, eta)) < 1e-12);
                CHECK(pre[k] > -kPi);
                CHECK(pre[k] <= kPi);
                if (k) CHECK(pre[k] > pre[k - 1]);
            }
        }
    }
}

TEST_CASE("derivatives match finite differences") {
    for (const auto& s : symbols()) {
        const cplx z(0.3, -0.2), h(1e-6, 0.0);
        CHECK(std::abs(s.derivative(z) - (s(z + h) - s(z - h)) / (2.0 * h)) < 1e-7);
    }
}

TEST_CASE("Mobius inverse") {
    auto s = mobius_symbol(cplx(0.3, 0.4), 1.2);
    for (cplx w : {cplx(0.1, 0.1), cplx(-0.6, 0.2)}) CHECK(std::abs(s(s.inverse(w)) - w) < 1e-13);
    CHECK_THROWS_AS(monomial_symbol(2).inverse(0.1), DomainError);
}

TEST_CASE("symbol parsing") {
    CHECK(parse_symbol("monomial:2").degree() == 2);
    CHECK(parse_symbol("blaschke:0.5,0.1,0.2i").degree() == 3);
    CHECK(std::abs(parse_symbol("rot:pi/2")(1.0) - cplx(0.0, 1.0)) < 1e-15);
    CHECK_THROWS_AS(parse_symbol("mobius:1.2,0"), ParseError);
    CHECK_THROWS_AS(mobius_symbol(1.2, 0.0), DomainError);
    CHECK_THROWS_AS(parse_symbol("shear:1"), ParseError);
}

TEST_CASE("composition and the witness function") {
    auto f = hardy_from_expr("1/(2-z)");
    auto s = mobius_symbol(0.5, 0.0);
    auto fs = compose(f, s);
    const cplx z(0.2, 0.3);
    CHECK(std::abs(fs.interior(z) - f.interior(s(z))) < 1e-15);
    auto rot = rotation_symbol(kPi / 2);
    auto w = compose(witness_function(1.0), rot);
    REQUIRE(w.singularities.size() == 1);
    CHECK(w.singularities[0].location == doctest::Approx(-kPi / 2));
    CHECK(w.singularities[0].exponent == doctest::Approx(0.75));
    auto W = witness_function(cplx(0.0, 1.0));
    CHECK(std::abs(W.interior(0.5) - std::pow(1.0 - cplx(0.0, -0.5), -0.75)) < 1e-14);
}

TEST_CASE("counting function of the identity is beta") {
    const auto& bd = paper_density();
    for (double eta : {0.01, 1.0, -2.0}) CHECK(counting_function(identity_symbol(), bd, eta) == doctest::Approx(bd.beta(eta)).epsilon(1e-12));
}

TEST_CASE("Mobius criterion: bounded exactly when 1 is fixed") {
    const auto& bd = paper_density();
    auto fixed = mobius_boundedness(mobius_symbol(0.5, 0.0), bd, 1.0);
    CHECK(fixed.fixed_point);
    CHECK(fixed.verdict.outcome == Outcome::Holds);
    CHECK(fixed.ratio_stable);
    auto rot = mobius_boundedness(rotation_symbol(kPi / 2), bd, 1.0);
    CHECK_FALSE(rot.fixed_point);
    CHECK(rot.verdict.outcome == Outcome::Fails);
    REQUIRE(rot.witness.has_value());
    CHECK(rot.witness->sound());
    CHECK_THROWS_AS(mobius_boundedness(monomial_symbol(2), bd, 1.0), DomainError);
    int agree = 0;
    auto sample = random_mobius_sample();
    for (const auto& s : sample) {
        auto r = mobius_boundedness(s, bd, 1.0);
        agree += (r.verdict.outcome == Outcome::Holds) == r.fixed_point;
    }
    CHECK(agree == static_cast<int>(sample.size()));
}

TEST_CASE("counting criterion on finite Blaschke products") {
    const auto& bd = paper_density();
    auto m2 = general_boundedness(monomial_symbol(2), bd, 1.0);
    CHECK(m2.verdict.outcome == Outcome::Holds);
    CHECK(std::abs(m2.ratio_near_one - std::sqrt(2.0)) < 0.3);
    auto b = general_boundedness(parse_symbol("blaschke:0.5,-0.3i"), bd, 1.0);
    CHECK(b.verdict.outcome == Outcome::Fails);
    REQUIRE(b.witness.has_value());
    CHECK(b.witness->sound());
}

TEST_CASE("norm inequality ||f o s||^p <= K ||f||^p with K = ratio_sup * jacobian_sup") {
    const auto& bd = paper_density();
    for (const char* sym : {"mobius:0.5,0", "monomial:2", "identity"}) {
        Symbol s = parse_symbol(sym);
        auto rep = s.kind == SymbolKind::Mobius ? mobius_boundedness(s, bd, 1.0) : general_boundedness(s, bd, 1.0);
        const double K = rep.ratio_sup * rep.jacobian_sup;
        for (const auto& e : norm_corpus()) {
            INFO(sym << " " << e);
            auto f = hardy_from_expr(e);
            CHECK(norm_boundary(compose(f, s), 1.0, bd) <= K * norm_boundary(f, 1.0, bd) * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("tag-free densities: every symbol is bounded") {
    const auto& bd = psh::test::green_density();
    for (const auto& s : symbols()) {
        INFO(s.name);
        auto r = s.kind == SymbolKind::Mobius ? mobius_boundedness(s, bd, 1.0) : general_boundedness(s, bd, 1.0);
        CHECK(r.verdict.outcome == Outcome::Holds);
        CHECK_FALSE(r.witness.has_value());
    }
}
