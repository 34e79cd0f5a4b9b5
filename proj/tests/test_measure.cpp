#include <cmath>

#include "common.hpp"
#include "psh/errors.hpp"
#include "psh/measure.hpp"

using namespace psh;
using psh::test::paper_density;
using psh::test::green_density;
using psh::test::rel;

namespace {

// (1/2pi) int_D (1 - x)^{-5/4} dA = 2^{3/4} B(3/2, 1/4) / pi
const double kPaperMass = std::pow(2.0, 0.75) * std::beta(1.5, 0.25) / kPi;

TestFunction modulus_sq() {
    return {[](cplx z) { return std::norm(z); }, [](cplx) { return 4.0; }, {}, false};
}

}  // namespace

TEST_CASE("Monge-Ampere masses") {
    CHECK(ma_mass(*green_exhaustion(ConformalFrame::unit_disc())) == 1.0);
    CHECK(ma_mass(*paper_exhaustion()) == doctest::Approx(kPaperMass).epsilon(1e-7));
    // frozen: 1.8715592513
    CHECK(kPaperMass == doctest::Approx(1.8715592513).epsilon(1e-10));
    auto bad = user_exhaustion("steep", ConformalFrame::unit_disc(), "0", "pow(1-re(z),-2)", {}, {{0.0, 2.0}});
    CHECK_THROWS_AS(ma_mass(*bad), NonIntegrable);
}

TEST_CASE("green density is the normalized arc length") {
    const auto& bd = green_density();
    for (double t : {-3.0, -1.0, 0.0, 0.5, 3.1}) CHECK(bd.beta(t) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-10));
    CHECK(bd.boundary_mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bd.tags().empty());
}

TEST_CASE("green density on a polynomial frame is the harmonic measure") {
    auto f = ConformalFrame::polynomial(0.3);
    auto bd = boundary_density(green_exhaustion(f));
    for (double t : {0.0, 1.0, 2.5}) CHECK(bd->beta_dt(t) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-8));
    CHECK(bd->boundary_mass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("paper-u density: mass balance and the tag at t = 0") {
    const auto& bd = paper_density();
    CHECK(rel(bd.boundary_mass(), bd.total_mass()) < 1e-4);
    CHECK(kTwoPi * bd.total_mass() == doctest::Approx(11.759353589).epsilon(1e-8));
    REQUIRE(bd.tag_fits().size() == 1);
    const auto& fit = bd.tag_fits()[0];
    CHECK(fit.location == 0.0);
    CHECK(std::abs(fit.exponent - 0.5) < 0.05);
    // frozen regression values
    CHECK(fit.exponent == doctest::Approx(0.509245).epsilon(1e-5));
    CHECK(fit.slope_far == doctest::Approx(-0.5975).epsilon(1e-3));
    // beta is symmetric and decreasing away from the tag
    for (double t : {1e-4, 1e-2, 0.5, 2.0}) CHECK(bd.beta(t) == doctest::Approx(bd.beta(-t)).epsilon(1e-6));
    CHECK(bd.beta(1e-3) > bd.beta(1e-2));
    CHECK(bd.beta(1e-2) > bd.beta(1.0));
    CHECK(bd.beta(1.0) > bd.beta(3.0));
    CHECK(bd.tag_distance(0.3) == doctest::Approx(0.3));
}

TEST_CASE("interpolated beta matches direct evaluation") {
    const auto& bd = paper_density();
    for (double t : {0.0123, 0.4, 1.7, -2.9}) CHECK(rel(bd.beta(t), bd.beta_direct(t)) < 1e-5);
}

TEST_CASE("Lelong-Jensen on the green exhaustion") {
    auto u = green_exhaustion(ConformalFrame::unit_disc());
    for (double r : {-1.0, -0.5, -0.1}) CHECK(lelong_jensen_lhs(*u, r, modulus_sq()) == doctest::Approx(std::exp(2 * r)).epsilon(1e-8));
    CHECK(lelong_jensen_limit(*u, modulus_sq()) == doctest::Approx(1.0).epsilon(1e-8));
    TestFunction harm{[](cplx z) { return (z * z).real(); }, [](cplx) { return 0.0; }, {}, true};
    CHECK(std::abs(lelong_jensen_lhs(*u, -0.3, harm)) < 1e-8);
}

TEST_CASE("Lelong-Jensen pairing increases to the boundary pairing on paper-u") {
    auto u = paper_exhaustion();
    const auto& bd = paper_density();
    double prev = 0.0;
    // min u = u(0) is about -0.35
    CHECK(lelong_jensen_lhs(*u, -0.5, modulus_sq()) == 0.0);
    for (double r : {-0.3, -0.2, -0.1, -0.01}) {
        const double v = lelong_jensen_lhs(*u, r, modulus_sq());
        CHECK(v > prev);
        prev = v;
    }
    // |z|^2 = 1 on the circle, so the limit is the boundary mass
    CHECK(rel(lelong_jensen_limit(*u, modulus_sq()), bd.boundary_mass()) < 1e-4);
}

TEST_CASE("weak-star convergence of the sweep measures") {
    const auto& bd = paper_density();
    auto phi = [](double t) { return std::cos(t); };
    const double g1 = weak_star_gap(bd, phi, -1.0), g2 = weak_star_gap(bd, phi, -0.1);
    CHECK(g2 < g1);
}

TEST_CASE("PSH_THREADS-independent parallel_for") {
    std::vector<int> v(100, 0);
    parallel_for(v.size(), 3, [&](std::size_t i) { v[i] = static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
    CHECK(worker_threads(5) == 5);
}
