import math

import pytest

import psh


@pytest.fixture(scope="module")
def green():
    return psh.boundary_density("green")


def test_expression_evaluation():
    assert psh.evaluate("2q", 0, 3.0) == 6.0
    assert abs(psh.evaluate("exp(z)", 1j) - complex(math.cos(1), math.sin(1))) < 1e-15
    with pytest.raises(psh.ParseError):
        psh.evaluate("1+", 0)


def test_masses(green):
    assert psh.ma_mass("green") == 1.0
    assert abs(green.boundary_mass - 1.0) < 1e-10
    assert abs(green.beta(0.3) - 1 / (2 * math.pi)) < 1e-10


def test_green_norms(green):
    assert abs(psh.norm("1/(2-z)", 2.0, green) - 1 / math.sqrt(3)) < 1e-10
    v = psh.membership("pow(1-z,-2*q)", 1.0, green, q=0.3)
    assert v["outcome"] == "Holds"


def test_factorize():
    r = psh.factorize("exp((z+1)/(z-1))", [])
    assert abs(r["singular_at_0"] - math.exp(-1)) < 1e-8
    assert r["reconstruction_residual"] < 1e-6
    zs = psh.find_zeros("(z-0.5)*(z+0.3i)")
    assert len(zs) == 2


def test_compose(green):
    # constant density: every Mobius composition is bounded
    r = psh.compose_check("rot:pi/2", green)
    assert r["verdict"]["outcome"] == "Holds"
    assert r["witness_sound"] is None
    assert abs(r["ratio_sup"] - 1.0) < 1e-9
    assert psh.compose_check("monomial:2", green)["verdict"]["outcome"] == "Holds"


def test_cases():
    ids = psh.case_ids()
    assert ids[0] == "mass-identity" and len(ids) == 9
    r = psh.run_case("divergence-calibration")
    assert r["pass"]
    with pytest.raises(psh.UnknownCase):
        psh.run_case("nope")
