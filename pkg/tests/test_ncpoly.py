"""Tests for the ncpoly submodule."""
from fractions import Fraction

import pytest

from ncverify import ncpoly
from ncverify.catalog import build
from ncverify.ncpoly import AlgebraMap, GeneratorInfo, NCPolynomial, SwapRule
from ncverify.util import random_generator


def _d():
    return build("D").presentation


def test_polynomial_arithmetic():
    a = NCPolynomial({(1, 0): 2, (0, 1): Fraction(1, 2)})
    b = NCPolynomial({(1, 0): -2})

    assert (a + b) == NCPolynomial({(0, 1): Fraction(1, 2)})
    assert (a - a).is_zero()
    assert len(a) == 2
    assert a.scale(2) == 2 * a == a * 2
    assert NCPolynomial({(0, 0): 3}) == 3
    assert NCPolynomial() == 0
    assert not NCPolynomial({(0, 0): 0})

    # Floats would lose exactness
    with pytest.raises(TypeError):
        a.scale(0.5)


def test_normal_form_of_out_of_order_pair():
    pres = _d()
    expected = pres.monomial({"u": 1, "y": 1}) - pres.one() + pres.gen("g")
    assert ncpoly.normal_form([("y", 1), ("u", 1)], pres) == expected

    # Already ordered words come back unchanged
    assert ncpoly.normal_form([("u", 1), ("y", 1)], pres) == pres.monomial({"u": 1, "y": 1})


def test_defining_relations():
    pres = _d()
    g, x, u, y, zeta, v = (pres.gen(name) for name in ("g", "x", "u", "y", "zeta", "v"))

    assert ncpoly.commutator(y, x, pres) == pres.monomial({"x": 2}, Fraction(-1, 2))
    assert ncpoly.commutator(zeta, y, pres) == y
    assert ncpoly.commutator(zeta, x, pres) == x
    assert ncpoly.commutator(zeta, u, pres) == -u
    assert ncpoly.commutator(v, zeta, pres) == v
    assert ncpoly.commutator(v, u, pres) == pres.monomial({"u": 2}, Fraction(-1, 2))
    assert ncpoly.commutator(u, x, pres).is_zero()
    assert ncpoly.commutator(g, x, pres).is_zero()

    # [v,y] = yu - g zeta, rewritten onto the PBW basis
    expected = pres.monomial({"u": 1, "y": 1}) - pres.one() + g - pres.monomial({"g": 1, "zeta": 1})
    assert ncpoly.commutator(v, y, pres) == expected


def test_inverse_letters():
    pres = _d()
    assert ncpoly.normal_form([("g", 1), ("g", -1)], pres) == pres.one()
    assert ncpoly.normal_form([("g", -3), ("g", 3)], pres) == pres.one()

    expected = pres.monomial({"g": -1, "y": 1}) + pres.monomial({"g": -1, "x": 1})
    assert ncpoly.normal_form([("y", 1), ("g", -1)], pres) == expected

    with pytest.raises(ncpoly.NegativeExponentOnNonInvertible):
        pres.gen("x", -1)

    with pytest.raises(ncpoly.NegativeExponentOnNonInvertible):
        ncpoly.normal_form([("u", -1)], pres)

    # ...but x is invertible once it has been inverted
    d_lx = build("D_LX").presentation
    assert ncpoly.normal_form([("x", 1), ("x", -1)], d_lx) == d_lx.one()


def test_unknown_generator():
    with pytest.raises(ncpoly.UnknownGenerator):
        _d().gen("w")


def test_step_budget():
    with pytest.raises(ncpoly.NonTerminating):
        ncpoly.normal_form([("v", 3), ("y", 3)], _d(), budget=2)


def test_products_are_associative_on_generators():
    pres = _d()
    letters = [pres.gen(name) for name in pres.names] + [pres.gen("g", -1)]
    for a in letters:
        for b in letters:
            for c in letters:
                left = ncpoly.multiply(ncpoly.multiply(a, b, pres), c, pres)
                right = ncpoly.multiply(a, ncpoly.multiply(b, c, pres), pres)
                assert left == right


def test_degrees():
    pres = _d()
    y_zeta_v = pres.mul(pres.gen("y"), pres.gen("zeta"), pres.gen("v"))
    assert ncpoly.level_degree(y_zeta_v, pres) == 3
    assert ncpoly.level_degree(pres.monomial({"g": -2, "x": 1}), pres) == 0
    assert ncpoly.total_degree(pres.monomial({"g": -2, "x": 1})) == 3

    with pytest.raises(ncpoly.ZeroPolynomial):
        ncpoly.total_degree(pres.zero())
    with pytest.raises(ncpoly.ZeroPolynomial):
        ncpoly.level_degree(pres.zero(), pres)


def test_monomials_up_to():
    pres = _d()
    assert len(ncpoly.monomials_up_to(pres, 0)) == 1
    assert len(ncpoly.monomials_up_to(pres, 1)) == 8
    assert len(ncpoly.monomials_up_to(pres, 2)) == 35

    # Graded: lowest degree first
    degrees = [ncpoly.monomial_degree(m) for m in ncpoly.monomials_up_to(pres, 2)]
    assert degrees == sorted(degrees)


def test_power():
    pres = _d()
    x = pres.gen("x")
    assert ncpoly.power(x, 3, pres) == pres.monomial({"x": 3})
    assert ncpoly.power(x, 0, pres) == pres.one()
    with pytest.raises(ValueError):
        ncpoly.power(x, -1, pres)


def test_presentation_construction_errors():
    generators = (GeneratorInfo("a", 0), GeneratorInfo("b", 1))
    in_order = SwapRule("a", "b", NCPolynomial({(1, 1): 1}))

    with pytest.raises(ValueError):
        ncpoly.AlgebraPresentation("bad", generators, (in_order,))

    with pytest.raises(ValueError):
        ncpoly.AlgebraPresentation("bad", (GeneratorInfo("a", 0), GeneratorInfo("a", 1)))

    with pytest.raises(ValueError):
        ncpoly.AlgebraPresentation("bad", (GeneratorInfo("a", 1),))


def test_validate_presentation_finds_problems():
    generators = (GeneratorInfo("a", 0), GeneratorInfo("b", 1))

    # No rule at all for b*a
    missing = ncpoly.validate_presentation(ncpoly.AlgebraPresentation("missing", generators))
    assert not missing.passed
    assert [entry.label for entry in missing.failures()] == ["rule b*a"]

    # b*a = ab + b^2 does not lower the level
    growing = SwapRule("b", "a", NCPolynomial({(1, 1): 1, (0, 2): 1}))
    report = ncpoly.validate_presentation(
        ncpoly.AlgebraPresentation("growing", generators, (growing,), level_generators=frozenset({"b"})))
    assert not report.entry("certificate b*a").passed


def test_validate_catalog_presentations():
    for algebra in ("J", "OG", "H", "D", "D_LX", "D_LU", "SL2"):
        assert ncpoly.validate_presentation(build(algebra).presentation).passed, algebra


def test_sigma_is_a_morphism():
    entry = build("D")
    assert ncpoly.check_map_is_morphism(entry.maps["sigma"]).passed
    assert ncpoly.check_map_is_morphism(entry.maps["ad_g"]).passed


def test_corrupted_sigma_fails_on_v_times_y():
    entry = build("D")
    pres = entry.presentation
    sigma = entry.maps["sigma"]
    images = dict(sigma.images)
    images["v"] = pres.gen("v") + pres.gen("u")
    broken = AlgebraMap("broken", pres, pres, images, sigma.inverse_images)

    report = ncpoly.check_map_is_morphism(broken)
    assert not report.passed
    assert [entry.label for entry in report.failures()] == ["v*y"]

    # u and v+u still satisfy the [u,v] relation
    assert report.entry("v*u").passed


def test_central_and_normal_verdicts():
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    for element in (d.z, d.omega, d.theta):
        assert ncpoly.is_central(element, pres)

    for element in (d.q, d.s, pres.gen("g")):
        verdict = ncpoly.is_central(element, pres)
        assert not verdict
        assert verdict.generator is not None
        assert not verdict.residual.is_zero()

    assert ncpoly.is_sigma_normal(d.q, entry.maps["sigma"], pres)
    assert ncpoly.is_sigma_normal(d.s, entry.maps["sigma"], pres)


def test_compose_and_identity_maps():
    entry = build("D")
    pres = entry.presentation
    sigma = entry.maps["sigma"]
    identity = ncpoly.identity_map(pres)

    assert ncpoly.apply_map(ncpoly.compose_maps(identity, sigma), pres.gen("y")) == \
        ncpoly.apply_map(sigma, pres.gen("y"))

    # σ²(y) = y + x = g·y·g⁻¹
    sigma_squared = ncpoly.compose_maps(sigma, sigma)
    assert ncpoly.apply_map(sigma_squared, pres.gen("y")) == pres.gen("y") + pres.gen("x")
    assert ncpoly.apply_map(sigma_squared, pres.gen("y")) == ncpoly.apply_map(entry.maps["ad_g"], pres.gen("y"))


def test_report_bookkeeping():
    report = ncpoly.Report("example")
    assert report.add_residual("zero", NCPolynomial())
    assert not report.add_residual("nonzero", NCPolynomial({(0,): 1}))
    report.add_flag("flag", True, note="fine")

    assert not report.passed
    assert [entry.label for entry in report.failures()] == ["nonzero"]
    assert report.entry("flag").note == "fine"
    with pytest.raises(KeyError):
        report.entry("missing")


def test_property_fuzzers():
    pres = _d()
    assert ncpoly.associativity_fuzz(pres, samples=20, rng=random_generator(1)).passed
    assert ncpoly.filtration_fuzz(pres, samples=20, rng=random_generator(2)).passed


def test_inverse_letters_cancel_next_to_random_elements():
    pres = _d()
    a = pres.mul(pres.gen("y"), pres.gen("v")) + pres.gen("zeta")
    g, g_inverse = pres.gen("g"), pres.gen("g", -1)
    assert pres.mul(a, g_inverse, g) == a
    assert pres.mul(g, g_inverse, a) == a

    for algebra, invertible in (("D", {"g"}), ("D_LX", {"g", "x"}), ("D_LU", {"g", "u"})):
        pres = build(algebra).presentation
        assert {info.name for info in pres.invertible_generators()} == invertible
        assert ncpoly.inverse_cancellation_fuzz(pres, samples=10, rng=random_generator(3)).passed, algebra


def test_random_polynomial_is_reproducible():
    pres = _d()
    first = ncpoly.random_polynomial(pres, random_generator(5))
    second = ncpoly.random_polynomial(pres, random_generator(5))
    assert first == second
    assert 1 <= len(first) <= 3
