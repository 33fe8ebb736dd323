"""Tests for the catalog submodule."""
from fractions import Fraction

import pytest

from ncverify import catalog
from ncverify.ncpoly import apply_map, check_map_is_morphism, commutator, multiply, normal_form


def test_build_is_cached_and_validated():
    assert catalog.build("D") is catalog.build("D")
    for algebra in catalog.CATALOG_IDS:
        entry = catalog.build(algebra)
        assert entry.id == algebra
        assert entry.presentation.name == algebra

    with pytest.raises(ValueError):
        catalog.build("nope")


def test_worked_brackets():
    d = catalog.build("D").presentation
    assert commutator(d.gen("zeta"), d.gen("y"), d) == d.gen("y")

    j = catalog.build("J").presentation
    assert commutator(j.gen("y"), j.gen("x"), j) == j.monomial({"x": 2}, Fraction(-1, 2))


def test_v_past_x_inverse():
    pres = catalog.build("D_LX").presentation
    expected = (pres.monomial({"x": -1, "v": 1}) - pres.monomial({"x": -1, "u": 1}) - pres.monomial({"x": -2})
                + pres.monomial({"g": 1, "x": -2}))
    assert normal_form([("v", 1), ("x", -1)], pres) == expected


def test_other_inverse_rules():
    lx = catalog.build("D_LX").presentation
    assert normal_form([("y", 1), ("x", -1)], lx) == lx.monomial({"x": -1, "y": 1}) + lx.scalar(Fraction(1, 2))
    assert normal_form([("zeta", 1), ("x", -1)], lx) == lx.monomial({"x": -1, "zeta": 1}) - lx.gen("x", -1)

    lu = catalog.build("D_LU").presentation
    assert normal_form([("v", 1), ("u", -1)], lu) == lu.monomial({"u": -1, "v": 1}) + lu.scalar(Fraction(1, 2))
    assert normal_form([("zeta", 1), ("u", -1)], lu) == lu.monomial({"u": -1, "zeta": 1}) + lu.gen("u", -1)


def test_distinguished_elements():
    entry = catalog.build("D")
    pres, d = entry.presentation, entry.distinguished
    g_inverse = pres.gen("g", -1)

    assert d.z == pres.mul(d.q, d.q, g_inverse)
    assert d.omega == pres.mul(d.q, d.s, g_inverse)
    assert d.theta == pres.mul(d.s, d.s, g_inverse)
    assert set(d.named()) == {"q", "s", "z", "omega", "theta"}
    assert d.m0_gens == (d.z, d.omega, d.theta)
    assert d.p0_gens == (d.q, d.s)

    # zθ = ω²
    assert pres.mul(d.z, d.theta) == pres.mul(d.omega, d.omega)


def test_entries_without_distinguished_elements():
    entry = catalog.build("J")
    assert entry.distinguished is None
    assert entry.named_elements() == {}
    assert entry.maps == {}


def test_sl2_quotient_map():
    entry = catalog.build("D")
    sl2 = catalog.sl2_quotient_map()
    target = sl2.target
    assert check_map_is_morphism(sl2).passed

    assert apply_map(sl2, entry.distinguished.z) == target.scalar(16)
    assert apply_map(sl2, entry.distinguished.omega) == target.scalar(-16)
    assert apply_map(sl2, entry.distinguished.theta) == target.scalar(16)

    # [v,y] = yu - gζ lands on -h
    image = apply_map(sl2, commutator(entry.gen("v"), entry.gen("y"), entry.presentation))
    assert image == -target.gen("h")

    for name in ("x", "u"):
        assert apply_map(sl2, entry.gen(name)).is_zero()
    assert (apply_map(sl2, entry.gen("g")) - target.one()).is_zero()


def test_ad_nilpotence():
    pres = catalog.build("D").presentation
    assert catalog.ad_nilpotence_order("x", pres) == {"g": 1, "x": 1, "u": 1, "y": 2, "zeta": 2, "v": 2}
    assert catalog.ad_nilpotence_order("u", pres) == {"g": 1, "x": 1, "u": 1, "y": 2, "zeta": 2, "v": 2}

    # ad(y) keeps raising the power of x
    with pytest.raises(catalog.BoundExceeded):
        catalog.ad_nilpotence_order("y", pres, bound=3)


def test_ideal_square_identities():
    report = catalog.ideal_square_identities()
    assert report.passed
    assert len(report.entries) == 5


def test_ore_tower_reading():
    assert catalog.ore_tower_reading(samples=10).passed


def test_sigma_fixes_the_coordinate_ring():
    entry = catalog.build("D")
    pres = entry.presentation
    sigma = entry.maps["sigma"]
    for name in ("g", "x", "u", "zeta"):
        assert apply_map(sigma, pres.gen(name)) == pres.gen(name)

    # s·q = σ(q)·s = q·s
    d = entry.distinguished
    assert multiply(d.s, d.q, pres) == multiply(d.q, d.s, pres)
