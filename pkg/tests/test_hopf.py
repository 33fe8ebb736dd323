"""Tests for the hopf submodule."""
from fractions import Fraction

import pytest

from ncverify import hopf
from ncverify.catalog import build
from ncverify.util import random_generator


def _d():
    return build("D").presentation


def test_tensor_polynomials():
    pres = _d()
    x, one = pres.gen("x"), pres.one()
    t = hopf.TensorPolynomial.pure(x + one, one)
    assert len(t) == 2
    assert (t - hopf.TensorPolynomial.pure(x, one)) == hopf.TensorPolynomial.pure(one, one)
    assert (t - t).is_zero()

    with pytest.raises(ValueError):
        hopf.TensorPolynomial(4)
    with pytest.raises(ValueError):
        hopf.TensorPolynomial(2, {((0,) * 6,): 1})


def test_unknown_convention():
    with pytest.raises(ValueError):
        hopf.CoproductSpec("C")


def test_coproduct_of_generators():
    pres = _d()
    spec = hopf.coproduct_spec("B")
    pure = hopf.TensorPolynomial.pure
    one, g, x, u = pres.one(), pres.gen("g"), pres.gen("x"), pres.gen("u")

    assert hopf.delta(g, spec) == pure(g, g)
    assert hopf.delta(x, spec) == pure(x, one) + pure(g, x)
    assert hopf.delta(u, spec) == pure(u, one) + pure(one, u)
    assert hopf.delta(pres.mul(g, pres.gen("g", -1)), spec) == pure(one, one)


def test_convention_b_is_elected():
    election = hopf.elect_convention()
    assert election.winner == "B"
    assert election.unique
    assert election.reports["B"].passed
    assert not election.reports["A"].passed
    assert hopf.elected_spec().convention == "B"


def test_hopf_axioms_under_the_elected_convention():
    spec = hopf.elected_spec()
    report = hopf.counit_and_coassoc_axioms(spec)
    assert report.passed
    assert report.entry("(eps⊗id)Delta(v)").passed
    assert report.entry("coassociativity on g^-1").passed
    assert hopf.coordinate_ring_closure(spec).passed


def test_counit():
    pres = _d()
    d = build("D").distinguished
    spec = hopf.elected_spec()
    assert spec.convention == hopf.elect_convention().winner == "B"
    assert hopf.counit(d.q, spec) == 4
    assert hopf.counit(d.s, spec) == -4
    assert hopf.counit(d.z, spec) == 16
    assert hopf.counit(d.omega, spec) == -16
    assert hopf.counit(d.theta, spec) == 16
    assert hopf.counit(pres.gen("g", -3), spec) == 1
    assert hopf.counit(pres.gen("y"), spec) == 0
    assert hopf.counit(pres.scalar(Fraction(3, 2)), spec) == Fraction(3, 2)

    assert hopf.counit_values(spec).passed


def test_counit_is_multiplicative():
    assert hopf.counit_multiplicativity_fuzz(hopf.elected_spec(), samples=20, rng=random_generator(4)).passed


def test_central_coproduct_residuals():
    pres = _d()
    residuals = hopf.central_coproduct_residuals(hopf.elected_spec())
    assert list(residuals) == ["z", "omega", "theta"]
    for name, residual in residuals.items():
        assert residual.rank == 2, name
        for key in residual.terms:
            assert all(len(monomial) == pres.nvars for monomial in key)
