"""Tests for the membership submodule."""
import numpy as np
import pandas as pd
import pytest

from ncverify import config, membership
from ncverify.catalog import build
from ncverify.util import random_generator


def _d():
    entry = build("D")
    return entry.presentation, entry.distinguished


def test_problem_validation():
    pres, d = _d()
    with pytest.raises(ValueError):
        membership.MembershipProblem(d.q, (d.q,), -1, pres)
    with pytest.raises(ValueError):
        membership.MembershipProblem(d.q, (d.q,), 1, pres, side="left")
    with pytest.raises(ValueError):
        membership.MembershipProblem(d.q, (d.q,), 1, pres, normal_flags=(True, False))


def test_normal_generators_are_flagged():
    pres, d = _d()
    assert membership.flag_normal_generators([d.q, d.s, pres.gen("y")], pres) == (True, True, False)
    assert membership.flag_normal_generators([d.q], build("SL2").presentation) == (False,)

    assert membership.MembershipProblem(d.z, (d.q, d.s), 2, pres, normal_flags=(True, True)).two_sided
    assert not membership.MembershipProblem(d.z, (d.q, d.s), 2, pres, normal_flags=(True, False)).two_sided
    assert not membership.MembershipProblem(d.z, (d.q, d.s), 2, pres).two_sided


def test_witness_for_an_obvious_member():
    pres, d = _d()
    target = pres.mul(d.q, pres.gen("y")) + 3 * d.q
    result = membership.membership(target, [d.q], 1, pres)
    assert isinstance(result, membership.Witness)

    # D is a domain, so the cofactor is forced
    assert result.cofactors == (pres.gen("y") + pres.scalar(3),)

    result = membership.membership(d.q, [d.q], 0, pres)
    assert result.cofactors == (pres.one(),)


def test_no_witness():
    pres, d = _d()
    result = membership.membership(pres.one(), [d.q, d.s], 1, pres)
    assert isinstance(result, membership.NoWitnessAtBound)
    assert result.bound == 1
    assert result.rows > 0 and result.columns == 16

    assert membership.expect_no_witness("s in qD", d.s, [d.q], bound=1).passed


def test_replay_catches_a_bad_witness():
    pres, d = _d()
    problem = membership.MembershipProblem(d.s, (d.q,), 0, pres)
    with pytest.raises(membership.WitnessReplayFailed):
        membership.replay_witness(problem, membership.Witness((pres.one(),), 1))


def test_matrix_cap(monkeypatch):
    pres, d = _d()
    monkeypatch.setattr(config, "MATRIX_CELL_CAP", 10)
    with pytest.raises(membership.BoundTooLargeForMemory):
        membership.membership(d.omega, [d.q, d.s], 2, pres)


def test_m0_equals_p0_squared():
    report = membership.m0_equals_p0_squared(2)
    assert report.passed
    assert report.entry("omega in P0^2").passed
    assert report.entry("s^2 in m0 D").passed


def test_central_elements_lie_in_p0():
    assert membership.primes_inside_p0(4).passed


def test_monomial_counts():
    assert [membership.monomial_count(n) for n in range(3)] == [1, 8, 35]
    assert membership.monomial_count(12) == 30940
    for n in range(5):
        assert membership.monomial_count(n) == membership.expected_count(n) == membership.brute_force_count(n)

    with pytest.raises(ValueError):
        membership.monomial_count(-1)


def test_growth_table():
    table = membership.growth_table(12)
    assert list(table.columns) == ["n", "monomial_count", "expected_count", "brute_force_count", "local_exponent"]
    assert len(table) == 13
    assert (table["monomial_count"] == table["expected_count"]).all()
    assert pd.isna(table["brute_force_count"].iloc[7])
    assert np.isnan(table["local_exponent"].iloc[1])

    exponents = table["local_exponent"].to_numpy()
    assert exponents[2] == pytest.approx(2.13, abs=0.01)
    assert exponents[12] == pytest.approx(4.80, abs=0.01)
    assert (exponents[2:] < 6).all()

    assert membership.growth_report(8).passed


def test_degree_subadditivity():
    assert membership.degree_subadditivity_fuzz(samples=20, rng=random_generator(11)).passed


if __name__ == "__main__":
    print(membership.growth_table(12).to_string(index=False))
