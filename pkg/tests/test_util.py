"""Tests for the util and config submodules."""
from fractions import Fraction

import pytest

from ncverify import config, util


def test_string_time():
    stamp = util.string_time()
    assert len(stamp) == len("2021-11-08--12:00:00")
    assert stamp[10:12] == "--"


def test_as_fraction():
    assert util.as_fraction(3) == Fraction(3)
    assert util.as_fraction("-1/2") == Fraction(-1, 2)
    assert util.as_fraction(Fraction(2, 4)) == Fraction(1, 2)
    for bad in (0.5, True):
        with pytest.raises(TypeError):
            util.as_fraction(bad)


def test_format_fraction():
    assert util.format_fraction(Fraction(4)) == "4"
    assert util.format_fraction(Fraction(-3, 6)) == "-1/2"


def test_random_generator_is_seeded_from_config():
    first = util.random_generator().integers(0, 1000, size=5)
    second = util.random_generator(config.SEED).integers(0, 1000, size=5)
    assert (first == second).all()


def test_integer_environment_variables(monkeypatch):
    monkeypatch.setenv("NCVERIFY_TEST_VALUE", "42")
    assert config._int_from_environment("NCVERIFY_TEST_VALUE", 7) == 42

    monkeypatch.delenv("NCVERIFY_TEST_VALUE")
    assert config._int_from_environment("NCVERIFY_TEST_VALUE", 7) == 7

    monkeypatch.setenv("NCVERIFY_TEST_VALUE", "lots")
    with pytest.raises(ValueError):
        config._int_from_environment("NCVERIFY_TEST_VALUE", 7)
