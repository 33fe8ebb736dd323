"""Tests for the parser submodule."""
from fractions import Fraction

import pytest

from ncverify import parser
from ncverify.catalog import build
from ncverify.membership import NoWitnessAtBound, Witness
from ncverify.ncpoly import UnknownGenerator, normal_form, validate_presentation
from ncverify.tower import BASE_W, BASE_X, ForeignDenominator, build_tower


HOPF_ALGEBRA_H = """
# The bosonization of the Jordan plane
name: bosonization
generators: g* x y
level: y
rule: x*g = g*x
rule: y*g = g*y - g*x
rule: y*x = x*y - 1/2*x^2
inverse: x*g^-1 = g^-1*x
inverse: y*g^-1 = g^-1*y + g^-1*x
"""


def test_grammar():
    assert parser.parse_expression("x") == parser.Identifier("x", 0)
    assert parser.parse_expression("3/4") == parser.RationalLiteral(3, 4, 0)

    node = parser.parse_expression("2x^3")
    assert isinstance(node, parser.Product)
    assert node.factors[1].exponent == 3

    node = parser.parse_expression("-a + b")
    assert isinstance(node, parser.Sum)
    assert [sign for sign, _ in node.terms] == [-1, 1]

    assert isinstance(parser.parse_expression("[a, b*c]"), parser.Bracket)


def test_syntax_errors():
    with pytest.raises(parser.ExpressionSyntaxError) as error:
        parser.parse_expression("x +* y")
    assert error.value.position > 0

    for text in ("", "x^", "(x", "[x y]", "x^1.5"):
        with pytest.raises(parser.ExpressionSyntaxError):
            parser.parse_expression(text)

    with pytest.raises(parser.ExpressionSyntaxError):
        parser.parse("1/0", "D")


def test_parse_into_d():
    entry = build("D")
    pres = entry.presentation
    x, u, y, zeta = (pres.gen(name) for name in ("x", "u", "y", "zeta"))

    assert parser.parse("v*x", "D") == normal_form([("v", 1), ("x", 1)], pres)
    assert parser.parse("2x", "D") == 2 * x
    assert parser.parse("1/2 x^2 - u", "D") == pres.monomial({"x": 2}, Fraction(1, 2)) - u
    assert parser.parse("[zeta, y]", "D") == y
    assert parser.parse("ζ*y - y*ζ", "D") == y
    assert parser.parse("(x + u)*zeta", "D") == pres.mul(x + u, zeta)
    assert parser.parse("g^-1*g", "D") == pres.one()
    assert parser.parse("-(x)", "D") == -x

    # Nonzero rationals are invertible
    assert parser.parse("2^-1", "D") == pres.scalar(Fraction(1, 2))
    assert parser.parse("(1/2)^-2*x", "D") == 4 * x
    assert parser.parse("(3 - 1)^-1", "D") == pres.scalar(Fraction(1, 2))

    # Named elements
    assert parser.parse("q", entry) == entry.distinguished.q
    assert parser.parse("ω", "D") == entry.distinguished.omega
    assert parser.parse("z*theta - omega^2", "D").is_zero()


def test_parse_errors():
    with pytest.raises(UnknownGenerator):
        parser.parse("w", "D")
    with pytest.raises(parser.NegativePowerNotInvertible):
        parser.parse("x^-1", "D")
    with pytest.raises(parser.NegativePowerNotInvertible):
        parser.parse("(x + g)^-1", "D")
    with pytest.raises(parser.NegativePowerNotInvertible):
        parser.parse("0^-1", "D")
    with pytest.raises(ValueError):
        parser.resolve_algebra("nope")

    # x is invertible once it has been inverted
    pres = build("D_LX").presentation
    assert parser.parse("x^-1*x", "D_LX") == pres.one()


def test_parse_into_towers():
    t = build_tower("T")
    assert parser.parse("y*x", "T") == t.mul(t.var("y"), t.base(BASE_X))
    assert parser.parse("x^-1", "T") == t.base(BASE_X.inverse())
    assert parser.parse("(u*x + 2)^-1", "T") == t.base(BASE_W.inverse())

    with pytest.raises(ForeignDenominator):
        parser.parse("(x + 1)^-1", "T")
    with pytest.raises(parser.NegativePowerNotInvertible):
        parser.parse("y^-1", "T")
    with pytest.raises(UnknownGenerator):
        parser.parse("h", "T")

    s_tilde = build_tower("S_tilde")
    assert parser.parse("h*h", "S_tilde") == s_tilde.base(BASE_W.inverse())


def test_format_polynomial():
    pres = build("D").presentation
    assert parser.format_polynomial(parser.parse("v*x", "D"), pres) == "x*v + x*u - g + 1"
    assert parser.format_polynomial(pres.zero(), pres) == "0"
    assert parser.format_polynomial(pres.gen("g", -2), pres) == "g^-2"

    j = build("J").presentation
    assert parser.format_polynomial(parser.parse("[y, x]", "J"), j) == "-1/2*x^2"

    # Printed text reads back as the same polynomial
    for text in ("x*v + x*u - g + 1", "-1/2*g^-1*zeta^2 + 3*u - 7/3"):
        p = parser.parse(text, "D")
        assert parser.parse(parser.format_polynomial(p, pres), "D") == p


def test_format_value():
    pres = build("D").presentation
    assert parser.format_value(None) == ""
    assert parser.format_value(pres.zero(), "D") == "0"
    assert parser.format_value(pres.gen("x"), "D") == "x"
    assert parser.format_value(Fraction(-3, 4)) == "-3/4"
    assert parser.format_value(Witness((pres.one(), pres.gen("y")), 5)) == "witness (rank 5): cofactors 1, y"
    assert parser.format_value(NoWitnessAtBound(4, 10, 20, 30)) == "no witness at bound 4 (rank 10, 20 x 30)"

    t = build_tower("T")
    assert parser.format_value(t.var("y"), t) == "y"
    assert parser.format_value(t.zero(), t) == "0"


def test_parse_presentation():
    pres = parser.parse_presentation(HOPF_ALGEBRA_H)
    assert pres.name == "bosonization"
    assert pres.names == ("g", "x", "y")
    assert pres.generator("g").invertible
    assert not pres.generator("x").invertible
    assert validate_presentation(pres).passed

    catalog_h = build("H").presentation
    for word in ([("y", 1), ("g", -1)], [("y", 2), ("x", 1)], [("y", 1), ("g", 2)]):
        assert normal_form(word, pres).terms == normal_form(word, catalog_h).terms


def test_presentation_format_errors():
    with pytest.raises(ValueError):
        parser.parse_presentation("generators: x y\nrule: y*x")
    with pytest.raises(ValueError):
        parser.parse_presentation("colour: red")
    with pytest.raises(ValueError):
        parser.parse_presentation("generators x y")
    with pytest.raises(ValueError):
        parser.parse_presentation("generators: x y\nrule: y*x*x = x")


def test_load_presentation(tmp_path):
    path = tmp_path / "jordan.txt"
    path.write_text("generators: x y\nlevel: y\nrule: y*x = x*y - 1/2*x^2\n", encoding="utf-8")
    pres = parser.load_presentation(path)
    assert pres.name == "jordan"
    assert validate_presentation(pres).passed
