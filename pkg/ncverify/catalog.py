"""Concrete presentations of the Jordan plane, its bosonization, the double D and friends.

Generators of D are ordered g < x < u < y < zeta < v, and every other algebra here reuses whatever part of that
order it needs. Entries are built once and cached.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .ncpoly import (AlgebraMap, AlgebraPresentation, GeneratorInfo, InverseSwapRule, NCPolynomial, Report,
                     SwapRule, commutator, identity_map, monomials_up_to, multiply, random_polynomial,
                     validate_presentation)
from .util import random_generator

CATALOG_IDS = ("J", "OG", "H", "D", "D_LX", "D_LU", "SL2")

HALF = Fraction(1, 2)


class ValidationFailed(ValueError):
    def __init__(self, report: Report):
        self.report = report
        labels = ", ".join(entry.label for entry in report.failures())
        super().__init__(f"{report.title} failed validation on: {labels}")


class BoundExceeded(RuntimeError):
    pass


def _monomial(names: Sequence[str], text: str) -> Tuple[int, ...]:
    """Turns 'g^-1 x u' into an exponent vector over `names`."""
    exponents = [0] * len(names)
    for token in text.split():
        name, _, exponent = token.partition("^")
        exponents[names.index(name)] += int(exponent) if exponent else 1
    return tuple(exponents)


def _poly(names: Sequence[str], *terms: Tuple[Fraction, str]) -> NCPolynomial:
    """Builds a polynomial from (coefficient, monomial text) pairs. '1' is the empty monomial."""
    result: Dict[Tuple[int, ...], Fraction] = {}
    for coefficient, text in terms:
        monomial = _monomial(names, "" if text == "1" else text)
        result[monomial] = result.get(monomial, 0) + Fraction(coefficient)
    return NCPolynomial(result)


def _generators(*specs: str) -> Tuple[GeneratorInfo, ...]:
    """'g*' marks an invertible generator."""
    return tuple(GeneratorInfo(spec.rstrip("*"), i, spec.endswith("*")) for i, spec in enumerate(specs))


def _commuting(names: Sequence[str], hi: str, lo: str) -> SwapRule:
    return SwapRule(hi, lo, _poly(names, (1, f"{lo} {hi}")))


def commuting_inverse_rules(names: Sequence[str], inverted: str, movers: Sequence[str],
                            later_movers: Sequence[str] = (), inverse_later_movers: Sequence[str] = ()):
    """Rules saying `inverted`⁻¹ commutes with the listed generators.

    movers come after `inverted` in the order (mover·inverted⁻¹ = inverted⁻¹·mover); later_movers come before it
    (inverted⁻¹·mover = mover·inverted⁻¹), and inverse_later_movers likewise but for mover⁻¹.
    """
    rules = [InverseSwapRule(m, inverted, _poly(names, (1, f"{inverted}^-1 {m}"))) for m in movers]
    rules += [InverseSwapRule(m, inverted, _poly(names, (1, f"{m} {inverted}^-1")), inverted_on_left=True)
              for m in later_movers]
    rules += [InverseSwapRule(m, inverted, _poly(names, (1, f"{m}^-1 {inverted}^-1")), inverted_on_left=True,
                              mover_inverted=True)
              for m in inverse_later_movers]
    return rules


# The double D
D_NAMES = ("g", "x", "u", "y", "zeta", "v")


def _double_swap_rules(n=D_NAMES) -> Tuple[SwapRule, ...]:
    return (
        _commuting(n, "x", "g"),
        _commuting(n, "u", "g"),
        _commuting(n, "u", "x"),
        SwapRule("y", "g", _poly(n, (1, "g y"), (-1, "g x"))),
        SwapRule("y", "x", _poly(n, (1, "x y"), (-HALF, "x^2"))),
        SwapRule("y", "u", _poly(n, (1, "u y"), (-1, "1"), (1, "g"))),
        _commuting(n, "zeta", "g"),
        SwapRule("zeta", "x", _poly(n, (1, "x zeta"), (1, "x"))),
        SwapRule("zeta", "u", _poly(n, (1, "u zeta"), (-1, "u"))),
        SwapRule("zeta", "y", _poly(n, (1, "y zeta"), (1, "y"))),
        SwapRule("v", "g", _poly(n, (1, "g v"), (1, "g u"))),
        SwapRule("v", "x", _poly(n, (1, "x v"), (1, "1"), (-1, "g"), (1, "x u"))),
        SwapRule("v", "u", _poly(n, (1, "u v"), (-HALF, "u^2"))),
        SwapRule("v", "y", _poly(n, (1, "y v"), (1, "u y"), (-1, "1"), (1, "g"), (-1, "g zeta"))),
        SwapRule("v", "zeta", _poly(n, (1, "zeta v"), (1, "v"))),
    )


def _double_inverse_rules(n=D_NAMES):
    return commuting_inverse_rules(n, "g", ("x", "u", "zeta")) + [
        InverseSwapRule("y", "g", _poly(n, (1, "g^-1 y"), (1, "g^-1 x"))),
        InverseSwapRule("v", "g", _poly(n, (1, "g^-1 v"), (-1, "g^-1 u"))),
    ]


def _double_presentation() -> AlgebraPresentation:
    return AlgebraPresentation("D", _generators("g*", "x", "u", "y", "zeta", "v"), _double_swap_rules(),
                               tuple(_double_inverse_rules()), frozenset({"y", "zeta", "v"}))


def _double_with_x_inverted() -> AlgebraPresentation:
    n = D_NAMES
    rules = _double_inverse_rules() + commuting_inverse_rules(n, "x", ("u",), later_movers=("g",),
                                                               inverse_later_movers=("g",))
    rules += [
        InverseSwapRule("y", "x", _poly(n, (1, "x^-1 y"), (HALF, "1"))),
        InverseSwapRule("zeta", "x", _poly(n, (1, "x^-1 zeta"), (-1, "x^-1"))),
        InverseSwapRule("v", "x", _poly(n, (1, "x^-1 v"), (-1, "x^-1 u"), (-1, "x^-2"), (1, "g x^-2"))),
    ]
    return AlgebraPresentation("D_LX", _generators("g*", "x*", "u", "y", "zeta", "v"), _double_swap_rules(),
                               tuple(rules), frozenset({"y", "zeta", "v"}))


def _double_with_u_inverted() -> AlgebraPresentation:
    n = D_NAMES
    rules = _double_inverse_rules() + commuting_inverse_rules(n, "u", (), later_movers=("g", "x"),
                                                               inverse_later_movers=("g",))
    rules += [
        InverseSwapRule("y", "u", _poly(n, (1, "u^-1 y"), (1, "u^-2"), (-1, "g u^-2"))),
        InverseSwapRule("zeta", "u", _poly(n, (1, "u^-1 zeta"), (1, "u^-1"))),
        InverseSwapRule("v", "u", _poly(n, (1, "u^-1 v"), (HALF, "1"))),
    ]
    return AlgebraPresentation("D_LU", _generators("g*", "x", "u*", "y", "zeta", "v"), _double_swap_rules(),
                               tuple(rules), frozenset({"y", "zeta", "v"}))


def _jordan_plane() -> AlgebraPresentation:
    n = ("x", "y")
    return AlgebraPresentation("J", _generators("x", "y"),
                               (SwapRule("y", "x", _poly(n, (1, "x y"), (-HALF, "x^2"))),), (), frozenset({"y"}))


def _coordinate_ring() -> AlgebraPresentation:
    n = ("g", "x", "u")
    return AlgebraPresentation("OG", _generators("g*", "x", "u"),
                               (_commuting(n, "x", "g"), _commuting(n, "u", "g"), _commuting(n, "u", "x")),
                               tuple(commuting_inverse_rules(n, "g", ("x", "u"))), frozenset())


def _bosonization() -> AlgebraPresentation:
    n = ("g", "x", "y")
    rules = (
        _commuting(n, "x", "g"),
        SwapRule("y", "g", _poly(n, (1, "g y"), (-1, "g x"))),
        SwapRule("y", "x", _poly(n, (1, "x y"), (-HALF, "x^2"))),
    )
    inverse_rules = commuting_inverse_rules(n, "g", ("x",)) + [
        InverseSwapRule("y", "g", _poly(n, (1, "g^-1 y"), (1, "g^-1 x")))]
    return AlgebraPresentation("H", _generators("g*", "x", "y"), rules, tuple(inverse_rules), frozenset({"y"}))


SL2_NAMES = ("e", "h", "f")


def _sl2() -> AlgebraPresentation:
    # Normalised so that ζ ↦ h, y ↦ e, v ↦ f: [h,e] = e, [f,h] = f, [f,e] = -h
    n = SL2_NAMES
    rules = (
        SwapRule("h", "e", _poly(n, (1, "e h"), (1, "e"))),
        SwapRule("f", "e", _poly(n, (1, "e f"), (-1, "h"))),
        SwapRule("f", "h", _poly(n, (1, "h f"), (1, "f"))),
    )
    return AlgebraPresentation("SL2", _generators("e", "h", "f"), rules, (), frozenset({"e", "h", "f"}))


_PRESENTATIONS = {
    "J": _jordan_plane,
    "OG": _coordinate_ring,
    "H": _bosonization,
    "D": _double_presentation,
    "D_LX": _double_with_x_inverted,
    "D_LU": _double_with_u_inverted,
    "SL2": _sl2,
}


@dataclass(frozen=True)
class DistinguishedElements:
    q: NCPolynomial
    s: NCPolynomial
    z: NCPolynomial
    omega: NCPolynomial
    theta: NCPolynomial
    mplus_gens: Tuple[NCPolynomial, ...]
    m0_gens: Tuple[NCPolynomial, ...]
    p0_gens: Tuple[NCPolynomial, ...]

    def named(self) -> Dict[str, NCPolynomial]:
        return {"q": self.q, "s": self.s, "z": self.z, "omega": self.omega, "theta": self.theta}


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    id: str
    presentation: AlgebraPresentation
    distinguished: Optional[DistinguishedElements] = None
    maps: Mapping[str, AlgebraMap] = field(default_factory=dict)

    def named_elements(self) -> Dict[str, NCPolynomial]:
        return {} if self.distinguished is None else self.distinguished.named()

    def gen(self, name: str, exponent: int = 1) -> NCPolynomial:
        return self.presentation.gen(name, exponent)


def _distinguished(pres: AlgebraPresentation) -> DistinguishedElements:
    n = D_NAMES
    q = _poly(n, (1, "x u"), (2, "1"), (2, "g"))
    s = _poly(n, (1, "x v"), (1, "u y"), (-HALF, "x u zeta"), (1, "g zeta"), (-1, "zeta"), (-2, "g"), (-2, "1"))
    g_inverse = pres.gen("g", -1)
    z = pres.mul(q, q, g_inverse)
    omega = pres.mul(q, s, g_inverse)
    theta = pres.mul(s, s, g_inverse)
    return DistinguishedElements(
        q=q, s=s, z=z, omega=omega, theta=theta,
        mplus_gens=(z - pres.scalar(16), omega + pres.scalar(16), theta - pres.scalar(16)),
        m0_gens=(z, omega, theta),
        p0_gens=(q, s),
    )


def _sigma(pres: AlgebraPresentation) -> AlgebraMap:
    """The automorphism y ↦ y + x/2, v ↦ v - u/2 fixing every other generator."""
    identity = identity_map(pres)
    images = dict(identity.images)
    images["y"] = pres.gen("y") + pres.gen("x").scale(HALF)
    images["v"] = pres.gen("v") - pres.gen("u").scale(HALF)
    return AlgebraMap("sigma", pres, pres, images, dict(identity.inverse_images))


def _conjugation_by_g(pres: AlgebraPresentation) -> AlgebraMap:
    """a ↦ g·a·g⁻¹."""
    g, g_inverse = pres.gen("g"), pres.gen("g", -1)
    images = {info.name: pres.mul(g, pres.gen(info.name), g_inverse) for info in pres.generators}
    inverse_images = {info.name: pres.mul(g, pres.gen(info.name, -1), g_inverse)
                      for info in pres.invertible_generators()}
    return AlgebraMap("ad_g", pres, pres, images, inverse_images)


def sl2_quotient_map() -> AlgebraMap:
    """D → U(sl2): kills x, u and g - 1, sends y, zeta, v to e, h, f."""
    return build("D").maps["sl2"]


def _sl2_quotient_map_for(source: AlgebraPresentation) -> AlgebraMap:
    target = build("SL2").presentation
    zero = target.zero()
    images = {"g": target.one(), "x": zero, "u": zero,
              "y": target.gen("e"), "zeta": target.gen("h"), "v": target.gen("f")}
    return AlgebraMap("sl2", source, target, images, {"g": target.one()})


@lru_cache(maxsize=None)
def build(id: str) -> CatalogEntry:
    """Builds and validates one catalog entry. Cached, so every caller shares the same presentation."""
    try:
        presentation = _PRESENTATIONS[id]()
    except KeyError:
        raise ValueError(f"unknown algebra '{id}'! Choose one of {', '.join(CATALOG_IDS)}.")

    report = validate_presentation(presentation)
    if not report.passed:
        raise ValidationFailed(report)
    logging.info(f"built catalog entry {id} ({len(presentation.swap_rules)} swap rules, "
                 f"{len(presentation.inverse_rules)} inverse rules)")

    if presentation.names != D_NAMES:
        return CatalogEntry(id, presentation)

    maps = {"sigma": _sigma(presentation), "ad_g": _conjugation_by_g(presentation)}
    if id == "D":
        maps["sl2"] = _sl2_quotient_map_for(presentation)
    return CatalogEntry(id, presentation, _distinguished(presentation), maps)


def ad_nilpotence_order(t: str, pres: AlgebraPresentation, bound: int = 8) -> Dict[str, int]:
    """Smallest N with ad(t)^N(a) = 0, for every generator a."""
    t_poly = pres.gen(t)
    orders = {}
    for info in pres.generators:
        current = pres.gen(info.name)
        for n in range(1, bound + 1):
            current = commutator(t_poly, current, pres)
            if current.is_zero():
                orders[info.name] = n
                break
        else:
            raise BoundExceeded(f"ad({t}) is not nilpotent on {info.name} within {bound} steps! Raise the bound "
                                f"if you think it should be.")
    return orders


def ideal_square_identities(entry: Optional[CatalogEntry] = None) -> Report:
    """q² = zg, qs = sq = ωg and s² = θg, all exactly."""
    entry = entry or build("D")
    pres, d = entry.presentation, entry.distinguished
    g = pres.gen("g")
    report = Report("products of q and s against z, omega, theta")
    report.add_residual("q*q - z*g", pres.mul(d.q, d.q) - pres.mul(d.z, g))
    report.add_residual("q*s - omega*g", pres.mul(d.q, d.s) - pres.mul(d.omega, g))
    report.add_residual("s*q - omega*g", pres.mul(d.s, d.q) - pres.mul(d.omega, g))
    report.add_residual("s*s - theta*g", pres.mul(d.s, d.s) - pres.mul(d.theta, g))
    report.add_residual("s*q - q*s", commutator(d.s, d.q, pres))
    return report


def _has_generators(p: NCPolynomial, pres: AlgebraPresentation, names: Sequence[str]) -> bool:
    positions = [pres.generator(name).position for name in names]
    return any(monomial[i] != 0 for monomial in p.terms for i in positions)


def ore_tower_reading(entry: Optional[CatalogEntry] = None, samples: int = 50,
                      rng: Optional[np.random.Generator] = None) -> Report:
    """Reads D as O(G)[y; δ₁][ζ; δ₂][v; τ, δ₃] off its own rewrite rules."""
    entry = entry or build("D")
    pres = entry.presentation
    rng = rng or random_generator()
    report = Report("D as an iterated Ore extension")

    v, zeta, y = pres.gen("v"), pres.gen("zeta"), pres.gen("y")
    report.add_residual("v*zeta = (zeta+1)*v",
                        pres.mul(v, zeta) - pres.mul(zeta + pres.one(), v))

    for name in ("g", "x", "u", "y"):
        r = pres.gen(name)
        delta = commutator(v, r, pres)
        report.add_flag(f"[v,{name}] has no v", not _has_generators(delta, pres, ("v",)), delta)
        if name != "y":
            delta = commutator(zeta, r, pres)
            report.add_flag(f"[zeta,{name}] has no zeta or v",
                            not _has_generators(delta, pres, ("zeta", "v")), delta)
    delta = commutator(zeta, y, pres)
    report.add_flag("[zeta,y] has no zeta or v", not _has_generators(delta, pres, ("zeta", "v")), delta)

    # δ₁ = [y, -] is a derivation of O(G) landing in O(G)
    coordinate_basis = [m for m in monomials_up_to(pres, 3) if not any(m[3:])]
    leibniz_failures = 0
    for _ in range(samples):
        a = random_polynomial(pres, rng, basis=coordinate_basis)
        b = random_polynomial(pres, rng, basis=coordinate_basis)
        delta_a, delta_b = commutator(y, a, pres), commutator(y, b, pres)
        residual = commutator(y, multiply(a, b, pres), pres) - multiply(delta_a, b, pres) - multiply(a, delta_b, pres)
        if not residual.is_zero() or _has_generators(delta_a, pres, ("y", "zeta", "v")):
            leibniz_failures += 1
            report.add_flag("delta1 Leibniz", False, residual)
    report.add_flag(f"delta1 Leibniz on {samples} pairs", leibniz_failures == 0)
    return report
