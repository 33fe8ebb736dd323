"""Fractions a·c⁻ⁿ over a central element c, and the Weyl coordinates of the four localisations of D."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .catalog import CatalogEntry, build
from .ncpoly import (AlgebraPresentation, NCPolynomial, Report, monomials_up_to, multiply, power,
                     random_polynomial)
from .util import random_generator

WEYL_CASES = ("A", "B", "C", "D")

# Which localisation each case lives in, and which central element is inverted
_CASE_SETUP = {
    "A": ("D_LX", "z"),
    "B": ("D_LX", "theta"),
    "C": ("D_LU", "z"),
    "D": ("D_LU", "theta"),
}


class MixedCenters(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FractionRing:
    """The localisation of a catalog algebra at the powers of one of its central elements."""
    entry: CatalogEntry
    center_name: str
    center: NCPolynomial = field(init=False)

    def __post_init__(self):
        try:
            center = self.entry.named_elements()[self.center_name]
        except KeyError:
            raise ValueError(f"{self.entry.id} has no distinguished element called {self.center_name}!")
        object.__setattr__(self, "center", center)

    @property
    def pres(self) -> AlgebraPresentation:
        return self.entry.presentation

    @property
    def name(self) -> str:
        return f"{self.entry.id}[{self.center_name}^-1]"

    def fraction(self, numerator: NCPolynomial, power: int = 0) -> "CentralFraction":
        return CentralFraction(numerator, power, self)

    def one(self) -> "CentralFraction":
        return self.fraction(self.pres.one())

    def zero(self) -> "CentralFraction":
        return self.fraction(self.pres.zero())

    def mul(self, a: "CentralFraction", b: "CentralFraction") -> "CentralFraction":
        return frac_mul(a, b)

    def center_power(self, n: int) -> NCPolynomial:
        return _center_power(self, n)


@lru_cache(maxsize=256)
def _center_power(ring: FractionRing, n: int) -> NCPolynomial:
    return power(ring.center, n, ring.pres)


@dataclass(frozen=True, eq=False)
class CentralFraction:
    """numerator·c^-power. Never reduced: equality cross-multiplies."""
    numerator: NCPolynomial
    power: int
    ring: FractionRing

    def __post_init__(self):
        if self.power < 0:
            raise ValueError(f"denominator powers can't be negative (got {self.power})!")

    def is_zero(self) -> bool:
        # c is regular, so a·c⁻ⁿ vanishes exactly when a does
        return self.numerator.is_zero()

    def __eq__(self, other):
        if not isinstance(other, CentralFraction):
            return NotImplemented
        return frac_equal(self, other)

    __hash__ = None

    def __add__(self, other):
        return frac_add(self, other)

    def __sub__(self, other):
        return frac_add(self, -other)

    def __neg__(self):
        return CentralFraction(-self.numerator, self.power, self.ring)

    def __mul__(self, other):
        if isinstance(other, CentralFraction):
            return frac_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return CentralFraction(self.numerator.scale(other), self.power, self.ring)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __repr__(self):
        return f"CentralFraction({self.numerator!r} / {self.ring.center_name}^{self.power})"


def _check_same_ring(a: CentralFraction, b: CentralFraction):
    if a.ring is b.ring:
        return
    if (a.ring.entry.id, a.ring.center_name) != (b.ring.entry.id, b.ring.center_name):
        raise MixedCenters(f"can't combine a fraction over {a.ring.name} with one over {b.ring.name}!")


def _raise(a: CentralFraction, extra: int) -> NCPolynomial:
    """The numerator of a, rewritten over c^(power + extra)."""
    if extra == 0:
        return a.numerator
    return multiply(a.numerator, a.ring.center_power(extra), a.ring.pres)


def frac_mul(a: CentralFraction, b: CentralFraction) -> CentralFraction:
    _check_same_ring(a, b)
    return CentralFraction(multiply(a.numerator, b.numerator, a.ring.pres), a.power + b.power, a.ring)


def frac_add(a: CentralFraction, b: CentralFraction) -> CentralFraction:
    _check_same_ring(a, b)
    top = max(a.power, b.power)
    return CentralFraction(_raise(a, top - a.power) + _raise(b, top - b.power), top, a.ring)


def frac_commutator(a: CentralFraction, b: CentralFraction) -> CentralFraction:
    return frac_add(frac_mul(a, b), -frac_mul(b, a))


def frac_equal(a: CentralFraction, b: CentralFraction) -> bool:
    """(a, m) = (b, n) iff a·cⁿ = b·cᵐ, checked after cancelling the common power of c."""
    _check_same_ring(a, b)
    top = max(a.power, b.power)
    return (_raise(a, top - a.power) - _raise(b, top - b.power)).is_zero()


@dataclass(frozen=True)
class WeylCoordinates:
    case: str
    p: CentralFraction
    q: CentralFraction
    t: CentralFraction
    eta: CentralFraction
    ring: FractionRing
    eta_sign_flipped: bool = False

    def pairs(self) -> List[Tuple[str, CentralFraction, CentralFraction, int]]:
        """The six brackets, with the value each should take."""
        return [
            ("[p,q]", self.p, self.q, 1),
            ("[eta,t]", self.eta, self.t, 1),
            ("[p,t]", self.p, self.t, 0),
            ("[p,eta]", self.p, self.eta, 0),
            ("[q,t]", self.q, self.t, 0),
            ("[q,eta]", self.q, self.eta, 0),
        ]


def fraction_ring(case: str) -> FractionRing:
    try:
        entry_id, center_name = _CASE_SETUP[case]
    except KeyError:
        raise ValueError(f"unknown localisation case '{case}'! Choose one of {', '.join(WEYL_CASES)}.")
    return _fraction_ring(entry_id, center_name)


@lru_cache(maxsize=None)
def _fraction_ring(entry_id: str, center_name: str) -> FractionRing:
    return FractionRing(build(entry_id), center_name)


def _printed_coordinates(case: str, ring: FractionRing):
    pres = ring.pres
    d = ring.entry.distinguished
    normal = d.q if ring.center_name == "z" else d.s
    g_inverse = pres.gen("g", -1)
    zeta = pres.gen("zeta")

    if case in ("A", "B"):
        x_inverse, x, y = pres.gen("x", -1), pres.gen("x"), pres.gen("y")
        p = ring.fraction(pres.mul(normal, g_inverse, x_inverse, y).scale(-2), 1)
        t = ring.fraction(pres.mul(normal, x_inverse))
        eta = ring.fraction(-pres.mul(x, normal, g_inverse, zeta), 1)
    else:
        u_inverse, u, v = pres.gen("u", -1), pres.gen("u"), pres.gen("v")
        p = ring.fraction(pres.mul(normal, g_inverse, u_inverse, v).scale(2), 1)
        t = ring.fraction(pres.mul(normal, g_inverse, u_inverse), 1)
        eta_numerator = pres.mul(u, normal, zeta)
        eta = ring.fraction(-eta_numerator if case == "C" else eta_numerator)
    return p, ring.fraction(normal), t, eta


def eta_bracket_as_printed(case: str) -> CentralFraction:
    ring = fraction_ring(case)
    _, _, t, eta = _printed_coordinates(case, ring)
    return frac_commutator(eta, t)


@lru_cache(maxsize=None)
def weyl_coordinates(case: str) -> WeylCoordinates:
    """p, q, t and η for one case, with η's sign chosen so that [η, t] = 1."""
    ring = fraction_ring(case)
    p, q, t, eta = _printed_coordinates(case, ring)

    flipped = False
    if frac_commutator(eta, t) == -ring.one():
        logging.info(f"case {case}: the printed eta gives [eta,t] = -1, so its sign is flipped")
        eta, flipped = -eta, True
    return WeylCoordinates(case, p, q, t, eta, ring, flipped)


def check_weyl_brackets(case: str) -> Report:
    coordinates = weyl_coordinates(case)
    ring = coordinates.ring
    report = Report(f"Weyl brackets in case {case}")
    for label, a, b, expected in coordinates.pairs():
        report.add_residual(label, frac_commutator(a, b) - expected * ring.one())

    # The centre k[z_Ω^±1, ω] commutes with all four coordinates
    d = ring.entry.distinguished
    for central_name, central in (("omega", d.omega), (ring.center_name, ring.center)):
        for name in ("p", "q", "t", "eta"):
            report.add_residual(f"[{central_name},{name}]",
                                frac_commutator(ring.fraction(central), getattr(coordinates, name)))
    return report


def express_generators(case: str) -> Report:
    """Writes every generator of the localisation (and its inverse, where it has one) in terms of the Weyl
    coordinates, their inverses and the centre, using generators already written that way."""
    coordinates = weyl_coordinates(case)
    ring = coordinates.ring
    pres, d = ring.pres, ring.entry.distinguished
    p, q, t, eta = coordinates.p, coordinates.q, coordinates.t, coordinates.eta
    normal = q.numerator
    one, half = ring.one(), Fraction(1, 2)
    omega, c, c_inverse = ring.fraction(d.omega), ring.fraction(ring.center), ring.fraction(pres.one(), 1)

    def gen(name: str, exponent: int = 1) -> CentralFraction:
        return ring.fraction(pres.gen(name, exponent))

    # η appears with the sign it was printed with
    printed_eta = -eta if coordinates.eta_sign_flipped else eta
    report = Report(f"generators of D from the case {case} coordinates")

    # c = q²g⁻¹, so q⁻¹ = q·g⁻¹·c⁻¹
    q_inverse = ring.fraction(pres.mul(normal, pres.gen("g", -1)), 1)
    if case in ("A", "B"):
        t_inverse = ring.fraction(pres.mul(pres.gen("x"), normal, pres.gen("g", -1)), 1)
    else:
        t_inverse = ring.fraction(pres.mul(pres.gen("u"), normal))
    report.add_residual("q*q^-1 - 1", q * q_inverse - one)
    report.add_residual("q^-1*q - 1", q_inverse * q - one)
    report.add_residual("t*t^-1 - 1", t * t_inverse - one)
    report.add_residual("t^-1*t - 1", t_inverse * t - one)

    g = q * q * c_inverse
    report.add_residual("g - q^2*c^-1", gen("g") - g)
    report.add_residual("g^-1 - c*q^-2", gen("g", -1) - c * q_inverse * q_inverse)

    # The other normal element, from omega = q*s*g^-1
    if case in ("A", "C"):
        q_value, s_value = q, omega * q_inverse * g
        report.add_residual("s - omega*q^-1*g", ring.fraction(d.s) - s_value)
    else:
        q_value, s_value = omega * g * q_inverse, q
        report.add_residual("q - omega*g*s^-1", ring.fraction(d.q) - q_value)
    # xu = q - 2 - 2g
    xu = q_value - 2 * one - 2 * g

    # s = xv + uy - 1/2*xu*zeta + g*zeta - zeta - 2g - 2, solved below for v or y
    zeta_part = (half * gen("x") * gen("u") * gen("zeta") - gen("g") * gen("zeta") + gen("zeta")
                 + 2 * gen("g") + 2 * one)

    if case in ("A", "B"):
        x_inverse = t * q_inverse
        report.add_residual("x - q*t^-1", gen("x") - q * t_inverse)
        report.add_residual("x^-1 - t*q^-1", gen("x", -1) - x_inverse)
        report.add_residual("y + 1/2*q^2*t^-1*p", gen("y") + half * q * q * t_inverse * p)
        report.add_residual("zeta + t*eta", gen("zeta") + t * printed_eta)
        report.add_residual("u - (q - 2 - 2g)*x^-1", gen("u") - xu * x_inverse)
        report.add_residual("v - x^-1*(s - uy + 1/2*xu*zeta - g*zeta + zeta + 2g + 2)",
                            gen("v") - x_inverse * (s_value - gen("u") * gen("y") + zeta_part))
    else:
        u_inverse = q * t
        report.add_residual("u - t^-1*q^-1", gen("u") - t_inverse * q_inverse)
        report.add_residual("u^-1 - q*t", gen("u", -1) - u_inverse)
        report.add_residual("v - 1/2*t^-1*p", gen("v") - half * t_inverse * p)
        if case == "C":
            report.add_residual("zeta + t*eta", gen("zeta") + t * printed_eta)
        else:
            report.add_residual("zeta - t*eta", gen("zeta") - t * printed_eta)
        report.add_residual("x - (q - 2 - 2g)*u^-1", gen("x") - xu * u_inverse)
        report.add_residual("y - u^-1*(s - xv + 1/2*xu*zeta - g*zeta + zeta + 2g + 2)",
                            gen("y") - u_inverse * (s_value - gen("x") * gen("v") + zeta_part))
    return report


def fraction_equivalence_fuzz(samples: int = 100, case: str = "A",
                              rng: Optional[np.random.Generator] = None) -> Report:
    """Equality of fractions should be reflexive, symmetric and transitive, even across different powers."""
    ring = fraction_ring(case)
    pres = ring.pres
    rng = rng or random_generator()
    basis = [m for m in monomials_up_to(pres, 2) if m[1] >= 0 and m[2] >= 0]
    report = Report(f"fraction equality over {ring.name}")

    failures = 0
    for _ in range(samples):
        a = random_polynomial(pres, rng, basis=basis)
        m = int(rng.integers(0, 2))
        k1, k2 = int(rng.integers(0, 2)), int(rng.integers(0, 2))
        first = ring.fraction(a, m)
        second = ring.fraction(multiply(a, ring.center_power(k1), pres), m + k1)
        third = ring.fraction(multiply(ring.center_power(k2), second.numerator, pres), m + k1 + k2)
        other = ring.fraction(a + pres.one(), m)

        holds = (first == first and first == second and second == first and second == third and first == third
                 and not first == other)
        # Multiplying through by c is invisible
        holds = holds and ring.fraction(multiply(ring.center, a, pres), m + 1) == first
        if not holds:
            failures += 1
            report.add_flag(f"triple with numerator {a!r}", False)
    report.add_flag(f"{samples} triples", failures == 0)
    return report
