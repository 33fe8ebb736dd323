"""Skew-polynomial towers over rational functions in u and x.

The base is sympy's field Q(u, x), restricted to denominators built from ux+2, ux+4, u and x, optionally extended by
h with h² = (ux+2)⁻¹. On top of it sit Ore variables: y·c = c·y + ∂(c) on the base, and a later variable may
twist an earlier one, v·y = σ(y)·v + ∂(y). Coefficients always sit on the left.

The towers built here are the quotient T = D/P₀, the radical extensions S̃ and T̃, and T with h adjoined.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.fields import FracElement, field as fraction_field

from .catalog import build
from .ncpoly import AlgebraMap, Report, apply_map, check_map_is_morphism, monomials_up_to, random_polynomial
from .util import random_generator

BASE_FIELD, U, X = fraction_field("u,x", QQ)
W = U * X + 2

# The only irreducible factors a denominator may have
ATOMS = tuple(atom.numer for atom in (U * X + 2, U * X + 4, U, X))

TOWER_IDS = ("T", "S_tilde", "T_tilde", "T_h")


class ForeignDenominator(ValueError):
    pass


class NotInvertible(ZeroDivisionError):
    pass


def _to_field(value) -> FracElement:
    if isinstance(value, FracElement):
        return value
    if isinstance(value, Fraction):
        return BASE_FIELD(QQ(value.numerator, value.denominator))
    if isinstance(value, int) and not isinstance(value, bool):
        return BASE_FIELD(value)
    raise TypeError(f"can't use {value!r} as a rational function in u and x!")


def _check_denominator(value: FracElement):
    remaining = value.denom
    for atom in ATOMS:
        while not remaining.is_ground:
            quotient, remainder = remaining.div(atom)
            if remainder:
                break
            remaining = quotient
    if not remaining.is_ground:
        raise ForeignDenominator(f"the denominator of {value} has a factor outside ux+2, ux+4, u, x!")


def _field_equal(first: FracElement, second: FracElement) -> bool:
    return first.numer * second.denom == second.numer * first.denom


class CommBase:
    """a + b·h with a, b in Q(u, x) and h² = (ux+2)⁻¹. Without h, b is always 0."""
    __slots__ = ("a", "b", "h_enabled")

    def __init__(self, a=0, b=0, h_enabled: Optional[bool] = None):
        a, b = _to_field(a), _to_field(b)
        if h_enabled is None:
            h_enabled = bool(b)
        if b and not h_enabled:
            raise ValueError("an h component needs an h-enabled base!")
        _check_denominator(a)
        _check_denominator(b)
        self.a, self.b, self.h_enabled = a, b, h_enabled

    @classmethod
    def h(cls) -> "CommBase":
        return cls(0, 1, True)

    @staticmethod
    def lift(value) -> "CommBase":
        if isinstance(value, CommBase):
            return value
        return CommBase(_to_field(value))

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            other = CommBase.lift(other)
        except TypeError:
            return NotImplemented
        return _field_equal(self.a, other.a) and _field_equal(self.b, other.b)

    __hash__ = None

    def __add__(self, other):
        try:
            other = CommBase.lift(other)
        except TypeError:
            return NotImplemented
        return CommBase(self.a + other.a, self.b + other.b, self.h_enabled or other.h_enabled)

    __radd__ = __add__

    def __neg__(self):
        return CommBase(-self.a, -self.b, self.h_enabled)

    def __sub__(self, other):
        try:
            other = CommBase.lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CommBase.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, TowerElement):
            return NotImplemented
        try:
            other = CommBase.lift(other)
        except TypeError:
            return NotImplemented
        a = self.a * other.a + self.b * other.b / W
        b = self.a * other.b + self.b * other.a
        return CommBase(a, b, self.h_enabled or other.h_enabled)

    def __rmul__(self, other):
        return self * other

    def inverse(self) -> "CommBase":
        if self.is_zero():
            raise NotInvertible("zero has no inverse!")
        if not self.b:
            return CommBase(1 / self.a, 0, self.h_enabled)
        norm = self.a**2 - self.b**2 / W
        if not norm:
            raise NotInvertible(f"{self} is a zero divisor!")
        return CommBase(self.a / norm, -self.b / norm, True)

    def __truediv__(self, other):
        return self * CommBase.lift(other).inverse()

    def __pow__(self, exponent: int):
        base = self if exponent >= 0 else self.inverse()
        result = CommBase(1, 0, self.h_enabled)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __str__(self):
        if not self.b:
            return str(self.a.numer) if self.a.denom == 1 else f"({self.a.numer})/({self.a.denom})"
        parts = [] if not self.a else [str(CommBase(self.a))]
        b = CommBase(self.b)
        parts.append(f"({b})*h")
        return " + ".join(parts)

    def __repr__(self):
        return f"CommBase({self})"


HALF = Fraction(1, 2)
BASE_U, BASE_X = CommBase(U), CommBase(X)
BASE_W = CommBase(W)
BASE_H = CommBase.h()


@dataclass(frozen=True)
class DerivationSpec:
    """A derivation of the base, fixed by its values on u and x and extended to h by the chain rule."""
    name: str
    on_u: CommBase
    on_x: CommBase

    def _on_field(self, value: FracElement) -> CommBase:
        return CommBase(value.diff(U)) * self.on_u + CommBase(value.diff(X)) * self.on_x

    def on_h(self) -> CommBase:
        # h = W^(-1/2), so ∂h = -½·W⁻¹·h·∂W
        return CommBase(-HALF) * CommBase(1 / W) * BASE_H * self._on_field(W)

    def apply(self, element) -> CommBase:
        element = CommBase.lift(element)
        result = self._on_field(element.a)
        if element.b:
            result = result + self._on_field(element.b) * BASE_H + CommBase(element.b) * self.on_h()
        return result

    def combine(self, other: "DerivationSpec", coefficient, name: Optional[str] = None) -> "DerivationSpec":
        """self + coefficient·other."""
        coefficient = CommBase.lift(coefficient)
        return DerivationSpec(name or f"{self.name} + c*{other.name}", self.on_u + coefficient * other.on_u,
                              self.on_x + coefficient * other.on_x)

    def __call__(self, element) -> CommBase:
        return self.apply(element)


class TowerElement:
    """Sparse map from exponent vectors of the skew variables to left base coefficients."""
    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[Tuple[int, ...], CommBase]] = None):
        self.nvars = nvars
        clean = {}
        for exponents, coefficient in (terms or {}).items():
            coefficient = CommBase.lift(coefficient)
            if not coefficient.is_zero():
                if len(exponents) != nvars:
                    raise ValueError(f"exponent vector {exponents} does not have {nvars} entries!")
                clean[tuple(exponents)] = coefficient
        self._terms = clean

    @classmethod
    def variable(cls, index: int, nvars: int) -> "TowerElement":
        exponents = [0] * nvars
        exponents[index] = 1
        return cls(nvars, {tuple(exponents): CommBase(1)})

    @classmethod
    def constant(cls, value, nvars: int) -> "TowerElement":
        return cls(nvars, {(0,) * nvars: CommBase.lift(value)})

    @property
    def terms(self) -> Mapping[Tuple[int, ...], CommBase]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponents: Tuple[int, ...]) -> CommBase:
        return self._terms.get(tuple(exponents), CommBase(0))

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            return (self - other).is_zero()
        if isinstance(other, (int, Fraction)):
            return (self - TowerElement.constant(other, self.nvars)).is_zero()
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CommBase)):
            other = TowerElement.constant(other, self.nvars)
        if not isinstance(other, TowerElement):
            return NotImplemented
        terms = dict(self._terms)
        for exponents, coefficient in other._terms.items():
            terms[exponents] = terms[exponents] + coefficient if exponents in terms else coefficient
        return TowerElement(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CommBase)):
            other = TowerElement.constant(other, self.nvars)
        return self + (-other)

    def __rmul__(self, other):
        # Left multiplication by a base element just scales the left coefficients
        try:
            other = CommBase.lift(other)
        except TypeError:
            return NotImplemented
        return TowerElement(self.nvars, {e: other * c for e, c in self._terms.items()})

    def __repr__(self):
        return f"TowerElement({ {e: str(c) for e, c in self._terms.items()} })"


PARTIAL_X = DerivationSpec("d/dx", CommBase(0), CommBase(1))
PARTIAL_U = DerivationSpec("d/du", CommBase(1), CommBase(0))

# ∂₁ and ∂₂ from the presentation of T
DELTA_1 = DerivationSpec("delta1", -HALF * BASE_U * BASE_X - 2, -HALF * BASE_X * BASE_X)
DELTA_2 = DerivationSpec("delta2", -HALF * BASE_U * BASE_U, Fraction(3, 2) * BASE_U * BASE_X + 2)
# ∂̃₂ = h·∂₂
DELTA_2_TILDE = DerivationSpec("delta2~", BASE_H * DELTA_2.on_u, BASE_H * DELTA_2.on_x)


@dataclass(frozen=True)
class SkewVariable:
    """A new variable t with t·c = c·t + delta_base(c) on the base and t·s = σ(s)·t + δ(s) on earlier variables."""
    name: str
    delta_base: DerivationSpec
    sigma_vars: Mapping[str, TowerElement] = field(default_factory=dict)
    delta_vars: Mapping[str, TowerElement] = field(default_factory=dict)


class SkewTower:
    def __init__(self, name: str, variables: Sequence[SkewVariable], h_enabled: bool = False):
        self.name = name
        self.variables = tuple(variables)
        self.h_enabled = h_enabled
        self.index = {variable.name: i for i, variable in enumerate(self.variables)}
        self._monomial_products: Dict[Tuple[int, Tuple[int, ...]], TowerElement] = {}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def var(self, name: str) -> TowerElement:
        try:
            return TowerElement.variable(self.index[name], self.nvars)
        except KeyError:
            raise KeyError(f"{name} is not a skew variable of {self.name}")

    def base(self, value) -> TowerElement:
        value = CommBase.lift(value)
        if value.b and not self.h_enabled:
            raise ValueError(f"{self.name} has no h!")
        return TowerElement.constant(value, self.nvars)

    def one(self) -> TowerElement:
        return self.base(1)

    def zero(self) -> TowerElement:
        return TowerElement(self.nvars)

    def _monomial(self, exponents: Tuple[int, ...]) -> TowerElement:
        return TowerElement(self.nvars, {exponents: CommBase(1)})

    def _var_times_monomial(self, j: int, gamma: Tuple[int, ...]) -> TowerElement:
        """y_j · Y^gamma, memoised."""
        key = (j, gamma)
        cached = self._monomial_products.get(key)
        if cached is not None:
            return cached

        first = next((i for i, e in enumerate(gamma) if e), None)
        if first is None or first >= j:
            raised = list(gamma)
            raised[j] += 1
            result = self._monomial(tuple(raised))
        else:
            # y_j·y_i = σ_j(y_i)·y_j + δ_j(y_i), with i the first variable present
            rest = list(gamma)
            rest[first] -= 1
            rest = tuple(rest)
            variable, earlier = self.variables[j], self.variables[first].name
            sigma = variable.sigma_vars.get(earlier, TowerElement.variable(first, self.nvars))
            delta = variable.delta_vars.get(earlier, self.zero())
            result = self.mul(sigma, self._var_times_monomial(j, rest))
            if not delta.is_zero():
                result = result + self.mul(delta, self._monomial(rest))

        self._monomial_products[key] = result
        return result

    def _var_times(self, j: int, element: TowerElement) -> TowerElement:
        result = self.zero()
        derivation = self.variables[j].delta_base
        for gamma, coefficient in element._terms.items():
            result = result + coefficient * self._var_times_monomial(j, gamma)
            twisted = derivation.apply(coefficient)
            if not twisted.is_zero():
                result = result + TowerElement(self.nvars, {gamma: twisted})
        return result

    def mul(self, *factors: TowerElement) -> TowerElement:
        if not factors:
            return self.one()
        result = factors[-1]
        for left in reversed(factors[:-1]):
            result = self._mul_pair(left, result)
        return result

    def _mul_pair(self, a: TowerElement, b: TowerElement) -> TowerElement:
        result = self.zero()
        for alpha, coefficient in a._terms.items():
            product = b
            for k in reversed(range(self.nvars)):
                for _ in range(alpha[k]):
                    product = self._var_times(k, product)
            result = result + coefficient * product
        return result

    def bracket(self, a: TowerElement, b: TowerElement) -> TowerElement:
        return self.mul(a, b) - self.mul(b, a)

    def sigma(self, name: str, element: TowerElement) -> TowerElement:
        """The twist of variable `name` applied to an element of the lower tower (σ is the identity on the base)."""
        variable = self.variables[self.index[name]]
        result = self.zero()
        for exponents, coefficient in element._terms.items():
            image = self.one()
            for i, exponent in enumerate(exponents):
                letter = variable.sigma_vars.get(self.variables[i].name, TowerElement.variable(i, self.nvars))
                for _ in range(exponent):
                    image = self.mul(image, letter)
            result = result + coefficient * image
        return result

    def delta(self, name: str, element: TowerElement) -> TowerElement:
        """δ(s) = t·s - σ(s)·t for the variable t called `name`."""
        t = self.var(name)
        return self.mul(t, element) - self.mul(self.sigma(name, element), t)

    def __repr__(self):
        return f"SkewTower({self.name}: base{'[h]' if self.h_enabled else ''}{''.join(f'[{n}]' for n in self.names)})"


def _lift_y(nvars: int, coefficient_of_y, constant) -> TowerElement:
    """coefficient·y + constant, with y the first variable."""
    return CommBase.lift(coefficient_of_y) * TowerElement.variable(0, nvars) + TowerElement.constant(constant, nvars)


def _y_variable() -> SkewVariable:
    return SkewVariable("y", DELTA_1)


def _twisted_v(nvars: int = 2) -> SkewVariable:
    return SkewVariable("v", DELTA_2,
                        sigma_vars={"y": _lift_y(nvars, 1, HALF * BASE_X)},
                        delta_vars={"y": _lift_y(nvars, Fraction(3, 2) * BASE_U, -2)})


@lru_cache(maxsize=None)
def build_T() -> SkewTower:
    """T = (Q[u,x,(ux+2)⁻¹])[y; ∂₁][v; σ, ∂₂]."""
    return SkewTower("T", (_y_variable(), _twisted_v()), h_enabled=False)


@lru_cache(maxsize=None)
def build_T_with_h() -> SkewTower:
    """T with h adjoined, still in the twisted v coordinate."""
    return SkewTower("T_h", (_y_variable(), _twisted_v()), h_enabled=True)


@lru_cache(maxsize=None)
def build_radical_tower() -> Tuple[SkewTower, SkewTower]:
    """S̃ = base[h][y; ∂₁] and T̃ = S̃[α; ∂̃₂] with α = hv."""
    s_tilde = SkewTower("S_tilde", (_y_variable(),), h_enabled=True)
    alpha = SkewVariable("alpha", DELTA_2_TILDE,
                         delta_vars={"y": _lift_y(2, BASE_H * Fraction(3, 2) * BASE_U, BASE_H * -2)})
    t_tilde = SkewTower("T_tilde", (_y_variable(), alpha), h_enabled=True)
    return s_tilde, t_tilde


def build_tower(id: str) -> SkewTower:
    if id == "T":
        tower = build_T()
    elif id == "T_h":
        tower = build_T_with_h()
    elif id == "S_tilde":
        tower = build_radical_tower()[0]
    elif id == "T_tilde":
        tower = build_radical_tower()[1]
    else:
        raise ValueError(f"unknown tower '{id}'! Choose one of {', '.join(TOWER_IDS)}.")
    logging.debug(f"using tower {tower.name} with variables {', '.join(tower.names)}")
    return tower


def check_T_relations() -> Report:
    tower = build_T()
    u, x = tower.base(BASE_U), tower.base(BASE_X)
    y, v = tower.var("y"), tower.var("v")
    expected = [
        ("[y,x]", y, x, -HALF * BASE_X * BASE_X),
        ("[v,x]", v, x, Fraction(3, 2) * BASE_U * BASE_X + 2),
        ("[y,u]", y, u, -HALF * BASE_U * BASE_X - 2),
        ("[v,u]", v, u, -HALF * BASE_U * BASE_U),
        ("[v,y]", v, y, Fraction(3, 2) * BASE_U * y + HALF * BASE_X * v - 2),
        ("[u,x]", u, x, 0),
    ]
    report = Report("brackets of T")
    for label, a, b, value in expected:
        if not isinstance(value, TowerElement):
            value = tower.base(value)
        report.add_residual(label, tower.bracket(a, b) - value)
    return report


@lru_cache(maxsize=None)
def quotient_map_pi() -> AlgebraMap:
    """D → T, with g ↦ -½(ux+2) and zeta ↦ (ux+2)⁻¹(ux + xv + uy)."""
    source = build("D").presentation
    tower = build_T()
    w_inverse = BASE_W.inverse()
    images = {
        "g": tower.base(-HALF * BASE_W),
        "x": tower.base(BASE_X),
        "u": tower.base(BASE_U),
        "y": tower.var("y"),
        "v": tower.var("v"),
        "zeta": (w_inverse * BASE_U * BASE_X) * tower.one() + (w_inverse * BASE_X) * tower.var("v")
                + (w_inverse * BASE_U) * tower.var("y"),
    }
    return AlgebraMap("pi", source, tower, images, {"g": tower.base(-2 * w_inverse)})


def check_pi(samples: int = 20, rng: Optional[np.random.Generator] = None) -> Report:
    pi = quotient_map_pi()
    report = check_map_is_morphism(pi)
    report.title = "pi: D -> T"

    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    for name, element in d.named().items():
        report.add_residual(f"pi({name})", apply_map(pi, element))

    # So everything in P₀ = qD + sD dies
    rng = rng or random_generator()
    basis = monomials_up_to(pres, 2)
    for i in range(samples):
        r1 = random_polynomial(pres, rng, basis=basis)
        r2 = random_polynomial(pres, rng, basis=basis)
        sample = pres.mul(d.q, r1) + pres.mul(d.s, r2)
        report.add_residual(f"pi(q*r1 + s*r2) sample {i}", apply_map(pi, sample))
    return report


def inner_automorphism_check() -> Report:
    """The twist σ(y) = y + ½x is conjugation by h⁻¹."""
    report = Report("sigma is conjugation by h^-1")
    report.add_residual("delta1(ux+2) = -x(ux+2)", DELTA_1(BASE_W) + BASE_X * BASE_W)
    report.add_residual("h^-1 delta1(h) = x/2", BASE_H.inverse() * DELTA_1(BASE_H) - HALF * BASE_X)
    report.add_residual("h*h^-1 = 1", BASE_H * BASE_H.inverse() - 1)
    report.add_residual("h^2 = (ux+2)^-1", BASE_H * BASE_H - BASE_W.inverse())

    s_tilde, _ = build_radical_tower()
    y = s_tilde.var("y")
    conjugated = s_tilde.mul(s_tilde.base(BASE_H.inverse()), y, s_tilde.base(BASE_H))
    report.add_residual("h^-1*y*h = y + x/2", conjugated - y - s_tilde.base(HALF * BASE_X))
    return report


def random_base_element(rng: np.random.Generator, h_enabled: bool = False, max_degree: int = 2) -> CommBase:
    """A small random element of the base, with at most one atom in the denominator of each part."""
    def part():
        numerator = BASE_FIELD(0)
        for i in range(max_degree + 1):
            for j in range(max_degree + 1 - i):
                numerator += int(rng.integers(-2, 3)) * U**i * X**j
        atom = [BASE_FIELD(1), W, U * X + 4, U, X][int(rng.integers(0, 5))]
        return numerator / atom

    return CommBase(part(), part() if h_enabled else 0, h_enabled)


def random_tower_element(tower: SkewTower, rng: np.random.Generator, max_degree: int = 2,
                         max_terms: int = 3) -> TowerElement:
    exponents = [e for e in _exponent_vectors(tower.nvars, max_degree)]
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        key = exponents[int(rng.integers(0, len(exponents)))]
        terms[key] = random_base_element(rng, tower.h_enabled, max_degree=1)
    return TowerElement(tower.nvars, terms)


def _exponent_vectors(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    if nvars == 0:
        return [()]
    return [(e,) + rest for e in range(degree + 1) for rest in _exponent_vectors(nvars - 1, degree - e)]


def radical_tower_report(samples: int = 10, rng: Optional[np.random.Generator] = None) -> Report:
    """α = hv acts on S̃ as the plain derivation ∂̃₂ = h·∂₂, in both T̃ and T with h adjoined."""
    rng = rng or random_generator()
    s_tilde, t_tilde = build_radical_tower()
    twisted = build_T_with_h()
    report = Report("radical tower")

    report.add_residual("d2~(x) = h((3/2)ux + 2)", DELTA_2_TILDE(BASE_X) - BASE_H * (Fraction(3, 2) * BASE_U * BASE_X + 2))
    report.add_residual("d2~(u) = -h u^2/2", DELTA_2_TILDE(BASE_U) + HALF * BASE_H * BASE_U * BASE_U)

    alpha, y = t_tilde.var("alpha"), t_tilde.var("y")
    expected_on_y = _lift_y(2, BASE_H * Fraction(3, 2) * BASE_U, BASE_H * -2)
    report.add_residual("[alpha,y] = d2~(y) in T~", t_tilde.bracket(alpha, y) - expected_on_y)

    alpha_twisted = BASE_H * twisted.var("v")
    report.add_residual("[hv,y] = d2~(y) in T_h", twisted.bracket(alpha_twisted, twisted.var("y")) - expected_on_y)

    checks = [("u", BASE_U), ("x", BASE_X), ("h", BASE_H)]
    checks += [(f"random base element {i}", random_base_element(rng, True)) for i in range(samples)]
    for label, element in checks:
        expected = DELTA_2_TILDE(element)
        report.add_residual(f"[alpha,{label}] in T~", t_tilde.bracket(alpha, t_tilde.base(element))
                            - t_tilde.base(expected))
        report.add_residual(f"[hv,{label}] in T_h", twisted.bracket(alpha_twisted, twisted.base(element))
                            - twisted.base(expected))
    return report


def invariant_ideal_computation(samples: int = 20, rng: Optional[np.random.Generator] = None) -> Report:
    """∂̃₂' = ∂̃₂ + μ∂₁ kills u and is β·∂ₓ with β = 2(ux+4)⁻¹(ux+2)²h."""
    rng = rng or random_generator()
    ux4 = BASE_U * BASE_X + 4
    mu = -BASE_H * BASE_U * BASE_U * ux4.inverse()
    adjusted = DELTA_2_TILDE.combine(DELTA_1, mu, name="delta2~'")
    beta = 2 * ux4.inverse() * BASE_W * BASE_W * BASE_H

    report = Report("derivations behind the invariant ideals")
    report.add_residual("d2~'(u) = 0", adjusted(BASE_U))
    report.add_residual("d2~'(x) = beta", adjusted(BASE_X) - beta)
    report.add_residual("(d2~' - beta d/dx)(x^2 u h)",
                        adjusted(BASE_X * BASE_X * BASE_U * BASE_H) - beta * PARTIAL_X(BASE_X * BASE_X * BASE_U * BASE_H))
    for i in range(samples):
        element = random_base_element(rng, True)
        report.add_residual(f"d2~' = beta d/dx on sample {i}", adjusted(element) - beta * PARTIAL_X(element))

    # Values on xu + λ and on polynomials in u
    constant = Fraction(int(rng.integers(-9, 10)))
    shifted = BASE_X * BASE_U + constant
    report.add_residual("d1(xu + c) = -(ux+2)x", DELTA_1(shifted) + BASE_W * BASE_X)
    report.add_residual("d2~(xu + c) = h(ux+2)u", DELTA_2_TILDE(shifted) - BASE_H * BASE_W * BASE_U)
    coefficients = [int(c) for c in rng.integers(-3, 4, size=4)]
    f = sum((c * BASE_U**k for k, c in enumerate(coefficients)), CommBase(0))
    report.add_residual("d1(f(u)) = -(ux+4)f'(u)/2", DELTA_1(f) + HALF * ux4 * PARTIAL_U(f))

    # Operator forms of ∂₁ and ∂̃₂
    for i in range(3):
        element = random_base_element(rng, True)
        report.add_residual(f"d1 = -(xu/2+2)d/du - (x^2/2)d/dx on sample {i}",
                            DELTA_1(element) - (-HALF * BASE_X * BASE_U - 2) * PARTIAL_U(element)
                            + HALF * BASE_X * BASE_X * PARTIAL_X(element))

    # ∂̃₂(x) does not vanish on x = 0, so it is not in x·S̃
    image = DELTA_2_TILDE(BASE_X)
    at_zero = [c for monomial, c in image.b.numer.terms() if monomial[1] == 0]
    report.add_flag("d2~(x) is nonzero at x = 0", bool(at_zero) and not image.a, image)
    return report


def derivation_checks(samples: int = 20, rng: Optional[np.random.Generator] = None) -> Report:
    """Leibniz laws for the base derivations and σ-Leibniz laws for the towers' δ's."""
    rng = rng or random_generator()
    report = Report("derivation laws")

    for derivation in (DELTA_1, DELTA_2, DELTA_2_TILDE, PARTIAL_X):
        report.add_residual(f"{derivation.name} Leibniz on (u, x)",
                            derivation(BASE_U * BASE_X) - derivation(BASE_U) * BASE_X - BASE_U * derivation(BASE_X))
        report.add_residual(f"2h {derivation.name}(h) = {derivation.name}((ux+2)^-1)",
                            2 * BASE_H * derivation(BASE_H) - derivation(BASE_W.inverse()))
        failures = 0
        for _ in range(samples):
            a, b = random_base_element(rng, True), random_base_element(rng, True)
            if not (derivation(a * b) - derivation(a) * b - a * derivation(b)).is_zero():
                failures += 1
        report.add_flag(f"{derivation.name} Leibniz on {samples} random pairs", failures == 0)

    # σ-Leibniz for the v of T and the α of T̃ on the lower tower
    for tower, name in ((build_T(), "v"), (build_radical_tower()[1], "alpha")):
        lower = SkewTower("lower", tower.variables[:1], tower.h_enabled)
        failures = 0
        for _ in range(samples):
            a = _pad(random_tower_element(lower, rng, max_degree=1), tower.nvars)
            b = _pad(random_tower_element(lower, rng, max_degree=1), tower.nvars)
            residual = (tower.delta(name, tower.mul(a, b)) - tower.mul(tower.sigma(name, a), tower.delta(name, b))
                        - tower.mul(tower.delta(name, a), b))
            if not residual.is_zero():
                failures += 1
                report.add_flag(f"sigma-Leibniz for {name} in {tower.name}", False, residual)
        report.add_flag(f"sigma-Leibniz for {name} in {tower.name} on {samples} pairs", failures == 0)

        # δ lands in the lower tower
        delta_y = tower.delta(name, tower.var("y"))
        report.add_flag(f"delta_{name}(y) has no {name}", all(e[1] == 0 for e in delta_y.terms), delta_y)

    # v·(xy) expanded by hand
    tower = build_T()
    x, y, v = tower.base(BASE_X), tower.var("y"), tower.var("v")
    by_hand = (tower.mul(BASE_X * tower.var("v") + tower.base(DELTA_2(BASE_X)), y))
    report.add_residual("v*(x*y) = (x*v + d2(x))*y", tower.mul(v, x, y) - by_hand)
    return report


def _pad(element: TowerElement, nvars: int) -> TowerElement:
    return TowerElement(nvars, {e + (0,) * (nvars - len(e)): c for e, c in element.terms.items()})


def associativity_fuzz(tower: SkewTower, samples: int = 100, rng: Optional[np.random.Generator] = None) -> Report:
    rng = rng or random_generator()
    report = Report(f"associativity in {tower.name}")
    failures = 0
    for _ in range(samples):
        a, b, c = (random_tower_element(tower, rng, max_degree=2, max_terms=2) for _ in range(3))
        residual = tower.mul(tower.mul(a, b), c) - tower.mul(a, tower.mul(b, c))
        if not residual.is_zero():
            failures += 1
            report.add_flag("(ab)c = a(bc)", False, residual)
    report.add_flag(f"{samples} random triples", failures == 0)
    return report
