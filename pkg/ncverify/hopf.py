"""Coproduct and counit of D, checked against its relations."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .catalog import build
from .ncpoly import (AlgebraMap, AlgebraPresentation, Monomial, NCPolynomial, Report, _monomial_product,
                     apply_map, check_map_is_morphism, monomials_up_to, multiply, random_polynomial)
from . import config
from .util import Rational, as_fraction, random_generator

CONVENTIONS = ("A", "B")

# In words, for the report header
CONVENTION_DESCRIPTIONS = {
    "A": "Delta(x) = x⊗g + 1⊗x, Delta(y) = y⊗g + 1⊗y",
    "B": "Delta(x) = x⊗1 + g⊗x, Delta(y) = y⊗1 + g⊗y",
}

TensorKey = Tuple[Monomial, ...]


class TensorPolynomial:
    """A sparse combination of pure tensors m₁⊗…⊗m_rank of normal-form monomials."""
    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Optional[Mapping[TensorKey, Rational]] = None):
        if rank not in (2, 3):
            raise ValueError(f"only tensors of rank 2 and 3 are supported, not {rank}!")
        self.rank = rank
        clean = {}
        for key, coefficient in (terms or {}).items():
            coefficient = as_fraction(coefficient)
            if coefficient != 0:
                if len(key) != rank:
                    raise ValueError(f"tensor key {key} does not have {rank} slots!")
                clean[tuple(key)] = coefficient
        self._terms = clean

    @classmethod
    def pure(cls, *slots: NCPolynomial) -> "TensorPolynomial":
        """a₁⊗a₂(⊗a₃), expanded bilinearly."""
        terms: Dict[TensorKey, Fraction] = {(): Fraction(1)}
        for slot in slots:
            terms = {key + (m,): c * d for key, c in terms.items() for m, d in slot.terms.items()}
        return cls(len(slots), terms)

    @property
    def terms(self) -> Mapping[TensorKey, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError(f"can't add tensors of rank {self.rank} and {other.rank}!")
        terms = dict(self._terms)
        for key, coefficient in other._terms.items():
            terms[key] = terms.get(key, 0) + coefficient
        return TensorPolynomial(self.rank, terms)

    def __neg__(self):
        return TensorPolynomial(self.rank, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TensorPolynomial(self.rank, {k: other * c for k, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"TensorPolynomial(rank={self.rank}, {self._terms})"


@dataclass(frozen=True, eq=False)
class TensorAlgebra:
    """A^⊗rank with slotwise multiplication, each slot normalised in A."""
    pres: AlgebraPresentation
    rank: int

    @property
    def name(self) -> str:
        return "⊗".join([self.pres.name] * self.rank)

    def one(self) -> TensorPolynomial:
        identity = (0,) * self.pres.nvars
        return TensorPolynomial(self.rank, {(identity,) * self.rank: 1})

    def zero(self) -> TensorPolynomial:
        return TensorPolynomial(self.rank)

    def mul(self, a: TensorPolynomial, b: TensorPolynomial) -> TensorPolynomial:
        return tensor_mul(a, b, self.pres)


def tensor_mul(a: TensorPolynomial, b: TensorPolynomial, pres: AlgebraPresentation) -> TensorPolynomial:
    if a.rank != b.rank:
        raise ValueError(f"can't multiply tensors of rank {a.rank} and {b.rank}!")
    budget = config.STEP_BUDGET
    terms: Dict[TensorKey, Fraction] = {}
    for left, left_coefficient in a._terms.items():
        for right, right_coefficient in b._terms.items():
            partial: Dict[TensorKey, Fraction] = {(): left_coefficient * right_coefficient}
            for m, n in zip(left, right):
                product = _monomial_product(pres, m, n, budget).terms
                partial = {key + (k,): c * d for key, c in partial.items() for k, d in product.items()}
            for key, c in partial.items():
                terms[key] = terms.get(key, 0) + c
    return TensorPolynomial(a.rank, terms)


@dataclass(frozen=True, eq=False)
class CoproductSpec:
    """Coalgebra data on the generators of D. x and y follow the named convention, the rest are fixed."""
    convention: str
    pres: AlgebraPresentation = field(default_factory=lambda: build("D").presentation)

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown coproduct convention '{self.convention}'! Choose A or B.")

    def generator_images(self) -> Tuple[Dict[str, TensorPolynomial], Dict[str, TensorPolynomial]]:
        p = self.pres
        one, g, g_inverse = p.one(), p.gen("g"), p.gen("g", -1)
        pure = TensorPolynomial.pure

        def primitive(a: NCPolynomial) -> TensorPolynomial:
            return pure(a, one) + pure(one, a)

        def skew_primitive(a: NCPolynomial) -> TensorPolynomial:
            if self.convention == "A":
                return pure(a, g) + pure(one, a)
            return pure(a, one) + pure(g, a)

        images = {
            "g": pure(g, g),
            "x": skew_primitive(p.gen("x")),
            "u": primitive(p.gen("u")),
            "y": skew_primitive(p.gen("y")),
            "zeta": primitive(p.gen("zeta")),
            "v": primitive(p.gen("v")) + pure(p.gen("zeta"), p.gen("u")),
        }
        return images, {"g": pure(g_inverse, g_inverse)}

    def as_map(self) -> AlgebraMap:
        images, inverse_images = self.generator_images()
        return AlgebraMap(f"Delta[{self.convention}]", self.pres, TensorAlgebra(self.pres, 2), images, inverse_images)

    def counit_of_generator(self, name: str) -> Fraction:
        return Fraction(1) if name == "g" else Fraction(0)


@lru_cache(maxsize=None)
def coproduct_spec(convention: str) -> CoproductSpec:
    return CoproductSpec(convention)


def delta(p: NCPolynomial, spec: CoproductSpec) -> TensorPolynomial:
    """Δ extended multiplicatively along each PBW word."""
    return apply_map(spec.as_map(), p)


def counit(p: NCPolynomial, spec: CoproductSpec) -> Fraction:
    names = spec.pres.names
    total = Fraction(0)
    for monomial, coefficient in p.terms.items():
        value = coefficient
        for position, exponent in enumerate(monomial):
            if exponent != 0:
                # ε(g) = 1, so ε(g⁻¹) = 1 too
                value *= spec.counit_of_generator(names[position]) ** abs(exponent)
        total += value
    return total


def _counit_slot(t: TensorPolynomial, slot: int, spec: CoproductSpec) -> NCPolynomial:
    """(ε⊗id) for slot 0 or (id⊗ε) for slot 1, on a rank-2 tensor."""
    result: Dict[Monomial, Fraction] = {}
    for key, coefficient in t.terms.items():
        weight = counit(NCPolynomial({key[slot]: 1}), spec)
        kept = key[1 - slot]
        result[kept] = result.get(kept, 0) + coefficient * weight
    return NCPolynomial(result)


def _coproduct_on_slot(t: TensorPolynomial, slot: int, spec: CoproductSpec) -> TensorPolynomial:
    """(Δ⊗id) for slot 0 or (id⊗Δ) for slot 1, on a rank-2 tensor."""
    terms: Dict[TensorKey, Fraction] = {}
    for key, coefficient in t.terms.items():
        split = delta(NCPolynomial({key[slot]: 1}), spec)
        for (a, b), c in split.terms.items():
            new_key = (a, b, key[1]) if slot == 0 else (key[0], a, b)
            terms[new_key] = terms.get(new_key, 0) + coefficient * c
    return TensorPolynomial(3, terms)


def _letters(pres: AlgebraPresentation) -> List[Tuple[str, NCPolynomial]]:
    letters = [(g.name, pres.gen(g.name)) for g in pres.generators]
    letters += [(f"{g.name}^-1", pres.gen(g.name, -1)) for g in pres.invertible_generators()]
    return letters


def check_coproduct_on_relations(spec: CoproductSpec) -> Report:
    report = check_map_is_morphism(spec.as_map())
    report.title = f"Delta under convention {spec.convention} respects the relations of D"
    return report


def counit_and_coassoc_axioms(spec: CoproductSpec) -> Report:
    report = Report(f"counit and coassociativity under convention {spec.convention}")
    for label, a in _letters(spec.pres):
        split = delta(a, spec)
        report.add_residual(f"(eps⊗id)Delta({label})", _counit_slot(split, 0, spec) - a)
        report.add_residual(f"(id⊗eps)Delta({label})", _counit_slot(split, 1, spec) - a)
        report.add_residual(f"coassociativity on {label}",
                            _coproduct_on_slot(split, 0, spec) - _coproduct_on_slot(split, 1, spec))
    return report


def coordinate_ring_closure(spec: CoproductSpec) -> Report:
    """Δ(x), Δ(u) and Δ(g^±1) only involve g, x and u in both slots."""
    pres = spec.pres
    outside = [pres.generator(name).position for name in ("y", "zeta", "v")]
    report = Report("O(G) is closed under Delta")
    for label in ("g", "g^-1", "x", "u"):
        a = pres.gen("g", -1) if label == "g^-1" else pres.gen(label)
        split = delta(a, spec)
        closed = all(m[i] == 0 for key in split.terms for m in key for i in outside)
        report.add_flag(f"Delta({label}) in O(G)⊗O(G)", closed, None if closed else split)
    return report


@dataclass
class ConventionElection:
    winner: Optional[str]
    reports: Dict[str, Report]

    @property
    def unique(self) -> bool:
        return sum(r.passed for r in self.reports.values()) == 1


@lru_cache(maxsize=None)
def elect_convention() -> ConventionElection:
    """Tries both conventions for Δ(x), Δ(y) against the relations and keeps the one that works."""
    reports = {name: check_coproduct_on_relations(coproduct_spec(name)) for name in CONVENTIONS}
    passing = [name for name, report in reports.items() if report.passed]
    winner = passing[0] if len(passing) == 1 else None
    for name, report in reports.items():
        failing = ", ".join(e.label for e in report.failures()) or "none"
        logging.info(f"coproduct convention {name}: passed={report.passed} (failing relations: {failing})")
    return ConventionElection(winner, reports)


def elected_spec() -> CoproductSpec:
    election = elect_convention()
    if election.winner is None:
        raise RuntimeError(f"{sum(r.passed for r in election.reports.values())} coproduct conventions passed the "
                           f"relation check, but exactly one should!")
    return coproduct_spec(election.winner)


def central_coproduct_residuals(spec: CoproductSpec) -> Dict[str, TensorPolynomial]:
    """Δ(c) - c⊗c for c = z, ω, θ. Nothing is claimed about these."""
    d = build("D").distinguished
    return {name: delta(c, spec) - TensorPolynomial.pure(c, c)
            for name, c in (("z", d.z), ("omega", d.omega), ("theta", d.theta))}


def counit_values(spec: CoproductSpec) -> Report:
    """ε(q) = 4, ε(s) = -4, so z, ω, θ take the values 16, -16, 16 at m₊."""
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    expected = {"q": 4, "s": -4, "z": 16, "omega": -16, "theta": 16}
    report = Report("counit at the maximal ideal m+")
    for name, value in expected.items():
        report.add_residual(f"eps({name}) = {value}", counit(d.named()[name], spec) - value)
    for generator in d.mplus_gens:
        report.add_residual("generator of m+ has eps = 0", counit(generator, spec))

    # q² is 16g modulo m₊D
    g = pres.gen("g")
    report.add_residual("q^2 - 16g = (z - 16)*g",
                        pres.mul(d.q, d.q) - g.scale(16) - pres.mul(d.z - pres.scalar(16), g))
    return report


def counit_multiplicativity_fuzz(spec: CoproductSpec, samples: int = 100,
                                 rng: Optional[np.random.Generator] = None) -> Report:
    pres = build("D").presentation
    rng = rng or random_generator()
    basis = monomials_up_to(pres, 2)
    report = Report("eps is multiplicative")
    failures = 0
    for _ in range(samples):
        a = random_polynomial(pres, rng, basis=basis)
        b = random_polynomial(pres, rng, basis=basis)
        residual = counit(multiply(a, b, pres), spec) - counit(a, spec) * counit(b, spec)
        if residual != 0:
            failures += 1
            report.add_flag(f"eps({a!r} * {b!r})", False, residual)
    report.add_flag(f"{samples} random pairs", failures == 0)
    return report
