"""Exact noncommutative polynomials over the rationals, rewritten onto a PBW basis.

An algebra is described by an ordered list of generators, some of which may be invertible, together with one
rewrite rule for every pair of adjacent letters that appear out of order. Normal forms are found by repeatedly
rewriting the leftmost out-of-order pair of a word, until every word left is an ordered monomial.

Words are tuples of letters (position, exponent) with adjacent letters on the same generator always merged, so
g·g⁻¹ cancels on sight and never needs a rule.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import config
from .util import Rational, as_fraction, random_generator

Monomial = Tuple[int, ...]
Letter = Tuple[int, int]
Word = Tuple[Letter, ...]

MAX_GENERATORS = 8
MAX_EXPONENT = 2**15 - 1


class NonTerminating(RuntimeError):
    pass


class NegativeExponentOnNonInvertible(ValueError):
    pass


class UnknownGenerator(KeyError):
    pass


class MissingInverseImage(KeyError):
    pass


class MissingRule(KeyError):
    pass


class ZeroPolynomial(ValueError):
    pass


class ExponentOverflow(OverflowError):
    pass


def _check_monomial(monomial: Monomial):
    for exponent in monomial:
        if abs(exponent) > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {exponent} does not fit in a monomial (the limit is {MAX_EXPONENT})!")


class NCPolynomial:
    """An immutable sparse map from monomials (exponent tuples) to Fractions. Zero coefficients are never stored.

    Polynomials know nothing about the algebra they live in: products and normal forms always go through an
    AlgebraPresentation.
    """
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Rational]] = None):
        clean = {}
        for monomial, coefficient in (terms or {}).items():
            coefficient = as_fraction(coefficient)
            if coefficient != 0:
                monomial = tuple(int(e) for e in monomial)
                _check_monomial(monomial)
                clean[monomial] = coefficient
        self._terms = MappingProxyType(clean)
        self._hash = None

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self._terms.get(tuple(monomial), Fraction(0))

    def constant_term(self) -> Fraction:
        for monomial, coefficient in self._terms.items():
            if not any(monomial):
                return coefficient
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, NCPolynomial):
            return dict(self._terms) == dict(other._terms)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.is_zero()
            return len(self._terms) == 1 and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        terms = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            terms[monomial] = terms.get(monomial, 0) + coefficient
        return NCPolynomial(terms)

    def __neg__(self):
        return NCPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar: Rational) -> "NCPolynomial":
        scalar = as_fraction(scalar)
        return NCPolynomial({m: scalar * c for m, c in self._terms.items()})

    def __mul__(self, other):
        # Only scalars here: products of polynomials need a presentation
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        if self.is_zero():
            return "NCPolynomial(0)"
        return f"NCPolynomial({dict(self._terms)})"


ZERO = NCPolynomial()


@dataclass(frozen=True)
class GeneratorInfo:
    name: str
    position: int
    invertible: bool = False


@dataclass(frozen=True)
class SwapRule:
    """hi·lo = rhs, where hi comes after lo in the generator order."""
    hi: str
    lo: str
    rhs: NCPolynomial


@dataclass(frozen=True)
class InverseSwapRule:
    """mover·inverted⁻¹ = rhs, or inverted⁻¹·mover = rhs when inverted_on_left is set.

    With mover_inverted the mover letter is itself an inverse (e.g. x⁻¹·g⁻¹ in an algebra where both are
    invertible).
    """
    mover: str
    inverted: str
    rhs: NCPolynomial
    inverted_on_left: bool = False
    mover_inverted: bool = False

    def letters(self) -> Tuple[Tuple[str, int], Tuple[str, int]]:
        """The left-hand side as two (generator, ±1) letters."""
        mover = (self.mover, -1 if self.mover_inverted else 1)
        inverted = (self.inverted, -1)
        if self.inverted_on_left:
            return inverted, mover
        return mover, inverted


def _letters_of(monomial: Monomial) -> Word:
    return tuple((position, exponent) for position, exponent in enumerate(monomial) if exponent != 0)


def _join(*parts: Sequence[Letter]) -> Word:
    """Concatenates letter sequences, merging neighbours on the same generator and dropping zero exponents."""
    joined: List[Letter] = []
    for part in parts:
        for position, exponent in part:
            if exponent == 0:
                continue
            if joined and joined[-1][0] == position:
                merged = joined[-1][1] + exponent
                if merged == 0:
                    joined.pop()
                else:
                    joined[-1] = (position, merged)
            else:
                joined.append((position, exponent))
    return tuple(joined)


def _first_inversion(word: Word) -> Optional[int]:
    for i in range(len(word) - 1):
        if word[i][0] > word[i + 1][0]:
            return i
    return None


def _sign(exponent: int) -> int:
    return 1 if exponent > 0 else -1


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    """Ordered generators plus the rewrite rules that define one algebra.

    Construction checks that the rules are well formed (each rule swaps an out-of-order pair, no pair has two
    rules). Whether they are *correct* is what validate_presentation is for.
    """
    name: str
    generators: Tuple[GeneratorInfo, ...]
    swap_rules: Tuple[SwapRule, ...] = ()
    inverse_rules: Tuple[InverseSwapRule, ...] = ()
    level_generators: FrozenSet[str] = frozenset()
    _index: Mapping[str, GeneratorInfo] = field(init=False, repr=False)
    _table: Mapping[Tuple[int, int, int, int], Tuple[Tuple[Word, Fraction], ...]] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.generators) > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators are supported, but {self.name} has "
                             f"{len(self.generators)}!")

        index = {}
        for expected_position, generator in enumerate(self.generators):
            if generator.position != expected_position:
                raise ValueError(f"generator {generator.name} of {self.name} is at position {generator.position}, "
                                 f"but positions must run 0..n-1 in order!")
            if generator.name in index:
                raise ValueError(f"generator name {generator.name} is used twice in {self.name}!")
            index[generator.name] = generator
        object.__setattr__(self, "_index", MappingProxyType(index))

        for name in self.level_generators:
            self.generator(name)

        table = {}

        def add_rule(left: Tuple[str, int], right: Tuple[str, int], rhs: NCPolynomial):
            left_info, right_info = self.generator(left[0]), self.generator(right[0])
            for info, sign in (left_info, left[1]), (right_info, right[1]):
                if sign < 0 and not info.invertible:
                    raise NegativeExponentOnNonInvertible(
                        f"rule {left}*{right} in {self.name} inverts {info.name}, which is not invertible!")
            if left_info.position <= right_info.position:
                raise ValueError(f"rule {left}*{right} in {self.name} rewrites a pair that is already in order!")
            key = (left_info.position, left[1], right_info.position, right[1])
            if key in table:
                raise ValueError(f"letter pair {left}*{right} has more than one rule in {self.name}!")
            table[key] = tuple((_letters_of(m), c) for m, c in rhs.terms.items())

        for rule in self.swap_rules:
            add_rule((rule.hi, 1), (rule.lo, 1), rule.rhs)
        for rule in self.inverse_rules:
            if rule.mover_inverted and not self.generator(rule.mover).invertible:
                raise NegativeExponentOnNonInvertible(f"inverse rule for {rule.mover}⁻¹ in {self.name} needs "
                                                      f"{rule.mover} to be invertible!")
            add_rule(*rule.letters(), rule.rhs)

        object.__setattr__(self, "_table", MappingProxyType(table))

    # Generators
    @property
    def nvars(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def generator(self, name: str) -> GeneratorInfo:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(f"{name} is not a generator of {self.name} (generators: "
                                   f"{', '.join(self.names)})")

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def invertible_generators(self) -> Tuple[GeneratorInfo, ...]:
        return tuple(g for g in self.generators if g.invertible)

    # Element constructors
    def monomial(self, exponents: Mapping[str, int], coefficient: Rational = 1) -> NCPolynomial:
        vector = [0] * self.nvars
        for name, exponent in exponents.items():
            info = self.generator(name)
            if exponent < 0 and not info.invertible:
                raise NegativeExponentOnNonInvertible(f"{name} is not invertible in {self.name}, so {name}^{exponent}"
                                                      f" does not exist!")
            vector[info.position] += exponent
        return NCPolynomial({tuple(vector): coefficient})

    def gen(self, name: str, exponent: int = 1) -> NCPolynomial:
        return self.monomial({name: exponent})

    def scalar(self, value: Rational) -> NCPolynomial:
        return NCPolynomial({(0,) * self.nvars: value})

    def one(self) -> NCPolynomial:
        return self.scalar(1)

    def zero(self) -> NCPolynomial:
        return ZERO

    def mul(self, *factors: NCPolynomial) -> NCPolynomial:
        """Normal form of the product of any number of normal-form factors."""
        result = self.one()
        for factor in factors:
            result = multiply(result, factor, self)
        return result

    def has_rule(self, left: Letter, right: Letter) -> bool:
        return (left[0], _sign(left[1]), right[0], _sign(right[1])) in self._table

    def __repr__(self):
        return f"AlgebraPresentation({self.name}: {' < '.join(self.names)})"


def _rewrite(frontier: Dict[Word, Fraction], pres: AlgebraPresentation, budget: int) -> NCPolynomial:
    """Rewrites a linear combination of words until only ordered words remain."""
    result: Dict[Monomial, Fraction] = {}
    steps = 0
    nvars = pres.nvars

    while frontier:
        word, coefficient = frontier.popitem()
        i = _first_inversion(word)

        # Ordered words are finished monomials
        if i is None:
            monomial = [0] * nvars
            for position, exponent in word:
                monomial[position] = exponent
            monomial = tuple(monomial)
            total = result.get(monomial, 0) + coefficient
            if total == 0:
                result.pop(monomial, None)
            else:
                result[monomial] = total
            continue

        steps += 1
        if steps > budget:
            logging.warning(f"normal form in {pres.name} ran out of its {budget} step budget")
            raise NonTerminating(f"normal form in {pres.name} took more than {budget} rewrite steps! Either the "
                                 f"presentation does not terminate or NCVERIFY_STEP_BUDGET needs raising.")

        (s, k), (t, j) = word[i], word[i + 1]
        key = (s, _sign(k), t, _sign(j))
        try:
            replacements = pres._table[key]
        except KeyError:
            names = pres.names
            raise MissingRule(f"{pres.name} has no rule for {names[s]}^{_sign(k)}*{names[t]}^{_sign(j)}!")

        head = word[:i] + ((s, k - key[1]),)
        tail = ((t, j - key[3]),) + word[i + 2:]
        for letters, rule_coefficient in replacements:
            new_word = _join(head, letters, tail)
            total = frontier.get(new_word, 0) + coefficient * rule_coefficient
            if total == 0:
                frontier.pop(new_word, None)
            else:
                frontier[new_word] = total

    return NCPolynomial(result)


def normal_form(word: Sequence[Tuple[str, int]], pres: AlgebraPresentation, coefficient: Rational = 1,
                budget: Optional[int] = None) -> NCPolynomial:
    """Normal form of coefficient·w₁^e₁·w₂^e₂···, given as a sequence of (generator name, exponent) pairs."""
    letters = []
    for name, exponent in word:
        info = pres.generator(name)
        if exponent < 0 and not info.invertible:
            raise NegativeExponentOnNonInvertible(f"{name} is not invertible in {pres.name}, so {name}^{exponent}"
                                                  f" can't appear in a word!")
        letters.append((info.position, int(exponent)))

    coefficient = as_fraction(coefficient)
    if coefficient == 0:
        return ZERO
    return _rewrite({_join(letters): coefficient}, pres, config.STEP_BUDGET if budget is None else budget)


@lru_cache(maxsize=1 << 17)
def _monomial_product(pres: AlgebraPresentation, left: Monomial, right: Monomial, budget: int) -> NCPolynomial:
    return _rewrite({_join(_letters_of(left), _letters_of(right)): Fraction(1)}, pres, budget)


def multiply(a: NCPolynomial, b: NCPolynomial, pres: AlgebraPresentation) -> NCPolynomial:
    budget = config.STEP_BUDGET
    terms: Dict[Monomial, Fraction] = {}
    for left, left_coefficient in a.terms.items():
        for right, right_coefficient in b.terms.items():
            scale = left_coefficient * right_coefficient
            for monomial, coefficient in _monomial_product(pres, left, right, budget).terms.items():
                terms[monomial] = terms.get(monomial, 0) + scale * coefficient
    return NCPolynomial(terms)


def power(p: NCPolynomial, exponent: int, pres: AlgebraPresentation) -> NCPolynomial:
    if exponent < 0:
        raise ValueError(f"can only raise a general polynomial to a non-negative power, not {exponent}!")
    result = pres.one()
    for _ in range(exponent):
        result = multiply(result, p, pres)
    return result


def commutator(a: NCPolynomial, b: NCPolynomial, pres: AlgebraPresentation) -> NCPolynomial:
    """[a, b] = ab - ba in normal form."""
    return multiply(a, b, pres) - multiply(b, a, pres)


def level_degree(p: NCPolynomial, pres: AlgebraPresentation) -> int:
    """Largest total exponent of the level generators over the terms of p."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no level degree!")
    positions = [pres.generator(name).position for name in pres.level_generators]
    return max(sum(monomial[i] for i in positions) for monomial in p.terms)


def monomial_degree(monomial: Monomial) -> int:
    """Total degree, counting invertible generators by the absolute value of their exponent."""
    return sum(abs(e) for e in monomial)


def total_degree(p: NCPolynomial) -> int:
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no degree!")
    return max(monomial_degree(m) for m in p.terms)


def print_order_key(monomial: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for printing: higher degree first, then by exponents read from the last generator back."""
    return monomial_degree(monomial), tuple(reversed(monomial))


def monomials_up_to(pres: AlgebraPresentation, degree: int) -> List[Monomial]:
    """Every PBW monomial of total degree at most `degree`, in graded order (lowest first)."""
    invertible = [g.invertible for g in pres.generators]

    def extend(position: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if position == pres.nvars:
            yield ()
            return
        low = -remaining if invertible[position] else 0
        for exponent in range(low, remaining + 1):
            for rest in extend(position + 1, remaining - abs(exponent)):
                yield (exponent,) + rest

    return sorted(extend(0, degree), key=lambda m: (monomial_degree(m), m))


def random_polynomial(pres: AlgebraPresentation, rng: np.random.Generator, max_degree: int = 3,
                      max_terms: int = 3, basis: Optional[Sequence[Monomial]] = None) -> NCPolynomial:
    """A random normal-form polynomial with small integer coefficients in -2..2."""
    if basis is None:
        basis = monomials_up_to(pres, max_degree)
    n_terms = int(rng.integers(1, max_terms + 1))
    terms: Dict[Monomial, Fraction] = {}
    for i in rng.choice(len(basis), size=min(n_terms, len(basis)), replace=False):
        terms[basis[int(i)]] = Fraction(int(rng.choice([-2, -1, 1, 2])))
    return NCPolynomial(terms)


# Maps between algebras
@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """Generator images defining an algebra map out of `source`.

    The target only has to provide one(), zero() and mul(a, b), so skew towers work as targets too.
    """
    name: str
    source: AlgebraPresentation
    target: Any
    images: Mapping[str, Any]
    inverse_images: Mapping[str, Any] = field(default_factory=dict)

    def image_of_letter(self, name: str, sign: int):
        if sign > 0:
            try:
                return self.images[name]
            except KeyError:
                raise UnknownGenerator(f"map {self.name} has no image for {name}")
        try:
            return self.inverse_images[name]
        except KeyError:
            raise MissingInverseImage(f"map {self.name} was not given an image for {name}^-1")


def apply_map(m: AlgebraMap, p: NCPolynomial):
    names = m.source.names
    target = m.target
    result = target.zero()
    for monomial, coefficient in p.terms.items():
        image = target.one()
        for position, exponent in enumerate(monomial):
            if exponent == 0:
                continue
            letter = m.image_of_letter(names[position], _sign(exponent))
            for _ in range(abs(exponent)):
                image = target.mul(image, letter)
        result = result + coefficient * image
    return result


def compose_maps(second: AlgebraMap, first: AlgebraMap, name: Optional[str] = None) -> AlgebraMap:
    """second ∘ first, for a first map whose target is the source of the second."""
    return AlgebraMap(name=name or f"{second.name}∘{first.name}", source=first.source, target=second.target,
                      images={g: apply_map(second, p) for g, p in first.images.items()},
                      inverse_images={g: apply_map(second, p) for g, p in first.inverse_images.items()})


def identity_map(pres: AlgebraPresentation) -> AlgebraMap:
    return AlgebraMap(name="id", source=pres, target=pres,
                      images={g.name: pres.gen(g.name) for g in pres.generators},
                      inverse_images={g.name: pres.gen(g.name, -1) for g in pres.invertible_generators()})


# Reports
def is_zero_value(value) -> bool:
    """Zero test that works for polynomials, tower elements, tensors and plain Fractions."""
    if value is None:
        return True
    if hasattr(value, "is_zero"):
        return value.is_zero()
    return value == 0


@dataclass
class ReportEntry:
    label: str
    passed: bool
    residual: Any = None
    note: str = ""


@dataclass
class Report:
    """A list of labelled identity checks. Passes iff every entry passed."""
    title: str
    entries: List[ReportEntry] = field(default_factory=list)

    def add_residual(self, label: str, residual, note: str = "") -> bool:
        """Records an identity that holds iff `residual` is zero."""
        passed = is_zero_value(residual)
        self.entries.append(ReportEntry(label, passed, None if passed else residual, note))
        return passed

    def add_flag(self, label: str, passed: bool, residual=None, note: str = "") -> bool:
        self.entries.append(ReportEntry(label, passed, residual, note))
        return passed

    def extend(self, other: "Report", prefix: str = ""):
        for entry in other.entries:
            self.entries.append(ReportEntry(prefix + entry.label, entry.passed, entry.residual, entry.note))

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    def failures(self) -> List[ReportEntry]:
        return [entry for entry in self.entries if not entry.passed]

    def entry(self, label: str) -> ReportEntry:
        for an_entry in self.entries:
            if an_entry.label == label:
                return an_entry
        raise KeyError(f"report {self.title} has no entry called {label}")

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class Verdict:
    """Yes/no answer with the generator that broke it, when it's a no."""
    holds: bool
    generator: Optional[str] = None
    residual: Optional[NCPolynomial] = None

    def __bool__(self):
        return self.holds


def _letter_label(name: str, sign: int) -> str:
    return name if sign > 0 else f"{name}^-1"


def _all_letters(pres: AlgebraPresentation) -> List[Tuple[str, int]]:
    letters = [(g.name, 1) for g in pres.generators]
    letters += [(g.name, -1) for g in pres.invertible_generators()]
    return letters


def check_map_is_morphism(m: AlgebraMap) -> Report:
    """Pushes every rule of the source through the map and checks it still holds in the target."""
    source, target = m.source, m.target
    report = Report(f"{m.name} is a morphism {source.name} -> {getattr(target, 'name', target)}")

    def letter_image(name, sign):
        return m.image_of_letter(name, sign)

    for rule in source.swap_rules:
        lhs = target.mul(letter_image(rule.hi, 1), letter_image(rule.lo, 1))
        report.add_residual(f"{rule.hi}*{rule.lo}", lhs - apply_map(m, rule.rhs))

    for rule in source.inverse_rules:
        (left, left_sign), (right, right_sign) = rule.letters()
        lhs = target.mul(letter_image(left, left_sign), letter_image(right, right_sign))
        report.add_residual(f"{_letter_label(left, left_sign)}*{_letter_label(right, right_sign)}",
                            lhs - apply_map(m, rule.rhs))

    for info in source.invertible_generators():
        forward, backward = letter_image(info.name, 1), letter_image(info.name, -1)
        report.add_residual(f"{info.name}*{info.name}^-1", target.mul(forward, backward) - target.one())
        report.add_residual(f"{info.name}^-1*{info.name}", target.mul(backward, forward) - target.one())

    return report


def is_central(c: NCPolynomial, pres: AlgebraPresentation) -> Verdict:
    for name, sign in _all_letters(pres):
        bracket = commutator(c, pres.gen(name, sign), pres)
        if not bracket.is_zero():
            return Verdict(False, _letter_label(name, sign), bracket)
    return Verdict(True)


def is_sigma_normal(n: NCPolynomial, m: AlgebraMap, pres: AlgebraPresentation) -> Verdict:
    """Does n·a = m(a)·n hold for every generator a (and every inverse)?"""
    for name, sign in _all_letters(pres):
        residual = multiply(n, pres.gen(name, sign), pres) - multiply(m.image_of_letter(name, sign), n, pres)
        if not residual.is_zero():
            return Verdict(False, _letter_label(name, sign), residual)
    return Verdict(True)


def _guarded(report: Report, label: str, computation: Callable[[], Any]):
    """Runs one validation step, turning rewriting failures into failed entries."""
    try:
        return computation()
    except (NonTerminating, MissingRule) as error:
        report.add_flag(label, False, note=str(error))
        return None


def validate_presentation(pres: AlgebraPresentation) -> Report:
    """Termination certificates, inverse round trips, Laurent identities and rule completeness."""
    report = Report(f"presentation of {pres.name}")
    level = set(pres.level_generators)

    # Every swap rule has to be lo·hi plus strictly lower level terms
    for rule in pres.swap_rules:
        label = f"certificate {rule.hi}*{rule.lo}"
        ordered = pres.monomial({rule.lo: 1, rule.hi: 1})
        leading = next(iter(ordered.terms))
        if rule.rhs.coefficient(leading) != 1:
            report.add_flag(label, False, rule.rhs, note=f"rhs does not start with {rule.lo}*{rule.hi}")
            continue
        remainder = rule.rhs - ordered
        if remainder.is_zero():
            report.add_flag(label, True)
            continue
        bound = (rule.hi in level) + (rule.lo in level)
        remainder_level = level_degree(remainder, pres)
        report.add_flag(label, remainder_level < bound, None if remainder_level < bound else remainder,
                        note=f"remainder level {remainder_level}, pair level {bound}")

    # Inverse rules must undo themselves
    for rule in pres.inverse_rules:
        (left, left_sign), (right, right_sign) = rule.letters()
        label = f"round trip {_letter_label(left, left_sign)}*{_letter_label(right, right_sign)}"
        mover = pres.gen(rule.mover, -1 if rule.mover_inverted else 1)
        inverted = pres.gen(rule.inverted)
        if rule.inverted_on_left:
            back = _guarded(report, label, lambda: multiply(inverted, rule.rhs, pres))
        else:
            back = _guarded(report, label, lambda: multiply(rule.rhs, inverted, pres))
        if back is not None:
            report.add_residual(label, back - mover)

    for info in pres.invertible_generators():
        for order in ((info.name, 1), (info.name, -1)), ((info.name, -1), (info.name, 1)):
            label = f"laurent {_letter_label(*order[0])}*{_letter_label(*order[1])}"
            product = _guarded(report, label, lambda: normal_form(order, pres))
            if product is not None:
                report.add_residual(label, product - pres.one())

    # Every out-of-order pair of letters needs a rule
    letters = _all_letters(pres)
    for left, left_sign in letters:
        for right, right_sign in letters:
            left_position, right_position = pres.generator(left).position, pres.generator(right).position
            if left_position > right_position:
                if not pres.has_rule((left_position, left_sign), (right_position, right_sign)):
                    report.add_flag(f"rule {_letter_label(left, left_sign)}*{_letter_label(right, right_sign)}",
                                    False, note="no rule for this out-of-order pair")

    logging.debug(f"validated {pres.name}: {len(report.entries)} entries, passed={report.passed}")
    return report


# Property sampling
def associativity_fuzz(pres: AlgebraPresentation, samples: int = 200, max_degree: int = 3,
                       rng: Optional[np.random.Generator] = None) -> Report:
    """(ab)c = a(bc) on random normal-form triples."""
    rng = rng or random_generator()
    basis = monomials_up_to(pres, max_degree)
    report = Report(f"associativity in {pres.name}")
    failures = 0
    for _ in range(samples):
        a, b, c = (random_polynomial(pres, rng, basis=basis) for _ in range(3))
        residual = multiply(multiply(a, b, pres), c, pres) - multiply(a, multiply(b, c, pres), pres)
        if not residual.is_zero():
            failures += 1
            report.add_flag("(ab)c = a(bc)", False, residual)
    report.add_flag(f"{samples} random triples", failures == 0)
    return report


def inverse_cancellation_fuzz(pres: AlgebraPresentation, samples: int = 50, max_degree: int = 2,
                              rng: Optional[np.random.Generator] = None) -> Report:
    """t⁻¹t and tt⁻¹ cancel next to random elements, on either side, for every invertible generator t."""
    rng = rng or random_generator()
    basis = monomials_up_to(pres, max_degree)
    report = Report(f"inverse letters cancel in {pres.name}")
    failures = 0
    for info in pres.invertible_generators():
        t, t_inverse = pres.gen(info.name), pres.gen(info.name, -1)
        pairs = ((f"{info.name}^-1*{info.name}", t_inverse, t), (f"{info.name}*{info.name}^-1", t, t_inverse))
        for _ in range(samples):
            a = random_polynomial(pres, rng, basis=basis)
            for label, first, second in pairs:
                right = multiply(multiply(a, first, pres), second, pres) - a
                left = multiply(first, multiply(second, a, pres), pres) - a
                for side, residual in (("a*" + label, right), (label + "*a", left)):
                    if not residual.is_zero():
                        failures += 1
                        report.add_flag(f"{side} = a", False, residual)
    report.add_flag(f"{samples} random elements per invertible generator", failures == 0)
    return report


def filtration_fuzz(pres: AlgebraPresentation, samples: int = 100, max_degree: int = 2,
                    rng: Optional[np.random.Generator] = None) -> Report:
    """Level degree is a filtration, and brackets drop it by one (the associated graded ring is commutative)."""
    rng = rng or random_generator()
    basis = monomials_up_to(pres, max_degree)
    report = Report(f"level filtration of {pres.name}")
    failures = 0
    for _ in range(samples):
        a, b = random_polynomial(pres, rng, basis=basis), random_polynomial(pres, rng, basis=basis)
        bound = level_degree(a, pres) + level_degree(b, pres)
        product, bracket = multiply(a, b, pres), commutator(a, b, pres)
        if not product.is_zero() and level_degree(product, pres) > bound:
            failures += 1
            report.add_flag("F_i F_j in F_(i+j)", False, product)
        if not bracket.is_zero() and level_degree(bracket, pres) > bound - 1:
            failures += 1
            report.add_flag("[F_i, F_j] in F_(i+j-1)", False, bracket)
    report.add_flag(f"{samples} random pairs", failures == 0)
    return report
