"""Expression grammar, elaboration into catalog algebras or skew towers, and canonical printing."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Mapping, Optional, Tuple, Union

from pyparsing import Forward, Optional as Maybe, ParseException, Regex, Suppress, ZeroOrMore, one_of

from .catalog import CATALOG_IDS, CatalogEntry, build
from .central import CentralFraction
from .hopf import TensorPolynomial
from .membership import NoWitnessAtBound, Witness
from .ncpoly import (AlgebraPresentation, GeneratorInfo, InverseSwapRule, NCPolynomial, NegativeExponentOnNonInvertible,
                     SwapRule, UnknownGenerator, commutator, multiply, power, print_order_key)
from .tower import TOWER_IDS, BASE_U, BASE_X, CommBase, SkewTower, TowerElement, build_tower
from .util import format_fraction

ALIASES = {"ζ": "zeta", "ω": "omega", "θ": "theta", "α": "alpha"}


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class NegativePowerNotInvertible(NegativeExponentOnNonInvertible):
    pass


# AST
@dataclass(frozen=True)
class RationalLiteral:
    numerator: int
    denominator: int
    position: int


@dataclass(frozen=True)
class Identifier:
    name: str
    position: int


@dataclass(frozen=True)
class Power:
    base: Any
    exponent: int
    position: int


@dataclass(frozen=True)
class Product:
    factors: Tuple[Any, ...]


@dataclass(frozen=True)
class Sum:
    """Signed terms; a leading minus is a sign of -1 on the first term."""
    terms: Tuple[Tuple[int, Any], ...]


@dataclass(frozen=True)
class Bracket:
    left: Any
    right: Any


Node = Union[RationalLiteral, Identifier, Power, Product, Sum, Bracket]


def _rational(s, loc, tokens):
    numerator, _, denominator = tokens[0].partition("/")
    return RationalLiteral(int(numerator), int(denominator or 1), loc)


def _power(s, loc, tokens):
    if len(tokens) == 1:
        return tokens[0]
    return Power(tokens[0], int(tokens[1]), loc)


def _product(tokens):
    if len(tokens) == 1:
        return tokens[0]
    return Product(tuple(tokens))


def _sum(tokens):
    tokens = list(tokens)
    sign = 1
    if tokens[0] in ("+", "-"):
        sign = -1 if tokens.pop(0) == "-" else 1
    terms = [(sign, tokens[0])]
    for i in range(1, len(tokens), 2):
        terms.append((-1 if tokens[i] == "-" else 1, tokens[i + 1]))
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return Sum(tuple(terms))


def make_grammar():
    expr = Forward()

    rational = Regex(r"\d+(/\d+)?").set_parse_action(_rational)
    ident = Regex(r"[A-Za-z_ζωθα][A-Za-z0-9_]*").set_parse_action(lambda s, loc, t: Identifier(t[0], loc))
    exponent = Regex(r"[+-]?\d+")
    bracket = (Suppress("[") + expr + Suppress(",") + expr + Suppress("]")).set_parse_action(
        lambda t: Bracket(t[0], t[1]))
    atom = rational | ident | (Suppress("(") + expr + Suppress(")")) | bracket

    ident_factor = (ident + Maybe(Suppress("^") + exponent)).set_parse_action(_power)
    # Juxtaposition only between a literal and an identifier: "2x", "1/2 x^2"
    scaled = (rational + ident_factor).set_parse_action(lambda t: Product((t[0], t[1])))
    factor = scaled | (atom + Maybe(Suppress("^") + exponent)).set_parse_action(_power)

    term = (factor + ZeroOrMore(Suppress("*") + factor)).set_parse_action(_product)
    sign = one_of("+ -")
    expr <<= (Maybe(sign) + term + ZeroOrMore(sign + term)).set_parse_action(_sum)
    return expr


GRAMMAR = make_grammar()


def parse_expression(text: str) -> Node:
    """Parses text into an AST without interpreting any identifiers."""
    try:
        return GRAMMAR.parse_string(text, parse_all=True)[0]
    except ParseException as error:
        raise ExpressionSyntaxError(f"could not parse '{text}' at position {error.loc}: {error.msg}!", error.loc)


# Elaboration
class PresentationContext:
    """Reads identifiers as generators or named elements of a catalog algebra."""

    def __init__(self, pres: AlgebraPresentation, named: Optional[Mapping[str, NCPolynomial]] = None):
        self.pres = pres
        self.named = dict(named or {})

    def scalar(self, value: Fraction) -> NCPolynomial:
        return self.pres.scalar(value)

    def identifier(self, name: str) -> NCPolynomial:
        if self.pres.has_generator(name):
            return self.pres.gen(name)
        if name in self.named:
            return self.named[name]
        raise UnknownGenerator(f"{name} is not a generator or named element of {self.pres.name} (generators: "
                               f"{', '.join(self.pres.names)})")

    def power(self, node: Node, exponent: int, value: NCPolynomial) -> NCPolynomial:
        if isinstance(node, Identifier) and self.pres.has_generator(_canonical(node.name)):
            name = _canonical(node.name)
            if exponent < 0 and not self.pres.generator(name).invertible:
                raise NegativePowerNotInvertible(f"{name} is not invertible in {self.pres.name}, so {name}^{exponent}"
                                                 f" does not exist!")
            return self.pres.gen(name, exponent)
        if exponent < 0:
            constant = value.constant_term()
            if value == constant and constant != 0:
                return self.pres.scalar(constant ** exponent)
            raise NegativePowerNotInvertible(f"only invertible generators and nonzero rationals can take negative "
                                             f"powers in {self.pres.name}!")
        return power(value, exponent, self.pres)

    def mul(self, a: NCPolynomial, b: NCPolynomial) -> NCPolynomial:
        return multiply(a, b, self.pres)

    def bracket(self, a: NCPolynomial, b: NCPolynomial) -> NCPolynomial:
        return commutator(a, b, self.pres)


class TowerContext:
    """Reads u, x, h as base elements and the remaining identifiers as skew variables."""

    def __init__(self, tower: SkewTower):
        self.tower = tower

    def scalar(self, value: Fraction) -> TowerElement:
        return self.tower.base(value)

    def identifier(self, name: str) -> TowerElement:
        if name == "u":
            return self.tower.base(BASE_U)
        if name == "x":
            return self.tower.base(BASE_X)
        if name == "h":
            if not self.tower.h_enabled:
                raise UnknownGenerator(f"{self.tower.name} has no h")
            return self.tower.base(CommBase.h())
        if name in self.tower.index:
            return self.tower.var(name)
        raise UnknownGenerator(f"{name} is not a variable of {self.tower.name} (variables: u, x"
                               f"{', h' if self.tower.h_enabled else ''}, {', '.join(self.tower.names)})")

    def power(self, node: Node, exponent: int, value: TowerElement) -> TowerElement:
        constant = _base_part(value)
        if constant is not None:
            # Base elements invert inside the base (ForeignDenominator if that leaves the allowed atoms)
            return self.tower.base(constant ** exponent)
        if exponent < 0:
            raise NegativePowerNotInvertible(f"skew variables of {self.tower.name} are not invertible!")
        result = self.tower.one()
        for _ in range(exponent):
            result = self.tower.mul(result, value)
        return result

    def mul(self, a: TowerElement, b: TowerElement) -> TowerElement:
        return self.tower.mul(a, b)

    def bracket(self, a: TowerElement, b: TowerElement) -> TowerElement:
        return self.tower.bracket(a, b)


def _base_part(value: TowerElement) -> Optional[CommBase]:
    """The coefficient of a tower element with no skew variables, or None."""
    if value.is_zero():
        return CommBase(0)
    terms = value.terms
    if set(terms) == {(0,) * value.nvars}:
        return terms[(0,) * value.nvars]
    return None


def _canonical(name: str) -> str:
    return ALIASES.get(name, name)


def elaborate(node: Node, context):
    if isinstance(node, RationalLiteral):
        if node.denominator == 0:
            raise ExpressionSyntaxError(f"division by zero in the literal at position {node.position}!",
                                        node.position)
        return context.scalar(Fraction(node.numerator, node.denominator))
    if isinstance(node, Identifier):
        return context.identifier(_canonical(node.name))
    if isinstance(node, Power):
        return context.power(node.base, node.exponent, elaborate(node.base, context))
    if isinstance(node, Product):
        result = elaborate(node.factors[0], context)
        for factor in node.factors[1:]:
            result = context.mul(result, elaborate(factor, context))
        return result
    if isinstance(node, Sum):
        result = None
        for sign, term in node.terms:
            value = elaborate(term, context)
            value = value if sign > 0 else -value
            result = value if result is None else result + value
        return result
    if isinstance(node, Bracket):
        return context.bracket(elaborate(node.left, context), elaborate(node.right, context))
    raise TypeError(f"unknown expression node {node!r}")


AlgebraLike = Union[str, CatalogEntry, AlgebraPresentation, SkewTower]


def resolve_algebra(algebra: AlgebraLike):
    """Catalog entries and towers by id; presentations and towers pass through."""
    if isinstance(algebra, str):
        if algebra in CATALOG_IDS:
            return build(algebra)
        if algebra in TOWER_IDS:
            return build_tower(algebra)
        raise ValueError(f"unknown algebra '{algebra}'! Choose one of {', '.join(CATALOG_IDS + TOWER_IDS)}.")
    return algebra


def context_for(algebra: AlgebraLike):
    algebra = resolve_algebra(algebra)
    if isinstance(algebra, CatalogEntry):
        return PresentationContext(algebra.presentation, algebra.named_elements())
    if isinstance(algebra, AlgebraPresentation):
        return PresentationContext(algebra)
    if isinstance(algebra, SkewTower):
        return TowerContext(algebra)
    raise TypeError(f"can't parse into {algebra!r}")


def parse(text: str, algebra: AlgebraLike) -> Union[NCPolynomial, TowerElement]:
    """Parses and normalises text in the given algebra."""
    return elaborate(parse_expression(text), context_for(algebra))


# Printing
def _monomial_string(monomial, names) -> str:
    letters = []
    for name, exponent in zip(names, monomial):
        if exponent == 1:
            letters.append(name)
        elif exponent != 0:
            letters.append(f"{name}^{exponent}")
    return "*".join(letters)


def _join_terms(terms: List[Tuple[Fraction, str]]) -> str:
    """Joins (coefficient, monomial string) pairs, with an empty string for the constant monomial."""
    if not terms:
        return "0"
    pieces = []
    for i, (coefficient, monomial) in enumerate(terms):
        magnitude = abs(coefficient)
        if not monomial:
            body = format_fraction(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_fraction(magnitude)}*{monomial}"
        if i == 0:
            pieces.append(f"-{body}" if coefficient < 0 else body)
        else:
            pieces.append(f" - {body}" if coefficient < 0 else f" + {body}")
    return "".join(pieces)


def format_polynomial(p: NCPolynomial, pres: AlgebraPresentation) -> str:
    """Canonical text of a normal-form polynomial: highest degree first, parseable by parse()."""
    ordered = sorted(p.terms.items(), key=lambda item: print_order_key(item[0]), reverse=True)
    return _join_terms([(c, _monomial_string(m, pres.names)) for m, c in ordered])


def format_tower_element(element: TowerElement, names) -> str:
    ordered = sorted(element.terms.items(), key=lambda item: (sum(item[0]), tuple(reversed(item[0]))), reverse=True)
    pieces = []
    for exponents, coefficient in ordered:
        monomial = _monomial_string(exponents, names)
        if not monomial:
            pieces.append(f"({coefficient})")
        elif coefficient == 1:
            pieces.append(monomial)
        else:
            pieces.append(f"({coefficient})*{monomial}")
    return " + ".join(pieces) if pieces else "0"


def format_value(value, algebra: Optional[AlgebraLike] = None) -> str:
    """Best-effort text for a residual or witness found in a report."""
    if value is None:
        return ""
    algebra = resolve_algebra(algebra) if algebra is not None else None
    if isinstance(value, NCPolynomial):
        if value.is_zero():
            return "0"
        pres = algebra.presentation if isinstance(algebra, CatalogEntry) else algebra
        if isinstance(pres, AlgebraPresentation) and value.terms and len(next(iter(value.terms))) == pres.nvars:
            return format_polynomial(value, pres)
        return repr(value)
    if isinstance(value, CentralFraction):
        numerator = format_polynomial(value.numerator, value.ring.pres)
        if value.power == 0:
            return numerator
        return f"({numerator})*{value.ring.center_name}^-{value.power}"
    if isinstance(value, TensorPolynomial):
        pres = build("D").presentation
        parts = []
        for key, coefficient in value.terms.items():
            slots = "⊗".join(f"({format_polynomial(NCPolynomial({m: 1}), pres)})" for m in key)
            parts.append(f"{format_fraction(coefficient)}*{slots}")
        return " + ".join(parts) if parts else "0"
    if isinstance(value, TowerElement):
        names = algebra.names if isinstance(algebra, SkewTower) else tuple(f"t{i}" for i in range(value.nvars))
        return format_tower_element(value, names)
    if isinstance(value, Witness):
        pres = build("D").presentation if algebra is None else getattr(algebra, "presentation", algebra)
        cofactors = ", ".join(format_polynomial(h, pres) for h in value.cofactors)
        return f"witness (rank {value.rank}): cofactors {cofactors}"
    if isinstance(value, NoWitnessAtBound):
        return f"no witness at bound {value.bound} (rank {value.rank}, {value.rows} x {value.columns})"
    if isinstance(value, Fraction):
        return format_fraction(value)
    return str(value)


# Presentation files
def _letter(node: Node) -> Tuple[str, int]:
    if isinstance(node, Identifier):
        return _canonical(node.name), 1
    if isinstance(node, Power) and isinstance(node.base, Identifier) and node.exponent in (1, -1):
        return _canonical(node.base.name), node.exponent
    raise ValueError("the left-hand side of a rule must be two letters like y*x or v*x^-1!")


def _rule_from_letters(left: Tuple[str, int], right: Tuple[str, int], rhs: NCPolynomial):
    if left[1] > 0 and right[1] > 0:
        return SwapRule(left[0], right[0], rhs)
    if left[1] > 0:
        return InverseSwapRule(left[0], right[0], rhs)
    if right[1] > 0:
        return InverseSwapRule(right[0], left[0], rhs, inverted_on_left=True)
    return InverseSwapRule(left[0], right[0], rhs, mover_inverted=True)


def parse_presentation(text: str, name: str = "custom") -> AlgebraPresentation:
    """Reads the plain-text presentation format.

    Lines are `key: value` with # comments. `generators:` lists names in order, with a trailing * marking an
    invertible generator; `level:` names the level generators; each `rule:` is `A*B = rhs` with the
    right-hand side written in normal form.
    """
    generators: List[GeneratorInfo] = []
    level: List[str] = []
    raw_rules: List[Tuple[int, str, str]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, separator, value = line.partition(":")
        key, value = key.strip().lower(), value.strip()
        if not separator:
            raise ValueError(f"line {number} should look like 'key: value', not '{line}'!")
        if key == "name":
            name = value
        elif key == "generators":
            for position, token in enumerate(value.split()):
                generators.append(GeneratorInfo(_canonical(token.rstrip("*")), position, token.endswith("*")))
        elif key == "level":
            level.extend(_canonical(token) for token in value.split())
        elif key in ("rule", "inverse"):
            lhs, equals, rhs = value.partition("=")
            if not equals:
                raise ValueError(f"rule on line {number} has no '='!")
            raw_rules.append((number, lhs.strip(), rhs.strip()))
        else:
            raise ValueError(f"unknown key '{key}' on line {number}!")

    # Right-hand sides are in normal form, so a presentation without rules can read them
    bare = PresentationContext(AlgebraPresentation(name, tuple(generators)))
    swap_rules, inverse_rules = [], []
    for number, lhs, rhs in raw_rules:
        lhs_node = parse_expression(lhs)
        if not isinstance(lhs_node, Product) or len(lhs_node.factors) != 2:
            raise ValueError(f"the left-hand side of the rule on line {number} must be two letters!")
        rule = _rule_from_letters(_letter(lhs_node.factors[0]), _letter(lhs_node.factors[1]),
                                  elaborate(parse_expression(rhs), bare))
        (swap_rules if isinstance(rule, SwapRule) else inverse_rules).append(rule)

    logging.info(f"read presentation {name} with {len(generators)} generators and {len(raw_rules)} rules")
    return AlgebraPresentation(name, tuple(generators), tuple(swap_rules), tuple(inverse_rules), frozenset(level))


def load_presentation(path: Union[str, Path]) -> AlgebraPresentation:
    path = Path(path)
    return parse_presentation(path.read_text(encoding="utf-8"), name=path.stem)
