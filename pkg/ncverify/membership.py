"""Bounded-degree ideal membership by exact linear algebra, and PBW growth counts for D."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .catalog import CATALOG_IDS, build
from .ncpoly import (AlgebraPresentation, Monomial, NCPolynomial, Report, is_sigma_normal, monomial_degree,
                     monomials_up_to, multiply, random_polynomial, total_degree)
from .resources import matrix_cell_cap
from .util import random_generator


class BoundTooLargeForMemory(MemoryError):
    pass


class WitnessReplayFailed(AssertionError):
    pass


@dataclass(frozen=True)
class MembershipProblem:
    """Is target = Σ nᵢ·hᵢ for cofactors hᵢ of degree at most cofactor_degree_bound?"""
    target: NCPolynomial
    ideal_generators: Tuple[NCPolynomial, ...]
    cofactor_degree_bound: int
    algebra: AlgebraPresentation
    normal_flags: Tuple[bool, ...] = ()
    side: str = "right"

    def __post_init__(self):
        if self.cofactor_degree_bound < 0:
            raise ValueError(f"the cofactor degree bound must be at least 0, not {self.cofactor_degree_bound}!")
        if self.side != "right":
            raise ValueError(f"only right cofactors (f = sum n_i h_i) are supported, not '{self.side}'!")
        if self.normal_flags and len(self.normal_flags) != len(self.ideal_generators):
            raise ValueError("normal_flags needs one entry per ideal generator!")

    @property
    def two_sided(self) -> bool:
        """Every generator is normal, so nD = Dn and the right ideal they span is two-sided."""
        return bool(self.normal_flags) and all(self.normal_flags)


@dataclass(frozen=True)
class Witness:
    cofactors: Tuple[NCPolynomial, ...]
    rank: int


@dataclass(frozen=True)
class NoWitnessAtBound:
    bound: int
    rank: int
    rows: int
    columns: int


MembershipResult = Union[Witness, NoWitnessAtBound]


def estimate_cells(problem: MembershipProblem) -> int:
    """Upper estimate of the matrix size: columns times the monomials the products can reach."""
    basis_size = len(monomials_up_to(problem.algebra, problem.cofactor_degree_bound))
    columns = basis_size * len(problem.ideal_generators)
    reach = max((total_degree(n) for n in problem.ideal_generators if not n.is_zero()), default=0)
    rows = len(monomials_up_to(problem.algebra, problem.cofactor_degree_bound + reach))
    return columns * rows


def solve_membership(problem: MembershipProblem) -> MembershipResult:
    pres = problem.algebra
    estimate = estimate_cells(problem)
    cap = matrix_cell_cap()
    if estimate > cap:
        raise BoundTooLargeForMemory(f"a membership matrix at bound {problem.cofactor_degree_bound} could reach "
                                     f"{estimate} cells, over the cap of {cap}! Lower the bound or raise "
                                     f"NCVERIFY_MATRIX_CELL_CAP.")

    basis = monomials_up_to(pres, problem.cofactor_degree_bound)
    columns = [(i, m) for i in range(len(problem.ideal_generators)) for m in basis]

    # One column per (generator, cofactor monomial): the normal form of nᵢ·m
    column_vectors: List[Dict[Monomial, Fraction]] = []
    for i, monomial in columns:
        product = multiply(problem.ideal_generators[i], NCPolynomial({monomial: 1}), pres)
        column_vectors.append(dict(product.terms))

    row_monomials = set(problem.target.terms)
    for vector in column_vectors:
        row_monomials.update(vector)
    rows = sorted(row_monomials, key=lambda m: (monomial_degree(m), m))
    row_index = {m: r for r, m in enumerate(rows)}

    # Scale each row to integers, target in the last column
    width = len(columns) + 1
    dense = [[Fraction(0)] * width for _ in rows]
    for c, vector in enumerate(column_vectors):
        for monomial, coefficient in vector.items():
            dense[row_index[monomial]][c] = coefficient
    for monomial, coefficient in problem.target.terms.items():
        dense[row_index[monomial]][-1] = coefficient
    integer_rows = []
    for row in dense:
        scale = lcm(*(entry.denominator for entry in row)) if row else 1
        integer_rows.append([ZZ(int(entry * scale)) for entry in row])

    logging.info(f"membership at bound {problem.cofactor_degree_bound}: {len(rows)} x {len(columns)} system "
                 f"over {pres.name} ({'two-sided' if problem.two_sided else 'right'} ideal)")
    matrix = DomainMatrix(integer_rows, (len(rows), width), ZZ).to_sparse()
    reduced, denominator, pivots = matrix.rref_den()
    rank = sum(1 for p in pivots if p != width - 1)

    if width - 1 in pivots:
        logging.info(f"no witness at bound {problem.cofactor_degree_bound} (rank {rank})")
        return NoWitnessAtBound(problem.cofactor_degree_bound, rank, len(rows), len(columns))

    entries = reduced.to_Matrix()
    solution = [Fraction(0)] * len(columns)
    for r, p in enumerate(pivots):
        solution[p] = Fraction(int(entries[r, width - 1]), int(entries[r, p]))

    cofactors = []
    for i in range(len(problem.ideal_generators)):
        cofactors.append(NCPolynomial({m: solution[c] for c, (j, m) in enumerate(columns) if j == i}))
    witness = Witness(tuple(cofactors), rank)
    replay_witness(problem, witness)
    return witness


def replay_witness(problem: MembershipProblem, witness: Witness):
    """Checks target - Σ nᵢhᵢ = 0 from scratch."""
    pres = problem.algebra
    residual = problem.target
    for generator, cofactor in zip(problem.ideal_generators, witness.cofactors):
        residual = residual - multiply(generator, cofactor, pres)
    if not residual.is_zero():
        raise WitnessReplayFailed(f"a membership witness failed to replay, leaving {residual!r}!")


def flag_normal_generators(generators: Sequence[NCPolynomial],
                           algebra: AlgebraPresentation) -> Tuple[bool, ...]:
    """n is flagged when n·a = σ(a)·n for every letter a. Only catalog algebras that carry σ can flag anything."""
    for id in CATALOG_IDS:
        entry = build(id)
        if entry.presentation is algebra and "sigma" in entry.maps:
            return tuple(bool(is_sigma_normal(n, entry.maps["sigma"], algebra)) for n in generators)
    return tuple(False for _ in generators)


def membership(target: NCPolynomial, generators: Sequence[NCPolynomial], bound: int,
               algebra: Optional[AlgebraPresentation] = None) -> MembershipResult:
    algebra = algebra or build("D").presentation
    flags = flag_normal_generators(generators, algebra)
    return solve_membership(MembershipProblem(target, tuple(generators), bound, algebra, flags))


def m0_equals_p0_squared(bound: int = 2) -> Report:
    """z, ω, θ lie in (P₀)² = q²D + qsD + s²D, and q², qs, s² lie in zD + ωD + θD."""
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    squares = (pres.mul(d.q, d.q), pres.mul(d.q, d.s), pres.mul(d.s, d.q), pres.mul(d.s, d.s))
    report = Report(f"m0 D = P0^2 at bound {bound}")
    for name, target in (("z", d.z), ("omega", d.omega), ("theta", d.theta)):
        result = membership(target, squares, bound, pres)
        report.add_flag(f"{name} in P0^2", isinstance(result, Witness), result)
    for name, target in (("q^2", squares[0]), ("q*s", squares[1]), ("s^2", squares[3])):
        result = membership(target, d.m0_gens, bound, pres)
        report.add_flag(f"{name} in m0 D", isinstance(result, Witness), result)
    return report


def primes_inside_p0(bound: int = 4) -> Report:
    """p₁ = ⟨z, ω⟩ and p₂ = ⟨ω, θ⟩ generate ideals inside P₀ = qD + sD."""
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    report = Report(f"p1 D and p2 D inside P0 at bound {bound}")
    for name, target in (("z", d.z), ("omega", d.omega), ("theta", d.theta)):
        result = membership(target, d.p0_gens, bound, pres)
        report.add_flag(f"{name} in qD + sD", isinstance(result, Witness), result)
    return report


def expect_no_witness(label: str, target: NCPolynomial, generators: Sequence[NCPolynomial],
                      bound: int = 4) -> Report:
    result = membership(target, generators, bound)
    report = Report(label)
    report.add_flag(f"{label} at bound {bound}", isinstance(result, NoWitnessAtBound), result)
    return report


def omega_in_q_squared(bounds: Sequence[int] = (2, 3, 4)) -> Dict[int, MembershipResult]:
    """Is ω in q²D? Only reported."""
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    q_squared = pres.mul(d.q, d.q)
    return {bound: membership(d.omega, [q_squared], bound, pres) for bound in bounds}


# Growth
def monomial_count(n: int) -> int:
    """Number of PBW monomials g^a x^b u^c y^d zeta^e v^f with |a| + b + c + d + e + f <= n."""
    if n < 0:
        raise ValueError(f"n must be at least 0, not {n}!")
    # Five ordinary exponents summing to at most n - |a|
    return sum(comb(n - abs(a) + 5, 5) for a in range(-n, n + 1))


def expected_count(n: int) -> int:
    return comb(n + 6, 6) + comb(n + 5, 6)


def brute_force_count(n: int) -> int:
    return len(monomials_up_to(build("D").presentation, n))


def growth_table(max_n: int, brute_force_up_to: int = 6) -> pd.DataFrame:
    """Counts of PBW monomials by degree, next to the closed form and the local growth exponent."""
    ns = np.arange(0, max_n + 1)
    table = pd.DataFrame({"n": ns})
    table["monomial_count"] = [monomial_count(int(n)) for n in ns]
    table["expected_count"] = [expected_count(int(n)) for n in ns]
    table["brute_force_count"] = [brute_force_count(int(n)) if n <= brute_force_up_to else pd.NA for n in ns]

    # d log(count) / d log(n) between n - 1 and n, which creeps up towards 6
    counts = table["monomial_count"].to_numpy(dtype=float)
    exponent = np.full(len(ns), np.nan)
    exponent[2:] = np.log(counts[2:] / counts[1:-1]) / np.log(ns[2:] / ns[1:-1])
    table["local_exponent"] = exponent
    return table


def growth_report(max_n: int = 12) -> Report:
    table = growth_table(max_n)
    report = Report(f"growth up to n = {max_n}")
    report.add_flag("count matches C(n+6,6) + C(n+5,6)",
                    bool((table["monomial_count"] == table["expected_count"]).all()))
    checked = table.dropna(subset=["brute_force_count"])
    report.add_flag(f"count matches enumeration up to n = {int(checked['n'].max())}",
                    bool((checked["monomial_count"] == checked["brute_force_count"].astype(int)).all()))
    exponents = table["local_exponent"].dropna().to_numpy()
    report.add_flag("local exponent rises and stays below 6",
                    bool(len(exponents) < 2 or (exponents[-1] > exponents[0] and (exponents < 6).all())),
                    note=f"last local exponent {exponents[-1]:.3f}" if len(exponents) else "")
    return report


def degree_subadditivity_fuzz(samples: int = 100, rng: Optional[np.random.Generator] = None) -> Report:
    """deg NF(ab) <= deg a + deg b, counting g by |exponent|."""
    pres = build("D").presentation
    rng = rng or random_generator()
    basis = monomials_up_to(pres, 3)
    report = Report("total degree is subadditive")
    failures = 0
    for _ in range(samples):
        a = random_polynomial(pres, rng, basis=basis)
        b = random_polynomial(pres, rng, basis=basis)
        product = multiply(a, b, pres)
        if not product.is_zero() and total_degree(product) > total_degree(a) + total_degree(b):
            failures += 1
            report.add_flag("deg(ab) <= deg a + deg b", False, product)
    report.add_flag(f"{samples} random pairs", failures == 0)
    return report
