"""The registry of named checks, and an asyncio batch runner for them."""
import asyncio
import logging
import time
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .catalog import CATALOG_IDS, ad_nilpotence_order, build, ideal_square_identities, ore_tower_reading
from .central import (WEYL_CASES, check_weyl_brackets, eta_bracket_as_printed, express_generators,
                      fraction_equivalence_fuzz, weyl_coordinates)
from .hopf import (CONVENTION_DESCRIPTIONS, central_coproduct_residuals, check_coproduct_on_relations,
                   counit_and_coassoc_axioms, counit_multiplicativity_fuzz, counit_values, coordinate_ring_closure,
                   elect_convention, elected_spec)
from .membership import (degree_subadditivity_fuzz, expect_no_witness, growth_report,
                         m0_equals_p0_squared, omega_in_q_squared, primes_inside_p0)
from .ncpoly import (Report, apply_map, associativity_fuzz, check_map_is_morphism, commutator, compose_maps,
                     filtration_fuzz, inverse_cancellation_fuzz, is_sigma_normal, level_degree, monomials_up_to,
                     random_polynomial, validate_presentation)
from .parser import format_polynomial, format_value, parse
from .tower import (TOWER_IDS, associativity_fuzz as tower_associativity_fuzz, build_tower, check_T_relations,
                    check_pi, derivation_checks, inner_automorphism_check, invariant_ideal_computation,
                    radical_tower_report)
from .util import random_generator

STATUSES = ("pass", "fail", "report")


@dataclass(frozen=True)
class CheckDescriptor:
    id: str
    claim: str
    runner: Callable[[], Report]
    expected: str = "pass"
    # Used to print residuals in the expression grammar
    algebra: Optional[str] = "D"


@dataclass
class CheckReport:
    id: str
    claim: str
    status: str
    details: List[str] = field(default_factory=list)
    wall_time_ms: float = 0.0

    def as_dict(self) -> dict:
        # paper_ref repeats claim
        return {"id": self.id, "paper_ref": self.claim, "claim": self.claim, "status": self.status,
                "details": self.details, "wall_time_ms": round(self.wall_time_ms, 1)}


# Check bodies that are not already a single library call
D_LETTERS = (("g", 1), ("g", -1), ("x", 1), ("u", 1), ("y", 1), ("zeta", 1), ("v", 1))


def _letter_label(name: str, sign: int) -> str:
    return name if sign > 0 else f"{name}^-1"


def jordan_relations() -> Report:
    report = Report("Jordan plane")
    report.extend(validate_presentation(build("J").presentation), "J: ")
    for algebra in ("J", "D"):
        pres = build(algebra).presentation
        x, y = pres.gen("x"), pres.gen("y")
        report.add_residual(f"[y,x] = -1/2 x^2 in {algebra}", commutator(y, x, pres) + pres.mul(x, x).scale(Fraction(1, 2)))
    return report


def sigma_normal(name: str) -> Report:
    entry = build("D")
    pres = entry.presentation
    element = entry.named_elements()[name]
    report = Report(f"{name} is sigma-normal")
    verdict = is_sigma_normal(element, entry.maps["sigma"], pres)
    report.add_flag(f"{name}*a = sigma(a)*{name} for every generator", verdict.holds, verdict.residual,
                    note="" if verdict.holds else f"fails on {verdict.generator}")
    return report


def sigma_squared_is_conjugation() -> Report:
    entry = build("D")
    sigma, ad_g = entry.maps["sigma"], entry.maps["ad_g"]
    sigma_squared = compose_maps(sigma, sigma)
    report = Report("sigma^2 = conjugation by g")
    for name, sign in D_LETTERS:
        report.add_residual(f"sigma^2({_letter_label(name, sign)})",
                            sigma_squared.image_of_letter(name, sign) - ad_g.image_of_letter(name, sign))
    return report


def centre_battery() -> Report:
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    report = Report("z, omega, theta are central")
    for central_name in ("z", "omega", "theta"):
        central = d.named()[central_name]
        for name, sign in D_LETTERS:
            report.add_residual(f"[{central_name},{_letter_label(name, sign)}]",
                                commutator(central, pres.gen(name, sign), pres))
    for name in ("q", "s"):
        bracket = commutator(d.named()[name], pres.gen("y"), pres)
        report.add_flag(f"{name} is not central", not bracket.is_zero(), None)
    report.add_flag("g is not central", not commutator(pres.gen("g"), pres.gen("y"), pres).is_zero())
    return report


def centre_relation() -> Report:
    entry = build("D")
    pres, d = entry.presentation, entry.distinguished
    report = Report("z*theta = omega^2")
    report.add_residual("z*theta - omega^2", pres.mul(d.z, d.theta) - pres.mul(d.omega, d.omega))
    return report


def hopf_relations() -> Report:
    election = elect_convention()
    report = Report("Delta respects the relations of D")
    report.add_flag("exactly one convention passes", election.unique,
                    note=f"winner {election.winner}" if election.winner else "")
    report.extend(check_coproduct_on_relations(elected_spec()))
    return report


def _filtered_axioms(keep: Callable[[str], bool], title: str) -> Report:
    full = counit_and_coassoc_axioms(elected_spec())
    report = Report(title)
    report.entries = [entry for entry in full.entries if keep(entry.label)]
    return report


def hopf_coassociativity() -> Report:
    return _filtered_axioms(lambda label: label.startswith("coassociativity"), "Delta is coassociative")


def hopf_counit() -> Report:
    return _filtered_axioms(lambda label: not label.startswith("coassociativity"), "counit axioms")


def coordinate_subbialgebra() -> Report:
    return coordinate_ring_closure(elected_spec())


EXPECTED_NILPOTENCE = {
    "x": {"g": 1, "x": 1, "u": 1, "y": 2, "zeta": 2, "v": 2},
    "u": {"g": 1, "x": 1, "u": 1, "y": 2, "zeta": 2, "v": 2},
}


def ad_nilpotence(t: str) -> Report:
    orders = ad_nilpotence_order(t, build("D").presentation)
    report = Report(f"ad({t}) is locally nilpotent")
    for name, expected in EXPECTED_NILPOTENCE[t].items():
        report.add_flag(f"ad({t})^{expected} kills {name}", orders[name] == expected, note=f"order {orders[name]}")
    return report


def ore_laws() -> Report:
    report = derivation_checks()
    for tower_id in ("T", "T_tilde"):
        report.extend(tower_associativity_fuzz(build_tower(tower_id)), f"{tower_id}: ")
    return report


def pq_square_claim() -> Report:
    report = Report("is omega in q^2 D?")
    for bound, result in omega_in_q_squared().items():
        report.add_flag(f"bound {bound}", True, note=format_value(result))
    return report


def eta_sign_report() -> Report:
    report = Report("sign of eta in cases C and D")
    for case in ("C", "D"):
        bracket = eta_bracket_as_printed(case)
        ring = weyl_coordinates(case).ring
        value = "+1" if bracket == ring.one() else "-1" if bracket == -ring.one() else format_value(bracket)
        flipped = weyl_coordinates(case).eta_sign_flipped
        report.add_flag(f"case {case}: [eta,t] = {value} as printed", True,
                        note="sign flipped to get +1" if flipped else "used as printed")
    return report


def convention_report() -> Report:
    election = elect_convention()
    report = Report("coproduct convention")
    for name, convention_report in election.reports.items():
        failing = ", ".join(entry.label for entry in convention_report.failures())
        report.add_flag(f"convention {name}: {CONVENTION_DESCRIPTIONS[name]}", True,
                        note="passes" if convention_report.passed else f"fails on {failing}")
    return report


def central_coproduct_report() -> Report:
    report = Report("Delta(c) - c⊗c for the central elements")
    for name, residual in central_coproduct_residuals(elected_spec()).items():
        report.add_flag(f"Delta({name}) - {name}⊗{name}", True, residual, note=f"{len(residual)} terms")
    return report


def sl2_quotient() -> Report:
    entry = build("D")
    sl2 = entry.maps["sl2"]
    target = sl2.target
    report = check_map_is_morphism(sl2)
    report.title = "D -> U(sl2)"
    for name, value in (("z", 16), ("omega", -16), ("theta", 16), ("q", 4), ("s", -4)):
        report.add_residual(f"image of {name} = {value}",
                            apply_map(sl2, entry.named_elements()[name]) - target.scalar(value))
    for name in ("x", "u"):
        report.add_residual(f"image of {name} = 0", apply_map(sl2, entry.gen(name)))
    report.add_residual("image of g - 1 = 0", apply_map(sl2, entry.gen("g") - entry.presentation.one()))

    e, h, f = target.gen("e"), target.gen("h"), target.gen("f")
    casimir = target.mul(e, f) + target.mul(f, e) + target.mul(h, h)
    for name in ("e", "h", "f"):
        report.add_residual(f"[ef + fe + h^2, {name}]", commutator(casimir, target.gen(name), target))
    return report


def validate_catalog() -> Report:
    report = Report("catalog presentations")
    for algebra in CATALOG_IDS:
        report.extend(validate_presentation(build(algebra).presentation), f"{algebra}: ")
    return report


def laurent_roundtrip() -> Report:
    report = Report("inverse letters cancel")
    for algebra in ("D", "D_LX", "D_LU"):
        full = validate_presentation(build(algebra).presentation)
        for entry in full.entries:
            if entry.label.startswith(("laurent", "round trip")):
                report.add_flag(f"{algebra}: {entry.label}", entry.passed, entry.residual)

    # Words like t^k t^-k collapse for every invertible generator
    for algebra in ("D_LX", "D_LU"):
        pres = build(algebra).presentation
        for info in pres.invertible_generators():
            for k in (1, 2, 3):
                report.add_residual(f"{algebra}: {info.name}^{k}*{info.name}^-{k}",
                                    pres.mul(pres.gen(info.name, k), pres.gen(info.name, -k)) - pres.one())

    for algebra in ("D", "D_LX", "D_LU"):
        report.extend(inverse_cancellation_fuzz(build(algebra).presentation, samples=25), f"{algebra}: ")
    return report


def filtration() -> Report:
    pres = build("D").presentation
    report = filtration_fuzz(pres)
    y_zeta_v = pres.mul(pres.gen("y"), pres.gen("zeta"), pres.gen("v"))
    report.add_flag("level degree of y*zeta*v is 3", level_degree(y_zeta_v, pres) == 3)
    return report


def parse_roundtrip(samples: int = 200) -> Report:
    rng = random_generator()
    report = Report("print then parse")
    failures = 0
    for algebra in ("D", "D_LX"):
        pres = build(algebra).presentation
        basis = monomials_up_to(pres, 3)
        for _ in range(samples // 2):
            p = random_polynomial(pres, rng, basis=basis)
            text = format_polynomial(p, pres)
            if parse(text, algebra) != p:
                failures += 1
                report.add_flag(f"{algebra}: {text}", False)
    report.add_flag(f"{samples} random polynomials", failures == 0)
    return report


def fraction_equivalence() -> Report:
    report = Report("fraction equality")
    for case in WEYL_CASES:
        report.extend(fraction_equivalence_fuzz(samples=25, case=case), f"case {case}: ")
    return report


def _build_registry() -> Dict[str, CheckDescriptor]:
    d = build("D").distinguished
    descriptors = [
        CheckDescriptor("jordan-relations", "J and D satisfy [y,x] = -1/2 x^2", jordan_relations, algebra="J"),
        CheckDescriptor("ore-tower", "D reads as O(G)[y; d1][zeta; d2][v; tau, d3]", ore_tower_reading),
        CheckDescriptor("sigma-normal-q", "q*a = sigma(a)*q for every generator a", lambda: sigma_normal("q")),
        CheckDescriptor("sigma-normal-s", "s*a = sigma(a)*s for every generator a", lambda: sigma_normal("s")),
        CheckDescriptor("sigma-squared-adg", "sigma^2 is conjugation by g", sigma_squared_is_conjugation),
        CheckDescriptor("centre-zωθ", "z, omega and theta commute with every generator", centre_battery),
        CheckDescriptor("centre-relation", "z*theta = omega^2", centre_relation),
        CheckDescriptor("counit-mplus", "eps(z) = 16, eps(omega) = -16, eps(theta) = 16",
                        lambda: counit_values(elected_spec())),
        CheckDescriptor("hopf-relations", "Delta is an algebra map D -> D⊗D", hopf_relations),
        CheckDescriptor("hopf-coassoc", "(Delta⊗id)Delta = (id⊗Delta)Delta on generators", hopf_coassociativity),
        CheckDescriptor("hopf-counit", "(eps⊗id)Delta = id = (id⊗eps)Delta on generators", hopf_counit),
        CheckDescriptor("og-sub-bialgebra", "Delta maps O(G) into O(G)⊗O(G)", coordinate_subbialgebra),
        CheckDescriptor("adnilp-x", "ad(x) is locally nilpotent on D", lambda: ad_nilpotence("x")),
        CheckDescriptor("adnilp-u", "ad(u) is locally nilpotent on D", lambda: ad_nilpotence("u")),
    ]
    for case in WEYL_CASES:
        algebra = "D_LX" if case in ("A", "B") else "D_LU"
        descriptors.append(CheckDescriptor(f"weyl-{case}", f"[p,q] = [eta,t] = 1 and all other brackets vanish "
                                                           f"(case {case})",
                                           lambda case=case: check_weyl_brackets(case), algebra=algebra))
        descriptors.append(CheckDescriptor(f"weyl-express-{case}", f"the generators of D are fractions in p, q, t, "
                                                                   f"eta (case {case})",
                                           lambda case=case: express_generators(case), algebra=algebra))
    descriptors += [
        CheckDescriptor("T-relations", "the brackets of T", check_T_relations, algebra="T"),
        CheckDescriptor("pi-morphism", "pi: D -> T is a morphism killing q, s and P0", check_pi, algebra="T"),
        CheckDescriptor("h-inner", "the twist of v is conjugation by h^-1", inner_automorphism_check, algebra="S_tilde"),
        CheckDescriptor("invariant-ideal", "d2~' = beta d/dx with beta = 2(xu+4)^-1(ux+2)^2 h",
                        invariant_ideal_computation, algebra="T_tilde"),
        CheckDescriptor("ore-laws", "Leibniz and sigma-Leibniz laws; towers are associative", ore_laws,
                        algebra="T"),
        CheckDescriptor("m0-equals-P0sq", "m0 D = P0^2, by witnesses both ways at bound 2",
                        lambda: m0_equals_p0_squared(2)),
        CheckDescriptor("p1p2-in-P0", "z, omega, theta lie in qD + sD (bound 4)", lambda: primes_inside_p0(4)),
        CheckDescriptor("s-notin-qD", "no witness for s in qD at bound 4",
                        lambda: expect_no_witness("s in qD", d.s, [d.q], 4)),
        CheckDescriptor("one-notin-P0", "no witness for 1 in qD + sD at bound 4",
                        lambda: expect_no_witness("1 in qD + sD", build("D").presentation.one(), [d.q, d.s], 4)),
        CheckDescriptor("pq-square-claim", "is omega in q^2 D? (bounds 2 to 4)", pq_square_claim, expected="report"),
        CheckDescriptor("eta-sign-report", "[eta,t] as printed in cases C and D", eta_sign_report, expected="report"),
        CheckDescriptor("growth", "PBW monomials up to degree n number C(n+6,6) + C(n+5,6)", growth_report),
        CheckDescriptor("fuzz-assoc", "multiplication in D is associative (200 triples)",
                        lambda: associativity_fuzz(build("D").presentation, samples=200)),
        CheckDescriptor("filtration", "level degree filters D with commutative associated graded", filtration),
        CheckDescriptor("convention-elected", "which coproduct convention respects the relations",
                        convention_report, expected="report"),
        CheckDescriptor("central-coproduct", "Delta(c) - c⊗c for c = z, omega, theta, asserting nothing",
                        central_coproduct_report, expected="report"),
        CheckDescriptor("sl2-quotient", "D -> U(sl2) kills O(G)+ and the Casimir is central", sl2_quotient,
                        algebra="SL2"),
        CheckDescriptor("ideal-squares", "q^2 = zg, qs = sq = omega g, s^2 = theta g", ideal_square_identities),
        CheckDescriptor("radical-tower", "alpha = hv acts as the derivation h*d2", radical_tower_report,
                        algebra="T_tilde"),
        CheckDescriptor("validate-catalog", "every catalog presentation is terminating and complete",
                        validate_catalog),
        CheckDescriptor("laurent-roundtrip", "inverse rules undo themselves and a*t^-1*t = a", laurent_roundtrip),
        CheckDescriptor("counit-multiplicative", "eps(ab) = eps(a) eps(b)",
                        lambda: counit_multiplicativity_fuzz(elected_spec())),
        CheckDescriptor("fraction-equivalence", "equality of central fractions is an equivalence",
                        fraction_equivalence, algebra=None),
        CheckDescriptor("degree-subadditivity", "deg(ab) <= deg a + deg b", degree_subadditivity_fuzz),
        CheckDescriptor("parse-roundtrip", "printed polynomials parse back to themselves", parse_roundtrip),
    ]

    registry = {}
    for descriptor in descriptors:
        if descriptor.id in registry:
            raise ValueError(f"check id {descriptor.id} is registered twice!")
        if descriptor.expected not in ("pass", "report"):
            raise ValueError(f"check {descriptor.id} has unknown expectation {descriptor.expected}!")
        registry[descriptor.id] = descriptor
    return registry


_REGISTRY: Optional[Dict[str, CheckDescriptor]] = None


def registry() -> Dict[str, CheckDescriptor]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return _REGISTRY


def glob_matches(id: str, pattern: str) -> bool:
    """Matches hyphen-separated segments one for one, so weyl-* does not pick up weyl-express-A."""
    id_parts, pattern_parts = id.split("-"), pattern.split("-")
    return len(id_parts) == len(pattern_parts) and all(
        fnmatchcase(part, glob) for part, glob in zip(id_parts, pattern_parts))


def select(pattern: str = "all") -> List[CheckDescriptor]:
    """Checks matching a glob, or every check whose id starts with the pattern when it has no wildcards."""
    checks = registry()
    if pattern == "all":
        chosen = list(checks)
    elif any(character in pattern for character in "*?["):
        chosen = [id for id in checks if glob_matches(id, pattern)]
    else:
        chosen = [id for id in checks if id.startswith(pattern)]
    if not chosen:
        raise ValueError(f"no checks match '{pattern}'! Run with 'all' or pick from: {', '.join(sorted(checks))}")
    return [checks[id] for id in sorted(chosen)]


def _details(report: Report, descriptor: CheckDescriptor, status: str) -> List[str]:
    if status == "report":
        entries = report.entries
    elif status == "fail":
        entries = report.failures()
    else:
        return [f"{len(report.entries)} identities hold"]

    details = []
    for entry in entries:
        line = entry.label
        if entry.residual is not None and not isinstance(entry.residual, bool):
            line += f": residual {format_value(entry.residual, descriptor.algebra)}"
        if entry.note:
            line += f" ({entry.note})"
        details.append(line)
    return details


def run_check(descriptor: CheckDescriptor) -> CheckReport:
    """Runs one check. Never raises: an exception becomes a failed report."""
    logging.info(f"starting check {descriptor.id}")
    start = time.perf_counter()
    try:
        report = descriptor.runner()
        if descriptor.expected == "report":
            status = "report"
        else:
            status = "pass" if report.passed else "fail"
        details = _details(report, descriptor, status)
    except Exception as error:
        logging.exception(f"check {descriptor.id} raised an exception!")
        status, details = "fail", [f"{type(error).__name__}: {error}"]

    wall_time_ms = (time.perf_counter() - start) * 1000
    logging.info(f"finished check {descriptor.id}: {status} in {wall_time_ms:.0f} ms")
    return CheckReport(descriptor.id, descriptor.claim, status, details, wall_time_ms)


def warm_up():
    """Builds the shared, cached objects once, so concurrent checks don't race to build them."""
    for algebra in CATALOG_IDS:
        build(algebra)
    for tower_id in TOWER_IDS:
        build_tower(tower_id)
    for case in WEYL_CASES:
        weyl_coordinates(case)
    election = elect_convention()
    logging.info(f"elected coproduct convention: {election.winner}")


async def _run_all(descriptors: List[CheckDescriptor], jobs: int) -> List[CheckReport]:
    semaphore = asyncio.Semaphore(jobs)

    async def run_limited(descriptor):
        async with semaphore:
            return await asyncio.to_thread(run_check, descriptor)

    return list(await asyncio.gather(*(run_limited(descriptor) for descriptor in descriptors)))


def run_checks(pattern: str = "all", jobs: int = 1) -> List[CheckReport]:
    """Runs every check matching pattern, at most `jobs` at a time, and returns reports sorted by id."""
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, not {jobs}!")
    descriptors = select(pattern)
    warm_up()
    logging.info(f"running {len(descriptors)} checks with {jobs} jobs")
    reports = asyncio.run(_run_all(descriptors, jobs))
    return sorted(reports, key=lambda report: report.id)


def exit_code(reports: List[CheckReport]) -> int:
    return 1 if any(report.status == "fail" for report in reports) else 0
