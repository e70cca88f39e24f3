"""
Built-in verification suites behind ``arrfree verify``.

Every suite returns a list of :class:`CheckResult` rows. A suite never raises for
a mathematical failure: invariant violations and rejected inputs are reported as
failed rows so that one broken member does not hide the others.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from importlib.resources import files
from typing import Callable, Literal, NamedTuple

import sympy
import yaml
from pydantic import BaseModel, Field
from rich.console import Console
from rich.progress import track

from arrfree.arrangement import Arrangement, MultiArrangement, ziegler_restriction
from arrfree.criteria import (
    cached_freeness,
    flats_in_pivot,
    terao_check,
    yoshinaga_any,
    ziegler_check,
)
from arrfree.errors import ArrangementError, InvariantViolation
from arrfree.families import generate_family
from arrfree.freeness import saito_matrix
from arrfree.lattice import char_poly, char_poly_whitney, intersection_lattice, localization
from arrfree.logder import (
    Derivation,
    d0_graded_piece,
    free_hilbert_function,
    graded_piece,
)
from arrfree.models import CertificateRecord, recheck_certificate
from arrfree.polyalg import (
    HomogPoly,
    RatMatrix,
    det,
    divide_exact,
    homogeneous_dimension,
    kernel_basis,
    monomials,
    poly_det,
    rank,
)

logger = logging.getLogger(__name__)

SUITE_NAMES = (
    "linalg",
    "mobius",
    "charpoly",
    "saito",
    "freeness",
    "hilbert",
    "terao",
    "ziegler",
    "euler",
    "yoshinaga",
    "json",
)
EULER_DEGREE_BOUND = 5
WHITNEY_ORACLE_BOUND = 12
SAITO_SAMPLES = 100
VERIFY_SEED = 7


class CheckResult(NamedTuple):
    suite: str
    check: str
    passed: bool
    detail: str = ""


class CorpusMember(BaseModel):
    name: str
    family: str
    params: list[int]
    seed: int | None = None
    multiplicity: list[int] | None = None
    charpoly: str | None = None
    lattice_size: int | None = None
    freeness: Literal["FREE", "NONFREE"] | None = None
    exponents: list[int] = Field(default_factory=list)
    reason: str | None = None

    def arrangement(self) -> Arrangement:
        return generate_family(self.family, self.params, self.seed)

    def multiarrangement(self) -> MultiArrangement:
        arrangement = self.arrangement()
        if self.multiplicity is None:
            return MultiArrangement.simple(arrangement)
        return MultiArrangement(arrangement, tuple(self.multiplicity))

    @property
    def is_simple(self) -> bool:
        return self.multiplicity is None


@lru_cache
def load_corpus() -> tuple[CorpusMember, ...]:
    text = files("arrfree").joinpath("data", "corpus.yaml").read_text(encoding="utf-8")
    content = yaml.safe_load(text)
    return tuple(CorpusMember.model_validate(item) for item in content["members"])


def _guarded(suite: str, check: str, function: Callable[[], CheckResult]) -> CheckResult:
    try:
        return function()
    except (InvariantViolation, ArrangementError) as error:
        return CheckResult(suite, check, False, f"{type(error).__name__}: {error}")


def _progress(items, description: str):
    return track(items, description, console=Console(stderr=True), transient=True)


# linalg


def _random_matrix(rng: random.Random, nrows: int, ncols: int, bound: int) -> RatMatrix:
    return RatMatrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)], ncols
    )


def _random_poly(rng: random.Random, nvars: int, degree: int) -> HomogPoly:
    chosen = rng.sample(monomials(nvars, degree), min(3, homogeneous_dimension(nvars, degree)))
    return HomogPoly(nvars, degree, {mono: rng.randint(-4, 4) for mono in chosen})


def suite_linalg(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    rng = random.Random(VERIFY_SEED)
    results = []

    failures = 0
    for _ in range(40):
        nrows, ncols = rng.randint(1, 12), rng.randint(1, 12)
        matrix = _random_matrix(rng, nrows, ncols, 3)
        # rank deficient on about half the draws
        if rng.random() < 0.5 and nrows > 2:
            rows = list(matrix.entries)
            rows[-1] = tuple(2 * a - b for a, b in zip(rows[0], rows[1]))
            matrix = RatMatrix.from_rows(rows, ncols)
        if rank(matrix) + len(kernel_basis(matrix)) != ncols:
            failures += 1
    results.append(CheckResult("linalg", "rank + nullity = columns", not failures, f"40 matrices, {failures} failure(s)"))

    failures = 0
    for _ in range(60):
        size = rng.randint(1, 5)
        matrix = _random_matrix(rng, size, size, 3)
        entries = [[int(v) for v in row] for row in matrix.entries]
        oracle = sympy.Matrix(entries).det(method="laplace")
        if det(matrix) != Fraction(int(oracle)):
            failures += 1
    results.append(CheckResult("linalg", "Bareiss det = cofactor det", not failures, f"60 matrices, {failures} failure(s)"))

    failures = 0
    for _ in range(30):
        nvars = rng.randint(1, 4)
        p, q, r = (_random_poly(rng, nvars, rng.randint(0, 5)) for _ in range(3))
        same = _random_poly(rng, nvars, q.degree)
        if p * q != q * p or (p * q) * r != p * (q * r):
            failures += 1
        if p * (q + same) != p * q + p * same:
            failures += 1
        if not (p * q).is_zero and (p * q).degree != p.degree + q.degree:
            failures += 1
    results.append(CheckResult("linalg", "ring axioms", not failures, f"30 triples, {failures} failure(s)"))
    return results


# mobius


def _check_mobius(member: CorpusMember) -> CheckResult:
    arrangement = member.arrangement()
    lattice = intersection_lattice(arrangement)
    problems = []
    for flat in lattice.flats[1:]:
        if sum(lattice.mobius_of(other) for other in lattice.lower_interval(flat)):
            problems.append(f"mobius sum at {flat.indices}")
    chi = char_poly(arrangement, lattice)
    if len(arrangement) and chi.evaluate(1):
        problems.append("(t - 1) does not divide chi")
    if len(arrangement):
        signs = [
            (-1) ** (arrangement.dim - power) * value >= 0
            for power, value in enumerate(chi.coefficients)
        ]
        if not all(signs):
            problems.append("coefficients do not alternate")
        if abs(chi.coefficients[arrangement.dim - 1]) != len(arrangement):
            problems.append("|coefficient of t^(l-1)| != n")
    if member.lattice_size is not None and len(lattice) != member.lattice_size:
        problems.append(f"{len(lattice)} flats, expected {member.lattice_size}")
    for flat in lattice.flats:
        local = intersection_lattice(localization(arrangement, flat))
        interval = lattice.lower_interval(flat)
        expected = sorted((other.dim, lattice.mobius_of(other)) for other in interval)
        observed = sorted(zip((f.dim for f in local.flats), local.mobius))
        if expected != observed:
            problems.append(f"localization at {flat.indices} differs from its interval")
    if arrangement.dim >= 2:
        for pivot in range(len(arrangement)):
            if sum(ziegler_restriction(arrangement, pivot).multiarrangement.multiplicity) != len(arrangement) - 1:
                problems.append(f"restriction at {pivot} loses hyperplanes")
    return CheckResult("mobius", member.name, not problems, "; ".join(problems) or f"{len(lattice)} flats")


def suite_mobius(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.is_simple]
    return [
        _guarded("mobius", member.name, lambda: _check_mobius(member))
        for member in _progress(members, "Moebius identities")
    ]


# charpoly


def _check_charpoly(member: CorpusMember) -> CheckResult:
    arrangement = member.arrangement()
    chi = char_poly(arrangement)
    problems = []
    if len(arrangement) <= WHITNEY_ORACLE_BOUND and char_poly_whitney(arrangement) != chi:
        problems.append("lattice and subset expansion disagree")
    if member.charpoly is not None and str(chi) != member.charpoly:
        problems.append(f"{chi} != expected {member.charpoly}")
    return CheckResult("charpoly", member.name, not problems, "; ".join(problems) or str(chi))


def suite_charpoly(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.is_simple]
    return [_guarded("charpoly", m.name, lambda: _check_charpoly(m)) for m in members]


# saito


def _random_member(rng: random.Random, multiarrangement: MultiArrangement, degree: int) -> Derivation:
    piece = graded_piece(multiarrangement, degree)
    result = Derivation.zero(multiarrangement.dim, degree)
    for derivation in piece.derivations:
        weight = rng.randint(-3, 3)
        if weight:
            result = result + derivation.scale(weight)
    return result


def suite_saito(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    rng = random.Random(VERIFY_SEED)
    multiarrangements = [
        m.multiarrangement() for m in corpus if m.arrangement().dim == 3
    ]
    failures = []
    for sample in range(SAITO_SAMPLES):
        multiarrangement = multiarrangements[sample % len(multiarrangements)]
        derivations = [
            _random_member(rng, multiarrangement, rng.randint(0, 3)) for _ in range(3)
        ]
        determinant = poly_det(saito_matrix(derivations))
        if divide_exact(determinant, multiarrangement.defining_polynomial()) is None:
            failures.append(sample)
    return [
        CheckResult(
            "saito",
            "prod alpha^m divides the Saito determinant",
            not failures,
            f"{SAITO_SAMPLES} tuples, failing samples {failures}" if failures else f"{SAITO_SAMPLES} tuples",
        )
    ]


# freeness / hilbert


def _check_freeness(member: CorpusMember) -> CheckResult:
    certificate = cached_freeness(member.multiarrangement())
    problems = []
    if certificate.verdict.value != member.freeness:
        problems.append(f"{certificate.summary()}, expected {member.freeness}")
    elif certificate.is_free and list(certificate.exponents) != member.exponents:
        problems.append(f"exponents {certificate.exponents}, expected {member.exponents}")
    elif not certificate.is_free and member.reason and certificate.reason.value != member.reason:
        problems.append(f"reason {certificate.reason.value}, expected {member.reason}")
    problems.extend(recheck_certificate(CertificateRecord.from_certificate(certificate)))
    return CheckResult("freeness", member.name, not problems, "; ".join(problems) or certificate.summary())


def suite_freeness(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.freeness is not None]
    return [
        _guarded("freeness", m.name, lambda: _check_freeness(m))
        for m in _progress(members, "Freeness certificates")
    ]


def _check_hilbert(member: CorpusMember) -> CheckResult:
    multiarrangement = member.multiarrangement()
    certificate = cached_freeness(multiarrangement)
    if not certificate.is_free:
        return CheckResult("hilbert", member.name, True, "not free, skipped")
    mismatches = []
    for degree in range(multiarrangement.total + 1):
        expected = free_hilbert_function(certificate.exponents, multiarrangement.dim, degree)
        observed = graded_piece(multiarrangement, degree).dimension
        if expected != observed:
            mismatches.append(f"d={degree}: {observed} != {expected}")
    return CheckResult(
        "hilbert",
        member.name,
        not mismatches,
        "; ".join(mismatches) or f"0 <= d <= {multiarrangement.total}",
    )


def suite_hilbert(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.freeness == "FREE"]
    return [_guarded("hilbert", m.name, lambda: _check_hilbert(m)) for m in members]


# terao / ziegler / euler


def suite_terao(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.is_simple and m.freeness is not None]
    results = []
    for member in members:
        def check(member=member) -> CheckResult:
            report = terao_check(member.arrangement())
            return CheckResult("terao", member.name, report.passed, report.conditions[-1].detail)

        results.append(_guarded("terao", member.name, check))
    return results


def suite_ziegler(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [
        m for m in corpus
        if m.is_simple and m.freeness == "FREE" and 1 in m.exponents and m.params[0] >= 2
    ]
    results = []
    for member in _progress(members, "Ziegler restrictions"):
        arrangement = member.arrangement()
        for pivot in range(len(arrangement)):
            def check(pivot=pivot) -> CheckResult:
                report = ziegler_check(arrangement, pivot)
                detail = "; ".join(c.detail for c in report.conditions)
                return CheckResult("ziegler", f"{member.name} pivot {pivot}", report.passed, detail)

            results.append(_guarded("ziegler", f"{member.name} pivot {pivot}", check))
    return results


def _check_euler(member: CorpusMember) -> CheckResult:
    arrangement = member.arrangement()
    multiarrangement = MultiArrangement.simple(arrangement)
    mismatches = []
    for pivot in range(len(arrangement)):
        for degree in range(EULER_DEGREE_BOUND + 1):
            whole = graded_piece(multiarrangement, degree).dimension
            d0 = d0_graded_piece(arrangement, pivot, degree).dimension
            if whole != d0 + homogeneous_dimension(arrangement.dim, degree - 1):
                mismatches.append(f"pivot {pivot}, d={degree}")
    return CheckResult("euler", member.name, not mismatches, "; ".join(mismatches) or f"d <= {EULER_DEGREE_BOUND}")


def suite_euler(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.is_simple]
    return [
        _guarded("euler", m.name, lambda: _check_euler(m))
        for m in _progress(members, "Euler decomposition")
    ]


# yoshinaga


def _check_flats_in_pivot(arrangement: Arrangement, pivot: int) -> bool:
    lattice = intersection_lattice(arrangement)
    form = arrangement.forms[pivot]
    brute = [
        flat for flat in lattice.flats
        if flat.dim >= 1 and all(form.evaluate(vector) == 0 for vector in flat.basis)
    ]
    return brute == flats_in_pivot(arrangement, pivot)


def _check_yoshinaga(member: CorpusMember) -> CheckResult:
    arrangement = member.arrangement()
    report = yoshinaga_any(arrangement, jobs=1)
    direct = cached_freeness(MultiArrangement.simple(arrangement))
    problems = []
    if report.passed != direct.is_free:
        problems.append(f"criterion says {report.verdict}, direct certificate {direct.summary()}")
    if not all(_check_flats_in_pivot(arrangement, pivot) for pivot in range(len(arrangement))):
        problems.append("flats_in_pivot differs from the brute-force scan")
    return CheckResult("yoshinaga", member.name, not problems, "; ".join(problems) or report.verdict)


def _yoshinaga_row(member: CorpusMember) -> CheckResult:
    return _guarded("yoshinaga", member.name, lambda: _check_yoshinaga(member))


def suite_yoshinaga(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.is_simple and m.params[0] == 4]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_yoshinaga_row, members))
    return [_yoshinaga_row(m) for m in _progress(members, "Hyperplane-section criterion")]


# json


def _check_json(member: CorpusMember) -> CheckResult:
    certificate = cached_freeness(member.multiarrangement())
    text = CertificateRecord.from_certificate(certificate).model_dump_json()
    record = CertificateRecord.model_validate_json(text)
    problems = recheck_certificate(record)
    if certificate.is_free:
        tampered = record.model_copy(update={"saito_constant": str(2 * Fraction(record.saito_constant))})
        if not recheck_certificate(tampered):
            problems.append("tampered Saito constant was accepted")
    return CheckResult("json", member.name, not problems, "; ".join(problems) or "round trip rechecked")


def suite_json(corpus: tuple[CorpusMember, ...], jobs: int = 1) -> list[CheckResult]:
    members = [m for m in corpus if m.freeness is not None]
    return [_guarded("json", m.name, lambda: _check_json(m)) for m in members]


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "linalg": suite_linalg,
    "mobius": suite_mobius,
    "charpoly": suite_charpoly,
    "saito": suite_saito,
    "freeness": suite_freeness,
    "hilbert": suite_hilbert,
    "terao": suite_terao,
    "ziegler": suite_ziegler,
    "euler": suite_euler,
    "yoshinaga": suite_yoshinaga,
    "json": suite_json,
}


def run_suites(names: list[str] | tuple[str, ...], jobs: int = 1) -> list[CheckResult]:
    if "all" in names:
        names = SUITE_NAMES
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ArrangementError(
            f"Unknown suite(s) {', '.join(unknown)}, expected one of {', '.join(SUITE_NAMES)} or all"
        )
    corpus = load_corpus()
    results: list[CheckResult] = []
    for name in names:
        logger.info(f"Running suite '{name}'")
        suite_results = SUITES[name](corpus, jobs)
        failed = sum(not result.passed for result in suite_results)
        logger.info(f"Suite '{name}': {len(suite_results) - failed} passed, {failed} failed")
        results.extend(suite_results)
    return results
