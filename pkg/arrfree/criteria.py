"""
Theorem-level checks: factorization of chi for free arrangements, freeness of the
Ziegler restriction, and the hyperplane-section criterion.

The hyperplane-section criterion quantifies over every point x of H_0 - {0}.
The closure flat of such a point (the intersection of the hyperplanes through x)
contains x and lies in H_0, and every flat X of dimension >= 1 inside H_0 is the
closure flat of a generic point of X. Condition (b) therefore reduces to the
finite list returned by :func:`flats_in_pivot`.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial

from rich.console import Console
from rich.progress import track

from arrfree.arrangement import Arrangement, MultiArrangement, ziegler_restriction
from arrfree.config import get_settings
from arrfree.errors import DimensionGateError, HypothesisError, InvariantViolation
from arrfree.freeness import (
    FreenessCertificate,
    Verdict,
    d0_minimal_generators,
    freeness,
    saito_check,
)
from arrfree.lattice import CharPoly, Flat, char_poly, intersection_lattice, localization
from arrfree.logder import euler_derivation, restrict_derivation

logger = logging.getLogger(__name__)

YOSHINAGA_MIN_DIM = 4


@dataclass(frozen=True)
class ConditionReport:
    name: str
    passed: bool
    detail: str
    required: bool = True
    witness: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    conditions: tuple[ConditionReport, ...]
    pass_label: str = "holds"
    fail_label: str = "fails"
    mode: str = "all"  # "all": every required condition, "any": at least one condition
    direct_verdict: Verdict | None = None
    details: tuple["CriterionReport", ...] = ()

    @property
    def passed(self) -> bool:
        if self.mode == "any":
            return any(condition.passed for condition in self.conditions)
        return all(condition.passed for condition in self.conditions if condition.required)

    @property
    def verdict(self) -> str:
        return self.pass_label if self.passed else self.fail_label


@lru_cache(maxsize=256)
def cached_freeness(multiarrangement: MultiArrangement) -> FreenessCertificate:
    return freeness(multiarrangement)


def _certificate_witness(certificate: FreenessCertificate) -> dict:
    if certificate.is_free:
        return {"verdict": "FREE", "exponents": list(certificate.exponents)}
    return {
        "verdict": "NONFREE",
        "reason": certificate.reason.value,
        "witness": certificate.witness,
    }


def terao_check(
    arrangement: Arrangement, certificate: FreenessCertificate | None = None
) -> CriterionReport:
    """A free arrangement has chi(A, t) = prod (t - e_i)."""
    if certificate is None:
        certificate = cached_freeness(MultiArrangement.simple(arrangement))
    chi = char_poly(arrangement)
    chi_witness = {"charpoly": str(chi), "factorization": chi.factorization_str()}

    conditions = [
        ConditionReport(
            "freeness",
            certificate.is_free,
            certificate.summary(),
            required=False,
            witness=_certificate_witness(certificate),
        )
    ]
    if certificate.is_free:
        expected = CharPoly.from_roots(certificate.exponents)
        if expected != chi:
            raise InvariantViolation(
                f"Free with exponents {certificate.exponents} but chi = {chi} "
                f"instead of {expected}"
            )
        conditions.append(
            ConditionReport(
                "factorization",
                True,
                f"{chi} = {expected.factorization_str()}",
                witness=chi_witness | {"exponents": list(certificate.exponents)},
            )
        )
    else:
        splits = chi.splits()
        conditions.append(
            ConditionReport(
                "charpoly-splits",
                splits,
                f"{chi.factorization_str()} "
                + ("splits over Z>=0 although D(A) is not free" if splits else "does not split"),
                required=False,
                witness=chi_witness | {"integer_roots": chi.integer_roots()},
            )
        )

    return CriterionReport(
        "terao",
        tuple(conditions),
        pass_label="consistent",
        fail_label="inconsistent",
        direct_verdict=certificate.verdict,
    )


def ziegler_check(
    arrangement: Arrangement, pivot: int, certificate: FreenessCertificate | None = None
) -> CriterionReport:
    """
    For A free with exponents (1, e_2, ..., e_l), the Ziegler restriction on H_pivot
    is free with exponents (e_2, ..., e_l), and restricting a basis of D_0(A)
    gives one of it.
    """
    arrangement.check_pivot(pivot)
    if certificate is None:
        certificate = cached_freeness(MultiArrangement.simple(arrangement))
    if not certificate.is_free:
        raise HypothesisError(f"Arrangement is not free ({certificate.summary()})")
    if 1 not in certificate.exponents:
        raise HypothesisError(f"Exponents {certificate.exponents} do not contain 1")

    expected = list(certificate.exponents)
    expected.remove(1)
    restriction = ziegler_restriction(arrangement, pivot)
    restricted_certificate = freeness(restriction.multiarrangement)
    conditions = [
        ConditionReport(
            "restriction-exponents",
            restricted_certificate.is_free
            and list(restricted_certificate.exponents) == expected,
            f"{restricted_certificate.summary()}, expected FREE {tuple(expected)}",
            witness=_certificate_witness(restricted_certificate)
            | {
                "expected_exponents": expected,
                "multiplicity": list(restriction.multiarrangement.multiplicity),
            },
        )
    ]

    table = d0_minimal_generators(arrangement, pivot, max(certificate.exponents))
    d0_basis = list(table.generators)
    if len(d0_basis) != arrangement.dim - 1:
        conditions.append(
            ConditionReport(
                "restricted-basis",
                False,
                f"D_0(A) has {len(d0_basis)} minimal generator(s) up to degree "
                f"{table.dmax}, expected {arrangement.dim - 1}",
                witness={"generator_degrees": list(table.degrees)},
            )
        )
    else:
        completed = saito_check(
            [euler_derivation(arrangement.dim)] + d0_basis, MultiArrangement.simple(arrangement)
        )
        restricted = [restrict_derivation(d, restriction.chart) for d in d0_basis]
        check = saito_check(restricted, restriction.multiarrangement)
        conditions.append(
            ConditionReport(
                "restricted-basis",
                completed.basis and check.basis,
                f"theta_E + D_0 basis: constant {completed.constant}; "
                f"restricted basis: constant {check.constant}",
                witness={
                    "generator_degrees": list(table.degrees),
                    "completed_constant": str(completed.constant),
                    "restricted_constant": str(check.constant),
                    "restricted_determinant": str(check.determinant),
                },
            )
        )

    return CriterionReport(
        "ziegler", tuple(conditions), direct_verdict=certificate.verdict
    )


def flats_in_pivot(arrangement: Arrangement, pivot: int) -> list[Flat]:
    """Flats X with X inside H_pivot and dim X >= 1, in lattice order."""
    arrangement.check_pivot(pivot)
    lattice = intersection_lattice(arrangement)
    return [flat for flat in lattice.flats if flat.lies_in(pivot) and flat.dim >= 1]


def _check_dimension(arrangement: Arrangement) -> None:
    if arrangement.dim < YOSHINAGA_MIN_DIM:
        raise DimensionGateError(
            f"The hyperplane-section criterion requires dimension >= {YOSHINAGA_MIN_DIM}, "
            f"got {arrangement.dim}"
        )


def yoshinaga_check(arrangement: Arrangement, pivot: int) -> CriterionReport:
    """
    A is free iff (a) its Ziegler restriction on H_pivot is free and (b) every
    localization along H_pivot - {0} is free.
    """
    _check_dimension(arrangement)
    arrangement.check_pivot(pivot)

    restriction = ziegler_restriction(arrangement, pivot)
    restricted_certificate = cached_freeness(restriction.multiarrangement)
    condition_a = ConditionReport(
        "(a) ziegler restriction free",
        restricted_certificate.is_free,
        restricted_certificate.summary(),
        witness=_certificate_witness(restricted_certificate)
        | {"multiplicity": list(restriction.multiarrangement.multiplicity)},
    )

    flats = flats_in_pivot(arrangement, pivot)
    failures = []
    for flat in flats:
        local = cached_freeness(MultiArrangement.simple(localization(arrangement, flat)))
        if not local.is_free:
            failures.append(
                {"flat": list(flat.indices), "dim": flat.dim, "reason": local.reason.value}
            )
    condition_b = ConditionReport(
        "(b) localizations free",
        not failures,
        f"{len(flats) - len(failures)}/{len(flats)} localization(s) free",
        witness={"flats_checked": len(flats), "failures": failures},
    )

    direct = cached_freeness(MultiArrangement.simple(arrangement))
    verdict = Verdict.FREE if condition_a.passed and condition_b.passed else Verdict.NONFREE
    agreement = ConditionReport(
        "agrees with direct freeness",
        verdict == direct.verdict,
        direct.summary(),
        required=False,
        witness=_certificate_witness(direct),
    )
    if verdict == Verdict.FREE and not direct.is_free:
        raise InvariantViolation(
            f"Pivot {pivot} passes the hyperplane-section criterion but the "
            f"arrangement is {direct.summary()}"
        )

    return CriterionReport(
        f"yoshinaga(pivot={pivot})",
        (condition_a, condition_b, agreement),
        pass_label="FREE",
        fail_label="NONFREE",
        direct_verdict=direct.verdict,
    )


def yoshinaga_any(arrangement: Arrangement, jobs: int | None = None) -> CriterionReport:
    """Run the hyperplane-section criterion over every pivot; FREE iff some pivot passes."""
    _check_dimension(arrangement)
    jobs = get_settings().arrfree_jobs if jobs is None else jobs
    pivots = range(len(arrangement))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            reports = list(executor.map(partial(yoshinaga_check, arrangement), pivots))
    else:
        reports = [
            yoshinaga_check(arrangement, pivot)
            for pivot in track(
                pivots, "Checking pivots", console=Console(stderr=True), transient=True
            )
        ]

    conditions = tuple(
        ConditionReport(
            f"pivot {pivot} ({arrangement.label(pivot)})",
            report.passed,
            report.verdict,
            required=False,
            witness={c.name: c.passed for c in report.conditions},
        )
        for pivot, report in zip(pivots, reports)
    )
    direct = reports[0].direct_verdict if reports else None
    report = CriterionReport(
        "yoshinaga-any",
        conditions,
        pass_label="FREE",
        fail_label="NONFREE",
        mode="any",
        direct_verdict=direct,
        details=tuple(reports),
    )
    logger.info(f"Hyperplane-section criterion over {len(reports)} pivot(s): {report.verdict}")
    return report
