"""
Minimal generators, Saito's criterion and freeness certificates for D(A, m).

A free D(A, m) has exactly l minimal generators, all of degree at most |m|, with
degrees summing to |m|. Graded Nakayama counts minimal generators exactly, so a
generator table up to degree |m| either exhibits a candidate basis or certifies
non-freeness. A candidate basis is confirmed by expanding its Saito determinant.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

from arrfree.arrangement import Arrangement, MultiArrangement
from arrfree.config import get_settings
from arrfree.errors import ArrangementError, InvariantViolation
from arrfree.lattice import char_poly
from arrfree.logder import (
    Derivation,
    GradedBasis,
    d0_graded_piece,
    graded_piece,
    is_logarithmic,
)
from arrfree.polyalg import (
    EchelonForm,
    HomogPoly,
    RatMatrix,
    det,
    homogeneous_dimension,
    monomials,
    poly_det,
)

logger = logging.getLogger(__name__)

RECOMBINATION_RANGE = 9


class Verdict(str, Enum):
    FREE = "FREE"
    NONFREE = "NONFREE"


class NonFreeReason(str, Enum):
    CHARPOLY_NONSPLIT = "charpoly-nonsplit"
    GENERATOR_COUNT = "generator-count"
    SAITO_DEGENERATE = "saito-degenerate"


@dataclass(frozen=True)
class GeneratorRow:
    degree: int
    dimension: int  # dim D_d
    image_dimension: int  # dim of S_1 * D_{d-1} inside D_d
    generators: tuple[Derivation, ...]

    @property
    def new_generators(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class GeneratorTable:
    rows: tuple[GeneratorRow, ...]

    @property
    def generators(self) -> tuple[Derivation, ...]:
        return tuple(generator for row in self.rows for generator in row.generators)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.degree for row in self.rows for _ in row.generators)

    @property
    def count(self) -> int:
        return sum(row.new_generators for row in self.rows)

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)

    @property
    def dmax(self) -> int:
        return self.rows[-1].degree if self.rows else -1


def _nakayama_rows(
    nvars: int, piece_fn: Callable[[int], GradedBasis], dmax: int
) -> Iterator[GeneratorRow]:
    if dmax < 0:
        raise ValueError(f"Generator tables need a nonnegative degree bound, got {dmax}")

    found: list[Derivation] = []
    for degree in range(dmax + 1):
        piece = piece_fn(degree)
        echelon = EchelonForm(nvars * homogeneous_dimension(nvars, degree))
        _add_image(echelon, found, nvars, degree, piece.dimension)
        image_dimension = echelon.rank
        if image_dimension > piece.dimension:
            raise InvariantViolation(
                f"S_1 * D_{degree - 1} has dimension {image_dimension} "
                f"inside a piece of dimension {piece.dimension}"
            )

        new = tuple(
            derivation
            for derivation in piece.derivations
            if echelon.rank < piece.dimension and echelon.add(derivation.to_sparse())
        )
        if echelon.rank != piece.dimension:
            raise InvariantViolation(
                f"Degree {degree}: image and new generators span {echelon.rank} "
                f"dimensions instead of {piece.dimension}"
            )
        found.extend(new)
        logger.debug(
            f"Degree {degree}: dim {piece.dimension}, image {image_dimension}, "
            f"{len(new)} new generator(s)"
        )
        yield GeneratorRow(degree, piece.dimension, image_dimension, new)


def _add_image(
    echelon: EchelonForm,
    generators: Sequence[Derivation],
    nvars: int,
    degree: int,
    target: int,
) -> None:
    for generator in generators:
        for mono in monomials(nvars, degree - generator.degree):
            echelon.add(generator.times_monomial(mono).to_sparse())
            if echelon.rank >= target:
                return


def iter_generator_rows(multiarrangement: MultiArrangement, dmax: int) -> Iterator[GeneratorRow]:
    return _nakayama_rows(
        multiarrangement.dim, lambda degree: graded_piece(multiarrangement, degree), dmax
    )


def minimal_generators(multiarrangement: MultiArrangement, dmax: int) -> GeneratorTable:
    """Degree-by-degree minimal generators of D(A, m) up to ``dmax``."""
    return GeneratorTable(tuple(iter_generator_rows(multiarrangement, dmax)))


def d0_minimal_generators(arrangement: Arrangement, pivot: int, dmax: int) -> GeneratorTable:
    """Degree-by-degree minimal generators of D_0(A) for the given pivot."""
    arrangement.check_pivot(pivot)
    return GeneratorTable(
        tuple(
            _nakayama_rows(
                arrangement.dim,
                lambda degree: d0_graded_piece(arrangement, pivot, degree),
                dmax,
            )
        )
    )


def saito_matrix(derivations: Sequence[Derivation]) -> list[list[HomogPoly]]:
    """Row i holds the coefficients of the i-th derivation."""
    if not derivations:
        raise ValueError("A Saito matrix needs at least one derivation")
    nvars = derivations[0].nvars
    if len(derivations) != nvars or any(d.nvars != nvars for d in derivations):
        raise ValueError(
            f"A Saito matrix needs exactly {nvars} derivations in {nvars} variables, "
            f"got {len(derivations)}"
        )
    return [list(derivation.coefficients) for derivation in derivations]


@dataclass(frozen=True)
class SaitoCheck:
    basis: bool
    constant: Fraction  # 0 when not a basis
    determinant: HomogPoly


def _compare_with_defining(determinant: HomogPoly, defining: HomogPoly) -> SaitoCheck:
    if determinant.is_zero or determinant.degree != defining.degree:
        return SaitoCheck(False, Fraction(0), determinant)
    lead = defining.leading_monomial()
    constant = determinant.terms.get(lead, Fraction(0)) / defining.terms[lead]
    if constant and determinant == defining.scale(constant):
        return SaitoCheck(True, constant, determinant)
    return SaitoCheck(False, Fraction(0), determinant)


def saito_check(derivations: Sequence[Derivation], multiarrangement: MultiArrangement) -> SaitoCheck:
    """ell logarithmic derivations form a basis iff their determinant is c * prod alpha_H^m(H), c != 0."""
    for index, derivation in enumerate(derivations):
        if not is_logarithmic(derivation, multiarrangement):
            raise ArrangementError(
                f"Derivation {index} ({derivation}) does not belong to D(A, m)"
            )
    matrix = saito_matrix(derivations)
    if len(matrix) != multiarrangement.dim:
        raise ValueError(
            f"{len(matrix)} derivations for an arrangement in dimension {multiarrangement.dim}"
        )
    return _compare_with_defining(poly_det(matrix), multiarrangement.defining_polynomial())


@dataclass(frozen=True)
class FreenessCertificate:
    multiarrangement: MultiArrangement
    verdict: Verdict
    exponents: tuple[int, ...] = ()
    basis: tuple[Derivation, ...] = ()
    saito_constant: Fraction | None = None
    determinant: HomogPoly | None = None
    reason: NonFreeReason | None = None
    witness: dict = field(default_factory=dict)
    table: GeneratorTable | None = None
    seed: int | None = None

    @property
    def is_free(self) -> bool:
        return self.verdict == Verdict.FREE

    def summary(self) -> str:
        if self.is_free:
            return f"FREE {self.exponents}"
        return f"NONFREE ({self.reason.value})"


def _recombine(generators: Sequence[Derivation], rng: random.Random) -> list[Derivation]:
    """Invertible random integer recombination inside each generator degree."""
    by_degree: dict[int, list[Derivation]] = {}
    for generator in generators:
        by_degree.setdefault(generator.degree, []).append(generator)

    recombined: list[Derivation] = []
    for degree in sorted(by_degree):
        group = by_degree[degree]
        while True:
            weights = [
                [rng.randint(-RECOMBINATION_RANGE, RECOMBINATION_RANGE) for _ in group]
                for _ in group
            ]
            if det(RatMatrix.from_rows(weights, len(group))):
                break
        for row in weights:
            combination = Derivation.zero(group[0].nvars, degree)
            for weight, generator in zip(row, group):
                if weight:
                    combination = combination + generator.scale(weight)
            recombined.append(combination)
    return recombined


def _certify_vanishing(derivations: Sequence[Derivation]) -> dict:
    """
    Evaluate the Saito determinant on the grid {0..D}^(l-1) x {1}, D its degree.

    A homogeneous polynomial of degree D vanishing there is identically zero.
    """
    nvars = derivations[0].nvars
    degree = sum(derivation.degree for derivation in derivations)
    side = degree + 1
    points = 0
    for point in product(range(side), repeat=nvars - 1):
        full = point + (1,)
        values = [[c.evaluate(full) for c in d.coefficients] for d in derivations]
        if det(RatMatrix.from_rows(values, nvars)):
            raise InvariantViolation(
                f"Saito determinant expanded to zero but is nonzero at {full}"
            )
        points += 1
    return {"grid_side": side, "grid_points": points, "dehomogenized_at": nvars}


def _saito_certificate(
    multiarrangement: MultiArrangement,
    table: GeneratorTable,
    seed: int,
    reseeds: int,
    witness: dict,
) -> FreenessCertificate:
    generators = table.generators
    defining = multiarrangement.defining_polynomial()

    candidates: Sequence[Derivation] = generators
    for attempt in range(reseeds + 1):
        if attempt:
            candidates = _recombine(generators, random.Random(seed + attempt))
        determinant = poly_det(saito_matrix(candidates))
        if not determinant.is_zero:
            break
        logger.debug(f"Saito determinant vanishes on attempt {attempt}")
    else:
        grid = _certify_vanishing(candidates)
        witness |= {"attempts": reseeds + 1, "grid": grid}
        logger.info(f"Saito determinant vanishes identically on {grid['grid_points']} grid points")
        return FreenessCertificate(
            multiarrangement,
            Verdict.NONFREE,
            reason=NonFreeReason.SAITO_DEGENERATE,
            witness=witness,
            table=table,
            seed=seed,
        )

    check = _compare_with_defining(determinant, defining)
    if not check.basis:
        raise InvariantViolation(
            f"Nonzero Saito determinant {determinant} of degree {determinant.degree} "
            f"is not a multiple of {defining}"
        )
    witness |= {
        "attempts": attempt + 1,
        "recombination_seed": seed + attempt if attempt else None,
    }
    return FreenessCertificate(
        multiarrangement,
        Verdict.FREE,
        exponents=tuple(sorted(d.degree for d in candidates)),
        basis=tuple(candidates),
        saito_constant=check.constant,
        determinant=determinant,
        witness=witness,
        table=table,
        seed=seed,
    )


def freeness(
    multiarrangement: MultiArrangement,
    dmax: int | None = None,
    *,
    seed: int | None = None,
    reseeds: int | None = None,
) -> FreenessCertificate:
    """Decide whether D(A, m) is free and return a checkable certificate."""
    settings = get_settings()
    seed = settings.arrfree_saito_seed if seed is None else seed
    reseeds = settings.arrfree_saito_reseeds if reseeds is None else reseeds

    nvars = multiarrangement.dim
    total = multiarrangement.total
    dmax = total if dmax is None else dmax
    if dmax < 0:
        raise ArrangementError(f"dmax must be nonnegative, got {dmax}")
    horizon_complete = dmax >= total
    if not horizon_complete:
        logger.warning(
            f"dmax={dmax} is below |m|={total}: a NONFREE verdict is not conclusive"
        )
    witness: dict = {"dmax": dmax, "horizon_complete": horizon_complete}

    if multiarrangement.is_simple:
        chi = char_poly(multiarrangement.arrangement)
        if not chi.splits():
            logger.info(f"Characteristic polynomial {chi} does not split: not free")
            witness |= {
                "charpoly": str(chi),
                "coefficients": list(chi.coefficients),
                "factorization": chi.factorization_str(),
                "integer_roots": chi.integer_roots(),
            }
            return FreenessCertificate(
                multiarrangement,
                Verdict.NONFREE,
                reason=NonFreeReason.CHARPOLY_NONSPLIT,
                witness=witness,
                seed=seed,
            )

    rows: list[GeneratorRow] = []
    for row in iter_generator_rows(multiarrangement, dmax):
        rows.append(row)
        table = GeneratorTable(tuple(rows))
        count, degree_sum = table.count, table.degree_sum
        if count > nvars or degree_sum > total:
            break
        if count == nvars and degree_sum == total:
            certificate = _saito_certificate(multiarrangement, table, seed, reseeds, witness)
            logger.info(f"Verdict after degree {row.degree}: {certificate.summary()}")
            return certificate

    table = GeneratorTable(tuple(rows))
    witness |= {
        "generator_count": table.count,
        "generator_degrees": list(table.degrees),
        "degree_sum": table.degree_sum,
        "expected_count": nvars,
        "expected_degree_sum": total,
    }
    logger.info(
        f"{table.count} minimal generator(s) of degrees {table.degrees} up to degree "
        f"{table.dmax}: not free"
    )
    return FreenessCertificate(
        multiarrangement,
        Verdict.NONFREE,
        reason=NonFreeReason.GENERATOR_COUNT,
        witness=witness,
        table=table,
        seed=seed,
    )
