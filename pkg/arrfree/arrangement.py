import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple, Sequence

from arrfree.errors import ArrangementError, InvariantViolation
from arrfree.polyalg import (
    HomogPoly,
    RatMatrix,
    Scalar,
    kernel_basis_sparse,
    substitute_linear,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class LinearForm:
    """Canonical integer representative of alpha_H: primitive, first nonzero entry positive."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not any(self.coefficients):
            raise ArrangementError("A hyperplane cannot be defined by the zero form")
        content = 0
        for value in self.coefficients:
            content = gcd(content, value)
        first = next(value for value in self.coefficients if value)
        if content != 1 or first < 0:
            raise ArrangementError(
                f"Form {self.coefficients} is not in canonical form, use LinearForm.canonical"
            )

    @classmethod
    def canonical(cls, values: Sequence[Scalar]) -> "LinearForm":
        fractions = [Fraction(value) for value in values]
        if not any(fractions):
            raise ArrangementError("A hyperplane cannot be defined by the zero form")
        denominator = lcm(*(value.denominator for value in fractions if value))
        integers = [int(value * denominator) for value in fractions]
        content = 0
        for value in integers:
            content = gcd(content, value)
        first = next(value for value in integers if value)
        sign = 1 if first > 0 else -1
        return cls(tuple(sign * value // content for value in integers))

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def as_poly(self) -> HomogPoly:
        return HomogPoly.from_linear(self.coefficients)

    def as_row(self) -> dict[int, int]:
        return {index: value for index, value in enumerate(self.coefficients) if value}

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        return sum(
            (Fraction(value) * Fraction(coordinate) for value, coordinate in zip(self.coefficients, point)),
            Fraction(0),
        )

    def __str__(self) -> str:
        return str(self.as_poly())


@dataclass(frozen=True)
class Arrangement:
    """Central arrangement: ordered, pairwise non-proportional canonical forms in K^dim."""

    dim: int
    forms: tuple[LinearForm, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ArrangementError(f"Ambient dimension must be at least 1, got {self.dim}")
        seen: dict[LinearForm, int] = {}
        for index, form in enumerate(self.forms):
            if form.dim != self.dim:
                raise ArrangementError(
                    f"Hyperplane {index} has {form.dim} coefficients, expected {self.dim}"
                )
            if form in seen:
                raise ArrangementError(
                    f"Hyperplanes {seen[form]} and {index} are proportional ({form})"
                )
            seen[form] = index
        if self.labels is not None and len(self.labels) != len(self.forms):
            raise ArrangementError(
                f"{len(self.labels)} labels given for {len(self.forms)} hyperplanes"
            )

    def __len__(self) -> int:
        return len(self.forms)

    def label(self, index: int) -> str:
        return self.labels[index] if self.labels is not None else f"H{index}"

    def check_pivot(self, pivot: int) -> None:
        if not 0 <= pivot < len(self.forms):
            raise ArrangementError(
                f"Pivot {pivot} is not a hyperplane index (arrangement has {len(self.forms)} hyperplanes)"
            )

    def subarrangement(self, indices: Sequence[int]) -> "Arrangement":
        indices = sorted(indices)
        return Arrangement(
            self.dim,
            tuple(self.forms[i] for i in indices),
            tuple(self.labels[i] for i in indices) if self.labels is not None else None,
        )

    def defining_polynomial(self, multiplicity: Sequence[int] | None = None) -> HomogPoly:
        """Q = prod alpha_H, or prod alpha_H^m(H) when a multiplicity is given."""
        if multiplicity is None:
            multiplicity = [1] * len(self.forms)
        product = HomogPoly.constant(self.dim, 1)
        for form, power in zip(self.forms, multiplicity):
            if power:
                product = product * form.as_poly() ** power
        return product


def build_arrangement(
    dim: int,
    forms: Sequence[Sequence[Scalar]],
    labels: Sequence[str] | None = None,
) -> Arrangement:
    if dim < 1:
        raise ArrangementError(f"Ambient dimension must be at least 1, got {dim}")
    canonical_forms = []
    for index, vector in enumerate(forms):
        if len(vector) != dim:
            raise ArrangementError(
                f"Hyperplane {index} has {len(vector)} coefficients, expected {dim}"
            )
        if not any(vector):
            raise ArrangementError(f"Hyperplane {index} is defined by the zero form")
        canonical_forms.append(LinearForm.canonical(vector))
    return Arrangement(
        dim, tuple(canonical_forms), tuple(labels) if labels is not None else None
    )


@dataclass(frozen=True)
class MultiArrangement:
    arrangement: Arrangement
    multiplicity: tuple[int, ...]

    def __post_init__(self):
        if len(self.multiplicity) != len(self.arrangement):
            raise ArrangementError(
                f"{len(self.multiplicity)} multiplicities given for "
                f"{len(self.arrangement)} hyperplanes"
            )
        if any(value < 0 for value in self.multiplicity):
            raise ArrangementError(f"Negative multiplicity in {self.multiplicity}")

    @classmethod
    def simple(cls, arrangement: Arrangement) -> "MultiArrangement":
        return cls(arrangement, (1,) * len(arrangement))

    @property
    def dim(self) -> int:
        return self.arrangement.dim

    @property
    def total(self) -> int:
        """|m|, the degree of prod alpha_H^m(H)."""
        return sum(self.multiplicity)

    @property
    def is_simple(self) -> bool:
        return all(value == 1 for value in self.multiplicity)

    def defining_polynomial(self) -> HomogPoly:
        return self.arrangement.defining_polynomial(self.multiplicity)


class ZieglerRestriction(NamedTuple):
    multiarrangement: MultiArrangement
    chart: RatMatrix  # inclusion H_0 -> V, one column per coordinate of H_0
    groups: tuple[tuple[int, ...], ...]  # original hyperplanes restricting to each line
    pivot: int


def hyperplane_chart(form: LinearForm) -> RatMatrix:
    """Inclusion matrix of ker(form): columns are its canonical integer kernel basis."""
    basis = kernel_basis_sparse([form.as_row()], form.dim)
    return RatMatrix.from_rows(
        [[vector.get(i, 0) for vector in basis] for i in range(form.dim)], len(basis)
    )


def ziegler_restriction(arrangement: Arrangement, pivot: int) -> ZieglerRestriction:
    """
    Restrict every other hyperplane to H_0 = ker(alpha_pivot) and count how many
    land on the same hyperplane of H_0 (the natural multiplicity).
    """
    arrangement.check_pivot(pivot)
    if arrangement.dim < 2:
        raise ArrangementError("Ziegler restriction needs an ambient dimension of at least 2")

    chart = hyperplane_chart(arrangement.forms[pivot])
    groups: dict[LinearForm, list[int]] = {}
    for index, form in enumerate(arrangement.forms):
        if index == pivot:
            continue
        restricted = substitute_linear(form.as_poly(), chart)
        if restricted.is_zero:
            raise InvariantViolation(
                f"Hyperplane {index} restricts to zero on pivot {pivot} "
                "although the forms are not proportional"
            )
        groups.setdefault(LinearForm.canonical(restricted.to_vector()), []).append(index)

    labels = None
    if arrangement.labels is not None:
        labels = tuple("+".join(arrangement.labels[i] for i in group) for group in groups.values())

    restricted_arrangement = Arrangement(arrangement.dim - 1, tuple(groups), labels)
    multiplicity = tuple(len(group) for group in groups.values())
    logger.debug(
        f"Ziegler restriction at pivot {pivot}: {len(groups)} hyperplanes, "
        f"multiplicity {multiplicity}"
    )
    return ZieglerRestriction(
        MultiArrangement(restricted_arrangement, multiplicity),
        chart,
        tuple(tuple(group) for group in groups.values()),
        pivot,
    )
