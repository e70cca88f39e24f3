"""
Graded pieces of the module of logarithmic derivations D(A, m).

A derivation of degree d is stored through its l coefficient polynomials; as a
vector it lives in l blocks of S_d coordinates (block j holds f_j). The
condition alpha_H^m(H) | delta(alpha_H) is a linear membership condition on
delta(alpha_H) = sum_j a_j f_j: membership in the subspace alpha_H^m(H) * S_{d-m(H)}
of S_d, expressed by integer functionals that cut out exactly that subspace.
All hyperplanes share one monomial coordinatization.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from arrfree.arrangement import Arrangement, MultiArrangement
from arrfree.errors import ArrangementError
from arrfree.polyalg import (
    HomogPoly,
    Monomial,
    RatMatrix,
    Scalar,
    SparseRow,
    homogeneous_dimension,
    integer_row,
    kernel_basis,
    kernel_basis_sparse,
    left_inverse,
    monomials,
    substitute_linear,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Derivation:
    """delta = sum_j f_j d/dz_j with every nonzero f_j homogeneous of degree ``degree``."""

    nvars: int
    degree: int
    coefficients: tuple[HomogPoly, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.nvars:
            raise ValueError(
                f"A derivation in {self.nvars} variables needs {self.nvars} coefficients, "
                f"got {len(self.coefficients)}"
            )
        for coefficient in self.coefficients:
            if coefficient.nvars != self.nvars:
                raise ValueError("Derivation coefficients live in the wrong polynomial ring")
            if not coefficient.is_zero and coefficient.degree != self.degree:
                raise ValueError(
                    f"Coefficient of degree {coefficient.degree} in a derivation of degree {self.degree}"
                )

    @classmethod
    def zero(cls, nvars: int, degree: int = 0) -> "Derivation":
        return cls(nvars, degree, tuple(HomogPoly.zero(nvars, degree) for _ in range(nvars)))

    @classmethod
    def from_vector(
        cls, nvars: int, degree: int, vector: Mapping[int, Scalar] | Sequence[Scalar]
    ) -> "Derivation":
        size = homogeneous_dimension(nvars, degree)
        if not isinstance(vector, Mapping):
            vector = {index: value for index, value in enumerate(vector) if value}
        blocks: list[list[Scalar]] = [[0] * size for _ in range(nvars)]
        for index, value in vector.items():
            blocks[index // size][index % size] = value
        return cls(
            nvars,
            degree,
            tuple(HomogPoly.from_vector(nvars, degree, block) for block in blocks),
        )

    @property
    def is_zero(self) -> bool:
        return all(coefficient.is_zero for coefficient in self.coefficients)

    def to_vector(self) -> list[Fraction]:
        vector: list[Fraction] = []
        for coefficient in self.coefficients:
            if coefficient.is_zero:
                vector.extend([Fraction(0)] * homogeneous_dimension(self.nvars, self.degree))
            else:
                vector.extend(coefficient.to_vector())
        return vector

    def to_sparse(self) -> SparseRow:
        return integer_row(self.to_vector())

    def scale(self, factor: Scalar) -> "Derivation":
        return Derivation(
            self.nvars, self.degree, tuple(c.scale(factor) for c in self.coefficients)
        )

    def times_monomial(self, exponent: Monomial) -> "Derivation":
        return Derivation(
            self.nvars,
            self.degree + sum(exponent),
            tuple(c.times_monomial(exponent) for c in self.coefficients),
        )

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.nvars != self.nvars:
            raise ValueError("Cannot add derivations on different spaces")
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if other.degree != self.degree:
            raise ValueError(
                f"Cannot add derivations of degrees {self.degree} and {other.degree}"
            )
        return Derivation(
            self.nvars,
            self.degree,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __call__(self, poly: HomogPoly) -> HomogPoly:
        return apply_derivation(self, poly)

    def __str__(self) -> str:
        pieces = [
            f"({coefficient})*D{index + 1}"
            for index, coefficient in enumerate(self.coefficients)
            if not coefficient.is_zero
        ]
        return " + ".join(pieces) if pieces else "0"


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    derivations: tuple[Derivation, ...]

    @property
    def dimension(self) -> int:
        return len(self.derivations)

    def __len__(self) -> int:
        return len(self.derivations)


def apply_derivation(derivation: Derivation, poly: HomogPoly) -> HomogPoly:
    """delta(p) = sum_j f_j dp/dz_j."""
    if derivation.nvars != poly.nvars:
        raise ValueError(
            f"Derivation in {derivation.nvars} variables applied to a polynomial "
            f"in {poly.nvars} variables"
        )
    result = HomogPoly.zero(poly.nvars, max(derivation.degree + poly.degree - 1, 0))
    if poly.degree == 0:
        return result
    for index, coefficient in enumerate(derivation.coefficients):
        if coefficient.is_zero:
            continue
        partial = poly.derivative(index)
        if not partial.is_zero:
            result = result + coefficient * partial
    return result


def euler_derivation(nvars: int) -> Derivation:
    """theta_E = sum_i x_i d/dx_i."""
    if nvars < 1:
        raise ValueError("The Euler derivation needs at least one variable")
    return Derivation(nvars, 1, tuple(HomogPoly.variable(nvars, i) for i in range(nvars)))


@lru_cache(maxsize=None)
def divisibility_functionals(
    form: tuple[int, ...], power: int, degree: int
) -> tuple[SparseRow, ...]:
    """
    Integer functionals on S_degree whose common kernel is alpha^power * S_{degree-power}.

    power == 0 imposes nothing; degree < power forces the polynomial to vanish.
    """
    nvars = len(form)
    size = homogeneous_dimension(nvars, degree)
    if power == 0:
        return ()
    if degree < power:
        return tuple({index: 1} for index in range(size))

    alpha_power = HomogPoly.from_linear(form) ** power
    multiples = [
        integer_row(alpha_power.times_monomial(mono).to_vector())
        for mono in monomials(nvars, degree - power)
    ]
    return tuple(kernel_basis_sparse(multiples, size))


def _constraint_rows(
    arrangement: Arrangement,
    multiplicity: Sequence[int],
    degree: int,
    vanishing: frozenset[int] = frozenset(),
) -> list[SparseRow]:
    size = homogeneous_dimension(arrangement.dim, degree)
    rows: list[SparseRow] = []
    for index, (form, power) in enumerate(zip(arrangement.forms, multiplicity)):
        if index in vanishing:
            # delta(alpha) = 0 exactly, i.e. divisible by alpha^(degree + 1)
            power = degree + 1
        for functional in divisibility_functionals(form.coefficients, power, degree):
            row: SparseRow = {}
            for block, coefficient in enumerate(form.coefficients):
                if coefficient:
                    offset = block * size
                    for position, value in functional.items():
                        row[offset + position] = coefficient * value
            rows.append(row)
    return rows


def _solve_piece(
    arrangement: Arrangement,
    multiplicity: Sequence[int],
    degree: int,
    vanishing: frozenset[int] = frozenset(),
) -> GradedBasis:
    if degree < 0:
        raise ValueError(f"Graded pieces are indexed by nonnegative degrees, got {degree}")
    nvars = arrangement.dim
    unknowns = nvars * homogeneous_dimension(nvars, degree)
    rows = _constraint_rows(arrangement, multiplicity, degree, vanishing)
    kernel = kernel_basis_sparse(rows, unknowns)
    logger.debug(
        f"Degree {degree}: {len(rows)} constraints on {unknowns} unknowns, "
        f"dimension {len(kernel)}"
    )
    return GradedBasis(
        degree, tuple(Derivation.from_vector(nvars, degree, vector) for vector in kernel)
    )


@lru_cache(maxsize=512)
def graded_piece(multiarrangement: MultiArrangement, degree: int) -> GradedBasis:
    """A basis of D(A, m)_degree."""
    return _solve_piece(multiarrangement.arrangement, multiarrangement.multiplicity, degree)


@lru_cache(maxsize=512)
def d0_graded_piece(arrangement: Arrangement, pivot: int, degree: int) -> GradedBasis:
    """A basis of D_0(A)_degree = {delta in D(A)_degree : delta(alpha_pivot) = 0}."""
    arrangement.check_pivot(pivot)
    return _solve_piece(
        arrangement, (1,) * len(arrangement), degree, vanishing=frozenset({pivot})
    )


def is_logarithmic(derivation: Derivation, multiarrangement: MultiArrangement) -> bool:
    """True iff alpha_H^m(H) divides delta(alpha_H) for every hyperplane."""
    if derivation.nvars != multiarrangement.dim:
        return False
    for form, power in zip(multiarrangement.arrangement.forms, multiarrangement.multiplicity):
        image = apply_derivation(derivation, form.as_poly())
        if image.is_zero:
            continue
        vector = image.to_vector()
        for functional in divisibility_functionals(form.coefficients, power, image.degree):
            if sum(vector[position] * value for position, value in functional.items()):
                return False
    return True


def restrict_derivation(derivation: Derivation, chart: RatMatrix) -> Derivation:
    """
    Restrict a derivation killing the pivot form to the hyperplane parametrized by
    ``chart`` (the inclusion returned by ziegler_restriction), in chart coordinates.
    """
    if derivation.nvars != chart.nrows:
        raise ValueError(
            f"Chart with {chart.nrows} rows for a derivation in {derivation.nvars} variables"
        )
    normals = kernel_basis(chart.transpose())
    if len(normals) != 1:
        raise ArrangementError("Chart does not parametrize a hyperplane")
    pivot_form = HomogPoly.from_linear(normals[0])
    if not apply_derivation(derivation, pivot_form).is_zero:
        raise ArrangementError(
            f"Derivation does not annihilate the pivot form {pivot_form}, "
            "it cannot be restricted to the hyperplane"
        )

    # the field takes values in H_0 along H_0; read them back in chart coordinates
    substituted = [substitute_linear(c, chart) for c in derivation.coefficients]
    projection = left_inverse(chart)
    coefficients = []
    for row in projection.entries:
        combined = HomogPoly.zero(chart.ncols, derivation.degree)
        for weight, poly in zip(row, substituted):
            if weight:
                combined = combined + poly.scale(weight)
        coefficients.append(combined)
    return Derivation(chart.ncols, derivation.degree, tuple(coefficients))


def free_hilbert_function(exponents: Sequence[int], nvars: int, degree: int) -> int:
    """dim M_degree for a free graded module with basis in the given degrees."""
    return sum(homogeneous_dimension(nvars, degree - exponent) for exponent in exponents)
