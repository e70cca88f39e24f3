"""
Exact arithmetic over the rationals.

Scalars are :class:`fractions.Fraction` (always reduced, positive denominator).
Polynomials are sparse and homogeneous; each graded piece S_d is coordinatized
by :func:`monomials`, which lists exponent vectors in graded lexicographic order
(``x1^d`` first). Linear algebra is done on sparse integer rows: rational rows
are cleared of denominators first, and every row is kept primitive (content 1)
during elimination.

The base field of the theory is an algebraically closed field of characteristic
zero. Arrangements given by rational forms have the same lattice, the same graded
dimensions and the same freeness verdicts over Q and over its algebraic closure,
so everything here is computed over Q.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Monomial = tuple[int, ...]
SparseRow = dict[int, int]


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """Exponent vectors of degree ``degree`` in ``nvars`` variables, graded lex order."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()

    result: list[Monomial] = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            result.append((first,) + rest)
    return tuple(result)


@lru_cache(maxsize=None)
def monomial_positions(nvars: int, degree: int) -> Mapping[Monomial, int]:
    return {mono: position for position, mono in enumerate(monomials(nvars, degree))}


def homogeneous_dimension(nvars: int, degree: int) -> int:
    """dim S_d for a polynomial ring in ``nvars`` variables."""
    if degree < 0:
        return 0
    if nvars == 0:
        return 1 if degree == 0 else 0
    return comb(degree + nvars - 1, nvars - 1)


@dataclass(frozen=True, eq=False)
class HomogPoly:
    """
    Homogeneous polynomial: exponent vector -> nonzero rational coefficient.

    The zero polynomial is the empty map; zero polynomials compare equal whatever
    degree they were declared with.
    """

    nvars: int
    degree: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.nvars < 0 or self.degree < 0:
            raise ValueError(
                f"Invalid polynomial shape: {self.nvars} variables, degree {self.degree}"
            )
        cleaned: dict[Monomial, Fraction] = {}
        for mono, coefficient in self.terms.items():
            mono = tuple(mono)
            if len(mono) != self.nvars or sum(mono) != self.degree:
                raise ValueError(
                    f"Monomial {mono} does not belong to S_{self.degree} "
                    f"in {self.nvars} variables"
                )
            coefficient = Fraction(coefficient)
            if coefficient:
                cleaned[mono] = coefficient
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def _trusted(
        cls, nvars: int, degree: int, terms: dict[Monomial, Fraction]
    ) -> "HomogPoly":
        # terms are already validated and free of zeros
        poly = object.__new__(cls)
        object.__setattr__(poly, "nvars", nvars)
        object.__setattr__(poly, "degree", max(degree, 0))
        object.__setattr__(poly, "terms", terms)
        return poly

    @classmethod
    def zero(cls, nvars: int, degree: int = 0) -> "HomogPoly":
        return cls._trusted(nvars, degree, {})

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "HomogPoly":
        value = Fraction(value)
        return cls._trusted(nvars, 0, {(0,) * nvars: value} if value else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "HomogPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"Variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._trusted(nvars, 1, {mono: Fraction(1)})

    @classmethod
    def from_linear(cls, coefficients: Sequence[Scalar]) -> "HomogPoly":
        """The linear form sum_i c_i x_i."""
        nvars = len(coefficients)
        terms: dict[Monomial, Fraction] = {}
        for index, value in enumerate(coefficients):
            value = Fraction(value)
            if value:
                terms[tuple(1 if i == index else 0 for i in range(nvars))] = value
        return cls._trusted(nvars, 1, terms)

    @classmethod
    def from_vector(
        cls, nvars: int, degree: int, vector: Sequence[Scalar]
    ) -> "HomogPoly":
        basis = monomials(nvars, degree)
        if len(vector) != len(basis):
            raise ValueError(
                f"Vector of length {len(vector)} does not coordinatize S_{degree} "
                f"(dimension {len(basis)})"
            )
        terms = {mono: Fraction(value) for mono, value in zip(basis, vector) if value}
        return cls._trusted(nvars, degree, terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        if self.is_zero:
            return hash((self.nvars, "zero"))
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    def to_vector(self) -> list[Fraction]:
        positions = monomial_positions(self.nvars, self.degree)
        vector = [Fraction(0)] * len(positions)
        for mono, coefficient in self.terms.items():
            vector[positions[mono]] = coefficient
        return vector

    def leading_monomial(self) -> Monomial:
        if self.is_zero:
            raise ValueError("The zero polynomial has no leading monomial")
        return max(self.terms)

    def scale(self, factor: Scalar) -> "HomogPoly":
        factor = Fraction(factor)
        if not factor:
            return HomogPoly.zero(self.nvars, self.degree)
        return HomogPoly._trusted(
            self.nvars,
            self.degree,
            {mono: coefficient * factor for mono, coefficient in self.terms.items()},
        )

    def times_monomial(self, exponent: Monomial) -> "HomogPoly":
        if len(exponent) != self.nvars:
            raise ValueError(
                f"Monomial {exponent} does not have {self.nvars} variables"
            )
        return HomogPoly._trusted(
            self.nvars,
            self.degree + sum(exponent),
            {
                tuple(a + b for a, b in zip(mono, exponent)): coefficient
                for mono, coefficient in self.terms.items()
            },
        )

    def derivative(self, index: int) -> "HomogPoly":
        if not 0 <= index < self.nvars:
            raise ValueError(
                f"Variable index {index} out of range for {self.nvars} variables"
            )
        terms: dict[Monomial, Fraction] = {}
        for mono, coefficient in self.terms.items():
            power = mono[index]
            if power:
                lowered = mono[:index] + (power - 1,) + mono[index + 1 :]
                terms[lowered] = coefficient * power
        return HomogPoly._trusted(self.nvars, self.degree - 1, terms)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(
                f"Point of length {len(point)} for a polynomial in {self.nvars} variables"
            )
        total = Fraction(0)
        for mono, coefficient in self.terms.items():
            value = coefficient
            for coordinate, power in zip(point, mono):
                if power:
                    value *= Fraction(coordinate) ** power
            total += value
        return total

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        return poly_add(self, other)

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return poly_add(self, -other)

    def __neg__(self) -> "HomogPoly":
        return self.scale(-1)

    def __mul__(self, other: Union["HomogPoly", Scalar]) -> "HomogPoly":
        if isinstance(other, HomogPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> "HomogPoly":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "HomogPoly":
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = HomogPoly.constant(self.nvars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = poly_mul(result, base)
            exponent >>= 1
            if exponent:
                base = poly_mul(base, base)
        return result

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces: list[str] = []
        for mono in sorted(self.terms, reverse=True):
            coefficient = self.terms[mono]
            factors = [
                f"x{i + 1}" if power == 1 else f"x{i + 1}^{power}"
                for i, power in enumerate(mono)
                if power
            ]
            magnitude = abs(coefficient)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            sign = "-" if coefficient < 0 else "+"
            pieces.append(f"{sign} {body}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def poly_add(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    if p.nvars != q.nvars:
        raise ValueError(
            f"Cannot add polynomials in {p.nvars} and {q.nvars} variables"
        )
    if q.is_zero:
        return p
    if p.is_zero:
        return q
    if p.degree != q.degree:
        raise ValueError(
            f"Cannot add homogeneous polynomials of degrees {p.degree} and {q.degree}"
        )
    terms = dict(p.terms)
    for mono, coefficient in q.terms.items():
        value = terms.get(mono, 0) + coefficient
        if value:
            terms[mono] = value
        else:
            terms.pop(mono, None)
    return HomogPoly._trusted(p.nvars, p.degree, terms)


def poly_mul(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    if p.nvars != q.nvars:
        raise ValueError(
            f"Cannot multiply polynomials in {p.nvars} and {q.nvars} variables"
        )
    degree = p.degree + q.degree
    if p.is_zero or q.is_zero:
        return HomogPoly.zero(p.nvars, degree)
    terms: dict[Monomial, Fraction] = defaultdict(Fraction)
    for mono_p, coefficient_p in p.terms.items():
        for mono_q, coefficient_q in q.terms.items():
            terms[tuple(a + b for a, b in zip(mono_p, mono_q))] += (
                coefficient_p * coefficient_q
            )
    return HomogPoly._trusted(
        p.nvars, degree, {mono: value for mono, value in terms.items() if value}
    )


def substitute_linear(p: HomogPoly, transform: "RatMatrix") -> HomogPoly:
    """
    Compose ``p`` with a linear change of variables.

    Row i of ``transform`` expresses the old variable x_i as a linear form in the
    new variables, so ``transform`` is (old variable count) x (new variable count).
    """
    if transform.nrows != p.nvars:
        raise ValueError(
            f"Substitution matrix has {transform.nrows} rows for a polynomial "
            f"in {p.nvars} variables"
        )
    new_nvars = transform.ncols
    images = [HomogPoly.from_linear(row) for row in transform.entries]
    powers: dict[tuple[int, int], HomogPoly] = {}

    def power_of(index: int, exponent: int) -> HomogPoly:
        key = (index, exponent)
        if key not in powers:
            powers[key] = images[index] ** exponent
        return powers[key]

    result = HomogPoly.zero(new_nvars, p.degree)
    for mono, coefficient in p.terms.items():
        image = HomogPoly.constant(new_nvars, coefficient)
        for index, exponent in enumerate(mono):
            if exponent:
                image = poly_mul(image, power_of(index, exponent))
        result = poly_add(result, image)
    return result


def divide_exact(p: HomogPoly, q: HomogPoly) -> HomogPoly | None:
    """Quotient p / q when q divides p, otherwise None."""
    if q.is_zero:
        raise ZeroDivisionError("Division by the zero polynomial")
    if p.nvars != q.nvars:
        raise ValueError(
            f"Cannot divide polynomials in {p.nvars} and {q.nvars} variables"
        )
    if p.is_zero:
        return HomogPoly.zero(p.nvars, max(p.degree - q.degree, 0))
    if p.degree < q.degree:
        return None

    # a single divisor is a Groebner basis of its ideal: zero remainder iff divisible
    lead = q.leading_monomial()
    lead_coefficient = q.terms[lead]
    remainder = dict(p.terms)
    quotient: dict[Monomial, Fraction] = {}
    while remainder:
        top = max(remainder)
        shift = tuple(a - b for a, b in zip(top, lead))
        if min(shift) < 0:
            return None
        factor = remainder[top] / lead_coefficient
        quotient[shift] = factor
        for mono, coefficient in q.terms.items():
            target = tuple(a + b for a, b in zip(mono, shift))
            value = remainder.get(target, 0) - factor * coefficient
            if value:
                remainder[target] = value
            else:
                remainder.pop(target, None)
    return HomogPoly._trusted(p.nvars, p.degree - q.degree, quotient)


def poly_det(matrix: Sequence[Sequence[HomogPoly]]) -> HomogPoly:
    """Determinant of a square matrix of polynomials (Laplace expansion, memoised minors)."""
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise ValueError("poly_det needs a non-empty square matrix")
    nvars = matrix[0][0].nvars

    @lru_cache(maxsize=None)
    def minor(row: int, columns: tuple[int, ...]) -> HomogPoly:
        if row == size:
            return HomogPoly.constant(nvars, 1)
        total = HomogPoly.zero(nvars)
        for position, column in enumerate(columns):
            entry = matrix[row][column]
            if entry.is_zero:
                continue
            rest = minor(row + 1, columns[:position] + columns[position + 1 :])
            if rest.is_zero:
                continue
            term = poly_mul(entry, rest)
            total = poly_add(total, -term if position % 2 else term)
        return total

    return minor(0, tuple(range(size)))


@dataclass(frozen=True)
class RatMatrix:
    nrows: int
    ncols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(
            len(row) != self.ncols for row in self.entries
        ):
            raise ValueError(
                f"Entries do not form a {self.nrows}x{self.ncols} matrix"
            )

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Scalar]], ncols: int | None = None
    ) -> "RatMatrix":
        entries = tuple(tuple(Fraction(value) for value in row) for row in rows)
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, entries)

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(size)] for i in range(size)], size
        )

    def __getitem__(self, position: tuple[int, int]) -> Fraction:
        row, column = position
        return self.entries[row][column]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.ncols,
            self.nrows,
            tuple(
                tuple(self.entries[i][j] for i in range(self.nrows))
                for j in range(self.ncols)
            ),
        )


def integer_row(values: Sequence[Scalar]) -> SparseRow:
    """Clear the denominators of a rational vector into a sparse integer row."""
    values = [Fraction(value) for value in values]
    denominator = lcm(*(value.denominator for value in values if value))
    return {
        index: int(value * denominator) for index, value in enumerate(values) if value
    }


def dense_row(row: Mapping[int, Scalar], length: int) -> list[Fraction]:
    vector = [Fraction(0)] * length
    for index, value in row.items():
        vector[index] = Fraction(value)
    return vector


def _primitive(row: SparseRow) -> SparseRow:
    content = 0
    for value in row.values():
        content = gcd(content, value)
        if content == 1:
            return row
    if content > 1:
        return {index: value // content for index, value in row.items()}
    return row


def _normalize_sign(row: SparseRow) -> SparseRow:
    if row and row[min(row)] < 0:
        return {index: -value for index, value in row.items()}
    return row


def _eliminate(row: SparseRow, pivot: SparseRow, column: int) -> SparseRow:
    """Cancel ``row[column]`` against ``pivot`` (fraction free), keep the result primitive."""
    a, b = pivot[column], row[column]
    common = gcd(a, b)
    a, b = a // common, b // common
    result = {index: a * value for index, value in row.items()}
    for index, value in pivot.items():
        updated = result.get(index, 0) - b * value
        if updated:
            result[index] = updated
        else:
            result.pop(index, None)
    return _primitive(result)


class EchelonForm:
    """
    Row echelon form over the integers, maintained incrementally.

    Only columns below ``ncols`` take part in pivoting; rows may carry extra
    bookkeeping entries at larger indices (used to track linear combinations).
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, SparseRow] = {}

    def copy(self) -> "EchelonForm":
        twin = EchelonForm(self.ncols)
        twin.pivots = dict(self.pivots)
        return twin

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, int]) -> SparseRow:
        current = {index: value for index, value in row.items() if value}
        while current:
            lead = min(current)
            if lead >= self.ncols or lead not in self.pivots:
                break
            current = _eliminate(current, self.pivots[lead], lead)
        return current

    def add(self, row: Mapping[int, int]) -> bool:
        """Insert ``row``; True when it was independent of the rows already present."""
        reduced = self.reduce(row)
        if not reduced or min(reduced) >= self.ncols:
            return False
        self.pivots[min(reduced)] = _primitive(reduced)
        return True

    def reduced_rows(self) -> list[SparseRow]:
        """Gauss-Jordan form: every pivot column is zero outside its pivot row."""
        columns = sorted(self.pivots)
        rows = {column: self.pivots[column] for column in columns}
        for position in range(len(columns) - 1, -1, -1):
            column = columns[position]
            pivot = rows[column]
            for other in columns[:position]:
                if column in rows[other]:
                    rows[other] = _eliminate(rows[other], pivot, column)
        return [rows[column] for column in columns]


def kernel_basis_sparse(rows: Iterable[Mapping[int, int]], ncols: int) -> list[SparseRow]:
    """
    Right null space of an integer matrix given as sparse rows.

    One vector per free column, in ascending column order; each vector is
    integral, primitive, and has a positive first nonzero entry.
    """
    echelon = EchelonForm(ncols)
    for row in rows:
        echelon.add(row)
    reduced = echelon.reduced_rows()

    pivot_columns = set()
    entries_by_column: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    for row in reduced:
        lead = min(row)
        pivot_columns.add(lead)
        for column, value in row.items():
            if column != lead:
                entries_by_column[column].append((lead, row[lead], value))

    basis: list[SparseRow] = []
    for free in range(ncols):
        if free in pivot_columns:
            continue
        entries = entries_by_column.get(free, [])
        scale = lcm(*(abs(lead_value) for _, lead_value, _ in entries))
        vector = {free: scale}
        for lead, lead_value, value in entries:
            vector[lead] = -value * scale // lead_value
        basis.append(_normalize_sign(_primitive(vector)))
    return basis


def kernel_basis(matrix: RatMatrix) -> list[list[Fraction]]:
    rows = [integer_row(row) for row in matrix.entries]
    return [dense_row(vector, matrix.ncols) for vector in kernel_basis_sparse(rows, matrix.ncols)]


def rank(matrix: RatMatrix) -> int:
    echelon = EchelonForm(matrix.ncols)
    for row in matrix.entries:
        echelon.add(integer_row(row))
    return echelon.rank


def det(matrix: RatMatrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if matrix.nrows != matrix.ncols:
        raise ValueError(
            f"Determinant of a non-square {matrix.nrows}x{matrix.ncols} matrix"
        )
    size = matrix.nrows
    if size == 0:
        return Fraction(1)

    scale = 1
    work: list[list[int]] = []
    for row in matrix.entries:
        denominator = lcm(*(value.denominator for value in row))
        scale *= denominator
        work.append([int(value * denominator) for value in row])

    sign = 1
    previous = 1
    for k in range(size - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if work[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // previous
        previous = work[k][k]
    return Fraction(sign * work[size - 1][size - 1], scale)


def inverse(matrix: RatMatrix) -> RatMatrix:
    """Gauss-Jordan inverse over Q."""
    if matrix.nrows != matrix.ncols:
        raise ValueError(f"Inverse of a non-square {matrix.nrows}x{matrix.ncols} matrix")
    size = matrix.nrows
    work = [
        list(row) + [Fraction(int(i == j)) for j in range(size)]
        for i, row in enumerate(matrix.entries)
    ]
    for column in range(size):
        pivot = next((i for i in range(column, size) if work[i][column] != 0), None)
        if pivot is None:
            raise ValueError("Matrix is singular")
        work[column], work[pivot] = work[pivot], work[column]
        factor = work[column][column]
        work[column] = [value / factor for value in work[column]]
        for i in range(size):
            if i != column and work[i][column] != 0:
                ratio = work[i][column]
                work[i] = [a - ratio * b for a, b in zip(work[i], work[column])]
    return RatMatrix.from_rows([row[size:] for row in work], size)


def left_inverse(matrix: RatMatrix) -> RatMatrix:
    """A matrix P with P * matrix = identity, for a matrix of full column rank."""
    echelon = EchelonForm(matrix.ncols)
    chosen: list[int] = []
    for index, row in enumerate(matrix.entries):
        if echelon.add(integer_row(row)):
            chosen.append(index)
        if len(chosen) == matrix.ncols:
            break
    if len(chosen) < matrix.ncols:
        raise ValueError("Matrix does not have full column rank")

    square_inverse = inverse(RatMatrix.from_rows([matrix.entries[i] for i in chosen]))
    rows = [[Fraction(0)] * matrix.nrows for _ in range(matrix.ncols)]
    for j in range(matrix.ncols):
        for k, index in enumerate(chosen):
            rows[j][index] = square_inverse[j, k]
    return RatMatrix.from_rows(rows, matrix.nrows)


def in_span(
    vector: Sequence[Scalar], basis: Sequence[Sequence[Scalar]]
) -> tuple[bool, list[Fraction] | None]:
    """
    Decide whether ``vector`` lies in the span of ``basis``.

    :return: (True, coordinates) when it does, (False, None) otherwise.
    """
    length = len(vector)
    count = len(basis)
    if any(len(member) != length for member in basis):
        raise ValueError("Span membership needs vectors of a common length")

    # every row carries a tag column so that the final combination can be read back
    echelon = EchelonForm(length)
    for index, member in enumerate(basis):
        member = [Fraction(value) for value in member]
        denominator = lcm(*(value.denominator for value in member if value))
        row = integer_row(member)
        row[length + index] = denominator
        echelon.add(row)

    values = [Fraction(value) for value in vector]
    denominator = lcm(*(value.denominator for value in values if value))
    target = integer_row(values)
    target[length + count] = denominator
    reduced = echelon.reduce(target)
    if reduced and min(reduced) < length:
        return False, None

    scale = reduced[length + count]
    coordinates = [
        Fraction(-reduced.get(length + index, 0), scale) for index in range(count)
    ]
    return True, coordinates
