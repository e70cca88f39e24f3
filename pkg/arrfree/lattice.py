"""
Intersection lattice, Moebius function and characteristic polynomial.

Flats are identified by the canonical integer basis of the subspace they span
(the kernel basis of their defining forms), never by the hyperplanes used to
reach them, so coincidental intersections are merged.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import sympy

from arrfree.arrangement import Arrangement
from arrfree.config import get_settings
from arrfree.errors import ArrangementError
from arrfree.polyalg import EchelonForm, kernel_basis_sparse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Flat:
    indices: tuple[int, ...]  # closed: every hyperplane containing the subspace
    dim: int
    basis: tuple[tuple[int, ...], ...]

    def is_below(self, other: "Flat") -> bool:
        """Reverse inclusion order: self <= other iff self contains other."""
        return set(self.indices) <= set(other.indices)

    def lies_in(self, hyperplane: int) -> bool:
        return hyperplane in self.indices


def closure_flat(arrangement: Arrangement, indices: Sequence[int]) -> Flat:
    """The flat cut out by the given hyperplanes, with its closed index set."""
    for index in indices:
        arrangement.check_pivot(index)
    rows = [arrangement.forms[index].as_row() for index in indices]
    kernel = kernel_basis_sparse(rows, arrangement.dim)
    basis = tuple(tuple(vector.get(i, 0) for i in range(arrangement.dim)) for vector in kernel)
    closed = tuple(
        index
        for index, form in enumerate(arrangement.forms)
        if all(form.evaluate(vector) == 0 for vector in basis)
    )
    return Flat(closed, len(basis), basis)


def _lattice_order(flat: Flat) -> tuple:
    return (-flat.dim, flat.indices)


@dataclass(frozen=True)
class IntersectionLattice:
    arrangement: Arrangement
    flats: tuple[Flat, ...]  # dimension descending, then index set
    mobius: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.flats)

    def index_of(self, flat: Flat) -> int:
        try:
            return self.flats.index(flat)
        except ValueError:
            raise ArrangementError(f"Flat {flat.indices} is not in the intersection lattice")

    def mobius_of(self, flat: Flat) -> int:
        return self.mobius[self.index_of(flat)]

    def lower_interval(self, flat: Flat) -> list[Flat]:
        """All Y with Y <= flat, in lattice order."""
        return [other for other in self.flats if other.is_below(flat)]


def intersection_lattice(arrangement: Arrangement) -> IntersectionLattice:
    """
    Build L_A by intersecting known flats with hyperplanes until no new flat appears,
    then fill in mu(V) = 1 and mu(X) = -sum_{Y < X} mu(Y).
    """
    whole_space = closure_flat(arrangement, ())
    found: dict[tuple[tuple[int, ...], ...], Flat] = {whole_space.basis: whole_space}
    layer = [whole_space]

    while layer:
        next_layer: list[Flat] = []
        for flat in layer:
            for hyperplane in range(len(arrangement)):
                if flat.lies_in(hyperplane):
                    continue
                meet = closure_flat(arrangement, flat.indices + (hyperplane,))
                if meet.basis not in found:
                    found[meet.basis] = meet
                    next_layer.append(meet)
        layer = next_layer

    flats = tuple(sorted(found.values(), key=_lattice_order))
    mobius: list[int] = []
    index_sets = [set(flat.indices) for flat in flats]
    for position, flat_indices in enumerate(index_sets):
        if position == 0:
            mobius.append(1)
            continue
        mobius.append(
            -sum(
                mobius[below]
                for below in range(position)
                if index_sets[below] < flat_indices
            )
        )

    logger.debug(f"Intersection lattice with {len(flats)} flats")
    return IntersectionLattice(arrangement, flats, tuple(mobius))


def _format_univariate(coefficients: Sequence[int], spaced: bool = True) -> str:
    """Render sum_k c_k t^k (ascending coefficients) as 't^3 - 3t^2 + 2t'."""
    pieces: list[tuple[str, str]] = []
    for power in range(len(coefficients) - 1, -1, -1):
        value = coefficients[power]
        if not value:
            continue
        magnitude = abs(value)
        if power == 0:
            body = str(magnitude)
        else:
            variable = "t" if power == 1 else f"t^{power}"
            body = variable if magnitude == 1 else f"{magnitude}{variable}"
        pieces.append(("-" if value < 0 else "+", body))
    if not pieces:
        return "0"

    joiner = " {} " if spaced else "{}"
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += joiner.format(sign) + body
    return text


@dataclass(frozen=True)
class CharPoly:
    coefficients: tuple[int, ...]  # coefficients[k] multiplies t^k

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1] != 1:
            raise ValueError(f"Characteristic polynomial must be monic: {self.coefficients}")

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> "CharPoly":
        coefficients = [1]
        for root in roots:
            shifted = [0] + coefficients
            for k, value in enumerate(coefficients):
                shifted[k] -= root * value
            coefficients = shifted
        return cls(tuple(coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, t: int) -> int:
        return sum(value * t**power for power, value in enumerate(self.coefficients))

    def factorization(self) -> list[tuple[tuple[int, ...], int]]:
        """Irreducible factors over Z as (ascending coefficients, multiplicity)."""
        t = sympy.Symbol("t")
        poly = sympy.Poly(list(reversed(self.coefficients)), t, domain="ZZ")
        _, factors = poly.factor_list()
        result = []
        for factor, multiplicity in factors:
            descending = [int(value) for value in factor.all_coeffs()]
            if descending[0] < 0:
                descending = [-value for value in descending]
            result.append((tuple(reversed(descending)), int(multiplicity)))
        return sorted(result, key=lambda item: (len(item[0]), [-v for v in item[0]]))

    def integer_roots(self) -> list[int]:
        """Integer roots with multiplicity, ascending."""
        roots = []
        for factor, multiplicity in self.factorization():
            if len(factor) == 2 and factor[1] == 1:
                roots.extend([-factor[0]] * multiplicity)
        return sorted(roots)

    def splits(self) -> bool:
        """True iff chi = prod (t - e_i) with every e_i a nonnegative integer."""
        roots = self.integer_roots()
        return len(roots) == self.degree and all(root >= 0 for root in roots)

    def factorization_str(self) -> str:
        pieces = []
        for factor, multiplicity in self.factorization():
            body = _format_univariate(factor, spaced=False)
            if factor != (0, 1):
                body = f"({body})"
            pieces.append(body if multiplicity == 1 else f"{body}^{multiplicity}")
        return "".join(pieces) if pieces else "1"

    def __str__(self) -> str:
        return _format_univariate(self.coefficients)


def char_poly(arrangement: Arrangement, lattice: IntersectionLattice | None = None) -> CharPoly:
    """chi(A, t) = sum over flats of mu(X) t^dim X."""
    if lattice is None:
        lattice = intersection_lattice(arrangement)
    coefficients = [0] * (arrangement.dim + 1)
    for flat, value in zip(lattice.flats, lattice.mobius):
        coefficients[flat.dim] += value
    return CharPoly(tuple(coefficients))


def char_poly_whitney(arrangement: Arrangement, bound: int | None = None) -> CharPoly:
    """
    chi(A, t) = sum over subsets B of (-1)^|B| t^(dim - rank B), by brute force.

    Only valid for central arrangements; serves as an independent check of char_poly.
    """
    if bound is None:
        bound = get_settings().arrfree_whitney_bound
    if len(arrangement) > bound:
        raise ArrangementError(
            f"Subset expansion over {len(arrangement)} hyperplanes exceeds the bound of {bound}"
        )

    coefficients = [0] * (arrangement.dim + 1)
    rows = [form.as_row() for form in arrangement.forms]

    def visit(start: int, echelon: EchelonForm, size: int) -> None:
        coefficients[arrangement.dim - echelon.rank] += -1 if size % 2 else 1
        for index in range(start, len(rows)):
            child = echelon.copy()
            child.add(rows[index])
            visit(index + 1, child, size + 1)

    visit(0, EchelonForm(arrangement.dim), 0)
    return CharPoly(tuple(coefficients))


def localization(arrangement: Arrangement, flat: Flat) -> Arrangement:
    """A_X: the hyperplanes containing X, in the same ambient space, labels kept."""
    if closure_flat(arrangement, flat.indices) != flat:
        raise ArrangementError(f"Flat {flat.indices} is not in the intersection lattice")
    return arrangement.subarrangement(flat.indices)
