import pytest

from arrfree.arrangement import Arrangement, MultiArrangement, ziegler_restriction
from arrfree.errors import ArrangementError
from arrfree.logder import (
    Derivation,
    d0_graded_piece,
    divisibility_functionals,
    euler_derivation,
    free_hilbert_function,
    graded_piece,
    is_logarithmic,
    restrict_derivation,
)
from arrfree.polyalg import HomogPoly, homogeneous_dimension

from ..mock_arrangements import (  # type: ignore # noqa: F401 # pylint: disable=unused-import
    boolean2_fixture,
    boolean3_fixture,
    boolean3_multi_fixture,
    braid3_fixture,
    generic34_fixture,
)


def test_euler_derivation_acts_by_degree():
    x1, x2 = HomogPoly.variable(2, 0), HomogPoly.variable(2, 1)
    theta = euler_derivation(2)
    assert theta(x1 * x2) == (x1 * x2).scale(2)
    assert theta(HomogPoly.constant(2, 5)).is_zero
    assert str(theta) == "(x1)*D1 + (x2)*D2"


def test_derivation_shape_is_validated():
    x1 = HomogPoly.variable(2, 0)
    with pytest.raises(ValueError):
        Derivation(2, 1, (x1,))
    with pytest.raises(ValueError):
        Derivation(2, 2, (x1, x1))


def test_derivation_vector_coordinates():
    # block j holds the coefficient of D_j in the monomial order x1, x2
    derivation = Derivation.from_vector(2, 1, {1: 3, 2: -1})
    x1, x2 = HomogPoly.variable(2, 0), HomogPoly.variable(2, 1)
    assert derivation.coefficients == (x2.scale(3), -x1)
    assert derivation.to_sparse() == {1: 3, 2: -1}


def test_divisibility_functionals():
    assert divisibility_functionals((1, 0), 0, 3) == ()
    # degree below the power: only the zero polynomial qualifies
    assert divisibility_functionals((1, 0), 2, 1) == ({0: 1}, {1: 1})
    # x1 divides a linear form iff its x2 coordinate vanishes
    assert divisibility_functionals((1, 0), 1, 1) == ({1: 1},)


def test_divisibility_functionals_cut_out_the_multiples():
    form = (1, -1, 2)
    functionals = divisibility_functionals(form, 2, 3)
    assert len(functionals) == homogeneous_dimension(3, 3) - homogeneous_dimension(3, 1)
    multiple = HomogPoly.from_linear(form) ** 2 * HomogPoly.variable(3, 2)
    vector = multiple.to_vector()
    for functional in functionals:
        assert sum(vector[position] * value for position, value in functional.items()) == 0


@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_boolean_graded_dimensions(boolean2: Arrangement, degree: int):
    piece = graded_piece(MultiArrangement.simple(boolean2), degree)
    assert piece.dimension == free_hilbert_function((1, 1), 2, degree)
    assert piece.degree == degree


def test_braid_graded_dimensions(braid3: Arrangement):
    multiarrangement = MultiArrangement.simple(braid3)
    assert [graded_piece(multiarrangement, d).dimension for d in range(4)] == [1, 4, 10, 19]


def test_graded_piece_members_are_logarithmic(boolean3_multi: MultiArrangement):
    for degree in range(4):
        for derivation in graded_piece(boolean3_multi, degree).derivations:
            assert is_logarithmic(derivation, boolean3_multi)
    assert graded_piece(boolean3_multi, 1).dimension == 2


def test_graded_piece_rejects_negative_degree(boolean2: Arrangement):
    with pytest.raises(ValueError):
        graded_piece(MultiArrangement.simple(boolean2), -1)


def test_is_logarithmic(boolean2: Arrangement, generic34: Arrangement):
    assert is_logarithmic(euler_derivation(3), MultiArrangement.simple(generic34))

    simple = MultiArrangement.simple(boolean2)
    partial = Derivation(
        2, 0, (HomogPoly.constant(2, 1), HomogPoly.zero(2))
    )
    assert not is_logarithmic(partial, simple)
    assert not is_logarithmic(euler_derivation(3), simple)

    # x1 * D1 is logarithmic for m(H1) = 1 but not for m(H1) = 2
    x1_d1 = Derivation(2, 1, (HomogPoly.variable(2, 0), HomogPoly.zero(2, 1)))
    assert is_logarithmic(x1_d1, simple)
    assert not is_logarithmic(x1_d1, MultiArrangement(boolean2, (2, 1)))


def test_d0_piece_complements_the_euler_derivation(boolean3: Arrangement):
    simple = MultiArrangement.simple(boolean3)
    for degree in range(4):
        whole = graded_piece(simple, degree).dimension
        d0 = d0_graded_piece(boolean3, 0, degree)
        assert whole == d0.dimension + homogeneous_dimension(3, degree - 1)
        for derivation in d0.derivations:
            assert derivation(boolean3.forms[0].as_poly()).is_zero


def test_restrict_derivation(braid3: Arrangement):
    restriction = ziegler_restriction(braid3, 0)
    one = HomogPoly.constant(3, 1)
    diagonal = Derivation(3, 0, (one, one, one))
    restricted = restrict_derivation(diagonal, restriction.chart)
    assert restricted == Derivation(2, 0, (HomogPoly.constant(2, 1), HomogPoly.constant(2, 1)))
    assert is_logarithmic(restricted, restriction.multiarrangement)


def test_restrict_derivation_needs_a_tangent_field(boolean3: Arrangement):
    restriction = ziegler_restriction(boolean3, 0)
    with pytest.raises(ArrangementError):
        restrict_derivation(euler_derivation(3), restriction.chart)


def test_free_hilbert_function():
    assert free_hilbert_function((0, 1, 2), 3, 2) == 10
    assert free_hilbert_function((1, 1), 2, 0) == 0
