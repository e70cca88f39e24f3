import random
from fractions import Fraction

import pytest
import sympy

from arrfree.polyalg import (
    EchelonForm,
    HomogPoly,
    RatMatrix,
    det,
    divide_exact,
    homogeneous_dimension,
    in_span,
    inverse,
    kernel_basis,
    left_inverse,
    monomials,
    poly_det,
    rank,
    substitute_linear,
)


def x(index: int, nvars: int = 2) -> HomogPoly:
    return HomogPoly.variable(nvars, index)


def test_monomials_are_graded_lex():
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomials(3, 0) == ((0, 0, 0),)
    assert monomials(2, -1) == ()


@pytest.mark.parametrize("nvars, degree, expected", [(3, 2, 6), (4, 3, 20), (1, 5, 1), (2, -1, 0)])
def test_homogeneous_dimension(nvars, degree, expected):
    assert homogeneous_dimension(nvars, degree) == expected
    assert len(monomials(nvars, degree)) == expected


def test_zero_polynomials_compare_equal_across_degrees():
    assert HomogPoly.zero(2, 0) == HomogPoly.zero(2, 5)
    assert x(0) - x(0) == HomogPoly.zero(2, 3)
    assert HomogPoly.zero(2) != HomogPoly.zero(3)


def test_inhomogeneous_terms_are_rejected():
    with pytest.raises(ValueError):
        HomogPoly(2, 2, {(1, 0): 1})


def test_adding_different_degrees_fails():
    with pytest.raises(ValueError):
        _ = x(0) + x(0) * x(1)


def test_product_and_rendering():
    p = (x(0) - x(1)) * (x(0) + x(1))
    assert p == x(0) ** 2 - x(1) ** 2
    assert str(p) == "x1^2 - x2^2"
    assert str(-x(0) + x(1)) == "-x1 + x2"
    assert str(HomogPoly.zero(2)) == "0"


def test_derivative_and_evaluate():
    p = x(0) ** 2 * x(1)
    assert p.derivative(0) == (x(0) * x(1)).scale(2)
    assert p.derivative(1) == x(0) ** 2
    assert p.evaluate([2, Fraction(1, 2)]) == 2


def test_divide_exact():
    product = (x(0) + x(1)) * (x(0) - x(1))
    assert divide_exact(product, x(0) + x(1)) == x(0) - x(1)
    assert divide_exact(x(0) ** 2 + x(1) ** 2, x(0) + x(1)) is None
    assert divide_exact(x(0), x(0) * x(1)) is None
    with pytest.raises(ZeroDivisionError):
        divide_exact(x(0), HomogPoly.zero(2))


def test_substitute_linear():
    # x1 -> y1, x2 -> y1 + y2
    transform = RatMatrix.from_rows([[1, 0], [1, 1]])
    assert substitute_linear(x(0) * x(1), transform) == x(0) ** 2 + x(0) * x(1)


def test_poly_det():
    matrix = [[x(0), x(1)], [HomogPoly.zero(2, 1), x(1)]]
    assert poly_det(matrix) == x(0) * x(1)
    assert poly_det([[x(0), x(1)], [x(0), x(1)]]).is_zero


def test_det_matches_cofactor_expansion():
    matrix = RatMatrix.from_rows([[2, -1, 0], [1, 3, 4], [0, 5, -2]])
    assert det(matrix) == -54
    assert det(RatMatrix.from_rows([[Fraction(1, 2), 1], [1, 4]])) == 1
    assert det(RatMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert det(RatMatrix.from_rows([[1, 2], [2, 4]])) == 0


def test_inverse_and_left_inverse():
    matrix = RatMatrix.from_rows([[2, 1], [1, 1]])
    assert inverse(matrix) == RatMatrix.from_rows([[1, -1], [-1, 2]])

    tall = RatMatrix.from_rows([[0, 1], [1, 1], [2, 0]])
    projection = left_inverse(tall)
    product = [
        [sum(projection[i, k] * tall[k, j] for k in range(3)) for j in range(2)]
        for i in range(2)
    ]
    assert product == [[1, 0], [0, 1]]

    with pytest.raises(ValueError):
        inverse(RatMatrix.from_rows([[1, 2], [2, 4]]))


def test_kernel_basis_is_canonical():
    matrix = RatMatrix.from_rows([[1, 1, 0]])
    assert kernel_basis(matrix) == [[1, -1, 0], [0, 0, 1]]
    assert rank(matrix) == 1


def test_rank_plus_nullity():
    matrix = RatMatrix.from_rows([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
    assert rank(matrix) == 2
    assert len(kernel_basis(matrix)) == 2


def test_echelon_form_tracks_independence():
    echelon = EchelonForm(3)
    assert echelon.add({0: 2, 1: 4})
    assert not echelon.add({0: 1, 1: 2})
    assert echelon.add({2: 7})
    assert echelon.rank == 2
    assert not echelon.add({0: 3, 1: 6, 2: -1})
    assert echelon.add({1: 1})
    assert echelon.rank == 3


def test_in_span():
    inside, coordinates = in_span([2, 3, 5], [[1, 0, 1], [0, 1, 1]])
    assert inside
    assert coordinates == [2, 3]

    inside, coordinates = in_span([1, 1, 1], [[1, 0, 0], [0, 1, 0]])
    assert not inside
    assert coordinates is None


@pytest.mark.parametrize("seed", range(5))
def test_det_against_sympy(seed: int):
    rng = random.Random(seed)
    size = rng.randint(1, 6)
    rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(size)] for _ in range(size)]
    oracle = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows])
    expected = oracle.det(method="laplace")
    assert det(RatMatrix.from_rows(rows)) == Fraction(int(expected.p), int(expected.q))


@pytest.mark.parametrize("seed", range(5))
def test_product_against_sympy(seed: int):
    rng = random.Random(seed)
    symbols = sympy.symbols("x1:4")

    def draw(degree: int) -> HomogPoly:
        terms = {mono: rng.randint(-5, 5) for mono in rng.sample(monomials(3, degree), 3)}
        return HomogPoly(3, degree, terms)

    def to_sympy(poly: HomogPoly):
        return sum(
            (
                sympy.Rational(c.numerator, c.denominator)
                * sympy.Mul(*(s**e for s, e in zip(symbols, mono)))
                for mono, c in poly.terms.items()
            ),
            sympy.Integer(0),
        )

    p, q = draw(rng.randint(1, 3)), draw(rng.randint(1, 3))
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
