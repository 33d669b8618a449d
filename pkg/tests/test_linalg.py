from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from dehnkit.exactnum import QuadNum
from dehnkit.linalg import (
    CYCLOTOMIC,
    I2,
    I4,
    M2,
    Matrix,
    Poly,
    SingularMatrix,
    block_inverse,
    char_poly,
    companion,
    cyclotomic_factorization,
    det,
    factor_even_quartic,
    finite_order,
    inverse,
    min_poly,
    poly_from_string,
)

from strategies import rational_matrices, rationals


def to_sympy(A: Matrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in A.rows])


@given(rational_matrices(4))
def test_det_matches_sympy(A):
    assert sympy.Rational(*_nd(det(A))) == to_sympy(A).det()


def _nd(x):
    return Fraction(x).numerator, Fraction(x).denominator


@given(rational_matrices(3, nonsingular=True))
def test_inverse_is_two_sided(A):
    B = inverse(A)
    assert A @ B == Matrix.identity(3) == B @ A


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrix):
        inverse(M2(1, 2, 2, 4))


@given(rational_matrices(4, nonsingular=True))
def test_block_inverse_agrees_with_elimination(A):
    try:
        B = block_inverse(A)
    except ZeroDivisionError:
        return  # singular leading block; elimination path is exercised elsewhere
    assert B == inverse(A)


@given(rational_matrices(4))
def test_char_poly_matches_sympy(A):
    x = sympy.Symbol("x")
    ours = char_poly(A)
    ref = to_sympy(A).charpoly(x).all_coeffs()[::-1]
    assert [sympy.Rational(*_nd(c)) for c in ours.coeffs] == ref


@given(rational_matrices(3))
def test_min_poly_annihilates_and_divides_char_poly(A):
    m = min_poly(A)
    assert m(A).is_zero()
    assert m.divides(char_poly(A))
    # minimality: I, A, ..., A^(deg m - 1) are linearly independent
    powers = [to_sympy(A**k).reshape(1, 9) for k in range(m.degree)]
    assert sympy.Matrix.vstack(*powers).rank() == m.degree


@pytest.mark.parametrize("text", ["x^2+1", "x^2-x+1", "x^4+1", "x^4-x^2+1", "x-1", "x^3+1/2*x"])
def test_poly_string_roundtrip(text):
    p = poly_from_string(text)
    assert poly_from_string(str(p)) == p


@pytest.mark.parametrize("order,phi", list(CYCLOTOMIC.items()))
def test_companion_of_cyclotomic_has_that_order(order, phi):
    C = companion(phi)
    assert finite_order(C) == order
    assert C**order == Matrix.identity(C.n)
    assert cyclotomic_factorization(min_poly(C)) == [order]


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_finite_order_against_brute_force(a, b, c, d):
    A = M2(a, b, c, d)
    o = finite_order(A)
    powers = [k for k in range(1, 13) if A**k == I2]
    if o is None:
        assert not powers
    else:
        assert powers and powers[0] == o


def test_finite_order_rejects_unipotent():
    assert finite_order(M2(1, 1, 0, 1)) is None
    assert finite_order(Matrix.diag(-1, -1, 1, 1) @ Matrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])) is None


def test_quad_entries_supported():
    w = QuadNum(Fraction(-1, 2), Fraction(1, 2), -3)
    P = Matrix([[w, 0], [0, 1]])
    assert P**3 == I2
    assert det(P) == w


@given(rationals, rationals)
def test_even_quartic_factorization_multiplies_back(a, b):
    f = factor_even_quartic(a, b)
    target = Poly([b, 0, a, 0, 1])
    if f.kind == "irreducible":
        return
    p, q = f.factors()
    assert p * q == target


@pytest.mark.parametrize(
    "a,b,kind,text",
    [
        (0, 1, "irreducible", "irreducible"),
        (1, 1, "pm", "(x^2+x+1)(x^2-x+1)"),
        (-1, 1, "irreducible", "irreducible"),
        (3, 2, "split", "(x^2+2)(x^2+1)"),
        (0, -4, "split", "(x^2+2)(x^2-2)"),
    ],
)
def test_even_quartic_examples(a, b, kind, text):
    f = factor_even_quartic(a, b)
    assert f.kind == kind
    assert str(f) == text


def test_identity_constants():
    assert I4 == Matrix.identity(4)
    assert Matrix.from_json({"rows": [["1", "0"], ["0", "1"]]}) == I2
    assert Matrix.from_json(I2.to_json()) == I2
