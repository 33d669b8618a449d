"""Shared hypothesis strategies."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from dehnkit.exactnum import QuadNum
from dehnkit.linalg import Matrix

FIELDS = (-1, -2, -3, -5, -7)

small_int = st.integers(-12, 12)
rationals = st.builds(Fraction, small_int, st.integers(1, 9))
nonzero_rationals = rationals.filter(lambda x: x != 0)


def quads(D: int):
    return st.builds(lambda a, b: QuadNum(a, b, D), rationals, rationals)


def rational_matrices(n: int, nonsingular: bool = False):
    m = st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)
    if nonsingular:
        from dehnkit.linalg import det

        m = m.filter(lambda A: det(A) != 0)
    return m


def int_matrices_2x2(lo: int = -6, hi: int = 6, unimodular: bool = False):
    ints = st.integers(lo, hi)
    m = st.tuples(ints, ints, ints, ints).map(lambda t: Matrix([[t[0], t[1]], [t[2], t[3]]]))
    if unimodular:
        m = m.filter(lambda A: abs(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]) == 1)
    return m
