"""Block view of 4x4 rational matrices and the Type I/II/III classification."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .linalg import Matrix, blocks, det, from_blocks, inverse


class TypeTag(Enum):
    I = "I"
    II = "II"
    III = "III"
    UNTYPED = "untyped"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> TypeTag:
        for t in cls:
            if t.value == label:
                return t
        raise ValueError(f"unknown type label {label!r}")


class BlockMat:
    """A 4x4 rational matrix together with its 2x2 blocks A1..A4."""

    __slots__ = ("whole", "A1", "A2", "A3", "A4")

    def __init__(self, whole: Matrix):
        if whole.n != 4:
            raise ValueError("BlockMat needs a 4x4 matrix")
        object.__setattr__(self, "whole", whole)
        A1, A2, A3, A4 = blocks(whole)
        object.__setattr__(self, "A1", A1)
        object.__setattr__(self, "A2", A2)
        object.__setattr__(self, "A3", A3)
        object.__setattr__(self, "A4", A4)

    def __setattr__(self, name, value):
        raise AttributeError("BlockMat is immutable")

    @classmethod
    def from_blocks(cls, A1: Matrix, A2: Matrix, A3: Matrix, A4: Matrix) -> BlockMat:
        return cls(from_blocks(A1, A2, A3, A4))

    @property
    def blocks(self) -> tuple[Matrix, Matrix, Matrix, Matrix]:
        return self.A1, self.A2, self.A3, self.A4

    def dets(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(det(A) for A in self.blocks)

    def __eq__(self, other) -> bool:
        return isinstance(other, BlockMat) and self.whole == other.whole

    def __hash__(self) -> int:
        return hash(self.whole)

    def __repr__(self) -> str:
        return f"BlockMat({self.whole!r})"


def _as_block(M) -> BlockMat:
    return M if isinstance(M, BlockMat) else BlockMat(M)


def classify_type(M) -> TypeTag:
    """Type I, II, III, or UNTYPED for a 4x4 rational matrix."""
    B = _as_block(M)
    A1, A2, A3, A4 = B.blocks
    d1, d2, d3, d4 = B.dets()
    if A2.is_zero() and A3.is_zero() and d1 == 1 and d4 == 1:
        return TypeTag.I
    if A1.is_zero() and A4.is_zero() and d2 == 1 and d3 == 1:
        return TypeTag.II
    if 0 in (d1, d2, d3, d4):
        return TypeTag.UNTYPED
    if d1 == d4 and d2 == d3 and d1 + d3 == 1:
        if inverse(A1) @ A2 * d1 == -(inverse(A3) @ A4 * d3):
            return TypeTag.III
    return TypeTag.UNTYPED


_COMPOSE = {
    (TypeTag.I, TypeTag.I): TypeTag.I,
    (TypeTag.II, TypeTag.II): TypeTag.I,
    (TypeTag.I, TypeTag.II): TypeTag.II,
    (TypeTag.II, TypeTag.I): TypeTag.II,
}


def type_compose(t: TypeTag, s: TypeTag) -> TypeTag:
    """Predicted type of N*M from the types of N and M; UNTYPED means unknown."""
    allowed = (TypeTag.I, TypeTag.II, TypeTag.III)
    if t not in allowed or s not in allowed:
        raise ValueError("type_compose expects Type I, II or III inputs")
    if (t, s) in _COMPOSE:
        return _COMPOSE[(t, s)]
    if t == TypeTag.III and s == TypeTag.III:
        return TypeTag.UNTYPED
    return TypeTag.III


def positivity_check(M) -> bool:
    """True when A1 = A4 = 0, or A2 = A3 = 0, or every block determinant is positive."""
    B = _as_block(M)
    if B.A1.is_zero() and B.A4.is_zero():
        return True
    if B.A2.is_zero() and B.A3.is_zero():
        return True
    return all(d > 0 for d in B.dets())
