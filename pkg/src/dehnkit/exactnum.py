"""Exact rationals and imaginary quadratic fields Q(sqrt(D)).

Rationals are plain :class:`fractions.Fraction` values.  :class:`QuadNum`
represents ``a + b*sqrt(D)`` with rational ``a, b`` and a square-free
negative integer ``D``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Fraction
Scalar = Union[int, Fraction, "QuadNum"]


class FieldMismatch(ValueError):
    """Raised when two quadratic numbers from different fields are combined."""


class MalformedRational(ValueError):
    pass


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction (ints and Fractions pass through)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedRational(f"malformed rational: {text!r}")
    m = _RAT_RE.match(text)
    if m is None:
        raise MalformedRational(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise MalformedRational(f"malformed rational: {text!r} (zero denominator)")
    return Fraction(num, den)


def fmt_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=1024)
def _squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(k, s)`` with ``n = k*k*s`` and ``s`` square-free (sign kept in ``s``)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    k, s = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1 if p == 2 else 2
    s *= n
    return k, sign * s


def squarefree_part(x: int | Fraction) -> int:
    """Square-free integer s with x = r^2 * s for some rational r (0 for x = 0)."""
    x = Fraction(x)
    if x == 0:
        return 0
    _, s = _squarefree_decompose(x.numerator * x.denominator)
    return s


def rational_sqrt(x: Fraction | int) -> Fraction | None:
    """Nonnegative rational square root of x, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


_ZERO = Fraction(0)


class QuadNum:
    """Element ``a + b*sqrt(D)`` of an imaginary quadratic field.

    ``D`` is reduced to its square-free part on construction, so
    ``QuadNum(0, 1, -8) == QuadNum(0, 2, -2)``.  Values with ``b == 0``
    are rational and combine with any field.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a: int | Fraction | str = 0, b: int | Fraction | str = 0, D: int = -1):
        a = parse_rational(a)
        b = parse_rational(b)
        D = int(D)
        if D >= 0:
            raise ValueError(f"D must be negative, got {D}")
        k, s = _squarefree_decompose(D)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b * k)
        object.__setattr__(self, "D", s)

    def __setattr__(self, name, value):
        raise AttributeError("QuadNum is immutable")

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, D: int) -> QuadNum:
        # trusted fast path: a, b already Fractions and D already square-free
        x = object.__new__(cls)
        object.__setattr__(x, "a", a)
        object.__setattr__(x, "b", b)
        object.__setattr__(x, "D", D)
        return x

    @classmethod
    def sqrt(cls, D: int) -> QuadNum:
        """The element sqrt(D) itself (D negative, not necessarily square-free)."""
        return cls(0, 1, D)

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> QuadNum | None:
        if isinstance(other, QuadNum):
            if other.D != self.D and other.b != 0 and self.b != 0:
                raise FieldMismatch(f"cannot combine Q(sqrt({self.D})) with Q(sqrt({other.D}))")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadNum._make(Fraction(other), _ZERO, self.D)
        return None

    def _field(self, other: QuadNum) -> int:
        return self.D if self.b != 0 else other.D

    def with_field(self, D: int) -> QuadNum:
        """Re-home a rational value into Q(sqrt(D)); no-op for matching fields."""
        if self.b != 0 and _squarefree_decompose(D)[1] != self.D:
            raise FieldMismatch(f"{self} does not lie in Q(sqrt({D}))")
        if self.b == 0:
            return QuadNum(self.a, 0, D)
        return self

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum._make(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum._make(-self.a, -self.b, self.D)

    def __pos__(self) -> QuadNum:
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum._make(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        D = self._field(o)
        return QuadNum._make(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(D))")
        return QuadNum._make(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> QuadNum:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadNum(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- field structure ----------------------------------------------------
    def conj(self) -> QuadNum:
        return QuadNum._make(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_rational(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- comparison / hashing -----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, QuadNum):
            return self.a == other.a and self.b == other.b and (self.b == 0 or self.D == other.D)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __repr__(self) -> str:
        return f"QuadNum({fmt_rational(self.a)!r}, {fmt_rational(self.b)!r}, {self.D})"

    def __str__(self) -> str:
        if self.b == 0:
            return fmt_rational(self.a)
        root = f"sqrt({self.D})"
        bpart = root if self.b == 1 else ("-" + root if self.b == -1 else f"{fmt_rational(self.b)}*{root}")
        if self.a == 0:
            return bpart
        sign = "" if bpart.startswith("-") else "+"
        return f"{fmt_rational(self.a)}{sign}{bpart}"

    def to_json(self) -> dict:
        return {"a": fmt_rational(self.a), "b": fmt_rational(self.b), "D": self.D}

    @classmethod
    def from_json(cls, obj: dict) -> QuadNum:
        try:
            return cls(parse_rational(obj["a"]), parse_rational(obj["b"]), int(obj["D"]))
        except (KeyError, TypeError) as exc:
            raise MalformedRational(f"malformed quadratic number: {obj!r}") from exc


def as_quad(x: Scalar, D: int) -> QuadNum:
    """Lift a rational or quadratic number into Q(sqrt(D))."""
    if isinstance(x, QuadNum):
        return x.with_field(D)
    return QuadNum(x, 0, D)


def conj(x: QuadNum) -> QuadNum:
    return x.conj()


def norm(x: QuadNum) -> Fraction:
    return x.norm()


def sqrt_in_field(x: QuadNum) -> QuadNum | None:
    """Square root of ``x`` inside its own field, or None.

    Solves ``u^2 + v^2 D = a`` and ``2uv = b`` exactly.  The returned root
    has ``b > 0``, or ``b == 0`` and ``a >= 0``.
    """
    a, b, D = x.a, x.b, x.D
    if b == 0:
        r = rational_sqrt(a)
        if r is not None:
            return QuadNum(r, 0, D)
        r = rational_sqrt(a / D)
        if r is not None:
            return QuadNum(0, r, D)
        return None
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    # u^2 = (a + n)/2 is the only nonnegative choice since n > |a|.
    u = rational_sqrt((a + n) / 2)
    if u is None or u == 0:
        return None
    v = b / (2 * u)
    if v < 0:
        u, v = -u, -v
    return QuadNum(u, v, D)


def roots_of_unity_in_field(D: int) -> list[tuple[QuadNum, int]]:
    """All roots of unity in Q(sqrt(D)) paired with their multiplicative orders."""
    D = _squarefree_decompose(D)[1]
    if D >= 0:
        raise ValueError("D must be negative")
    half = Fraction(1, 2)
    out = [(QuadNum(1, 0, D), 1), (QuadNum(-1, 0, D), 2)]
    if D == -1:
        out += [(QuadNum(0, 1, D), 4), (QuadNum(0, -1, D), 4)]
    elif D == -3:
        out += [
            (QuadNum(half, half, D), 6),
            (QuadNum(half, -half, D), 6),
            (QuadNum(-half, half, D), 3),
            (QuadNum(-half, -half, D), 3),
        ]
    return out


def root_of_unity_order(x: QuadNum) -> int | None:
    """Multiplicative order of ``x`` if it is a root of unity in its field."""
    for u, order in roots_of_unity_in_field(x.D):
        if u == x:
            return order
    return None


_TAU_RE = re.compile(
    r"^\s*(?:(?P<a>[+-]?\d+(?:/\d+)?)\s*(?=[+-]))?"
    r"(?P<sign>[+-])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(?P<D>-\d+)\s*\)\s*$"
)


def parse_quad(text: str) -> QuadNum:
    """Parse ``"sqrt(D)"``, ``"c/d*sqrt(D)"`` or ``"a/b+c/d*sqrt(D)"``; plain rationals need a field."""
    m = _TAU_RE.match(text)
    if m is None:
        raise MalformedRational(f"malformed quadratic number: {text!r}")
    a = parse_rational(m.group("a")) if m.group("a") else Fraction(0)
    b = parse_rational(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    D = int(m.group("D"))
    if D >= 0:
        raise MalformedRational(f"sqrt argument must be negative in {text!r}")
    return QuadNum(a, b, D)
