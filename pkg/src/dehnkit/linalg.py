"""Exact small-matrix algebra over Q and Q(sqrt(D)).

A single immutable :class:`Matrix` type covers both the 2x2 blocks and
the 4x4 automorphism matrices.  Entries are Fractions, or QuadNums for
matrices living over a quadratic field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import lcm
from typing import Iterable, Sequence

from .exactnum import QuadNum, fmt_rational, parse_rational, rational_sqrt


class SingularMatrix(ZeroDivisionError):
    pass


class SingularBlock(ZeroDivisionError):
    pass


def _scalar(x):
    if isinstance(x, QuadNum):
        return x
    if isinstance(x, (str, int)):
        return parse_rational(x)
    return Fraction(x) if not isinstance(x, Fraction) else x


def _is_zero(x) -> bool:
    return x == 0


class Matrix:
    """Immutable square matrix with exact entries."""

    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(_scalar(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _trusted(cls, rows: tuple) -> Matrix:
        """Build from a tuple of tuples of already-valid entries."""
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "n", len(rows))
        object.__setattr__(m, "_hash", None)
        return m

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> Matrix:
        return cls([[Fraction(0)] * n for _ in range(n)])

    @classmethod
    def diag(cls, *vals) -> Matrix:
        n = len(vals)
        return cls([[vals[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, c, n: int) -> Matrix:
        return cls.diag(*([c] * n))

    # -- access ---------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def __iter__(self):
        return iter(self.rows)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: Matrix) -> Matrix:
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        c = _scalar(other)
        return Matrix([[a * c for a in r] for r in self.rows])

    def __rmul__(self, other):
        c = _scalar(other)
        return Matrix([[c * a for a in r] for r in self.rows])

    def __truediv__(self, other):
        c = _scalar(other)
        return Matrix([[a / c for a in r] for r in self.rows])

    def __matmul__(self, other: Matrix) -> Matrix:
        return self.matmul(other)

    def matmul(self, other: Matrix) -> Matrix:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self._all_rational() and other._all_rational():
            return self._rational_matmul(other)
        cols = tuple(zip(*other.rows))
        return Matrix._trusted(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))

    def _all_rational(self) -> bool:
        return all(type(x) is Fraction for r in self.rows for x in r)

    def _scaled_ints(self) -> tuple[list[list[int]], int]:
        den = lcm(*(x.denominator for r in self.rows for x in r))
        return [[x.numerator * (den // x.denominator) for x in r] for r in self.rows], den

    def _rational_matmul(self, other: Matrix) -> Matrix:
        # integer product over a common denominator; much cheaper than Fraction sums
        A, da = self._scaled_ints()
        B, db = other._scaled_ints()
        den = da * db
        cols = list(zip(*B))
        return Matrix._trusted(
            tuple(tuple(Fraction(sum(a * b for a, b in zip(r, c)), den) for c in cols) for r in A)
        )

    def __pow__(self, k: int) -> Matrix:
        if k < 0:
            return inverse(self) ** (-k)
        result = Matrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result.matmul(base)
            base = base.matmul(base)
            k >>= 1
        return result

    def transpose(self) -> Matrix:
        return Matrix(list(zip(*self.rows)))

    def map(self, f) -> Matrix:
        return Matrix([[f(a) for a in r] for r in self.rows])

    def is_zero(self) -> bool:
        return all(_is_zero(a) for r in self.rows for a in r)

    def is_scalar(self) -> bool:
        c = self.rows[0][0]
        return all((a == c) if i == j else _is_zero(a) for i, r in enumerate(self.rows) for j, a in enumerate(r))

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.rows)
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self) -> tuple:
        """Lexicographic key on (numerator, denominator) of each rational entry."""
        return tuple((Fraction(x).numerator, Fraction(x).denominator) for x in self.entries())

    def __repr__(self) -> str:
        return "Matrix(" + str([[str(a) for a in r] for r in self.rows]) + ")"

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, QuadNum) else fmt_rational(x)

        return {"rows": [[enc(a) for a in r] for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> Matrix:
        if isinstance(obj, dict):
            obj = obj.get("rows")
        if not isinstance(obj, list) or not obj:
            raise ValueError("matrix JSON must be {'rows': [[...], ...]}")

        def dec(x):
            return QuadNum.from_json(x) if isinstance(x, dict) else parse_rational(x)

        return cls([[dec(a) for a in r] for r in obj])


Mat2 = Matrix
Mat4 = Matrix


def M2(a, b, c, d) -> Matrix:
    return Matrix([[a, b], [c, d]])


I2 = Matrix.identity(2)
I4 = Matrix.identity(4)
IOTA2 = Matrix.diag(1, -1)
IOTA4 = Matrix.diag(1, 1, -1, -1)


# -- determinants, traces, inverses -----------------------------------------


def trace(A: Matrix):
    return sum((A.rows[i][i] for i in range(A.n)), Fraction(0))


def det(A: Matrix):
    n = A.n
    if n == 1:
        return A.rows[0][0]
    if n == 2:
        (a, b), (c, d) = A.rows
        return a * d - b * c
    # exact elimination; entries stay in the field
    rows = [list(r) for r in A.rows]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(rows[r][col])), None)
        if piv is None:
            return Fraction(0) * rows[0][0]
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        p = rows[col][col]
        result = result * p
        for r in range(col + 1, n):
            f = rows[r][col] / p
            if not _is_zero(f):
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return result * sign


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SingularMatrix."""
    n = A.n
    if n == 2:
        d = det(A)
        if _is_zero(d):
            raise SingularMatrix("matrix is singular")
        (a, b), (c, e) = A.rows
        return Matrix([[e / d, -b / d], [-c / d, a / d]])
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(aug[r][col])), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and not _is_zero(aug[r][col]):
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return Matrix([r[n:] for r in aug])


def adjugate2(A: Matrix) -> Matrix:
    (a, b), (c, d) = A.rows
    return Matrix([[d, -b], [-c, a]])


def disc2(A: Matrix):
    """Discriminant (tr A)^2 - 4 det A of a 2x2 matrix."""
    t = trace(A)
    return t * t - 4 * det(A)


# -- block structure ----------------------------------------------------------


def blocks(M: Matrix) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Split a 4x4 matrix into its 2x2 blocks (A1, A2, A3, A4), row-major."""
    if M.n != 4:
        raise ValueError("expected a 4x4 matrix")
    r = M.rows
    A1 = Matrix([r[0][:2], r[1][:2]])
    A2 = Matrix([r[0][2:], r[1][2:]])
    A3 = Matrix([r[2][:2], r[3][:2]])
    A4 = Matrix([r[2][2:], r[3][2:]])
    return A1, A2, A3, A4


def from_blocks(A1: Matrix, A2: Matrix, A3: Matrix, A4: Matrix) -> Matrix:
    rows = [list(A1.rows[i]) + list(A2.rows[i]) for i in range(2)]
    rows += [list(A3.rows[i]) + list(A4.rows[i]) for i in range(2)]
    return Matrix(rows)


def direct_sum(A1: Matrix, A4: Matrix) -> Matrix:
    """Block diagonal matrix A1 (+) A4."""
    Z = Matrix.zero(2)
    return from_blocks(A1, Z, Z, A4)


def anti_sum(A2: Matrix, A3: Matrix) -> Matrix:
    """Block anti-diagonal matrix [[0, A2], [A3, 0]]."""
    Z = Matrix.zero(2)
    return from_blocks(Z, A2, A3, Z)


def block_inverse(M: Matrix) -> Matrix:
    """Inverse of a 4x4 matrix through the Schur complement of its A1 block."""
    A1, A2, A3, A4 = blocks(M)
    if _is_zero(det(A1)):
        raise SingularBlock("upper-left block is singular")
    A1i = inverse(A1)
    S = A4 - A3 @ A1i @ A2
    if _is_zero(det(S)):
        raise SingularMatrix("matrix is singular")
    Si = inverse(S)
    top_left = A1i + A1i @ A2 @ Si @ A3 @ A1i
    top_right = -(A1i @ A2 @ Si)
    bottom_left = -(Si @ A3 @ A1i)
    return from_blocks(top_left, top_right, bottom_left, Si)


# -- polynomials --------------------------------------------------------------


class Poly:
    """Polynomial with rational coefficients stored in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        c = [parse_rational(x) if not isinstance(x, Fraction) else x for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def from_roots_desc(cls, *desc) -> Poly:
        """Build from coefficients given in descending degree (leading first)."""
        return cls(list(reversed(desc)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def monic(self) -> Poly:
        return Poly([c / self.lead() for c in self.coeffs])

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 1)
        lead = other.coeffs[-1]
        while len(rem) >= len(other.coeffs) and rem:
            shift = len(rem) - len(other.coeffs)
            f = rem[-1] / lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def divides(self, other: Poly) -> bool:
        return not (other % self).coeffs

    def __call__(self, x):
        """Evaluate at a scalar or a square matrix (Horner)."""
        if isinstance(x, Matrix):
            acc = Matrix.zero(x.n)
            ident = Matrix.identity(x.n)
            for c in reversed(self.coeffs):
                acc = acc @ x + ident * c
            return acc
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{fmt_rational(mag)}*{mono}"
            else:
                body = fmt_rational(mag)
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += sign + body
        return out

    def to_json(self) -> list[str]:
        return [fmt_rational(c) for c in self.coeffs]


def poly_from_string(text: str) -> Poly:
    """Parse strings like ``"x^2-1/2*x+1/4"`` produced by ``str(Poly)``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, Fraction] = {}
    i = 0
    import re

    term_re = re.compile(r"([+-])(\d+(?:/\d+)?)?(\*)?(x(?:\^(\d+))?)?")
    while i < len(s):
        m = term_re.match(s, i)
        if m is None or m.end() == i or (m.group(2) is None and m.group(4) is None):
            raise ValueError(f"cannot parse polynomial {text!r}")
        c = parse_rational(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            c = -c
        if m.group(4):
            k = int(m.group(5)) if m.group(5) else 1
        else:
            k = 0
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
        i = m.end()
    deg = max(coeffs)
    return Poly([coeffs.get(k, Fraction(0)) for k in range(deg + 1)])


def char_poly(A: Matrix) -> Poly:
    """Characteristic polynomial det(xI - A) (Faddeev-LeVerrier, exact)."""
    n = A.n
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = Matrix.zero(n)
    ident = Matrix.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        Mk = A @ Mk + ident * c
        c = -trace(A @ Mk) / k
        coeffs[n - k] = c
    return Poly(coeffs)


def _solve_in_span(vectors: list[list], target: list) -> list | None:
    """Coefficients expressing ``target`` in the span of ``vectors``, or None."""
    m = len(vectors)
    if m == 0:
        return [] if all(_is_zero(t) for t in target) else None
    rows = [[vectors[j][i] for j in range(m)] + [target[i]] for i in range(len(target))]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((k for k in range(r, len(rows)) if not _is_zero(rows[k][col])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not _is_zero(rows[k][col]):
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
    if any(not _is_zero(rows[k][m]) for k in range(r, len(rows))):
        return None
    sol = [Fraction(0)] * m
    for k, col in enumerate(pivots):
        sol[col] = rows[k][m]
    return sol


@lru_cache(maxsize=8192)
def min_poly(A: Matrix) -> Poly:
    """Minimal polynomial via the first linear dependency among I, A, A^2, ..."""
    if A.n == 2 and A._all_rational():
        (a, b), (c, d) = A.rows
        if b == 0 and c == 0 and a == d:
            return Poly([-Fraction(a), Fraction(1)])
        return Poly([Fraction(a * d - b * c), -Fraction(a + d), Fraction(1)])
    powers = [Matrix.identity(A.n)]
    while True:
        nxt = powers[-1] @ A
        sol = _solve_in_span([list(P.entries()) for P in powers], list(nxt.entries()))
        if sol is not None:
            return Poly([-c for c in sol] + [Fraction(1)])
        powers.append(nxt)


# Cyclotomic polynomials of degree <= 4, keyed by order.
CYCLOTOMIC: dict[int, Poly] = {
    1: Poly([-1, 1]),
    2: Poly([1, 1]),
    3: Poly([1, 1, 1]),
    4: Poly([1, 0, 1]),
    5: Poly([1, 1, 1, 1, 1]),
    6: Poly([1, -1, 1]),
    8: Poly([1, 0, 0, 0, 1]),
    10: Poly([1, -1, 1, -1, 1]),
    12: Poly([1, 0, -1, 0, 1]),
}


def cyclotomic_factorization(p: Poly) -> list[int] | None:
    """Orders of the distinct cyclotomic factors of ``p`` if it is a squarefree product of them."""
    rest = p.monic()
    orders = []
    for order, phi in CYCLOTOMIC.items():
        q, r = divmod(rest, phi)
        if not r.coeffs:
            orders.append(order)
            rest = q
    if rest.degree != 0:
        return None
    return orders


def finite_order(A: Matrix) -> int | None:
    """Exact multiplicative order of A, or None when A has infinite order.

    A has finite order iff its characteristic polynomial is a product of
    cyclotomic factors and their squarefree product already kills A.
    """
    if not A._all_rational():
        orders = cyclotomic_factorization(min_poly(A))
        return None if orders is None else reduce(lcm, orders, 1)
    # integer arithmetic on N = den * A keeps this cheap
    N, den = A._scaled_ints()
    n = A.n
    rest = []
    for i, c in enumerate(_int_char_poly(N)):
        q, r = divmod(c, den ** (n - i))
        if r:
            return None
        rest.append(q)
    orders, radical = [], [1]
    for order, phi in CYCLOTOMIC.items():
        ph = [int(c) for c in phi.coeffs]
        hit = False
        while len(rest) >= len(ph):
            q = _int_divide_monic(rest, ph)
            if q is None:
                break
            rest, hit = q, True
        if hit:
            orders.append(order)
            radical = _int_poly_mul(radical, ph)
    if len(rest) != 1 or not _int_kills(N, den, radical):
        return None
    return reduce(lcm, orders, 1)


def _int_divide_monic(f: list[int], g: list[int]) -> list[int] | None:
    """Exact quotient f / g for integer coefficient lists (constant first, g monic), else None."""
    f = list(f)
    dg = len(g) - 1
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c:
            q[k - dg] = c
            for j in range(dg + 1):
                f[k - dg + j] -= c * g[j]
    return q if not any(f[:dg]) else None


def _int_poly_mul(f: list[int], g: list[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def _int_mm(X: list[list[int]], Y: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in X]


def _int_char_poly(N: list[list[int]]) -> list[int]:
    """Coefficients (constant first) of det(xI - N); Faddeev-LeVerrier divisions are exact over Z."""
    n = len(N)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        Mk = _int_mm(N, Mk)
        for i in range(n):
            Mk[i][i] += c
        NM = _int_mm(N, Mk)
        c = -sum(NM[i][i] for i in range(n)) // k
        coeffs[n - k] = c
    return coeffs


def _int_kills(N: list[list[int]], den: int, coeffs: list[int]) -> bool:
    """Whether sum c_i (N/den)^i vanishes, tested as sum c_i N^i den^(m-i) = 0."""
    n, m = len(N), len(coeffs) - 1
    acc = [[0] * n for _ in range(n)]
    for i in range(m, -1, -1):
        acc = _int_mm(acc, N)
        scale = coeffs[i] * den ** (m - i)
        for j in range(n):
            acc[j][j] += scale
    return all(x == 0 for r in acc for x in r)


def companion(p: Poly) -> Matrix:
    """Companion matrix with ones on the subdiagonal and -a_i in the last column."""
    p = p.monic()
    n = p.degree
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = Fraction(1)
    for i in range(n):
        rows[i][n - 1] = -p.coeffs[i]
    return Matrix(rows)


@dataclass(frozen=True)
class EvenQuarticFactorization:
    """Factorization report for x^4 + a x^2 + b.

    ``kind`` is ``"pm"`` for (x^2+mx+n)(x^2-mx+n), ``"split"`` for
    (x^2+m)(x^2+n), or ``"irreducible"``.
    """

    kind: str
    m: Fraction | None = None
    n: Fraction | None = None

    def factors(self) -> tuple[Poly, ...]:
        if self.kind == "pm":
            return Poly([self.n, self.m, 1]), Poly([self.n, -self.m, 1])
        if self.kind == "split":
            return Poly([self.m, 0, 1]), Poly([self.n, 0, 1])
        return ()

    def __str__(self) -> str:
        if self.kind == "irreducible":
            return "irreducible"
        return "".join(f"({f})" for f in self.factors())


def factor_even_quartic(a, b) -> EvenQuarticFactorization:
    """Split x^4 + a x^2 + b over Q into quadratics when possible."""
    a, b = parse_rational(a), parse_rational(b)
    # (x^2+mx+n)(x^2-mx+n) = x^4 + (2n - m^2) x^2 + n^2 with m != 0
    r = rational_sqrt(b)
    if r is not None:
        for n in sorted({r, -r}, reverse=True):
            m = rational_sqrt(2 * n - a)
            if m:
                return EvenQuarticFactorization("pm", m, n)
    # (x^2+m)(x^2+n): m, n roots of y^2 - a y + b
    s = rational_sqrt(a * a - 4 * b)
    if s is not None:
        m, n = (a + s) / 2, (a - s) / 2
        return EvenQuarticFactorization("split", m, n)
    return EvenQuarticFactorization("irreducible")
