"""Primary matrices over Q(sqrt(D)), their eigendata, and root-of-unity tests.

Cusp shapes are points ``(1, tau_i)`` of the upper half plane.  A block
``A_j`` sitting in row-cusp ``r`` and column-cusp ``c`` must map the shape
vector of cusp ``c`` to a multiple of the shape vector of cusp ``r``:

    A_j (1, tau_c)^T = omega_j (1, tau_r)^T,   omega_j = a_j + b_j tau_c.

The blocks are laid out as A1 = (1,1), A2 = (1,2), A3 = (2,1), A4 = (2,2).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .blocktype import BlockMat
from .exactnum import FieldMismatch, QuadNum, as_quad, root_of_unity_order, sqrt_in_field
from .exactnum import rational_sqrt
from .linalg import CYCLOTOMIC, Matrix, det, disc2, inverse, trace


class RelationViolation(ValueError):
    """A block does not respect the cusp-shape relation."""


class PreconditionFailed(ValueError):
    pass


def _check_upper(tau: QuadNum) -> None:
    if not isinstance(tau, QuadNum) or tau.b <= 0:
        raise RelationViolation(f"cusp shape {tau} must have positive imaginary part")


def cusp_relation_check(A: Matrix, tau: QuadNum, tau_col: QuadNum | None = None) -> bool:
    """True iff tau*(a + b*tau_col) == c + d*tau_col for A = [[a, b], [c, d]].

    With a single shape this is the usual fixed-point relation tau(a+b tau) = c + d tau.
    """
    _check_upper(tau)
    tc = tau if tau_col is None else tau_col
    _check_upper(tc)
    (a, b), (c, d) = A.rows
    return tau * (a + b * tc) == c + d * tc


@dataclass(frozen=True)
class PrimaryMat:
    """A 2x2 matrix P over Q(sqrt(D)) with its conjugate partner Pbar.

    Pbar is the matrix acting on the right-hand side of the degree-three
    constraint.  It is the entrywise conjugate of P whenever both cusp
    shapes coincide (always true for matrices built with :meth:`from_matrix`).
    """

    P: Matrix
    Pbar: Matrix
    D: int

    @classmethod
    def from_matrix(cls, P: Matrix, D: int) -> PrimaryMat:
        Pq = P.map(lambda x: as_quad(x, D))
        return cls(Pq, Pq.map(lambda x: x.conj()), _field_of(Pq, D))

    def conj_matches(self) -> bool:
        return self.Pbar == self.P.map(lambda x: as_quad(x, self.D).conj())


def _field_of(P: Matrix, default: int) -> int:
    for x in P.entries():
        if isinstance(x, QuadNum) and x.b != 0:
            return x.D
    return default


def primary_matrix(M, tau1: QuadNum, tau2: QuadNum) -> PrimaryMat:
    """Primary matrix [[w1, w2], [w3, w4]] with w_j = a_j + b_j * tau_col(j)."""
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    _check_upper(tau1)
    _check_upper(tau2)
    if tau1.D != tau2.D:
        raise FieldMismatch(f"cusp shapes in different fields: {tau1.D} vs {tau2.D}")
    D = tau1.D
    layout = ((B.A1, tau1, tau1), (B.A2, tau1, tau2), (B.A3, tau2, tau1), (B.A4, tau2, tau2))
    omegas, partners = [], []
    for j, (A, t_row, t_col) in enumerate(layout, start=1):
        (a, b), (c, d) = A.rows
        if not cusp_relation_check(A, t_row, t_col):
            raise RelationViolation(f"block A{j} violates the cusp relation")
        omegas.append(as_quad(a + b * t_col, D))
        partners.append(as_quad(d - b * t_row, D))
    P = Matrix([omegas[:2], omegas[2:]])
    Pbar = Matrix([partners[:2], partners[2:]])
    return PrimaryMat(P, Pbar, D)


def _eig_shape(A: Matrix, D: int) -> QuadNum | None:
    """Shape tau with Im tau > 0 such that (1, tau) is an eigenvector of A, if one exists in Q(sqrt(D))."""
    (a, b), (c, d) = A.rows
    if b == 0:
        return None
    disc = disc2(A)
    if disc >= 0:
        return None
    k = rational_sqrt(disc / D)
    if k is None:
        return None
    # b tau^2 + (a - d) tau - c = 0
    re = (d - a) / (2 * b)
    im = k / (2 * abs(b))
    return QuadNum(re, im, D)


def _push(A: Matrix, tau: QuadNum) -> QuadNum:
    """Shape of A (1, tau)^T, normalised to first coordinate 1."""
    (a, b), (c, d) = A.rows
    return (c + d * tau) / (a + b * tau)


def infer_cusp_shapes(M, D: int) -> tuple[QuadNum, QuadNum]:
    """Cusp shapes in Q(sqrt(D)) compatible with every block of M.

    The first shape comes from the eigenvector of the first non-scalar block
    that determines it; when every block is scalar (or a scalar multiple of
    an anti-diagonal pairing) the default ``sqrt(D)`` is used.
    """
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    A1, A2, A3, A4 = B.blocks
    inv2 = det(A2) != 0
    inv3 = det(A3) != 0
    default = QuadNum(0, 1, D)
    tau1 = None
    if not A1.is_scalar():
        tau1 = _eig_shape(A1, D)
    elif inv2 and not A4.is_scalar():
        t4 = _eig_shape(A4, D)
        tau1 = _push(A2, t4) if t4 is not None else None
    elif inv2 and inv3 and not (A2 @ A3).is_scalar():
        tau1 = _eig_shape(A2 @ A3, D)
    if tau1 is None:
        tau1 = default
    if inv2:
        tau2 = _push(inverse(A2), tau1)
    elif inv3:
        tau2 = _push(A3, tau1)
    elif not A4.is_scalar():
        tau2 = _eig_shape(A4, D) or default
    else:
        tau2 = default
    return tau1, tau2


@dataclass(frozen=True)
class EigenData:
    trace: QuadNum
    det: QuadNum
    discriminant: QuadNum
    split: tuple[QuadNum, QuadNum] | None


def eigen2(P) -> EigenData:
    """Trace, determinant and (when it exists in the field) the eigen-split of a 2x2 matrix."""
    if isinstance(P, PrimaryMat):
        D, P = P.D, P.P
    else:
        D = _field_of(P, -1)
    t = as_quad(trace(P), D)
    dt = as_quad(det(P), D)
    disc = t * t - 4 * dt
    s = sqrt_in_field(disc)
    split = None
    if s is not None:
        split = ((t + s) / 2, (t - s) / 2)
    return EigenData(t, dt, disc, split)


def _divides_over_field(f: list[QuadNum], phi_coeffs: tuple[Fraction, ...]) -> bool:
    """Whether monic f (ascending QuadNum coefficients) divides a rational polynomial."""
    rem = [as_quad(c, f[0].D) for c in phi_coeffs]
    n = len(f) - 1
    while len(rem) > n:
        lead = rem[-1]
        shift = len(rem) - 1 - n
        for i, c in enumerate(f):
            rem[shift + i] = rem[shift + i] - lead * c
        rem.pop()
    return all(x.is_zero() for x in rem)


def quad_roots_of_unity(tr, dt) -> tuple[int, int] | None:
    """Orders of the two roots of x^2 - tr x + dt if both are roots of unity.

    Only orders with Euler phi at most 4 can occur for a quadratic over an
    imaginary quadratic field.  Roots inside the field are looked up in the
    field's roots of unity; a quadratic irreducible over the field must be
    a factor of one of the quartic cyclotomic polynomials.
    """
    D = next((x.D for x in (tr, dt) if isinstance(x, QuadNum) and x.b != 0), None)
    if D is None:
        t, d = Fraction(tr.a if isinstance(tr, QuadNum) else tr), Fraction(dt.a if isinstance(dt, QuadNum) else dt)
        r = rational_sqrt(t * t - 4 * d)
        if r is not None:
            roots = ((t + r) / 2, (t - r) / 2)
            orders = []
            for x in roots:
                if x == 1:
                    orders.append(1)
                elif x == -1:
                    orders.append(2)
                else:
                    return None
            return tuple(sorted(orders))
        for m in (3, 4, 6):
            if CYCLOTOMIC[m].coeffs == (d, -t, Fraction(1)):
                return (m, m)
        return None
    t, d = as_quad(tr, D), as_quad(dt, D)
    disc = t * t - 4 * d
    s = sqrt_in_field(disc)
    if s is not None:
        orders = []
        for lam in ((t + s) / 2, (t - s) / 2):
            o = root_of_unity_order(lam)
            if o is None:
                return None
            orders.append(o)
        return tuple(sorted(orders))
    f = [d, -t, QuadNum(1, 0, D)]
    for m in (5, 8, 10, 12):
        if _divides_over_field(f, CYCLOTOMIC[m].coeffs):
            return (m, m)
    return None


class Verdict(Enum):
    TRACE_IOTA_ZERO = "TraceIotaZero"
    ROOTS_OF_UNITY = "RootsOfUnity"
    VIOLATION = "Violation"
    NOT_APPLICABLE = "NotApplicable"


def aut_necessary_check(P) -> Verdict:
    """Necessary condition for a primary matrix of a genuine automorphism.

    Applies when the (1,2)-entry is nonzero and the eigenvalues are
    distinct and nonzero: then either tr(P iota) = 0 or both eigenvalues
    are roots of unity.
    """
    if isinstance(P, PrimaryMat):
        D, Pm = P.D, P.P
    else:
        Pm = P
        D = _field_of(P, -1)
    e = eigen2(PrimaryMat.from_matrix(Pm, D))
    if Pm[0, 1] == 0 or e.det.is_zero() or e.discriminant.is_zero():
        return Verdict.NOT_APPLICABLE
    if Pm[0, 0] - Pm[1, 1] == 0:
        return Verdict.TRACE_IOTA_ZERO
    if quad_roots_of_unity(e.trace, e.det) is not None:
        return Verdict.ROOTS_OF_UNITY
    return Verdict.VIOLATION


def primary_power_property(M, tau1: QuadNum, tau2: QuadNum, n: int) -> bool:
    """Whether the primary matrix of M^n is the n-th power of that of M.

    Requires the blocks A2, A3, A4 to commute with A1.
    """
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    for j, A in ((2, B.A2), (3, B.A3), (4, B.A4)):
        if A @ B.A1 != B.A1 @ A:
            raise PreconditionFailed(f"block A{j} does not commute with A1")
    P = primary_matrix(B, tau1, tau2).P
    Pn = primary_matrix(BlockMat(B.whole**n), tau1, tau2).P
    return Pn == P**n
