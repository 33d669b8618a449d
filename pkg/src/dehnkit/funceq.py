"""Homogeneous solutions of the functional equation Theta(P U) = Pbar Theta(U).

``Theta = (Theta_1, Theta_2)`` is a pair of binary forms of one degree ``n``
with coefficients in Q(sqrt(D)).  Forms are stored as coefficient lists
indexed by the exponent of ``u1``: ``c[i]`` multiplies ``u1^i u2^(n-i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .exactnum import QuadNum, as_quad, root_of_unity_order, sqrt_in_field
from .linalg import Matrix
from .spectral import PrimaryMat

DEFAULT_DEGREE_CAP = 15


class DegenerateEigen(ValueError):
    pass


class ZeroOmega2(ValueError):
    pass


class Irreducible(ValueError):
    pass


class StructureViolation(RuntimeError):
    pass


# -- binary forms -----------------------------------------------------------------------


@dataclass(frozen=True)
class HomPoly:
    degree: int
    coeffs: tuple[QuadNum, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("a degree-n form needs n+1 coefficients")

    @classmethod
    def zero(cls, n: int, D: int) -> HomPoly:
        return cls(n, tuple(QuadNum(0, 0, D) for _ in range(n + 1)))

    @classmethod
    def monomial(cls, n: int, i: int, D: int, c=1) -> HomPoly:
        return cls(n, tuple(as_quad(c if j == i else 0, D) for j in range(n + 1)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if not c.is_zero()]

    def __add__(self, other: HomPoly) -> HomPoly:
        return HomPoly(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: HomPoly) -> HomPoly:
        return HomPoly(self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> HomPoly:
        return HomPoly(self.degree, tuple(x * c for x in self.coeffs))

    def compose(self, P: Matrix) -> HomPoly:
        """The form U -> self(P U)."""
        n = self.degree
        (p11, p12), (p21, p22) = P.rows
        D = self.coeffs[0].D
        first = _linear_powers(as_quad(p11, D), as_quad(p12, D), n)
        second = _linear_powers(as_quad(p21, D), as_quad(p22, D), n)
        out = [QuadNum(0, 0, D)] * (n + 1)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            prod = _form_mul(first[i], second[n - i])
            out = [o + c * x for o, x in zip(out, prod)]
        return HomPoly(n, tuple(out))

    def d_u1(self) -> list[QuadNum]:
        """Coefficients (by u1 exponent) of the partial derivative in u1."""
        return [self.coeffs[i] * i for i in range(1, self.degree + 1)]

    def d_u2(self) -> list[QuadNum]:
        return [self.coeffs[i] * (self.degree - i) for i in range(self.degree)]

    def evaluate(self, u1, u2):
        return sum((c * (u1**i) * (u2 ** (self.degree - i)) for i, c in enumerate(self.coeffs)), QuadNum(0, 0, self.coeffs[0].D))

    def to_json(self) -> dict:
        # listed from the highest power of u1 down
        return {"degree": self.degree, "coeffs": [c.to_json() for c in reversed(self.coeffs)]}

    def __str__(self) -> str:
        terms = []
        for i in reversed(range(self.degree + 1)):
            c = self.coeffs[i]
            if not c.is_zero():
                terms.append(f"({c})*u1^{i}*u2^{self.degree - i}")
        return " + ".join(terms) if terms else "0"


def _form_mul(f: list[QuadNum], g: list[QuadNum]) -> list[QuadNum]:
    D = f[0].D
    out = [QuadNum(0, 0, D)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return out


def _linear_powers(alpha: QuadNum, beta: QuadNum, n: int) -> list[list[QuadNum]]:
    """(alpha u1 + beta u2)^m for m = 0..n, each indexed by the exponent of u1."""
    return [[alpha**i * beta ** (m - i) * comb(m, i) for i in range(m + 1)] for m in range(n + 1)]


ThetaPair = tuple[HomPoly, HomPoly]


def apply_constraint(P: PrimaryMat, theta: ThetaPair) -> ThetaPair:
    """Residual (Theta_i(PU) - (Pbar Theta)_i) for i = 1, 2."""
    t1, t2 = theta
    (b11, b12), (b21, b22) = P.Pbar.rows
    r1 = t1.compose(P.P) - (t1.scale(b11) + t2.scale(b12))
    r2 = t2.compose(P.P) - (t1.scale(b21) + t2.scale(b22))
    return r1, r2


def satisfies(P: PrimaryMat, theta: ThetaPair) -> bool:
    r1, r2 = apply_constraint(P, theta)
    return r1.is_zero() and r2.is_zero()


# -- exact linear algebra over Q(sqrt(D)) -------------------------------------------------


def rref(rows: list[list[QuadNum]], ncols: int) -> tuple[list[list[QuadNum]], list[int]]:
    """Reduced row echelon form; pivots are the first nonzero entry in column order."""
    M = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if not M[i][c].is_zero()), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(rows: list[list[QuadNum]], ncols: int, D: int) -> list[list[QuadNum]]:
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [QuadNum(0, 0, D)] * ncols
        v[f] = QuadNum(1, 0, D)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def _to_vec(theta: ThetaPair) -> list[QuadNum]:
    return list(theta[0].coeffs) + list(theta[1].coeffs)


def _from_vec(v: list[QuadNum], n: int) -> ThetaPair:
    return HomPoly(n, tuple(v[: n + 1])), HomPoly(n, tuple(v[n + 1 :]))


def _as_primary(P, D: int | None) -> PrimaryMat:
    if isinstance(P, PrimaryMat):
        return P
    return PrimaryMat.from_matrix(P, -1 if D is None else D)


def constraint_kernel(
    P, n: int, D: int | None = None, allow_even: bool = False, cap: int = DEFAULT_DEGREE_CAP
) -> list[ThetaPair]:
    """Echelonized basis of all (Theta_1, Theta_2) of degree n solving the equation."""
    Pm = _as_primary(P, D)
    if n < 1:
        raise ValueError("degree must be positive")
    if n > cap:
        raise ValueError(f"degree {n} exceeds the cap {cap}")
    if n % 2 == 0 and not allow_even:
        raise ValueError("even degrees need allow_even=True")
    D = Pm.D
    size = 2 * (n + 1)
    cols = []
    for j in range(size):
        e = [QuadNum(0, 0, D)] * size
        e[j] = QuadNum(1, 0, D)
        cols.append(_to_vec(apply_constraint(Pm, _from_vec(e, n))))
    rows = [[cols[j][i] for j in range(size)] for i in range(size)]
    basis = nullspace(rows, size, D)
    return _echelon_basis([_from_vec(v, n) for v in basis], n, D)


def _echelon_basis(thetas: list[ThetaPair], n: int, D: int) -> list[ThetaPair]:
    if not thetas:
        return []
    R, _ = rref([_to_vec(t) for t in thetas], 2 * (n + 1))
    return [_from_vec(r, n) for r in R]


# -- eigenbasis -------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenTransform:
    P: PrimaryMat
    S_lambda: Matrix
    S_zeta: Matrix
    lambdas: tuple[QuadNum, QuadNum]
    zetas: tuple[QuadNum, QuadNum]

    def ratio(self) -> QuadNum:
        return self.lambdas[0] / self.lambdas[1]

    def to_json(self) -> dict:
        return {
            "S_lambda": self.S_lambda.to_json()["rows"],
            "S_zeta": self.S_zeta.to_json()["rows"],
            "lambdas": [x.to_json() for x in self.lambdas],
            "zetas": [x.to_json() for x in self.zetas],
        }


def _split(M: Matrix, D: int) -> tuple[QuadNum, QuadNum]:
    (a, b), (c, d) = M.rows
    t = as_quad(a + d, D)
    disc = t * t - (a * d - b * c) * 4
    s = sqrt_in_field(as_quad(disc, D))
    if s is None:
        raise Irreducible("eigenvalues do not lie in the field")
    if s.is_zero():
        raise DegenerateEigen("repeated eigenvalue")
    return (t + s) / 2, (t - s) / 2


def eigen_transform(P, D: int | None = None) -> EigenTransform:
    Pm = _as_primary(P, D)
    D = Pm.D
    (w1, w2), _ = Pm.P.rows
    w1, w2 = as_quad(w1, D), as_quad(w2, D)
    if w2.is_zero():
        raise ZeroOmega2("the (1,2) entry of P vanishes")
    l1, l2 = _split(Pm.P, D)
    if Pm.conj_matches():
        z1, z2 = l1.conj(), l2.conj()
    else:
        z1, z2 = _split(Pm.Pbar, D)
    v1, v2 = w1.conj(), w2.conj()
    S_l = Matrix([[w2, w2], [l1 - w1, l2 - w1]])
    S_z = Matrix([[v2, v2], [z1 - v1, z2 - v1]])
    return EigenTransform(Pm, S_l, S_z, (l1, l2), (z1, z2))


def _inv2(M: Matrix) -> Matrix:
    (a, b), (c, d) = M.rows
    det = a * d - b * c
    return Matrix([[d / det, -b / det], [-c / det, a / det]])


def to_eigenbasis(theta: ThetaPair, tr: EigenTransform) -> ThetaPair:
    """(g~_1, g~_2): g = S_zeta^-1 Theta, then g~(U~) = g(S_lambda U~)."""
    (a, b), (c, d) = _inv2(tr.S_zeta).rows
    t1, t2 = theta
    g1 = t1.scale(a) + t2.scale(b)
    g2 = t1.scale(c) + t2.scale(d)
    return g1.compose(tr.S_lambda), g2.compose(tr.S_lambda)


@dataclass(frozen=True)
class FormStructure:
    """Shape of one eigenbasis form: u1^k u2^l times a polynomial in u1^d, u2^d."""

    kind: str  # "zero", "monomial" or "product"
    k: int | None = None
    l: int | None = None
    d: int | None = None
    factors: int | None = None
    inner: tuple[QuadNum, ...] = ()

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind != "zero":
            out.update({"k": self.k, "l": self.l})
        if self.kind == "product":
            out.update({"d": self.d, "factors": self.factors, "inner": [x.to_json() for x in self.inner]})
        return out


def _structure_of(g: HomPoly, lam: tuple[QuadNum, QuadNum], zeta: QuadNum, d: int | None) -> FormStructure:
    sup = g.support()
    if not sup:
        return FormStructure("zero")
    n = g.degree
    lo, hi = sup[0], sup[-1]
    # every monomial must carry the eigenvalue zeta
    for i in sup:
        if lam[0] ** i * lam[1] ** (n - i) != zeta:
            raise StructureViolation(f"monomial u1^{i} u2^{n - i} breaks the exponent law")
    if d is None:
        if lo != hi:
            raise StructureViolation("several monomials although the eigenvalue ratio has infinite order")
        return FormStructure("monomial", k=lo, l=n - lo)
    if any((i - lo) % d for i in sup):
        raise StructureViolation(f"exponents are not congruent modulo {d}")
    m = (hi - lo) // d
    if m == 0:
        return FormStructure("monomial", k=lo, l=n - lo)
    inner = tuple(g.coeffs[lo + d * j] for j in range(m + 1))
    if lam[0] ** (lo + d * m) * lam[1] ** (n - hi) != zeta:
        raise StructureViolation("exponent law fails for the product form")
    return FormStructure("product", k=lo, l=n - hi, d=d, factors=m, inner=inner)


@dataclass(frozen=True)
class StructureReport:
    theta: ThetaPair
    transformed: ThetaPair
    forms: tuple[FormStructure, FormStructure]
    ratio_order: int | None

    def to_json(self) -> dict:
        return {
            "raw": [self.theta[0].to_json(), self.theta[1].to_json()],
            "eigenbasis": [self.transformed[0].to_json(), self.transformed[1].to_json()],
            "structure": [f.to_json() for f in self.forms],
            "ratio_order": self.ratio_order,
        }


def structure_classify(basis: list[ThetaPair], tr: EigenTransform) -> list[StructureReport]:
    """Check each solution against the monomial / product dichotomy in the eigenbasis."""
    if not basis:
        return []
    order = root_of_unity_order(tr.ratio())
    out = []
    for theta in basis:
        g = to_eigenbasis(theta, tr)
        forms = tuple(_structure_of(gi, tr.lambdas, z, order) for gi, z in zip(g, tr.zetas))
        out.append(StructureReport(theta, g, forms, order))
    return out


# -- parity and gradient filter ---------------------------------------------------------


def _filter_rows(n: int, a: QuadNum, D: int) -> list[list[QuadNum]]:
    """Linear conditions: Theta_1 even in u2, Theta_2 odd in u2, a dTheta_1/du2 = dTheta_2/du1."""
    size = 2 * (n + 1)
    zero, one = QuadNum(0, 0, D), QuadNum(1, 0, D)
    rows = []
    for i in range(n + 1):
        if (n - i) % 2 == 1:
            r = [zero] * size
            r[i] = one
            rows.append(r)
        if (n - i) % 2 == 0:
            r = [zero] * size
            r[n + 1 + i] = one
            rows.append(r)
    # coefficient of u1^i u2^(n-1-i) in a*dT1/du2 - dT2/du1
    for i in range(n):
        r = [zero] * size
        r[i] = a * (n - i)
        r[n + 1 + i + 1] = QuadNum(-(i + 1), 0, D)
        rows.append(r)
    return rows


def symmetry_filter(basis: list[ThetaPair], a) -> list[ThetaPair]:
    """Subspace of span(basis) meeting the parity and gradient conditions."""
    if not basis:
        return []
    n = basis[0][0].degree
    D = basis[0][0].coeffs[0].D
    a = as_quad(a, D)
    cond = _filter_rows(n, a, D)
    vecs = [_to_vec(t) for t in basis]
    # conditions applied to sum_j y_j vecs[j]
    rows = [[sum((c * v[k] for k, c in enumerate(row)), QuadNum(0, 0, D)) for v in vecs] for row in cond]
    ys = nullspace(rows, len(vecs), D)
    out = []
    for y in ys:
        w = [sum((yj * v[k] for yj, v in zip(y, vecs)), QuadNum(0, 0, D)) for k in range(2 * (n + 1))]
        out.append(_from_vec(w, n))
    return _echelon_basis(out, n, D)


def split_coefficients(tr: EigenTransform, a) -> tuple[QuadNum, QuadNum, QuadNum, QuadNum]:
    """(a1, a2, a3, a4) of the eigenbasis gradient equation
    a1 dg1/du1 + a2 dg1/du2 + a3 dg2/du1 + a4 dg2/du2 = 0."""
    D = tr.P.D
    (w1, w2), _ = tr.P.P.rows
    w1, w2 = as_quad(w1, D), as_quad(w2, D)
    a = as_quad(a, D)
    base = a * w2 * w2.conj()
    l1, l2 = tr.lambdas
    z1, z2 = tr.zetas

    def c(lam, zeta):
        return (lam - w1) * (zeta - w1.conj()) + base

    return -c(l2, z1), c(l1, z1), -c(l2, z2), c(l1, z2)


def split_check(theta: ThetaPair, tr: EigenTransform, a) -> dict:
    """Evaluate the full gradient equation and its two halves on the eigenbasis forms."""
    g1, g2 = to_eigenbasis(theta, tr)
    a1, a2, a3, a4 = split_coefficients(tr, a)

    def comb2(x, f, y, h):
        return [p * x + q * y for p, q in zip(f, h)]

    # both derivative lists are indexed by the u1 exponent of a degree n-1 form
    diag = comb2(a1, g1.d_u1(), a4, g2.d_u2())
    cross = comb2(a2, g1.d_u2(), a3, g2.d_u1())
    full = [p + q for p, q in zip(diag, cross)]
    return {
        "full": all(x.is_zero() for x in full),
        "diagonal": all(x.is_zero() for x in diag),
        "cross": all(x.is_zero() for x in cross),
        "coefficients": [x.to_json() for x in (a1, a2, a3, a4)],
    }

