"""Slopes, the pair maps induced by block automorphisms, and symmetry sets of filling pairs.

A slope is a primitive integer row vector ``(p q)`` up to sign.  A 2x2 rational
matrix ``A`` moves slopes by ``(p q) -> (p q) A^-1``; scaling ``A`` does not
change the action.  A 4x4 block matrix with blocks ``A1..A4`` relates two
filling pairs through

    (p'_1 q'_1) A1 = k1 (p_1 q_1),   (p'_1 q'_1) A2 = k2 (p_2 q_2),
    (p'_2 q'_2) A3 = k3 (p_1 q_1),   (p'_2 q'_2) A4 = k4 (p_2 q_2),

with ``k1 + k2 = k3 + k4 = 1``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .blocktype import BlockMat, TypeTag, classify_type
from .catalog import match_catalog
from .exactnum import QuadNum, fmt_rational
from .linalg import I2, Matrix, SingularMatrix, det, inverse
from .spectral import RelationViolation, cusp_relation_check

F = Fraction


class UntypedInput(ValueError):
    """The matrix is not of Type I, II or III."""


class NonGenericPair(ValueError):
    """Some non-scalar block of the group fixes one of the slopes."""


class OrderMismatch(ValueError):
    pass


# -- slopes -----------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.q, int):
            raise TypeError("slope components must be integers")
        if self.p == 0 and self.q == 0:
            raise ValueError("slope 0/0 is not allowed")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q} is not primitive")
        if self.q < 0 or (self.q == 0 and self.p < 0):
            raise ValueError(f"slope {self.p}/{self.q} is not in canonical sign")

    @classmethod
    def of(cls, p, q) -> Slope:
        """Canonical primitive slope through the nonzero rational vector (p, q)."""
        return cls(*_primitive(F(p), F(q))[0])

    @classmethod
    def parse(cls, text: str) -> Slope:
        parts = text.strip().split("/")
        if len(parts) != 2:
            raise ValueError(f"malformed slope {text!r}")
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"malformed slope {text!r}") from None
        return cls.of(p, q)

    def row(self) -> tuple[Fraction, Fraction]:
        return F(self.p), F(self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


SlopePair = tuple[Slope, Slope]


def parse_pair(text: str) -> SlopePair:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"malformed slope pair {text!r}")
    return Slope.parse(parts[0]), Slope.parse(parts[1])


def pair_json(pair: SlopePair) -> list[str]:
    return [str(pair[0]), str(pair[1])]


def _primitive(x: Fraction, y: Fraction) -> tuple[tuple[int, int], Fraction]:
    """Canonical primitive (p, q) and the scale c with (x, y) = c (p, q)."""
    if x == 0 and y == 0:
        raise ValueError("zero vector has no slope")
    den = lcm(x.denominator, y.denominator)
    a, b = int(x * den), int(y * den)
    g = gcd(a, b)
    a, b = a // g, b // g
    sign = -1 if (b < 0 or (b == 0 and a < 0)) else 1
    return (sign * a, sign * b), F(g * sign, den)


def _row_times(v: tuple[Fraction, Fraction], A: Matrix) -> tuple[Fraction, Fraction]:
    (a, b), (c, d) = A.rows
    return v[0] * a + v[1] * c, v[0] * b + v[1] * d


def act_slope(A: Matrix, s: Slope) -> Slope:
    """Slope of the row vector (p q) A^-1."""
    if det(A) == 0:
        raise SingularMatrix("slope action needs an invertible matrix")
    return Slope.of(*_row_times(s.row(), inverse(A)))


def fixes_slope(A: Matrix, s: Slope) -> bool:
    return act_slope(A, s) == s


# -- induced pair maps ------------------------------------------------------------------


class MapKind(enum.Enum):
    DIRECT = "Direct"
    SWAP = "Swap"


@dataclass(frozen=True)
class PairMap:
    """Action of a typed block matrix on filling pairs.

    For Type III sources the image is taken along the diagonal route
    (A1, A4); the cross blocks give the second route used by
    :meth:`compatible`.
    """

    kind: MapKind
    B1: Matrix
    B4: Matrix
    B2: Matrix | None
    B3: Matrix | None
    source: Matrix
    type: TypeTag

    def apply(self, pair: SlopePair) -> SlopePair:
        s1, s2 = pair
        if self.kind is MapKind.SWAP:
            return act_slope(self.B1, s2), act_slope(self.B4, s1)
        return act_slope(self.B1, s1), act_slope(self.B4, s2)

    def compatible(self, pair: SlopePair) -> bool:
        """Whether both routes agree (always true without cross blocks)."""
        if self.B2 is None:
            return True
        s1, s2 = pair
        t1, t2 = self.apply(pair)
        return act_slope(self.B2, s2) == t1 and act_slope(self.B3, s1) == t2


def induced_pair_map(M) -> PairMap:
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    t = classify_type(B)
    if t is TypeTag.I:
        return PairMap(MapKind.DIRECT, B.A1, B.A4, None, None, B.whole, t)
    if t is TypeTag.II:
        return PairMap(MapKind.SWAP, B.A2, B.A3, None, None, B.whole, t)
    if t is TypeTag.III:
        return PairMap(MapKind.DIRECT, B.A1, B.A4, B.A2, B.A3, B.whole, t)
    raise UntypedInput("matrix is not of Type I, II or III")


# -- k-vectors --------------------------------------------------------------------------


@dataclass(frozen=True)
class KVector:
    k1: Fraction
    k2: Fraction
    k3: Fraction
    k4: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.k1, self.k2, self.k3, self.k4

    def sums_ok(self) -> bool:
        return self.k1 + self.k2 == 1 and self.k3 + self.k4 == 1

    def det_relation_ok(self, dets) -> bool | None:
        """Reciprocal determinant relation; None when some k_j vanishes."""
        k = self.as_tuple()
        if any(x == 0 for x in k):
            return None
        d1, d2, d3, d4 = dets
        return d1 / k[0] + d3 / k[2] == 1 and d2 / k[1] + d4 / k[3] == 1

    def to_json(self) -> list[str]:
        return [fmt_rational(x) for x in self.as_tuple()]


def _ratio(u: tuple[Fraction, Fraction], v: tuple[Fraction, Fraction]) -> Fraction | None:
    """k with u = k v, or None if u is not a multiple of v."""
    if u[0] * v[1] != u[1] * v[0]:
        return None
    return u[0] / v[0] if v[0] != 0 else u[1] / v[1]


def _k_pair(dst: Slope, A: Matrix, B: Matrix, s_a: Slope, s_b: Slope):
    """Both k's for one destination slope, as functions of its sign."""
    out = []
    for blk, src in ((A, s_a), (B, s_b)):
        if blk.is_zero():
            out.append(F(0))
            continue
        k = _ratio(_row_times(dst.row(), blk), src.row())
        if k is None:
            return None
        out.append(k)
    return out


def k_vector(M, src: SlopePair, dst: SlopePair) -> KVector | None:
    """Solve the four k-relations, choosing the sign of each destination slope.

    Returns None when the relations have no solution with k1+k2 = k3+k4 = 1.
    """
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    first = _k_pair(dst[0], B.A1, B.A2, src[0], src[1])
    second = _k_pair(dst[1], B.A3, B.A4, src[0], src[1])
    if first is None or second is None:
        return None
    ks = []
    for pair in (first, second):
        for sign in (1, -1):
            if sign * (pair[0] + pair[1]) == 1:
                ks.append((sign * pair[0], sign * pair[1]))
                break
        else:
            return None
    return KVector(ks[0][0], ks[0][1], ks[1][0], ks[1][1])


# -- admissibility ----------------------------------------------------------------------

HALF = F(1, 2)


def _inv_is_int(k: Fraction) -> bool:
    return k != 0 and (1 / k).denominator == 1


def half_det_k_violation(k: KVector | None, dets) -> str | None:
    """Reason a k-vector cannot belong to a half-determinant coupled map, if any."""
    if k is None or not all(d == HALF for d in dets):
        return None
    if any(x == HALF for x in k.as_tuple()):
        return "k_j = 1/2"
    if k.k1 not in (0, 1) and _inv_is_int(k.k1) and _inv_is_int(k.k4):
        return "1/k1 and 1/k4 both integral"
    return None


@dataclass
class MapRecord:
    """One group element together with its action on a fixed source pair."""

    index: int
    map: PairMap
    image: SlopePair
    k: KVector | None
    compatible: bool
    dropped: str | None = None

    @property
    def realized(self) -> bool:
        return self.k is not None

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "type": self.map.type.label,
            "image": pair_json(self.image),
            "k": None if self.k is None else self.k.to_json(),
            "compatible": self.compatible,
            "dropped": self.dropped,
        }


def _witness_blocks(A1: Matrix, A2: Matrix):
    """Type I and Type II block shapes whose realization rules out the coupled maps."""
    A1i, A2i = inverse(A1), inverse(A2)
    L = 2 * A1 @ A1
    R = 2 * A2i @ A1 @ A1 @ A2
    type_i = {"both": [(L, R)], "left": [(L, I2)], "right": [(I2, R)]}
    type_ii = {
        "single": [(A1i @ A2, A2i @ A1i / 2), (2 * A1 @ A2, A2i @ A1)],
        "joint": [(2 * A1 @ A2, A2i @ A1i / 2), (A1i @ A2, A2i @ A1)],
    }
    return type_i, type_ii


def _shape_matches(rec: MapRecord, shape: tuple[Matrix, Matrix]) -> bool:
    X, Y = shape
    return rec.map.B1 in (X, -X) and rec.map.B4 in (Y, -Y)


def _coupled_reference(records: list[MapRecord]):
    """Blocks (A1, A2) of the first coupled element of the cubic half-determinant form."""
    for rec in records:
        if rec.map.type is not TypeTag.III:
            continue
        m = match_catalog(rec.map.source)
        if m is not None and m.entry.template_id.startswith("III/sqrt-1/b"):
            return m.A1, m.A2
    return None


def admissibility_filter(records: list[MapRecord]) -> list[MapRecord]:
    """Mark inadmissible maps (``dropped``) and return the surviving ones.

    Every record must be computed against the same source pair.  The rules:

    * for coupled maps whose four block determinants are all 1/2, no k_j
      equals 1/2 and 1/k1, 1/k4 are not both integers;
    * when the group has a coupled element ``[[A1, A2], [-A2^-1 A1^2, A2^-1 A1 A2]]``,
      a realized witness of the listed block shapes excludes every
      half-determinant coupled map; if no witness configuration is realized,
      the unrealized witnesses themselves cannot be equal-volume fillings.
    """
    for rec in records:
        if rec.dropped is None:
            dets = BlockMat(rec.map.source).dets()
            rec.dropped = half_det_k_violation(rec.k, dets)
    ref = _coupled_reference(records)
    if ref is not None:
        type_i, type_ii = _witness_blocks(*ref)
        groups: dict[str, list[list[MapRecord]]] = {}
        for tag, fam in (("I", type_i), ("II", type_ii)):
            want = TypeTag.I if tag == "I" else TypeTag.II
            for name, shapes in fam.items():
                groups[f"{tag}:{name}"] = [
                    [r for r in records if r.map.type is want and _shape_matches(r, sh)] for sh in shapes
                ]

        def realized(recs: list[MapRecord]) -> bool:
            return any(r.realized and r.dropped is None for r in recs)

        excluded = (
            realized(groups["I:both"][0])
            or (realized(groups["I:left"][0]) and realized(groups["I:right"][0]))
            or any(realized(g) for g in groups["II:single"])
            or all(realized(g) for g in groups["II:joint"])
        )
        if excluded:
            for rec in records:
                if rec.dropped is None and rec.map.type is TypeTag.III and all(
                    d == HALF for d in BlockMat(rec.map.source).dets()
                ):
                    rec.dropped = "excluded by realized witness"
        else:
            for fam in groups.values():
                for g in fam:
                    for rec in g:
                        if rec.dropped is None and not rec.realized:
                            rec.dropped = "unrealized witness"
    return [r for r in records if r.dropped is None]


# -- symmetry sets ----------------------------------------------------------------------


def _block_parity(B: Matrix) -> int | None:
    """0 for scalar blocks, 1 for blocks squaring to a scalar, None otherwise."""
    if B.is_scalar():
        return 0
    if (B @ B).is_scalar():
        return 1
    return None


def parity_ok(M) -> bool:
    """Exponent-parity rule for Type I elements when the mixed quartic term is nonzero."""
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    if classify_type(B) is not TypeTag.I:
        return True
    p1, p4 = _block_parity(B.A1), _block_parity(B.A4)
    if p1 is None or p4 is None:
        return True
    return p1 == p4


def check_generic(G, pair: SlopePair) -> None:
    s1, s2 = pair
    for g in G:
        B = BlockMat(g)
        for blk, s, name in ((B.A1, s1, "first"), (B.A4, s2, "second")):
            if det(blk) != 0 and not blk.is_scalar() and fixes_slope(blk, s):
                raise NonGenericPair(f"a non-scalar block fixes the {name} slope {s}")


@dataclass
class SymmetryResult:
    source: SlopePair
    records: list[MapRecord]
    images: list[SlopePair]
    compatible_images: list[SlopePair]
    options: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.images)

    def witnesses(self) -> list[dict]:
        """Per image: the lowest-index surviving element that produces it."""
        out = []
        for img in self.images:
            rec = min((r for r in self.records if r.dropped is None and r.image == img), key=lambda r: r.index)
            row = rec.to_json()
            row["compatible"] = any(
                r.compatible for r in self.records if r.dropped is None and r.image == img
            )
            out.append(row)
        return out

    def to_json(self) -> dict:
        return {
            "source": pair_json(self.source),
            "count": self.count,
            "count_compatible": len(self.compatible_images),
            "images": self.witnesses(),
            "dropped": sum(1 for r in self.records if r.dropped is not None),
            "options": self.options,
        }


def _sort_key(pair: SlopePair):
    return (pair[0].q, pair[0].p, pair[1].q, pair[1].p)


def symmetry_set(G, pair: SlopePair, apply_filters: bool = False, c22_nonzero: bool = False) -> SymmetryResult:
    """Distinct images of ``pair`` under the induced maps of a finite group."""
    check_generic(G, pair)
    records = []
    for i, g in enumerate(G):
        pm = induced_pair_map(g)
        img = pm.apply(pair)
        rec = MapRecord(i, pm, img, k_vector(g, pair, img), pm.compatible(pair))
        if c22_nonzero and not parity_ok(g):
            rec.dropped = "exponent parity"
        records.append(rec)
    if apply_filters:
        admissibility_filter(records)
    alive = [r for r in records if r.dropped is None]
    images = sorted({r.image for r in alive}, key=_sort_key)
    compat = sorted({r.image for r in alive if r.compatible}, key=_sort_key)
    opts = {"apply_filters": apply_filters, "c22_nonzero": c22_nonzero}
    return SymmetryResult(pair, records, images, compat, opts)


# -- dependent case ---------------------------------------------------------------------


class OrbitMode(enum.Enum):
    SGI = "SGI"
    NON_SGI = "NonSGI"


def projective_order(A: Matrix, limit: int = 12) -> int | None:
    """Smallest n >= 1 with A^n scalar, i.e. the order of the slope action."""
    P = A
    for n in range(1, limit + 1):
        if P.is_scalar():
            return n
        P = P @ A
    return None


def _powers(A: Matrix, n: int) -> list[Matrix]:
    return [A**i for i in range(n)]


def dependent_orbit(mode, D: int, pair: SlopePair, sigma1: Matrix, sigma2: Matrix) -> list[SlopePair]:
    """Filling pairs reachable in the dependent case; sorted and deduplicated."""
    mode = OrbitMode(mode) if not isinstance(mode, OrbitMode) else mode
    need = {-3: 3, -1: 2}.get(D)
    if need is None:
        return [pair]
    for name, s in (("sigma1", sigma1), ("sigma2", sigma2)):
        o = projective_order(s)
        if o != need:
            raise OrderMismatch(f"{name} acts with order {o}, expected {need} for D = {D}")
    s1, s2 = pair
    P1, P2 = _powers(sigma1, need), _powers(sigma2, need)
    out: set[SlopePair] = set()
    if mode is OrbitMode.SGI:
        for X, Y in itertools.product(P1, P2):
            out.add((act_slope(X, s1), act_slope(Y, s2)))
    elif D == -3:
        for X, Y in zip(P1, P2):
            out.add((act_slope(X, s1), act_slope(Y, s2)))
    else:
        for X, Y in zip(P1, P2):
            out.add((act_slope(X, s1), act_slope(Y, s2)))
            out.add((s1, act_slope(Y, s2)))
            out.add((act_slope(X, s1), s2))
    return sorted(out, key=_sort_key)


@dataclass(frozen=True)
class PotentialDeg4:
    """Quartic part c40 u1^4 + c22 u1^2 u2^2 + c04 u2^4 of a potential function."""

    c40: Fraction
    c22: Fraction
    c04: Fraction


def dependent_constraint_check(A: Matrix, B: Matrix, tau: QuadNum, pot: PotentialDeg4) -> bool:
    """Exact check of the two cubic eigenvalue equations and the determinant relation.

    ``A = [[a, b], [c, d]]`` and ``B = [[alpha, beta], [gamma, delta]]`` must both fix
    the shape: tau (a + b tau) = c + d tau, and likewise for B.
    """
    for name, X in (("A", A), ("B", B)):
        if not cusp_relation_check(X, tau):
            raise RelationViolation(f"{name} does not fix the cusp shape {tau}")
    if pot.c40 != pot.c04:
        raise RelationViolation("the quartic coefficients c40 and c04 must agree")
    (a, b), (c, d) = A.rows
    (al, be), (ga, de) = B.rows
    z = tau * b + a
    w = tau * be + al
    c40, c22 = pot.c40, pot.c22
    lhs1 = z * z * z * (2 * c40) + z * c22
    rhs1 = (tau * (-b) + d) * (z * z * c22 + 2 * c40)
    lhs2 = (tau * (-be) + de) * (z * z * c22 + 2 * c40)
    rhs2 = w * w * w * (2 * c40 + c22)
    det_ok = 1 + (a * d - b * c) == 2 * (al * de - be * ga)
    return lhs1 == rhs1 and lhs2 == rhs2 and det_ok
