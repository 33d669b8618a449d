"""Catalog of normal forms for finite-order Type I/II/III matrices.

Every entry describes a family of 4x4 rational matrices by a handful of
free 2x2 parameter blocks plus exact constraints on them.  Matching a
matrix means recovering the parameters, rebuilding the matrix from the
template, and demanding exact equality.

Template ids are descriptive:

* ``scalar+``/``scalar-``/``iota+``/``iota-`` for +-I and +-iota;
* ``I/<b1>+<b4>`` for block-diagonal forms, where each block is named
  by its minimal polynomial (``1``, ``-1``, ``phi3``, ``phi4``, ``phi6``);
* ``II/<kind>`` for anti-diagonal forms, classified by ``A2 A3``;
* ``III/sqrt<D>/<form>`` for the coupled forms.  A trailing ``*`` marks
  the partner obtained by multiplying with iota, ``+``/``-`` picks the
  sign in the minimal polynomial of A1.  ``III/any/...`` are the forms
  with A1 a multiple of the identity, which do not pin down the field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .blocktype import BlockMat, TypeTag, classify_type
from .exactnum import squarefree_part
from .linalg import (
    CYCLOTOMIC,
    I2,
    IOTA4,
    M2,
    Matrix,
    Poly,
    anti_sum,
    det,
    direct_sum,
    disc2,
    from_blocks,
    inverse,
    min_poly,
    poly_from_string,
)


class ConstraintViolation(ValueError):
    """Parameters do not satisfy a catalog entry's constraints."""


class UnknownTemplate(KeyError):
    pass


F = Fraction
Builder = Callable[..., Matrix]


@dataclass(frozen=True)
class Constraint:
    text: str
    check: Callable[..., bool] = field(compare=False)


@dataclass(frozen=True)
class CatalogEntry:
    template_id: str
    min_poly: Poly
    type: TypeTag
    field_D: int | None
    param_names: tuple[str, ...]
    constraints: tuple[Constraint, ...] = field(compare=False)
    build: Builder = field(compare=False, repr=False)
    extract: Callable[[BlockMat], tuple] = field(compare=False, repr=False)
    # min polys demanded of the parameter blocks, used by the random sampler
    block_polys: tuple[Poly | None, ...] = field(default=(), compare=False)
    param_dets: tuple[Fraction | None, ...] = field(default=(), compare=False)
    partner: str | None = None

    def check(self, *params: Matrix) -> list[str]:
        """Texts of the constraints that fail for ``params``."""
        if len(params) != len(self.param_names):
            return [f"expected {len(self.param_names)} parameter blocks"]
        failed = []
        for c in self.constraints:
            try:
                ok = c.check(*params)
            except ZeroDivisionError:
                ok = False
            if not ok:
                failed.append(c.text)
        return failed

    def to_json(self) -> dict:
        return {
            "template": self.template_id,
            "type": self.type.label,
            "min_poly": str(self.min_poly),
            "field_D": "any" if self.field_D is None else self.field_D,
            "params": list(self.param_names),
            "constraints": [c.text for c in self.constraints],
        }


@dataclass(frozen=True)
class CatalogMatch:
    entry: CatalogEntry
    params: tuple[Matrix, ...]
    field_D: int | None
    ambiguous_with: tuple[str, ...] = ()

    @property
    def A1(self) -> Matrix | None:
        return self._param("A1")

    @property
    def A2(self) -> Matrix | None:
        return self._param("A2")

    def _param(self, name: str) -> Matrix | None:
        names = self.entry.param_names
        return self.params[names.index(name)] if name in names else None

    def to_json(self) -> dict:
        out = {
            "matched": True,
            "template": self.entry.template_id,
            "type": self.entry.type.label,
            "min_poly": str(self.entry.min_poly),
            "field_D": "any" if self.field_D is None else self.field_D,
            "params": {n: p.to_json() for n, p in zip(self.entry.param_names, self.params)},
            "ambiguous_with": list(self.ambiguous_with),
        }
        for n in ("A1", "A2"):
            p = self._param(n)
            if p is not None:
                out[n] = p.to_json()
        return out


def _P(text: str) -> Poly:
    return poly_from_string(text)


def _has_min_poly(A: Matrix, p: Poly) -> bool:
    return min_poly(A) == p


def _field_of_block(A: Matrix) -> int | None:
    d = disc2(A)
    return squarefree_part(d) if d < 0 else None


# -- trivial entries ------------------------------------------------------------

_ENTRIES: list[CatalogEntry] = []


def _fixed(tid: str, M: Matrix, poly: str) -> CatalogEntry:
    return CatalogEntry(
        tid,
        _P(poly),
        TypeTag.I,
        None,
        (),
        (),
        build=lambda: M,
        extract=lambda B: (),
    )


_ENTRIES += [
    _fixed("scalar+", Matrix.identity(4), "x-1"),
    _fixed("scalar-", -Matrix.identity(4), "x+1"),
    _fixed("iota+", IOTA4, "x^2-1"),
    _fixed("iota-", -IOTA4, "x^2-1"),
]


# -- Type I: A1 (+) A4 ----------------------------------------------------------

_BLOCK_KINDS: dict[str, tuple[Poly, int | None]] = {
    "1": (CYCLOTOMIC[1], None),
    "-1": (CYCLOTOMIC[2], None),
    "phi3": (CYCLOTOMIC[3], -3),
    "phi6": (CYCLOTOMIC[6], -3),
    "phi4": (CYCLOTOMIC[4], -1),
}


def _lcm(p: Poly, q: Poly) -> Poly:
    if p == q:
        return p
    return p * q  # distinct cyclotomics are coprime


def _block_constraint(name: str, idx: int, kind: str) -> Constraint:
    poly, _ = _BLOCK_KINDS[kind]
    if poly.degree == 1:
        target = Matrix.scalar(-poly.coeffs[0], 2)
        return Constraint(f"{name} = {target[0, 0]}*I", lambda *ps: ps[idx] == target)
    return Constraint(f"min_poly({name}) = {poly}", lambda *ps: _has_min_poly(ps[idx], poly))


def _type_i_entry(k1: str, k4: str) -> CatalogEntry:
    p1, D1 = _BLOCK_KINDS[k1]
    p4, D4 = _BLOCK_KINDS[k4]
    return CatalogEntry(
        f"I/{k1}+{k4}",
        _lcm(p1, p4),
        TypeTag.I,
        D1 if D1 is not None else D4,
        ("A1", "A4"),
        (_block_constraint("A1", 0, k1), _block_constraint("A4", 1, k4)),
        build=direct_sum,
        extract=lambda B: (B.A1, B.A4),
        block_polys=(p1, p4),
    )


for _fam in (("1", "-1", "phi3", "phi6"), ("1", "-1", "phi4")):
    for _k1 in _fam:
        for _k4 in _fam:
            if _BLOCK_KINDS[_k1][1] is None and _BLOCK_KINDS[_k4][1] is None:
                continue  # +-I and +-iota are the trivial entries
            _e = _type_i_entry(_k1, _k4)
            if all(e.template_id != _e.template_id for e in _ENTRIES):
                _ENTRIES.append(_e)


# -- Type II: A2 (+~) A3 ------------------------------------------------------------

_DET_A2_ONE = Constraint("det A2 = 1", lambda A2, *rest: det(A2) == 1)


def _type_ii_involutive(tid: str, sign: int, poly: str) -> CatalogEntry:
    return CatalogEntry(
        tid,
        _P(poly),
        TypeTag.II,
        None,
        ("A2",),
        (_DET_A2_ONE,),
        build=lambda A2: anti_sum(A2, inverse(A2) * sign),
        extract=lambda B: (B.A2,),
        param_dets=(F(1),),
    )


def _type_ii_cyclic(tid: str, order: int, D: int, poly: str) -> CatalogEntry:
    phi = CYCLOTOMIC[order]
    return CatalogEntry(
        tid,
        _P(poly),
        TypeTag.II,
        D,
        ("A2", "A3"),
        (
            _DET_A2_ONE,
            Constraint("det A3 = 1", lambda A2, A3: det(A3) == 1),
            Constraint(f"min_poly(A2 A3) = {phi}", lambda A2, A3: _has_min_poly(A2 @ A3, phi)),
        ),
        build=anti_sum,
        extract=lambda B: (B.A2, B.A3),
        block_polys=(None, phi),
        param_dets=(F(1), F(1)),
    )


_ENTRIES += [
    _type_ii_involutive("II/swap+", 1, "x^2-1"),
    _type_ii_involutive("II/swap-", -1, "x^2+1"),
    _type_ii_cyclic("II/phi3", 3, -3, "x^4+x^2+1"),
    _type_ii_cyclic("II/phi6", 6, -3, "x^4-x^2+1"),
    _type_ii_cyclic("II/phi4", 4, -1, "x^4+1"),
]


# -- Type III -------------------------------------------------------------------------
#
# Each coupled form is [[A1, A2], [A3(A1, A2), A4(A1, A2)]] with A1 of a
# prescribed minimal polynomial and det A2 = 1 - det A1.  The starred
# partner is iota times the form, i.e. A3 and A4 change sign.

Rule = Callable[[Matrix, Matrix, Matrix], Matrix]  # (A1, A2, A2^-1) -> block


def _coupled(A1: Matrix, A2: Matrix, r3: Rule, r4: Rule, star: bool) -> Matrix:
    A2i = inverse(A2)
    A3, A4 = r3(A1, A2, A2i), r4(A1, A2, A2i)
    if star:
        A3, A4 = -A3, -A4
    return from_blocks(A1, A2, A3, A4)


def _type_iii_pair(
    D: int, tag: str, a1_poly: Poly, r3: Rule, r4: Rule, poly: str, star_poly: str, sign: str = ""
) -> list[CatalogEntry]:
    d1 = a1_poly.coeffs[0]
    d2 = 1 - d1
    base = f"III/sqrt{D}/{tag}"
    ids = (f"{base}{sign}", f"{base}*{sign}")
    cons = (
        Constraint(f"min_poly(A1) = {a1_poly}", lambda A1, A2: _has_min_poly(A1, a1_poly)),
        Constraint(f"det A2 = {d2}", lambda A1, A2: det(A2) == d2),
    )
    out = []
    for k, (tid, mp) in enumerate(zip(ids, (poly, star_poly))):
        star = k == 1
        out.append(
            CatalogEntry(
                tid,
                _P(mp),
                TypeTag.III,
                D,
                ("A1", "A2"),
                cons,
                build=lambda A1, A2, star=star: _coupled(A1, A2, r3, r4, star),
                extract=lambda B: (B.A1, B.A2),
                block_polys=(a1_poly, None),
                param_dets=(d1, d2),
                partner=ids[1 - k],
            )
        )
    return out


def _pm(s: int) -> str:
    return "+" if s > 0 else "-"


_III: list[CatalogEntry] = []
# Q(sqrt(-3))
_III += _type_iii_pair(
    -3, "a", _P("x^2+3/4"), lambda A1, A2, A2i: -A2i / 4, lambda A1, A2, A2i: -(A2i @ A1 @ A2), "x^2+1", "x^4+x^2+1"
)
for _s in (1, -1):
    _III += _type_iii_pair(
        -3,
        "b",
        Poly([F(1, 4), F(_s, 2), 1]),
        lambda A1, A2, A2i: -3 * (A2i @ A1 @ A1),
        lambda A1, A2, A2i: A2i @ A1 @ A2,
        f"x^3{_pm(_s)}1",
        "x^4+x^2+1",
        _pm(_s),
    )
for _s in (1, -1):
    _III += _type_iii_pair(
        -3,
        "c",
        Poly([F(3, 4), F(3 * _s, 2), 1]),
        lambda A1, A2, A2i: -(A2i @ A1 @ A1) / 3,
        lambda A1, A2, A2i: A2i @ A1 @ A2,
        f"x^3{_pm(_s)}2*x^2+2*x{_pm(_s)}1",
        "x^4-x^2+1",
        _pm(_s),
    )
# Q(sqrt(-2))
_III += _type_iii_pair(
    -2, "a", _P("x^2+1/2"), lambda A1, A2, A2i: -A2i / 2, lambda A1, A2, A2i: -(A2i @ A1 @ A2), "x^2+1", "x^4+1"
)
for _s in (1, -1):
    _III += _type_iii_pair(
        -2,
        "b",
        Poly([F(3, 4), _s, 1]),
        lambda A1, A2, A2i: -A2i / 4,
        lambda A1, A2, A2i: F(3, 4) * (A2i @ inverse(A1) @ A2),
        f"x^2{_pm(_s)}x+1",
        "x^4+1",
        _pm(_s),
    )
# Q(sqrt(-1))
_III += _type_iii_pair(
    -1, "a", _P("x^2+1/4"), lambda A1, A2, A2i: -F(3, 4) * A2i, lambda A1, A2, A2i: -(A2i @ A1 @ A2), "x^2+1", "x^4-x^2+1"
)
for _s in (1, -1):
    _III += _type_iii_pair(
        -1,
        "b",
        Poly([F(1, 2), _s, 1]),
        lambda A1, A2, A2i: -(A2i @ A1 @ A1),
        lambda A1, A2, A2i: A2i @ A1 @ A2,
        f"x^3{_pm(_s)}x^2+x{_pm(_s)}1",
        "x^4+1",
        _pm(_s),
    )
for _s in (1, -1):
    _III += _type_iii_pair(
        -1,
        "c",
        Poly([F(1, 2), _s, 1]),
        lambda A1, A2, A2i: -A2i / 2,
        lambda A1, A2, A2i: (A2i @ inverse(A1) @ A2) / 2,
        f"x^2{_pm(_s)}x+1",
        "x^4-x^2+1",
        _pm(_s),
    )


def _parallel_pair(s: int) -> list[CatalogEntry]:
    """A1 = +-I/2: [[s I/2, A2], [3/4 A2^-1, -s I/2]] and its iota partner."""
    A1 = I2 * F(s, 2)
    ids = (f"III/any/p{_pm(s)}", f"III/any/p*{_pm(s)}")
    polys = ("x^2-1", "x^2-x+1" if s > 0 else "x^2+x+1")
    cons = (Constraint("det A2 = 3/4", lambda A2: det(A2) == F(3, 4)),)
    out = []
    for k in (0, 1):
        sg = 1 if k == 0 else -1

        def build(A2, sg=sg):
            return from_blocks(A1, A2, sg * F(3, 4) * inverse(A2), -sg * A1)

        out.append(
            CatalogEntry(
                ids[k],
                _P(polys[k]),
                TypeTag.III,
                None,
                ("A2",),
                cons,
                build=build,
                extract=lambda B, A1=A1: (B.A2,) if B.A1 == A1 else None,
                param_dets=(F(3, 4),),
                partner=ids[1 - k],
            )
        )
    return out


_III += _parallel_pair(1) + _parallel_pair(-1)
_ENTRIES += _III

CATALOG: dict[str, CatalogEntry] = {e.template_id: e for e in _ENTRIES}


def entries() -> list[CatalogEntry]:
    return list(_ENTRIES)


def get_entry(template_id: str) -> CatalogEntry:
    try:
        return CATALOG[template_id]
    except KeyError:
        raise UnknownTemplate(template_id) from None


# -- admissible minimal polynomials --------------------------------------------------

_ADMISSIBLE = (
    "x-1",
    "x+1",
    "x^2-1",
    "x^2+1",
    "x^2-x+1",
    "x^2+x+1",
    "x^3-1",
    "x^3+1",
    "x^3-x^2+x-1",
    "x^3+x^2+x+1",
    "x^3-2*x^2+2*x-1",
    "x^3+2*x^2+2*x+1",
    "x^4-1",
    "x^4+1",
    "x^4-x^2+1",
    "x^4+x^2+1",
)


def admissible_min_polys() -> list[Poly]:
    """Minimal polynomials a finite-order automorphism matrix may have."""
    return [_P(s) for s in _ADMISSIBLE]


# -- matching and synthesis ---------------------------------------------------------------


def synthesize(template_id: str, *params: Matrix) -> BlockMat:
    entry = get_entry(template_id)
    failed = entry.check(*params)
    if failed:
        raise ConstraintViolation(f"{template_id}: " + "; ".join(failed))
    return BlockMat(entry.build(*params))


def _field_for(entry: CatalogEntry, params: tuple[Matrix, ...]) -> int | None:
    if entry.type == TypeTag.III and "A1" in entry.param_names:
        return _field_of_block(params[0])
    return entry.field_D


def match_catalog(M) -> CatalogMatch | None:
    """Exact match of M against every template of its type.

    Ties resolve to the smallest template id; the others are listed in
    ``ambiguous_with``.
    """
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    t = classify_type(B)
    if t == TypeTag.UNTYPED:
        return None
    hits: list[tuple[CatalogEntry, tuple]] = []
    for entry in _ENTRIES:
        if entry.type != t:
            continue
        params = entry.extract(B)
        if params is None or entry.check(*params):
            continue
        try:
            rebuilt = entry.build(*params)
        except ZeroDivisionError:
            continue
        if rebuilt == B.whole:
            hits.append((entry, params))
    if not hits:
        return None
    hits.sort(key=lambda h: h[0].template_id)
    entry, params = hits[0]
    others = tuple(h[0].template_id for h in hits[1:])
    return CatalogMatch(entry, tuple(params), _field_for(entry, params), others)


def match_report(M) -> dict:
    B = M if isinstance(M, BlockMat) else BlockMat(M)
    m = match_catalog(B)
    if m is None:
        return {"matched": False, "type": classify_type(B).label, "min_poly": str(min_poly(B.whole))}
    return m.to_json()


# -- random parameters ------------------------------------------------------------------


def _rand_q(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        if x or not nonzero:
            return x


def random_with_min_poly(rng: random.Random, p: Poly) -> Matrix:
    """Random rational 2x2 matrix with minimal polynomial p (degree 1 or 2)."""
    if p.degree == 1:
        return Matrix.scalar(-p.coeffs[0], 2)
    n, s = p.coeffs[0], p.coeffs[1]
    # [[a, b], [c, -s - a]] has trace -s; fix c so the determinant is n
    a, b = _rand_q(rng), _rand_q(rng, nonzero=True)
    c = (a * (-s - a) - n) / b
    return M2(a, b, c, -s - a)


def random_with_det(rng: random.Random, d: Fraction) -> Matrix:
    x, y, z = _rand_q(rng, nonzero=True), _rand_q(rng), _rand_q(rng)
    return M2(x, y, z, (d + y * z) / x)


def random_params(template_id: str, rng: random.Random) -> tuple[Matrix, ...]:
    """Random parameter blocks satisfying the entry's constraints."""
    e = get_entry(template_id)
    if not e.param_names:
        return ()
    if e.type == TypeTag.I:
        return tuple(random_with_min_poly(rng, p) for p in e.block_polys)
    if e.type == TypeTag.II:
        A2 = random_with_det(rng, F(1))
        if len(e.param_names) == 1:
            return (A2,)
        B = random_with_min_poly(rng, e.block_polys[1])
        return (A2, inverse(A2) @ B)
    if e.param_names == ("A2",):
        return (random_with_det(rng, e.param_dets[0]),)
    return (random_with_min_poly(rng, e.block_polys[0]), random_with_det(rng, e.param_dets[1]))
