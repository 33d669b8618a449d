"""Finite matrix groups: closure, type census, canonical maximal groups and presentations."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .blocktype import TypeTag, classify_type
from .catalog import synthesize
from .linalg import (
    CYCLOTOMIC,
    I2,
    IOTA4,
    Matrix,
    anti_sum,
    companion,
    det,
    direct_sum,
    inverse,
    min_poly,
    poly_from_string,
)

DEFAULT_CAP = 4096
CAP_ENV = "DEHNKIT_CLOSURE_CAP"

I4 = Matrix.identity(4)
SWAP = anti_sum(I2, I2)


class CapExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"closure exceeded cap {cap}")
        self.cap = cap


class ScenarioMismatch(ValueError):
    pass


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be a positive integer, got {raw!r}") from None
    if cap <= 0:
        raise ValueError(f"{CAP_ENV} must be a positive integer, got {raw!r}")
    return cap


@dataclass(frozen=True)
class GroupSet:
    """A finite group of 4x4 rational matrices in canonical (lexicographic) order."""

    elements: tuple[Matrix, ...]
    generators: tuple[Matrix, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._index.update({g: i for i, g in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, M: Matrix) -> bool:
        return M in self._index

    def __iter__(self):
        return iter(self.elements)

    def index(self, M: Matrix) -> int:
        return self._index[M]

    def cayley(self) -> tuple[tuple[int, ...], ...]:
        """Multiplication table: entry (i, j) is the index of elements[i] @ elements[j]."""
        return tuple(tuple(self._index[a @ b] for b in self.elements) for a in self.elements)

    def is_closed(self) -> bool:
        return all(a @ b in self for a in self.elements for b in self.elements)

    def to_json(self) -> list:
        return [g.to_json()["rows"] for g in self.elements]


def closure(gens, cap: int | None = None) -> GroupSet:
    """Multiplicative closure of ``gens`` (with I adjoined).

    Right multiplication by generators from I reaches every finite product;
    for a finite set this is the generated group.
    """
    cap = default_cap() if cap is None else cap
    gens = tuple(gens)
    for g in gens:
        if det(g) == 0:
            raise ValueError("generators must be invertible")
    seen = {I4}
    frontier = [I4]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(cap)
                    nxt.append(y)
        frontier = nxt
    return GroupSet(tuple(sorted(seen, key=Matrix.sort_key)), gens)


def type_census(G) -> dict[str, int]:
    counts = {t.label: 0 for t in TypeTag}
    for g in G:
        counts[classify_type(g).label] += 1
    return counts


# -- canonical generators --------------------------------------------------------------

SCENARIOS = (
    "TypeI_only",
    "TypeI_II",
    "sqrt3_III",
    "sqrt2_III",
    "sqrt1_III_order2",
    "sqrt1_III_pair",
    "generic",
)


def _C(text: str) -> Matrix:
    return companion(poly_from_string(text))


def _designated(D: int, scenario: str) -> dict[str, Matrix]:
    """Named generators of the canonical group for (D, scenario)."""
    if scenario not in SCENARIOS:
        raise ScenarioMismatch(f"unknown scenario {scenario!r}")
    need = {"sqrt3_III": -3, "sqrt2_III": -2, "sqrt1_III_order2": -1, "sqrt1_III_pair": -1}
    if scenario in need and D != need[scenario]:
        raise ScenarioMismatch(f"scenario {scenario} needs D = {need[scenario]}, got {D}")
    if scenario in ("TypeI_only", "TypeI_II"):
        if D == -3:
            A = companion(CYCLOTOMIC[6])
        elif D == -1:
            A = companion(CYCLOTOMIC[4])
        else:
            raise ScenarioMismatch(f"scenario {scenario} needs D in (-3, -1), got {D}")
        out = {"A+I": direct_sum(A, I2), "I+A": direct_sum(I2, A)}
        if scenario == "TypeI_II":
            out["swap"] = SWAP
        return out
    if scenario == "generic":
        if D in (-1, -3):
            raise ScenarioMismatch(f"scenario generic excludes D = {D}")
        return {"-I": -I4, "iota": IOTA4, "M": SWAP}
    if scenario == "sqrt3_III":
        M = synthesize("III/sqrt-3/c-", _C("x^2-3/2*x+3/4"), I2 / 2).whole
        return {"M": M, "iota": IOTA4, "-I": -I4}
    if scenario == "sqrt2_III":
        M = synthesize("III/sqrt-2/b-", _C("x^2-x+3/4"), I2 / 2).whole
        return {"M": M, "iota": IOTA4, "-I": -I4}
    if scenario == "sqrt1_III_order2":
        M = synthesize("III/sqrt-1/a", _C("x^2+1/4"), Matrix.diag(1, Fraction(3, 4))).whole
        return {"M": M, "iota": IOTA4, "-I": -I4}
    A1 = _C("x^2+x+1/2")
    A2 = Matrix.diag(Fraction(1, 2), 1)
    M = synthesize("III/sqrt-1/b+", A1, A2).whole
    N = synthesize("III/sqrt-1/c+", A1, A2).whole
    return {"M": M, "N": N, "iota": IOTA4, "-I": -I4}


def maximal_group(D: int, scenario: str) -> list[Matrix]:
    """Canonical generator list for the largest group in the given scenario."""
    return list(_designated(D, scenario).values())


# -- presentations ------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class PresentationReport:
    kind: str
    checks: tuple[Check, ...]

    @property
    def all_passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def verdict(self, name: str) -> bool:
        for c in self.checks:
            if c.name == name:
                return c.passed
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "all_passed": self.all_passed,
            "checks": {c.name: ("pass" if c.passed else "fail") for c in self.checks},
            "details": {c.name: c.detail for c in self.checks if c.detail},
        }


PRESENTATION_KINDS = ("sqrt3", "sqrt2", "sqrt1_order2", "sqrt1_pair", "generic")

_SCENARIO_KIND = {
    "sqrt3_III": "sqrt3",
    "sqrt2_III": "sqrt2",
    "sqrt1_III_order2": "sqrt1_order2",
    "sqrt1_III_pair": "sqrt1_pair",
    "generic": "generic",
}


def kind_for_scenario(scenario: str) -> str | None:
    return _SCENARIO_KIND.get(scenario)


def _pick_M(G: GroupSet) -> Matrix | None:
    for g in G.generators:
        if g not in (I4, -I4, IOTA4, -IOTA4) and classify_type(g) != TypeTag.UNTYPED:
            return g
    return None


def _pick_pair(G: GroupSet) -> tuple[Matrix | None, Matrix | None]:
    M = N = None
    for g in G.generators:
        if classify_type(g) != TypeTag.III:
            continue
        deg = min_poly(g).degree
        if deg == 3 and M is None:
            M = g
        elif deg in (2, 4) and N is None:
            N = g
    return M, N


def _set_check(name: str, G: GroupSet, words) -> Check:
    S = set(words)
    ok = S == set(G.elements)
    return Check(name, ok, f"{len(S)} words, group order {G.order}")


def verify_presentation(G: GroupSet, kind: str, M: Matrix | None = None, N: Matrix | None = None) -> PresentationReport:
    """Exact check of the defining identities and coset normal form for ``kind``.

    ``M`` (and ``N`` for the paired case) default to the designated
    generators found among ``G.generators``.  Failures are reported,
    never raised.
    """
    if kind not in PRESENTATION_KINDS:
        raise ValueError(f"unknown presentation kind {kind!r}")
    iota = IOTA4
    if kind == "sqrt1_pair":
        if M is None or N is None:
            pm, pn = _pick_pair(G)
            M, N = M or pm, N or pn
        if M is None or N is None:
            return PresentationReport(kind, (Check("M and N present", False, "M missing" if M is None else "N missing"),))
    elif M is None:
        M = _pick_M(G)
        if M is None:
            return PresentationReport(kind, (Check("M present", False, "M missing"),))

    checks = [Check("M in G", M in G), Check("iota in G", iota in G)]
    sign = (1, -1)
    bit = (0, 1)

    if kind == "sqrt3":
        eta = (iota @ M**5) @ (iota @ M**2)
        checks += [
            Check("eta iota = -iota eta", eta @ iota == -(iota @ eta)),
            Check("eta^6 = -I", eta**6 == -I4, "eta^6 = I" if eta**6 == I4 else ""),
            Check("M iota M = -iota eta^2", M @ iota @ M == -(iota @ eta**2)),
            Check("eta^3 = -M^3", eta**3 == -(M**3)),
            _set_check(
                "G = +-iota^e1 eta^a1 M^a2 iota^e2",
                G,
                (
                    s * (iota**e1 @ eta**a1 @ M**a2 @ iota**e2)
                    for s, e1, e2, a1, a2 in itertools.product(sign, bit, bit, range(6), range(2))
                ),
            ),
        ]
    elif kind == "sqrt2":
        # the identities concern the order-8 element; an order-6 generator is replaced by iota M
        if min_poly(M).degree == 2:
            M = iota @ M
        eta = (iota @ M**2) @ (iota @ M**2)
        lhs = iota @ M @ iota @ M**2
        checks += [
            Check("iota M iota M = M^3 iota", iota @ M @ iota @ M == M**3 @ iota),
            Check("iota M iota M^2 = iota M^2 iota", lhs == iota @ M**2 @ iota),
            Check("iota M iota M^2 = iota eta M iota", lhs == iota @ eta @ M @ iota),
            _set_check(
                "G = +-iota^e1 eta^a1 M^a2 iota^e2",
                G,
                (
                    s * (iota**e1 @ eta**a1 @ M**a2 @ iota**e2)
                    for s, e1, e2, a1, a2 in itertools.product(sign, bit, bit, range(2), range(4))
                ),
            ),
        ]
    elif kind == "sqrt1_order2":
        iM = iota @ M
        checks.append(
            _set_check(
                "G = +-iota^e1 (iota M)^a iota^e2",
                G,
                (s * (iota**e1 @ iM**a @ iota**e2) for s, e1, e2, a in itertools.product(sign, bit, bit, range(6))),
            )
        )
    elif kind == "sqrt1_pair":
        checks.append(Check("N in G", N in G))
        # the abelian subgroup is built from the x^2+-x+1 partner of N
        if min_poly(N).degree == 4:
            N = iota @ N
        X = N @ inverse(M)
        for label, Y in (("(iota M)^3", (iota @ M) ** 3), ("(iota M)^2", (iota @ M) ** 2)):
            H = closure([X, Y], cap=max(G.order, 16))
            abelian = all(a @ b == b @ a for a in H for b in H)
            checks.append(
                Check(
                    f"<N M^-1, {label}> abelian of order 16",
                    abelian and H.order == 16,
                    f"order {H.order}, {'abelian' if abelian else 'non-abelian'}",
                )
            )
        checks.append(Check("H all Type I", all(classify_type(h) == TypeTag.I for h in H)))
        checks.append(_set_check("G = eta1 M^a eta2", G, (a @ M**k @ b for a in H for b in H for k in range(3))))
    else:
        checks.append(
            _set_check(
                "G = +-iota^e1 M^a iota^e2",
                G,
                (s * (iota**e1 @ M**a @ iota**e2) for s, e1, e2, a in itertools.product(sign, bit, bit, range(2))),
            )
        )
    return PresentationReport(kind, tuple(checks))


# -- rigidity -------------------------------------------------------------------------------


def rigidity_violations(G) -> list[tuple[int, int, int]]:
    """Pairs of Type I elements whose same-position blocks break rigidity.

    Two non-scalar blocks at the same position with the same minimal
    polynomial must satisfy B = A or B = (det A) A^-1.  Returns triples
    (i, j, block position) of offenders.
    """
    elems = list(G)
    typed = [(i, g) for i, g in enumerate(elems) if classify_type(g) == TypeTag.I]
    bad = []
    for (i, X), (j, Y) in itertools.combinations(typed, 2):
        for pos, (A, B) in ((1, (_blk(X, 0), _blk(Y, 0))), (4, (_blk(X, 1), _blk(Y, 1)))):
            if A.is_scalar() or B.is_scalar() or min_poly(A) != min_poly(B):
                continue
            if B != A and B != det(A) * inverse(A):
                bad.append((i, j, pos))
    return bad


def _blk(X: Matrix, k: int) -> Matrix:
    o = 2 * k
    return Matrix([X.rows[o][o : o + 2], X.rows[o + 1][o : o + 2]])
