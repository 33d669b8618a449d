"""Acceptance criteria 1-8.  Each test prints one PASS/FAIL line before asserting."""

from __future__ import annotations

import cmath
import random
import time
from fractions import Fraction

import pytest
import sympy

from dehnkit.blocktype import BlockMat, TypeTag, classify_type, positivity_check
from dehnkit.catalog import entries, match_catalog, random_params, synthesize
from dehnkit.cli import DEFAULT_SIGMAS, V2788_H, V2788_V
from dehnkit.exactnum import QuadNum, conj, norm
from dehnkit.fillings import Slope, act_slope, dependent_orbit, symmetry_set
from dehnkit.funceq import constraint_kernel
from dehnkit.groups import closure, maximal_group, type_census, verify_presentation
from dehnkit.linalg import I2, IOTA4, Matrix, block_inverse, det, finite_order, inverse, min_poly
from dehnkit.spectral import Verdict, aut_necessary_check, infer_cusp_shapes, primary_matrix, quad_roots_of_unity

F = Fraction
PAIR = (Slope(5, 7), Slope(3, 11))


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


def test_criterion_1_v2788_corpus(report):
    t0 = time.perf_counter()
    mh, mv = match_catalog(V2788_H), match_catalog(V2788_V)
    checks = {
        "H Type III": classify_type(V2788_H) == TypeTag.III,
        "H min poly x^2+1": str(min_poly(V2788_H)) == "x^2+1",
        "H field -2": mh is not None and mh.field_D == -2,
        "H coupled template (sqrt-2, a)": mh is not None and mh.entry.template_id == "III/sqrt-2/a",
        "V Type III": classify_type(V2788_V) == TypeTag.III,
        "V min poly x^2-x+1": str(min_poly(V2788_V)) == "x^2-x+1",
        "V third coupled form (sqrt-2, b-)": mv is not None and mv.entry.template_id == "III/sqrt-2/b-",
        "(V iota)^2 = H": (V2788_V @ IOTA4) ** 2 == V2788_H,
    }
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 1.0
    failed = [k for k, v in checks.items() if not v]
    report(1, ok, f"{len(checks) - len(failed)}/{len(checks)} exact checks in {dt:.3f}s" + (f"; failed {failed}" if failed else ""))
    assert ok, failed


def test_criterion_2_group_orders(report):
    want = [(-3, "TypeI_only", 36), (-1, "TypeI_only", 16), (-3, "TypeI_II", 72), (-1, "TypeI_II", 32), (-7, "generic", 8)]
    got, slow = {}, []
    for D, sc, n in want:
        t0 = time.perf_counter()
        G = closure(maximal_group(D, sc))
        dt = time.perf_counter() - t0
        got[(D, sc)] = G.order
        if dt >= 5.0:
            slow.append((sc, D, dt))
    census = type_census(closure(maximal_group(-3, "TypeI_II")))
    ok = all(got[(D, sc)] == n for D, sc, n in want) and census["I"] == 36 and census["II"] == 36 and not slow
    orders = ", ".join(f"{sc}@{D}={got[(D, sc)]}" for D, sc, _ in want)
    report(2, ok, f"{orders}; census I={census['I']} II={census['II']}" + (f"; slow {slow}" if slow else ""))
    assert ok


def test_criterion_3_presentations(report):
    sq3 = verify_presentation(closure(maximal_group(-3, "sqrt3_III")), "sqrt3")
    sq2 = verify_presentation(closure(maximal_group(-2, "sqrt2_III")), "sqrt2")
    v2788 = verify_presentation(closure([V2788_V, IOTA4, -Matrix.identity(4)]), "sqrt2", M=V2788_V)
    pair = verify_presentation(closure(maximal_group(-1, "sqrt1_III_pair")), "sqrt1_pair")
    stated = {
        "sqrt3: eta iota = -iota eta": sq3.verdict("eta iota = -iota eta"),
        "sqrt3: eta^6 = -I": sq3.verdict("eta^6 = -I"),
        "sqrt3: M iota M = -iota eta^2": sq3.verdict("M iota M = -iota eta^2"),
        "sqrt3: eta^3 = -M^3": sq3.verdict("eta^3 = -M^3"),
        "sqrt2: iota M iota M = M^3 iota": sq2.verdict("iota M iota M = M^3 iota"),
        "sqrt2: iota M iota M^2 = iota M^2 iota": sq2.verdict("iota M iota M^2 = iota M^2 iota"),
        "v2788: iota M iota M = M^3 iota": v2788.verdict("iota M iota M = M^3 iota"),
        "v2788: iota M iota M^2 = iota M^2 iota": v2788.verdict("iota M iota M^2 = iota M^2 iota"),
        "<N M^-1, (iota M)^3> abelian of order 16": pair.verdict("<N M^-1, (iota M)^3> abelian of order 16"),
    }
    failed = [k for k, v in stated.items() if not v]
    ok = not failed
    report(3, ok, f"{len(stated) - len(failed)}/{len(stated)} stated identities hold" + (f"; failing: {failed}" if failed else ""))
    assert ok, f"identities that do not hold on the canonical instances: {failed}"


def test_criterion_4_symmetry_counts(report):
    t0 = time.perf_counter()
    d3 = symmetry_set(closure(maximal_group(-3, "TypeI_II")), PAIR)
    d1 = symmetry_set(closure(maximal_group(-1, "sqrt1_III_pair")), PAIR, apply_filters=True)
    d2 = symmetry_set(closure(maximal_group(-2, "sqrt2_III")), PAIR)
    gen = symmetry_set(closure(maximal_group(-7, "generic")), PAIR)
    dt = time.perf_counter() - t0
    d2_realizable = len(d2.compatible_images)
    ok = d3.count == 18 and d1.count <= 8 and d2_realizable <= 3 and gen.count == 2 and dt < 5.0
    report(
        4,
        ok,
        f"D=-3: {d3.count}; D=-1 filtered: {d1.count}; D=-2 compatible: {d2_realizable} "
        f"(all induced images: {d2.count}); generic: {gen.count}; {dt:.2f}s",
    )
    assert ok


def test_criterion_5_dependent_orbits(report):
    got = {
        "SGI D=-3": len(dependent_orbit("SGI", -3, PAIR, DEFAULT_SIGMAS[-3], DEFAULT_SIGMAS[-3])),
        "SGI D=-1": len(dependent_orbit("SGI", -1, PAIR, DEFAULT_SIGMAS[-1], DEFAULT_SIGMAS[-1])),
    }
    for D in (-2, -5, -7):
        got[f"D={D}"] = len(dependent_orbit("SGI", D, PAIR, I2, I2))
    ok = got["SGI D=-3"] == 9 and got["SGI D=-1"] == 4 and all(got[f"D={D}"] == 1 for D in (-2, -5, -7))
    report(5, ok, ", ".join(f"{k}: {v}" for k, v in got.items()))
    assert ok


# -- criterion 6 -------------------------------------------------------------------------

_DEG4_ORDERS = (5, 8, 10, 12)


def _deg4(res) -> bool:
    return res is not None and res[0] in _DEG4_ORDERS


def _grid(D: int):
    vals = [F(n, 2) for n in range(-6, 7)]
    return [QuadNum(a, b, D) for a in vals for b in vals]


def _oracle_admissible_a() -> set[complex]:
    """a = lambda - 1/lambda for primitive roots of unity of degree 4, kept when a^2 is rational."""
    out = set()
    for m in _DEG4_ORDERS:
        for k in range(1, m):
            if sympy.gcd(k, m) != 1:
                continue
            lam = cmath.exp(2j * cmath.pi * k / m)
            a = lam - 1 / lam
            a2 = a * a
            if abs(a2.imag) < 1e-12 and abs(a2.real - round(a2.real)) < 1e-12 and a2.real < 0 and abs(a.real) < 1e-12:
                out.add(complex(0, round(a.imag, 9)))
    return out


def test_criterion_6_root_of_unity_tables(report):
    # lambda^2 - a lambda - b = 0, i.e. trace a and determinant -b
    found = set()
    for D in (-1, -2, -3, -5, -6, -7, -10, -11):
        for a in _grid(D):
            if _deg4(quad_roots_of_unity(a, QuadNum(-1, 0, D))):
                found.add(a)
    expected = {QuadNum(0, s, D) for s in (1, -1) for D in (-1, -2)}
    oracle = {complex(0, round(float(x.b) * abs(x.D) ** 0.5, 9)) for x in expected}
    part_b1 = found == expected and oracle == _oracle_admissible_a()

    zero_only, none_at_all = True, True
    for D, bs in ((-1, [QuadNum(0, 1, -1), QuadNum(0, -1, -1)]), (-3, [QuadNum(F(1, 2), F(1, 2), -3), QuadNum(F(1, 2), F(-1, 2), -3)])):
        for b in bs:
            hits = {a for a in _grid(D) if _deg4(quad_roots_of_unity(a, -b))}
            zero_only &= hits == {QuadNum(0, 0, D)}
    for b in (QuadNum(F(-1, 2), F(1, 2), -3), QuadNum(F(-1, 2), F(-1, 2), -3)):
        none_at_all &= not any(_deg4(quad_roots_of_unity(a, -b)) for a in _grid(-3))
    ok = part_b1 and zero_only and none_at_all
    report(
        6,
        ok,
        f"b=1 admissible a: {sorted(str(x) for x in found)}; "
        f"b in {{+-sqrt(-1), (1+-sqrt(-3))/2}} forces a=0: {zero_only}; b=(-1+-sqrt(-3))/2 has none: {none_at_all}",
    )
    assert ok


# -- criterion 7 -------------------------------------------------------------------------


def _rand_q(rng: random.Random) -> F:
    return F(rng.randint(-20, 20), rng.randint(1, 12))


def _field_samples(rng: random.Random, n: int) -> bool:
    fields = (-1, -2, -3, -5, -7, -11)
    for _ in range(n):
        D = rng.choice(fields)
        x, y, z = (QuadNum(_rand_q(rng), _rand_q(rng), D) for _ in range(3))
        if (x + y) * z != x * z + y * z or (x * y) * z != x * (y * z) or x + y != y + x:
            return False
        if conj(x * y) != conj(x) * conj(y) or conj(x + y) != conj(x) + conj(y) or norm(x) != (x * conj(x)).a:
            return False
        if not x.is_zero() and x * x.inverse() != 1:
            return False
    return True


def _block_inverse_samples(rng: random.Random, n: int) -> bool:
    done = 0
    while done < n:
        M = Matrix([[_rand_q(rng) for _ in range(4)] for _ in range(4)])
        if det(M) == 0 or det(BlockMat(M).A1) == 0:
            continue
        if block_inverse(M) != inverse(M):
            return False
        done += 1
    return True


def _catalog_samples(rng: random.Random, per_template: int) -> tuple[bool, bool]:
    roundtrip, invariants = True, True
    for e in entries():
        D = e.field_D if e.field_D is not None else -7
        for _ in range(per_template):
            B = synthesize(e.template_id, *random_params(e.template_id, rng))
            m = match_catalog(B)
            if m is None or (m.entry.template_id != e.template_id and e.template_id not in m.ambiguous_with):
                roundtrip = False
            if not positivity_check(B) or finite_order(B.whole) is None:
                invariants = False
            P = primary_matrix(B, *infer_cusp_shapes(B, D))
            if aut_necessary_check(P) == Verdict.VIOLATION:
                invariants = False
    return roundtrip, invariants


def _sym(q: QuadNum):
    return sympy.Rational(q.a.numerator, q.a.denominator) + sympy.Rational(q.b.numerator, q.b.denominator) * sympy.sqrt(q.D)


def _kernel_symbolic(rng: random.Random) -> tuple[bool, int]:
    u1, u2 = sympy.symbols("u1 u2")

    def form(f, x, y):
        return sum(_sym(c) * x**i * y ** (f.degree - i) for i, c in enumerate(f.coeffs))

    count = 0
    for e in entries():
        D = e.field_D if e.field_D is not None else -7
        B = synthesize(e.template_id, *random_params(e.template_id, rng))
        P = primary_matrix(B, *infer_cusp_shapes(B, D))
        (p11, p12), (p21, p22) = ([_sym(x) for x in r] for r in P.P.rows)
        bar = [[_sym(x) for x in r] for r in P.Pbar.rows]
        x, y = p11 * u1 + p12 * u2, p21 * u1 + p22 * u2
        for theta in constraint_kernel(P, 3):
            for i in range(2):
                lhs = form(theta[i], x, y)
                rhs = bar[i][0] * form(theta[0], u1, u2) + bar[i][1] * form(theta[1], u1, u2)
                if sympy.expand(lhs - rhs) != 0:
                    return False, count
            count += 1
    return True, count


def _slope_samples(rng: random.Random, n: int) -> bool:
    def rand_inv():
        while True:
            A = Matrix([[rng.randint(-5, 5) for _ in range(2)] for _ in range(2)])
            if det(A) != 0:
                return A

    for _ in range(n):
        A, B = rand_inv(), rand_inv()
        while True:
            p, q = rng.randint(-30, 30), rng.randint(-30, 30)
            if (p, q) != (0, 0):
                break
        s = Slope.of(p, q)
        c = _rand_q(rng) or F(1)
        if act_slope(A @ B, s) != act_slope(A, act_slope(B, s)) or act_slope(A * c, s) != act_slope(A, s):
            return False
    return True


def test_criterion_7_property_suites(report):
    rng = random.Random(7)
    t0 = time.perf_counter()
    parts = {"field axioms + conj (1e4)": _field_samples(rng, 10_000)}
    parts["block_inverse = inverse (200)"] = _block_inverse_samples(rng, 200)
    rt, inv = _catalog_samples(rng, 200)
    parts["catalog round-trip (200/template)"] = rt
    parts["positivity, finite order, aut check"] = inv
    sym_ok, n_sym = _kernel_symbolic(rng)
    parts[f"kernel re-verified symbolically ({n_sym} elements)"] = sym_ok
    parts["act_slope functoriality + scaling (1e3)"] = _slope_samples(rng, 1000)
    dt = time.perf_counter() - t0
    failed = [k for k, v in parts.items() if not v]
    ok = not failed and dt < 60.0
    report(7, ok, f"{len(parts) - len(failed)}/{len(parts)} suites in {dt:.1f}s" + (f"; failed {failed}" if failed else ""))
    assert ok, (failed, dt)


def test_criterion_8_excluded_volume_identities(report):
    # The volume equalities need hyperbolic-geometry computation and are out of scope.
    # What stands in for them are the exact matrix identities behind them.
    G = closure([V2788_V, IOTA4, -Matrix.identity(4)])
    substitutes = (V2788_V @ IOTA4) ** 2 == V2788_H and G.order == 48
    report(8, substitutes, "excluded by design (volume equalities); matrix-level substitutes hold" if substitutes else "substitutes fail")
    assert substitutes
