from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dehnkit.blocktype import BlockMat
from dehnkit.cli import DEFAULT_SIGMAS, V2788_V
from dehnkit.exactnum import QuadNum
from dehnkit.fillings import (
    KVector,
    MapKind,
    NonGenericPair,
    OrbitMode,
    OrderMismatch,
    PotentialDeg4,
    UntypedInput,
    Slope,
    act_slope,
    dependent_constraint_check,
    dependent_orbit,
    fixes_slope,
    induced_pair_map,
    k_vector,
    half_det_k_violation,
    parse_pair,
    projective_order,
    symmetry_set,
)
from dehnkit.groups import closure, maximal_group
from dehnkit.linalg import I2, IOTA4, M2, Matrix, SingularMatrix, inverse
from dehnkit.spectral import RelationViolation

from strategies import int_matrices_2x2, rational_matrices

F = Fraction
PAIR = (Slope(5, 7), Slope(3, 11))

coprime = st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(lambda t: gcd(*t) == 1)
slopes = coprime.map(lambda t: Slope.of(*t))


def test_slope_canonical_form():
    assert Slope.of(-2, -4) == Slope(1, 2)
    assert Slope.of(3, 0) == Slope(1, 0)
    assert Slope.parse("-5/7") == Slope(-5, 7)
    assert Slope.parse("5/-7") == Slope(-5, 7)
    assert str(Slope(3, 11)) == "3/11"
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope.parse("1/2/3")
    with pytest.raises(ValueError):
        Slope.of(0, 0)


def test_parse_pair():
    assert parse_pair("5/7,3/11") == PAIR
    with pytest.raises(ValueError):
        parse_pair("5/7")


@given(rational_matrices(2, nonsingular=True), rational_matrices(2, nonsingular=True), slopes)
def test_act_slope_is_a_right_action(A, B, s):
    # s -> (s) X^-1 composes contravariantly
    assert act_slope(A @ B, s) == act_slope(A, act_slope(B, s))
    assert act_slope(I2, s) == s
    assert act_slope(inverse(A), act_slope(A, s)) == s


@given(int_matrices_2x2(), slopes, st.fractions(min_value=-5, max_value=5).filter(lambda c: c != 0))
def test_act_slope_scale_invariant(A, s, c):
    assume(A[0, 0] * A[1, 1] != A[0, 1] * A[1, 0])
    assert act_slope(A * c, s) == act_slope(A, s)
    assert act_slope(-A, s) == act_slope(A, s)


def test_act_slope_singular():
    with pytest.raises(SingularMatrix):
        act_slope(M2(1, 2, 2, 4), Slope(1, 1))


def test_induced_map_kinds():
    G = closure(maximal_group(-3, "TypeI_II"))
    kinds = {induced_pair_map(g).kind for g in G}
    assert kinds == {MapKind.DIRECT, MapKind.SWAP}
    swap = induced_pair_map(Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]))
    assert swap.apply(PAIR) == (PAIR[1], PAIR[0])


def _compatible_source(s1: Slope) -> tuple[Slope, Slope]:
    B = BlockMat(V2788_V)
    v = s1.row()
    X = inverse(B.A1) @ B.A2
    return s1, Slope.of(v[0] * X[0, 0] + v[1] * X[1, 0], v[0] * X[0, 1] + v[1] * X[1, 1])


V_KVECTORS = {(F(3, 2), F(-1, 2), F(1, 2), F(1, 2)), (F(1, 2), F(1, 2), F(-1, 2), F(3, 2))}


def test_k_vector_of_v2788_frozen():
    src = (Slope(5, 7), Slope(19, 2))
    pm = induced_pair_map(V2788_V)
    assert pm.compatible(src)
    assert pm.apply(src) == (Slope(19, 2), Slope(5, 7))
    k = k_vector(V2788_V, src, pm.apply(src))
    assert k.as_tuple() == (F(3, 2), F(-1, 2), F(1, 2), F(1, 2))


@given(slopes)
def test_k_vector_of_v2788(s1):
    src = _compatible_source(s1)
    pm = induced_pair_map(V2788_V)
    assert pm.compatible(src)
    k = k_vector(V2788_V, src, pm.apply(src))
    if k is None:
        return  # primitive representatives need not satisfy the relations with unit sums
    assert k.sums_ok()
    assert k.as_tuple() in V_KVECTORS
    assert F(1, 2) in k.as_tuple()
    assert k.det_relation_ok(BlockMat(V2788_V).dets()) is True


def test_k_vector_incompatible_is_none():
    pm = induced_pair_map(V2788_V)
    assert not pm.compatible(PAIR)
    assert k_vector(V2788_V, PAIR, pm.apply(PAIR)) is None


def test_k_rule_only_for_half_dets():
    half = (F(1, 2),) * 4
    k = KVector(F(3, 2), F(-1, 2), F(1, 2), F(1, 2))
    assert half_det_k_violation(k, half) == "k_j = 1/2"
    assert half_det_k_violation(k, (F(1, 2), F(1, 4), F(1, 2), F(1, 4))) is None
    k2 = KVector(F(1, 3), F(2, 3), F(2, 3), F(1, 3))
    assert half_det_k_violation(k2, half) == "1/k1 and 1/k4 both integral"
    assert half_det_k_violation(None, half) is None


SYMMETRY_TABLE = [
    (-3, "TypeI_II", False, 18, 18),
    (-3, "sqrt3_III", False, 9, 6),
    (-3, "TypeI_only", False, 9, 9),
    (-1, "TypeI_only", False, 4, 4),
    (-1, "sqrt1_III_pair", False, 12, 8),
    (-1, "sqrt1_III_pair", True, 8, 8),
    (-1, "TypeI_II", True, 8, 8),
    (-2, "sqrt2_III", False, 5, 2),
    (-7, "generic", False, 2, 2),
]


@pytest.mark.parametrize("D,scenario,filters,count,compat", SYMMETRY_TABLE)
def test_symmetry_counts(D, scenario, filters, count, compat):
    r = symmetry_set(closure(maximal_group(D, scenario)), PAIR, apply_filters=filters)
    assert r.count == count
    assert len(r.compatible_images) == compat
    assert PAIR in r.images



@given(coprime, coprime)
def test_symmetry_counts_stable_across_pairs(a, b):
    pair = (Slope.of(*a), Slope.of(*b))
    G = closure(maximal_group(-7, "generic"))
    try:
        r = symmetry_set(G, pair)
    except NonGenericPair:
        return
    assert r.count <= 2
    for img in r.images:
        assert symmetry_set(G, img).images == r.images


def test_images_are_orbit_closed():
    G = closure(maximal_group(-3, "TypeI_II"))
    r = symmetry_set(G, PAIR)
    for img in r.images:
        assert symmetry_set(G, img).images == r.images


def test_c22_parity_filter_reduces():
    G = closure(maximal_group(-1, "TypeI_II"))
    assert symmetry_set(G, PAIR, apply_filters=True, c22_nonzero=True).count == 6


def test_non_generic_pair_rejected():
    # a reflection block has real eigenvectors, so it fixes slopes
    G = closure([Matrix.diag(1, -1, 1, 1), IOTA4])
    with pytest.raises(NonGenericPair):
        symmetry_set(G, (Slope(1, 0), Slope(3, 11)))
    # the reflection has det -1, so on a generic pair the element is rejected as untyped
    with pytest.raises(UntypedInput):
        symmetry_set(G, PAIR)


def test_symmetry_json():
    r = symmetry_set(closure(maximal_group(-7, "generic")), PAIR)
    j = r.to_json()
    assert j["count"] == 2 and j["source"] == ["5/7", "3/11"]
    assert set(j) == {"source", "count", "count_compatible", "images", "dropped", "options"}


@pytest.mark.parametrize(
    "mode,D,count",
    [("SGI", -3, 9), ("SGI", -1, 4), ("NonSGI", -3, 3), ("NonSGI", -1, 4), ("SGI", -2, 1), ("NonSGI", -7, 1)],
)
def test_dependent_orbits(mode, D, count):
    s = DEFAULT_SIGMAS.get(D, I2)
    orbit = dependent_orbit(mode, D, PAIR, s, s)
    assert len(orbit) == count
    assert PAIR in orbit


def test_dependent_orbit_order_guard():
    with pytest.raises(OrderMismatch):
        dependent_orbit(OrbitMode.SGI, -3, PAIR, DEFAULT_SIGMAS[-1], DEFAULT_SIGMAS[-3])
    assert projective_order(M2(0, -1, 1, 0)) == 2
    assert projective_order(M2(1, 1, 0, 1)) is None


def test_fixes_slope():
    assert fixes_slope(M2(1, 0, 3, 1), Slope(1, 0))
    assert not fixes_slope(M2(0, -1, 1, 0), Slope(1, 0))


def test_dependent_constraint_check():
    tau = QuadNum(F(1, 2), F(1, 2), -3)
    rot = M2(0, -1, 1, -1)
    pot = PotentialDeg4(F(1), F(0), F(1))
    # identity blocks: z = w = 1, both eigen equations hold and 1 + 1 = 2 * 1
    assert dependent_constraint_check(I2, I2, tau, pot)
    assert isinstance(dependent_constraint_check(rot, I2, tau, pot), bool)
    with pytest.raises(RelationViolation):
        dependent_constraint_check(M2(1, 1, 0, 1), I2, tau, pot)
    with pytest.raises(RelationViolation):
        dependent_constraint_check(I2, I2, tau, PotentialDeg4(F(1), F(0), F(2)))


def test_iota_maps_fix_pair():
    assert induced_pair_map(IOTA4).apply(PAIR) == PAIR
