import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import good_path_values
from translen.fibered import NotFibrationClass
from translen.fixtures import braid_drift_graph, braid_skeleton
from translen.flowgraph import Skeleton
from translen.frobenius import (
    AchievableSet,
    Component,
    FrobeniusEngine,
    FrobeniusInfinite,
    Monoid,
    edge_weight_from_sets,
    translated_monoid_frobenius,
)

generator_lists = st.lists(st.integers(1, 25), min_size=1, max_size=4)


def sieve(generators, limit):
    reach = [False] * (limit + 1)
    reach[0] = True
    for x in range(1, limit + 1):
        reach[x] = any(x >= g and reach[x - g] for g in generators)
    return reach


@settings(max_examples=200, deadline=None)
@given(generator_lists)
def test_monoid_membership_matches_sieve(gens):
    m = Monoid(tuple(gens))
    limit = 400
    reach = sieve(gens, limit)
    assert [x in m for x in range(limit + 1)] == reach
    assert -1 not in m


@settings(max_examples=200, deadline=None)
@given(generator_lists)
def test_monoid_frobenius_matches_sieve(gens):
    m = Monoid(tuple(gens))
    reach = sieve(gens, 800)
    missing = [x for x in range(801) if x % m.divisor == 0 and not reach[x]]
    assert m.frobenius() == (max(missing) if missing else -m.divisor)


def test_translated_monoid_frobenius():
    assert translated_monoid_frobenius(5, [2, 3]) == 6
    with pytest.raises(FrobeniusInfinite):
        translated_monoid_frobenius(0, [2, 4])


def test_rr_set_for_phi_0_minus_1():
    eng = FrobeniusEngine(braid_skeleton(), (0, -1))
    ach = eng.achievable_set("R", "R")
    assert ach.minimum == 2
    assert [k in ach for k in range(0, 12)] == [False, False] + [True] * 10
    assert eng.frobenius("R", "R").value == 1


def test_all_sixteen_edges_for_phi_0_minus_1():
    w = FrobeniusEngine(braid_skeleton(), (0, -1)).weighted_graph()
    assert len(w.weights) == 16


def test_loop_weight_at_b_for_phi_1_minus_2():
    eng = FrobeniusEngine(braid_skeleton(), (1, -2))
    assert eng.edge_weight("B", "B") == 6


@pytest.mark.parametrize("phi", [(0, -1), (1, -2), (1, -3)])
def test_membership_matches_brute_good_paths(phi):
    fg = braid_drift_graph()
    eng = FrobeniusEngine(braid_skeleton(), phi)
    brute = good_path_values(fg, phi, 14)
    for u in fg.vertices:
        for v in fg.vertices:
            res = eng.frobenius(u, v)
            ach = eng.achievable_set(u, v)
            for k in range(-10, res.certified_upper_bound + 1):
                assert (k in ach) == (k in brute.get((u, v), set())), (phi, u, v, k)


@pytest.mark.parametrize("phi", [(0, -1), (1, -4), (2, -5)])
def test_scan_finds_the_largest_gap(phi):
    eng = FrobeniusEngine(braid_skeleton(), phi)
    for u in "RBGP":
        for v in "RBGP":
            res = eng.frobenius(u, v)
            ach = eng.achievable_set(u, v)
            assert res.value not in ach
            assert res.value <= res.certified_upper_bound
            assert all(k in ach for k in range(res.value + 1, res.certified_upper_bound + 60))


def _synthetic(offset, generators):
    return AchievableSet("e", "f", (1,), (Component(-1, frozenset(), offset, Monoid(tuple(generators))),))


def test_no_edge_when_the_two_sets_cover_the_integers():
    forward = _synthetic(0, [1])  # {0, 1, 2, ...}, Frobenius -1
    backward = _synthetic(1, [1])  # {1, 2, ...}, so phi(I(e', e)) = {..., -2, -1}
    assert edge_weight_from_sets(forward, -1, backward, 0) is None


def test_edge_when_a_gap_survives():
    forward = _synthetic(2, [1])
    backward = _synthetic(2, [1])
    assert edge_weight_from_sets(forward, 1, backward, 1) == 1


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=4, max_size=4))
def test_coboundary_shift_law(potential):
    fg = braid_drift_graph()
    pot = dict(zip(fg.vertices, potential))
    phi = (1, -3)
    base = FrobeniusEngine(braid_skeleton(), phi)
    shifted = FrobeniusEngine(Skeleton.of(fg.apply_coboundary(pot)), phi)

    def val(v):
        return sum(a * b for a, b in zip(phi, pot[v]))

    for u in fg.vertices:
        for v in fg.vertices:
            assert shifted.frobenius(u, v).value == base.frobenius(u, v).value - val(v) + val(u)


def test_non_primitive_or_exterior_classes_are_rejected():
    with pytest.raises(ValueError):
        FrobeniusEngine(braid_skeleton(), (2, -4))
    with pytest.raises(NotFibrationClass):
        FrobeniusEngine(braid_skeleton(), (1, -1))


def test_larger_classes_have_larger_gaps():
    rng = random.Random(3)
    for _ in range(5):
        k = rng.randint(3, 9)
        small = FrobeniusEngine(braid_skeleton(), (1, -k)).frobenius("B", "B").value
        large = FrobeniusEngine(braid_skeleton(), (1, -(k + 2))).frobenius("B", "B").value
        assert large > small
