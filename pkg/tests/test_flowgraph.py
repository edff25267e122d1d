import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_simple_cycles
from translen.example import MINIMAL_CYCLES, MINIMAL_GOOD_PATHS, rotation_class, cycle_word
from translen.fixtures import braid_drift_graph, braid_skeleton
from translen.flowgraph import (
    FlowGraph,
    FlowGraphError,
    Skeleton,
    is_connected_collection,
    minimal_cycles,
    minimal_good_paths,
    parse_drift_graph,
)

FIXTURE_LABELS = {
    ("tri", "R", "B"): (0, 0),
    ("tri", "B", "R"): (-1, 1),
    ("tri", "R", "G"): (1, 0),
    ("tri", "G", "R"): (-1, 1),
    ("tri", "B", "P"): (2, 1),
    ("tri", "P", "B"): (-2, 0),
    ("tri", "G", "P"): (0, 1),
    ("tri", "P", "G"): (1, 0),
    ("tet", "R", "B"): (-1, 1),
    ("tet", "B", "R"): (-1, 2),
    ("tet", "G", "P"): (1, 2),
    ("tet", "P", "G"): (1, 1),
}

vectors = st.tuples(st.integers(-5, 5), st.integers(-5, 5))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def test_embedded_labels():
    fg = braid_drift_graph()
    assert {(e.kind, e.source, e.target): e.drift for e in fg.edges} == FIXTURE_LABELS


def test_degrees_and_strong_connectivity():
    fg = braid_drift_graph()
    for v in fg.vertices:
        assert sum(e.source == v for e in fg.triangle_edges) == 2
        assert sum(e.target == v for e in fg.triangle_edges) == 2
    assert nx.is_strongly_connected(fg.triangle_digraph())


def test_minimal_cycles_fixture():
    sk = braid_skeleton()
    got = {cycle_word(c.vertices): c.drift for c in sk.cycles}
    assert got == {rotation_class(w): d for w, d in MINIMAL_CYCLES.items()}


def test_minimal_cycles_match_brute_search():
    fg = braid_drift_graph()
    brute = brute_simple_cycles(fg)
    got = {}
    for c in minimal_cycles(fg):
        got.setdefault(min(c.vertices[i:] + c.vertices[:i] for i in range(len(c.vertices))), set()).add(c.drift)
    assert got == brute


def test_minimal_cycles_small_cases():
    loop = FlowGraph.build(1, ["a"], [("a", "a", (3,))], [], validate=False)
    (c,) = minimal_cycles(loop)
    assert c.drift == (3,)
    two = FlowGraph.build(1, ["a", "b"], [("a", "b", (1,)), ("b", "a", (2,))], [], validate=False)
    (c,) = minimal_cycles(two)
    assert c.word() == "aba" and c.drift == (3,)


def test_minimal_good_paths_fixture():
    sk = braid_skeleton()
    assert len(sk.paths) == 28
    got = {p.word(): p.drift for p in sk.paths}
    assert got == MINIMAL_GOOD_PATHS
    for t in sk.graph.tetrahedron_edges:
        assert sum(p.first_edge == t.id for p in sk.paths) == 7


def test_good_path_drift_is_sum_of_edge_drifts():
    sk = braid_skeleton()
    for p in sk.paths:
        total = sk.graph.edge(p.first_edge).drift
        for e in p.tail:
            total = add(total, sk.graph.edge(e).drift)
        assert total == p.drift
        assert len(set(p.vertices[1:])) == p.length


def test_single_tetrahedron_edge_path():
    fg = FlowGraph.build(1, ["a", "b"], [], [("a", "b", (1,))], validate=False)
    (p,) = minimal_good_paths(fg)
    assert p.length == 1 and p.word() == "ab"


def _achievable_drifts(sk, paths, limit):
    """Drifts of connected collections with second coordinate <= limit."""
    out = set()
    for p in paths:
        for s in sk.collections[p.id]:
            gens = [sk.cycles[i].drift for i in sorted(s)]
            base = p.drift
            for g in gens:
                base = add(base, g)
            out |= _monoid_translate(base, gens, limit)
    return out


def _monoid_translate(base, gens, limit):
    """base + <gens> restricted to second coordinate <= limit (all gens have positive second coordinate)."""
    seen = {base} if base[1] <= limit else set()
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = add(x, g)
                if y[1] <= limit and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_collections_of_path_rb():
    sk = braid_skeleton()
    (p,) = [p for p in sk.paths if p.word() == "RB"]
    # drift(RB) times the monoid <B> with the single element tu removed (the bare edge is allowed)
    everything = [c.drift for c in sk.cycles]
    expected = _monoid_translate(p.drift, everything, 8) - {add(p.drift, (1, 1))}
    assert _achievable_drifts(sk, [p], 8) == expected
    assert p.drift in expected
    for s in sk.collections[p.id]:
        if s:
            assert any("B" in sk.cycles[i].vertex_set for i in s)


def test_collections_of_path_rbp():
    sk = braid_skeleton()
    (p,) = [p for p in sk.paths if p.word() == "RBP"]
    everything = [c.drift for c in sk.cycles]
    assert _achievable_drifts(sk, [p], 8) == _monoid_translate(p.drift, everything, 8)


def test_path_through_every_vertex_admits_every_subset():
    sk = braid_skeleton()
    p = next(p for p in sk.paths if p.tail_vertices == frozenset(sk.graph.vertices))
    assert len(sk.collections[p.id]) == 2 ** len(sk.cycles)


def test_collections_agree_with_direct_check():
    sk = braid_skeleton()
    for p in sk.paths:
        admissible = set(sk.collections[p.id])
        for r in range(len(sk.cycles) + 1):
            for combo in itertools.combinations(sk.cycles, r):
                s = frozenset(c.id for c in combo)
                assert (s in admissible) == is_connected_collection(p, combo), (p.word(), sorted(s))


def test_decomposition_of_good_paths():
    """Every good path drift (bounded) is a connected-collection drift and conversely."""
    fg = braid_drift_graph()
    sk = braid_skeleton()
    limit = 6
    tri = {}
    for e in fg.triangle_edges:
        tri.setdefault(e.source, []).append(e)
    for t in fg.tetrahedron_edges:
        walks = {(t.target, t.drift)}
        frontier = set(walks)
        for _ in range(4 * (limit + 2)):
            frontier = {
                (e.target, add(d, e.drift)) for v, d in frontier for e in tri[v] if add(d, e.drift)[1] <= limit + 2
            }
            walks |= frontier
        for target in fg.vertices:
            brute = {d for v, d in walks if v == target and d[1] <= limit}
            paths = [p for p in sk.paths if p.first_edge == t.id and p.target == target]
            assert _achievable_drifts(sk, paths, limit) == brute, (t.source, target)


@settings(max_examples=60, deadline=None)
@given(st.lists(vectors, min_size=4, max_size=4))
def test_coboundary_preserves_cycle_drifts(potential):
    fg = braid_drift_graph()
    pot = dict(zip(fg.vertices, potential))
    shifted = fg.apply_coboundary(pot)
    assert [c.drift for c in minimal_cycles(shifted)] == [c.drift for c in minimal_cycles(fg)]
    before = {p.word(): p.drift for p in minimal_good_paths(fg)}
    for p in minimal_good_paths(shifted):
        expected = tuple(x + b - a for x, a, b in zip(before[p.word()], pot[p.source], pot[p.target]))
        assert p.drift == expected


def test_round_trip_and_parse_errors():
    fg = braid_drift_graph()
    assert parse_drift_graph(fg.to_text()) == fg
    with pytest.raises(FlowGraphError, match="missing 'rank'"):
        parse_drift_graph("vertex a\n")
    with pytest.raises(FlowGraphError, match="line 3"):
        parse_drift_graph("rank 1\nvertex a\ntri a a 1 2\n")
    bad_degree = fg.to_text().replace("tri R B 0 0\n", "")
    with pytest.raises(FlowGraphError, match="expected 2 and 2"):
        parse_drift_graph(bad_degree)
    with pytest.raises(FlowGraphError, match="unknown vertex"):
        parse_drift_graph(fg.to_text().replace("tri R B 0 0", "tri R X 0 0"))


def test_random_relabelings_keep_structure():
    rng = random.Random(7)
    fg = braid_drift_graph()
    for _ in range(5):
        m = [[1, rng.randint(-3, 3)], [0, 1]]
        g2 = fg.change_basis(m)
        sk = Skeleton.of(g2)
        assert len(sk.cycles) == 6 and len(sk.paths) == 28
