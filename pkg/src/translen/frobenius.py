"""Exact membership in -φ(I(e,e')), Frobenius numbers and the graph W(φ).

For a primitive integral class φ in the open fibred cone, every
connected collection (p, S) of a minimal good path p from e to e' and a
set S of minimal cycles contributes the values

    c0 + <-φ(b) : b in S>_{Z>=0},   c0 = -φ(p) + sum_{b in S} -φ(b),

and -φ(I(e,e')) is the union of these translated numerical monoids.
Membership in a monoid is decided with its Apéry set (shortest paths
modulo the smallest generator), which is exact and independent of any
window.

Edge weights of W(φ) depend on the chosen lifts of the vertices: a
coboundary shifts them.  Only cycle averages are gauge invariant.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .exact.rational import IntVec, dot, vec_gcd
from .fibered import FiberedConeData, NotFibrationClass
from .flowgraph import Skeleton


class FrobeniusInfinite(ValueError):
    """The certified cover misses a residue class: the input is inconsistent."""


@lru_cache(maxsize=4096)
def _apery(generators: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Apéry set of the monoid generated by ``generators`` (already divided by their gcd).

    Returns (m, table) where m is the smallest generator and table[r] is
    the least monoid element congruent to r modulo m.
    """
    m = generators[0]
    dist: list[int | None] = [None] * m
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d != dist[r]:
            continue
        for g in generators[1:]:
            nd, nr = d + g, (r + g) % m
            if dist[nr] is None or nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return m, tuple(dist)


def _gcd_all(values: Iterable[int]) -> int:
    out = 0
    for v in values:
        out = gcd(out, v)
    return out


@dataclass(frozen=True)
class Monoid:
    """A numerical monoid <g_1, ..., g_k> with positive integer generators (possibly non-coprime)."""

    generators: tuple[int, ...]
    divisor: int = field(init=False)

    def __post_init__(self) -> None:
        gens = tuple(sorted(set(int(g) for g in self.generators)))
        if any(g <= 0 for g in gens):
            raise ValueError("monoid generators must be positive")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "divisor", _gcd_all(gens))

    def __contains__(self, x: int) -> bool:
        if x < 0:
            return False
        if x == 0:
            return True
        if not self.generators or x % self.divisor:
            return False
        m, table = _apery(tuple(g // self.divisor for g in self.generators))
        y = x // self.divisor
        return y >= table[y % m]

    def frobenius(self) -> int:
        """Largest multiple of the gcd outside the monoid (-gcd when nothing is missing)."""
        if not self.generators:
            raise ValueError("the trivial monoid has no Frobenius number")
        m, table = _apery(tuple(g // self.divisor for g in self.generators))
        return (max(table) - m) * self.divisor


@dataclass(frozen=True)
class Component:
    """One translated monoid ``offset + <generators>`` coming from a connected collection."""

    path: int
    cycles: frozenset[int]
    offset: int
    monoid: Monoid

    def __contains__(self, k: int) -> bool:
        return (k - self.offset) in self.monoid


@dataclass(frozen=True)
class AchievableSet:
    """The set -φ(I(source, target)) as a union of translated monoids."""

    source: str
    target: str
    phi: IntVec
    components: tuple[Component, ...]  # sorted by offset

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def minimum(self) -> int:
        if not self.components:
            raise ValueError("empty achievable set")
        return self.components[0].offset

    def __contains__(self, k: int) -> bool:
        for c in self.components:
            if c.offset > k:
                break
            if k in c:
                return True
        return False


@dataclass(frozen=True)
class FrobeniusResult:
    value: int
    certified_upper_bound: int  # F_low: every integer above it is achievable
    window: tuple[int, int]  # integers examined by the downward scan


@dataclass(frozen=True)
class WeightedGraph:
    """W(φ).  Raw weights are gauge dependent; only cycle averages are meaningful."""

    phi: IntVec
    vertices: tuple[str, ...]
    weights: Mapping[tuple[str, str], int]

    def edges(self) -> list[tuple[str, str, int]]:
        order = {v: i for i, v in enumerate(self.vertices)}
        return sorted(((u, v, w) for (u, v), w in self.weights.items()), key=lambda e: (order[e[0]], order[e[1]]))


class FrobeniusEngine:
    """Memoizing evaluator for one flow graph skeleton and one class φ."""

    def __init__(self, skeleton: Skeleton, phi: Sequence[int], fibered: FiberedConeData | None = None):
        if len(phi) != skeleton.graph.rank:
            raise NotFibrationClass(f"class has {len(phi)} coordinates, expected {skeleton.graph.rank}")
        if any(int(x) != x for x in phi):
            raise ValueError("class must be primitive integral")
        phi = tuple(int(x) for x in phi)
        if vec_gcd(phi) != 1:
            raise ValueError("class must be primitive integral")
        cycle_values = [-dot(phi, c.drift) for c in skeleton.cycles]
        if fibered is not None:
            fibered.require_interior(phi)
        elif any(v <= 0 for v in cycle_values):
            raise NotFibrationClass("not a fibration class: the class is not in the open fibred cone")
        self.skeleton = skeleton
        self.phi = phi
        self._cycle_values = cycle_values
        self._achievable: dict[tuple[str, str], AchievableSet] = {}
        self._frobenius: dict[tuple[str, str], FrobeniusResult | None] = {}

    def achievable_set(self, source: str, target: str) -> AchievableSet:
        key = (source, target)
        if key not in self._achievable:
            comps: dict[tuple[int, tuple[int, ...]], Component] = {}
            for p in self.skeleton.paths_between(source, target):
                base = -dot(self.phi, p.drift)
                for s in self.skeleton.collections[p.id]:
                    gens = tuple(self._cycle_values[i] for i in sorted(s))
                    monoid = Monoid(gens)
                    offset = base + sum(gens)
                    comps.setdefault((offset, monoid.generators), Component(p.id, s, offset, monoid))
            ordered = tuple(sorted(comps.values(), key=lambda c: (c.offset, c.monoid.generators)))
            self._achievable[key] = AchievableSet(source, target, self.phi, ordered)
        return self._achievable[key]

    def _representatives(self, path_id: int) -> frozenset[int]:
        """One minimal cycle per distinct drift, forming a connected collection with the path.

        Falls back to every minimal cycle (always connected, since the
        triangle-edges form a strongly connected graph) when the first
        representatives do not connect.
        """
        chosen: dict[IntVec, int] = {}
        for c in self.skeleton.cycles:
            chosen.setdefault(c.drift, c.id)
        reps = frozenset(chosen.values())
        if reps in self.skeleton.collections[path_id]:
            return reps
        return frozenset(c.id for c in self.skeleton.cycles)

    def certified_bound(self, source: str, target: str) -> int:
        """F_low from the sub-cover P'·<B> of -φ(I(source, target)).

        P' multiplies each minimal good path drift by one cycle drift per
        element of B; every integer above the returned bound is achievable.
        """
        paths = self.skeleton.paths_between(source, target)
        if not paths:
            raise ValueError(f"no minimal good path from {source} to {target}")
        monoid = Monoid(tuple(self._cycle_values))
        step = monoid.divisor
        tail = monoid.frobenius() + step  # every multiple of step from here on is in the monoid
        thresholds: dict[int, int] = {}
        for p in paths:
            extra = sum(self._cycle_values[i] for i in self._representatives(p.id))
            start = -dot(self.phi, p.drift) + extra + tail
            r = start % step
            thresholds[r] = min(thresholds.get(r, start), start)
        if len(thresholds) != step:
            raise FrobeniusInfinite(
                f"Frobenius infinite: residues modulo {step} are not all covered for {source}->{target}; invalid input"
            )
        return max(thresholds.values()) - step

    def frobenius(self, source: str, target: str) -> FrobeniusResult | None:
        """Largest integer not in -φ(I(source, target)); None when the set is empty."""
        key = (source, target)
        if key in self._frobenius:
            return self._frobenius[key]
        ach = self.achievable_set(source, target)
        if ach.is_empty:
            self._frobenius[key] = None
            return None
        upper = self.certified_bound(source, target)
        floor = ach.minimum - 1
        k = upper
        while k in ach:
            k -= 1
            assert k >= floor, "downward Frobenius scan passed below the smallest achievable value"
        result = FrobeniusResult(k, upper, (k, upper))
        self._frobenius[key] = result
        return result

    def edge_weight(self, source: str, target: str) -> int | None:
        """Weight of the W(φ) edge source -> target, or None when there is no edge."""
        forward = self.frobenius(source, target)
        if forward is None:
            return None
        backward = self.frobenius(target, source)
        if backward is None:
            return forward.value  # φ(I(target, source)) is empty, so forward.value is free
        return edge_weight_from_sets(
            self.achievable_set(source, target), forward.value, self.achievable_set(target, source), backward.value
        )

    def edge_exists(self, source: str, target: str) -> bool:
        return self.edge_weight(source, target) is not None

    def weighted_graph(self) -> WeightedGraph:
        verts = self.skeleton.graph.vertices
        weights = {}
        for u in verts:
            for v in verts:
                w = self.edge_weight(u, v)
                if w is not None:
                    weights[(u, v)] = w
        graph = WeightedGraph(self.phi, tuple(verts), weights)
        assert _has_cycle(graph), "W(phi) is acyclic, which is impossible for valid data"
        return graph


def edge_weight_from_sets(
    forward: AchievableSet, forward_frobenius: int, backward: AchievableSet, backward_frobenius: int
) -> int | None:
    """Edge weight given A = -φ(I(e, e')) and B = -φ(I(e', e)) with their Frobenius numbers.

    There is an edge exactly when some integer k lies outside A while -k
    lies outside B, that is, when A and φ(I(e', e)) = -B do not cover Z.
    Such a k must lie in [-F_B, F_A]: above F_A every integer is in A and
    below -F_B every integer is in -B.
    """
    for k in range(-backward_frobenius, forward_frobenius + 1):
        if k not in forward and -k not in backward:
            return forward_frobenius
    return None


def _has_cycle(graph: WeightedGraph) -> bool:
    g = nx.DiGraph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from(graph.weights)
    return not nx.is_directed_acyclic_graph(g)


def achievable_set(skeleton: Skeleton, source: str, target: str, phi: Sequence[int]) -> AchievableSet:
    return FrobeniusEngine(skeleton, phi).achievable_set(source, target)


def frobenius(skeleton: Skeleton, source: str, target: str, phi: Sequence[int]) -> FrobeniusResult | None:
    return FrobeniusEngine(skeleton, phi).frobenius(source, target)


def edge_exists(skeleton: Skeleton, source: str, target: str, phi: Sequence[int]) -> bool:
    return FrobeniusEngine(skeleton, phi).edge_exists(source, target)


def weighted_graph(skeleton: Skeleton, phi: Sequence[int]) -> WeightedGraph:
    return FrobeniusEngine(skeleton, phi).weighted_graph()


def translated_monoid_frobenius(offset: int, generators: Sequence[int]) -> int:
    """Frobenius number of the single set ``offset + <generators>`` (generators must be coprime)."""
    monoid = Monoid(tuple(generators))
    if monoid.divisor != 1:
        raise FrobeniusInfinite("Frobenius infinite: generators are not coprime")
    return offset + monoid.frobenius()
