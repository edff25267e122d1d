"""Maximum mean cycles, asymptotic translation lengths and their normalization.

The maximum average cycle weight is computed exactly with Karp's
characteristic formula on every strongly connected component, using
integer path weights and rational quotients.  Optimal cycles are then
read off the tight subgraph: after subtracting the optimum from every
weight, longest-path potentials exist and an edge is tight when its
reduced weight closes the potential gap.  A cycle is optimal exactly when
all of its edges are tight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .fibered import FiberedConeData, NotFibrationClass, SliceContext, primitivize
from .frobenius import FrobeniusEngine, WeightedGraph
from .flowgraph import Skeleton
from .exact.rational import IntVec


class AcyclicGraph(ValueError):
    """The weighted graph has no cycle."""


@dataclass(frozen=True)
class MaxMeanResult:
    value: Fraction
    witness: tuple[str, ...]  # canonical optimal simple cycle (vertex sequence, not closed)
    optimal_cycles: tuple[tuple[str, ...], ...]  # every optimal simple cycle, canonically rotated


def _canonical_rotation(cycle: Sequence[str]) -> tuple[str, ...]:
    c = tuple(cycle)
    return min(c[i:] + c[:i] for i in range(len(c)))


def _karp(nodes: list, edges: list[tuple[object, object, int]]) -> Fraction:
    """Karp's maximum mean over one strongly connected component."""
    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    neg = None
    table = [[neg] * n for _ in range(n + 1)]
    table[0][0] = 0
    for k in range(1, n + 1):
        prev, cur = table[k - 1], table[k]
        for u, v, w in edges:
            pu = prev[idx[u]]
            if pu is None:
                continue
            cand = pu + w
            j = idx[v]
            if cur[j] is None or cand > cur[j]:
                cur[j] = cand
    best = None
    for v in range(n):
        if table[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if table[k][v] is None:
                continue
            q = Fraction(table[n][v] - table[k][v], n - k)
            if worst is None or q < worst:
                worst = q
        if worst is not None and (best is None or worst > best):
            best = worst
    assert best is not None
    return best


def max_mean_cycle(vertices: Sequence[str], weights: Mapping[tuple[str, str], int]) -> MaxMeanResult:
    """Exact maximum average weight over all cycles, with optimal cycles."""
    g = nx.DiGraph()
    g.add_nodes_from(vertices)
    for (u, v), w in weights.items():
        g.add_edge(u, v, weight=w)
    best = None
    for comp in nx.strongly_connected_components(g):
        sub = g.subgraph(comp)
        if sub.number_of_edges() == 0:
            continue
        order = [v for v in vertices if v in comp]
        value = _karp(order, [(u, v, d["weight"]) for u, v, d in sub.edges(data=True)])
        if best is None or value > best:
            best = value
    if best is None:
        raise AcyclicGraph("graph has no cycle")

    # Tight subgraph: longest-path potentials for the reduced weights w - best.
    # (Bellman-Ford from a virtual source; no positive cycles remain.)
    potential = {v: Fraction(0) for v in vertices}
    for _ in range(len(vertices)):
        changed = False
        for (u, v), w in weights.items():
            cand = potential[u] + w - best
            if cand > potential[v]:
                potential[v] = cand
                changed = True
        if not changed:
            break
    tight = nx.DiGraph()
    tight.add_nodes_from(vertices)
    for (u, v), w in weights.items():
        if potential[u] + w - best == potential[v]:
            tight.add_edge(u, v)
    cycles = sorted(
        {_canonical_rotation(c) for c in nx.simple_cycles(tight)},
        key=lambda c: (len(c), c),
    )
    assert cycles, "tight subgraph must contain an optimal cycle"
    return MaxMeanResult(best, cycles[0], tuple(cycles))


def max_mean_of(graph: WeightedGraph) -> MaxMeanResult:
    return max_mean_cycle(graph.vertices, graph.weights)


@dataclass(frozen=True)
class AtlResult:
    phi_bar: IntVec
    ell: Fraction
    max_mean: Fraction
    witness: tuple[str, ...]
    optimal_cycles: tuple[tuple[str, ...], ...]
    graph: WeightedGraph


def atl(skeleton: Skeleton, phi: Sequence, fibered: FiberedConeData | None = None) -> AtlResult:
    """Asymptotic translation length of the monodromy of the primitive class on the ray of ``phi``."""
    if fibered is None:
        fibered = FiberedConeData.from_drifts([c.drift for c in skeleton.cycles])
    if len(phi) != fibered.rank:
        raise NotFibrationClass(f"class has {len(phi)} coordinates, expected {fibered.rank}")
    if all(Fraction(x) == 0 for x in phi):
        raise NotFibrationClass("not a fibration class: the zero class")
    phi_bar = primitivize(phi)
    fibered.require_interior(phi_bar)
    graph = FrobeniusEngine(skeleton, phi_bar, fibered).weighted_graph()
    mm = max_mean_of(graph)
    if mm.value <= 0:
        raise AssertionError("maximum average weight must be positive for a fibration class")
    return AtlResult(phi_bar, 1 / mm.value, mm.value, mm.witness, mm.optimal_cycles, graph)


@dataclass(frozen=True)
class MuValue:
    """μ_d = norm^(1+1/d) · ℓ.  Exact when d = 1; otherwise radicand^(1/d) kept symbolic."""

    d: int
    norm: Fraction
    ell: Fraction
    exact: Fraction | None  # set when d = 1
    radicand: Fraction  # μ_d = radicand ** (1/d)
    value: float

    def render(self, as_float: bool = False) -> str:
        from .exact.rational import format_rational

        if self.exact is not None and not as_float:
            return format_rational(self.exact)
        if as_float:
            return repr(self.value)
        return f"({format_rational(self.radicand)})^(1/{self.d})"


def mu_from_parts(norm: Fraction, ell: Fraction, d: int) -> MuValue:
    if norm <= 0:
        raise ValueError("norm must be positive")
    radicand = norm ** (d + 1) * ell**d
    exact = radicand if d == 1 else None
    return MuValue(d, norm, ell, exact, radicand, float(radicand) ** (1.0 / d))


def mu(skeleton: Skeleton, phi: Sequence, slice_: SliceContext, d: int | None = None) -> tuple[MuValue, AtlResult]:
    """Normalized translation length of the primitive class on the ray of ``phi`` (given in H^1 coordinates)."""
    d = slice_.d if d is None else d
    if d != slice_.d:
        raise ValueError(f"slice has dimension {slice_.d}, not {d}")
    result = atl(skeleton, phi, slice_.fibered)
    norm = slice_.class_norm(result.phi_bar)
    return mu_from_parts(norm, result.ell, d), result
