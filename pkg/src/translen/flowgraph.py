"""The drift-labelled flow graph and its finite combinatorial skeleton.

Vertices are edges of the layered triangulation (equivalently tetrahedra,
each named by its bottom edge).  There are two kinds of directed edges:

* triangle-edges, one per face, from the tetrahedron above the face to the
  tetrahedron below it;
* tetrahedron-edges, one per tetrahedron, from its top edge to its bottom
  edge.

Every edge carries a drift in G = H_1(M; Z)/torsion ≅ Z^n.  From this graph
we enumerate minimal cycles (simple cycles of triangle-edges), minimal good
paths (one tetrahedron-edge followed by triangle-edges, with pairwise
distinct endpoints) and the connected collections built from them.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .exact.rational import IntVec, add

MAX_VERTICES = 64
MAX_CYCLES = 10**6


class FlowGraphError(ValueError):
    """Raised when a flow graph violates a structural law."""


@dataclass(frozen=True)
class FlowEdge:
    id: int
    kind: str  # "tri" or "tet"
    source: str
    target: str
    drift: IntVec


@dataclass(frozen=True)
class FlowGraph:
    rank: int
    vertices: tuple[str, ...]
    triangle_edges: tuple[FlowEdge, ...]
    tetrahedron_edges: tuple[FlowEdge, ...]

    @classmethod
    def build(
        cls,
        rank: int,
        vertices: Sequence[str],
        triangle_edges: Iterable[tuple[str, str, Sequence[int]]],
        tetrahedron_edges: Iterable[tuple[str, str, Sequence[int]]],
        validate: bool = True,
    ) -> "FlowGraph":
        tri = [FlowEdge(i, "tri", s, t, tuple(int(x) for x in d)) for i, (s, t, d) in enumerate(triangle_edges)]
        tet = [
            FlowEdge(len(tri) + i, "tet", s, t, tuple(int(x) for x in d))
            for i, (s, t, d) in enumerate(tetrahedron_edges)
        ]
        fg = cls(rank, tuple(vertices), tuple(tri), tuple(tet))
        if validate:
            fg.validate()
        return fg

    # -- structure -------------------------------------------------------

    def edge(self, edge_id: int) -> FlowEdge:
        n = len(self.triangle_edges)
        return self.triangle_edges[edge_id] if edge_id < n else self.tetrahedron_edges[edge_id - n]

    @property
    def edges(self) -> tuple[FlowEdge, ...]:
        return self.triangle_edges + self.tetrahedron_edges

    def index(self, vertex: str) -> int:
        return self.vertices.index(vertex)

    def validate(self) -> None:
        names = set(self.vertices)
        if len(names) != len(self.vertices):
            raise FlowGraphError("duplicate vertex names")
        if not self.vertices:
            raise FlowGraphError("flow graph has no vertices")
        if len(self.vertices) > MAX_VERTICES:
            raise FlowGraphError(f"flow graph has more than {MAX_VERTICES} vertices")
        for e in self.edges:
            if e.source not in names or e.target not in names:
                raise FlowGraphError(f"edge {e.id} uses an unknown vertex")
            if len(e.drift) != self.rank:
                raise FlowGraphError(f"edge {e.id} has a drift of length {len(e.drift)}, expected {self.rank}")
        out_deg = defaultdict(int)
        in_deg = defaultdict(int)
        for e in self.triangle_edges:
            out_deg[e.source] += 1
            in_deg[e.target] += 1
        for v in self.vertices:
            if out_deg[v] != 2 or in_deg[v] != 2:
                raise FlowGraphError(
                    f"vertex {v} has {out_deg[v]} outgoing and {in_deg[v]} incoming triangle-edges, expected 2 and 2"
                )
        tet_out = defaultdict(int)
        tet_in = defaultdict(int)
        for e in self.tetrahedron_edges:
            tet_out[e.source] += 1
            tet_in[e.target] += 1
        for v in self.vertices:
            if tet_out[v] != 1 or tet_in[v] != 1:
                raise FlowGraphError(f"vertex {v} must be the source and target of exactly one tetrahedron-edge")
        if not nx.is_strongly_connected(self.triangle_digraph()):
            raise FlowGraphError("the triangle-edge graph is not strongly connected")

    def triangle_digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.source, e.target) for e in self.triangle_edges)
        return g

    # -- gauge -----------------------------------------------------------

    def apply_coboundary(self, potential: Mapping[str, Sequence[int]]) -> "FlowGraph":
        """Add ``c(target) - c(source)`` to every drift.  Cycle drifts are unchanged."""

        def shift(e: FlowEdge) -> FlowEdge:
            c_s = potential.get(e.source, (0,) * self.rank)
            c_t = potential.get(e.target, (0,) * self.rank)
            return replace(e, drift=tuple(d + b - a for d, a, b in zip(e.drift, c_s, c_t)))

        return replace(
            self,
            triangle_edges=tuple(shift(e) for e in self.triangle_edges),
            tetrahedron_edges=tuple(shift(e) for e in self.tetrahedron_edges),
        )

    def change_basis(self, matrix: Sequence[Sequence[int]]) -> "FlowGraph":
        """Replace every drift d by ``matrix @ d``."""
        if len(matrix) != self.rank or any(len(r) != self.rank for r in matrix):
            raise FlowGraphError("basis change must be a square matrix of the drift rank")

        def conv(e: FlowEdge) -> FlowEdge:
            return replace(e, drift=tuple(sum(r[j] * e.drift[j] for j in range(self.rank)) for r in matrix))

        return replace(
            self,
            triangle_edges=tuple(conv(e) for e in self.triangle_edges),
            tetrahedron_edges=tuple(conv(e) for e in self.tetrahedron_edges),
        )

    def to_text(self) -> str:
        """Serialise in the drift-graph file format."""
        lines = [f"rank {self.rank}"]
        lines += [f"vertex {v}" for v in self.vertices]
        for e in self.edges:
            lines.append(" ".join([e.kind, e.source, e.target, *map(str, e.drift)]))
        return "\n".join(lines) + "\n"


# -- drift-graph files ----------------------------------------------------


def parse_drift_graph(text: str) -> FlowGraph:
    rank = None
    vertices: list[str] = []
    tri: list[tuple[str, str, tuple[int, ...]]] = []
    tet: list[tuple[str, str, tuple[int, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        try:
            if head == "rank":
                if rank is not None or len(words) != 2:
                    raise ValueError("expected a single 'rank n' line")
                rank = int(words[1])
                if rank < 1:
                    raise ValueError("rank must be positive")
            elif head == "vertex":
                if len(words) != 2:
                    raise ValueError("expected 'vertex NAME'")
                if words[1] in vertices:
                    raise ValueError(f"vertex {words[1]} declared twice")
                vertices.append(words[1])
            elif head in ("tri", "tet"):
                if rank is None:
                    raise ValueError("'rank' must precede edges")
                if len(words) != 3 + rank:
                    raise ValueError(f"expected '{head} FROM TO' and {rank} drift entries")
                entry = (words[1], words[2], tuple(int(x) for x in words[3:]))
                (tri if head == "tri" else tet).append(entry)
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise FlowGraphError(f"line {lineno}: {exc}") from None
    if rank is None:
        raise FlowGraphError("missing 'rank' line")
    return FlowGraph.build(rank, vertices, tri, tet)


# -- minimal cycles -------------------------------------------------------


@dataclass(frozen=True)
class MinimalCycle:
    id: int
    edges: tuple[int, ...]
    vertices: tuple[str, ...]
    drift: IntVec
    vertex_set: frozenset[str] = field(compare=False)
    edge_set: frozenset[int] = field(compare=False)

    @property
    def label(self) -> str:
        return " ".join(self.vertices)

    def word(self) -> str:
        """Vertex word closing up on its first vertex, e.g. ``RBR``."""
        return "".join(self.vertices + self.vertices[:1])


def minimal_cycles(fg: FlowGraph, max_cycles: int = MAX_CYCLES) -> tuple[MinimalCycle, ...]:
    """All simple directed cycles of triangle-edges, in a deterministic order."""
    if len(fg.vertices) > MAX_VERTICES:
        raise FlowGraphError(f"cycle enumeration is limited to {MAX_VERTICES} vertices")
    parallel: dict[tuple[str, str], list[FlowEdge]] = defaultdict(list)
    for e in fg.triangle_edges:
        parallel[(e.source, e.target)].append(e)
    order = {v: i for i, v in enumerate(fg.vertices)}
    raw: list[tuple[tuple[str, ...], tuple[int, ...]]] = []
    for cyc in nx.simple_cycles(fg.triangle_digraph()):
        k = min(range(len(cyc)), key=lambda i: order[cyc[i]])
        cyc = cyc[k:] + cyc[:k]
        hops = [parallel[(cyc[i], cyc[(i + 1) % len(cyc)])] for i in range(len(cyc))]
        for choice in product(*hops):
            raw.append((tuple(cyc), tuple(e.id for e in choice)))
            if len(raw) > max_cycles:
                raise FlowGraphError(f"more than {max_cycles} minimal cycles")
    raw.sort(key=lambda item: (len(item[0]), [order[v] for v in item[0]], item[1]))
    if not raw:
        raise FlowGraphError("the triangle-edge graph has no cycles")
    out = []
    for i, (verts, eids) in enumerate(raw):
        drift = (0,) * fg.rank
        for eid in eids:
            drift = add(drift, fg.edge(eid).drift)
        out.append(MinimalCycle(i, eids, verts, drift, frozenset(verts), frozenset(eids)))
    return tuple(out)


# -- minimal good paths ---------------------------------------------------


@dataclass(frozen=True)
class MinimalGoodPath:
    id: int
    first_edge: int
    tail: tuple[int, ...]
    vertices: tuple[str, ...]  # e_0, e_1, ..., e_n
    drift: IntVec

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def tail_vertices(self) -> frozenset[str]:
        return frozenset(self.vertices[1:])

    def word(self) -> str:
        return "".join(self.vertices)


def minimal_good_paths(fg: FlowGraph) -> tuple[MinimalGoodPath, ...]:
    """Depth-first enumeration from every tetrahedron-edge."""
    out_edges: dict[str, list[FlowEdge]] = defaultdict(list)
    for e in fg.triangle_edges:
        out_edges[e.source].append(e)
    found: list[tuple[int, tuple[int, ...], tuple[str, ...], IntVec]] = []

    def extend(first: int, tail: list[int], verts: list[str], drift: IntVec) -> None:
        found.append((first, tuple(tail), tuple(verts), drift))
        seen = set(verts[1:])
        for e in out_edges[verts[-1]]:
            if e.target in seen:
                continue
            tail.append(e.id)
            verts.append(e.target)
            extend(first, tail, verts, add(drift, e.drift))
            tail.pop()
            verts.pop()

    for t in fg.tetrahedron_edges:
        extend(t.id, [], [t.source, t.target], t.drift)
    return tuple(MinimalGoodPath(i, *item) for i, item in enumerate(found))


# -- connected collections ------------------------------------------------


def connected_subsets(path: MinimalGoodPath, cycles: Sequence[MinimalCycle]) -> tuple[frozenset[int], ...]:
    """Cycle-id sets S for which (path, S) is a connected collection.

    The triangle-edges of the path's tail together with those of the cycles
    in S must form a connected graph.  When the path is its tetrahedron-edge
    alone, a nonempty S must contain a cycle through the endpoint; the empty
    set is always admissible, since every good path is such a sum.  Sets are
    grown one adjacent cycle at a time.
    """
    start: list[tuple[frozenset[int], frozenset[str]]] = [(frozenset(), path.tail_vertices)]
    if path.length == 1:
        for c in cycles:
            if path.target in c.vertex_set:
                start.append((frozenset({c.id}), c.vertex_set))
    seen: dict[frozenset[int], frozenset[str]] = {}
    queue = deque()
    for s, verts in start:
        if s not in seen:
            seen[s] = verts
            queue.append(s)
    while queue:
        s = queue.popleft()
        verts = seen[s]
        if not s and path.length == 1:
            continue  # the bare tetrahedron-edge grows only through its endpoint
        for c in cycles:
            if c.id in s or not (c.vertex_set & verts):
                continue
            t = s | {c.id}
            if t not in seen:
                seen[t] = verts | c.vertex_set
                queue.append(t)
    return tuple(sorted(seen, key=lambda s: (len(s), sorted(s))))


def is_connected_collection(path: MinimalGoodPath, cycles: Sequence[MinimalCycle]) -> bool:
    """Direct check of the connected-collection condition (used as an oracle)."""
    g = nx.Graph()
    tail_verts = list(path.vertices[1:]) if path.length >= 2 else []
    for a, b in zip(tail_verts, tail_verts[1:]):
        g.add_edge(a, b)
    for c in cycles:
        vs = c.vertices
        if len(vs) == 1:
            g.add_node(vs[0])
        for i in range(len(vs)):
            g.add_edge(vs[i], vs[(i + 1) % len(vs)])
    if not cycles:
        return True
    if path.length == 1 and not any(path.target in c.vertex_set for c in cycles):
        return False
    return nx.is_connected(g)


@dataclass(frozen=True)
class Skeleton:
    """Flow graph plus its minimal cycles, minimal good paths and collections."""

    graph: FlowGraph
    cycles: tuple[MinimalCycle, ...]
    paths: tuple[MinimalGoodPath, ...]
    collections: Mapping[int, tuple[frozenset[int], ...]]

    @classmethod
    def of(cls, fg: FlowGraph) -> "Skeleton":
        cycles = minimal_cycles(fg)
        paths = minimal_good_paths(fg)
        coll = {p.id: connected_subsets(p, cycles) for p in paths}
        return cls(fg, cycles, paths, coll)

    def paths_between(self, source: str, target: str) -> list[MinimalGoodPath]:
        return [p for p in self.paths if p.source == source and p.target == target]
