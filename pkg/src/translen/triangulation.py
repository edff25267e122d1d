"""Layered taut ideal triangulations: parsing, validation, homology, drifts.

File format (UTF-8, one directive per line, ``#`` starts a comment)::

    tetrahedra N
    glue i f j g PERM        # face f of tet i <-> face g of tet j
    taut i bottom a b top c d
    label i NAME             # optional: name the flow-graph vertex of tet i
    frame r_1 ... r_n        # optional, n rows: pinned basis change of G

Faces are numbered by the opposite vertex.  ``PERM`` is a 4-character
string over ``0123`` whose k-th character is the image in tet j of vertex
k of tet i; it must send f to g.  Each gluing is written once and the
reverse direction is implied.

In tetrahedron i with bottom edge {a, b} and top edge {c, d}, the two
bottom faces are those containing the bottom edge (faces c and d) and the
two top faces are faces a and b.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .exact.linalg import matmul, smith_normal_form
from .exact.rational import IntVec, add
from .flowgraph import FlowGraph, FlowGraphError

Pair = frozenset[int]
ALL_PAIRS: tuple[Pair, ...] = tuple(frozenset(p) for p in combinations(range(4), 2))


class TriangulationError(ValueError):
    """Malformed or invalid triangulation input."""


@dataclass(frozen=True)
class TautTriangulation:
    tetrahedra_count: int
    # (tet, face) -> (tet', face', perm) with perm a tuple of 4 ints
    gluings: dict[tuple[int, int], tuple[int, int, tuple[int, ...]]]
    bottom: tuple[Pair, ...]
    top: tuple[Pair, ...]
    labels: tuple[str | None, ...] = ()
    frame: tuple[IntVec, ...] = ()

    @property
    def face_count(self) -> int:
        return len(self.gluings) // 2

    def bottom_faces(self, tet: int) -> frozenset[int]:
        return self.top[tet]

    def top_faces(self, tet: int) -> frozenset[int]:
        return self.bottom[tet]

    def to_text(self) -> str:
        lines = [f"tetrahedra {self.tetrahedra_count}"]
        for (i, f), (j, g, perm) in sorted(self.gluings.items()):
            if (i, f) < (j, g):
                lines.append(f"glue {i} {f} {j} {g} {''.join(map(str, perm))}")
        for i in range(self.tetrahedra_count):
            a, b = sorted(self.bottom[i])
            c, d = sorted(self.top[i])
            lines.append(f"taut {i} bottom {a} {b} top {c} {d}")
        for i, name in enumerate(self.labels):
            if name is not None:
                lines.append(f"label {i} {name}")
        for row in self.frame:
            lines.append("frame " + " ".join(map(str, row)))
        return "\n".join(lines) + "\n"


def _perm_from_string(word: str) -> tuple[int, ...]:
    if len(word) != 4 or sorted(word) != list("0123"):
        raise ValueError(f"{word!r} is not a permutation of 0123")
    return tuple(int(ch) for ch in word)


def _invert(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * 4
    for k, v in enumerate(perm):
        inv[v] = k
    return tuple(inv)


def parse_triangulation(text: str) -> TautTriangulation:
    count: int | None = None
    gluings: dict[tuple[int, int], tuple[int, int, tuple[int, ...]]] = {}
    taut: dict[int, tuple[Pair, Pair]] = {}
    labels: dict[int, str] = {}
    frame: list[IntVec] = []

    def tet_index(word: str) -> int:
        i = int(word)
        if count is None:
            raise ValueError("'tetrahedra N' must come first")
        if not 0 <= i < count:
            raise ValueError(f"tetrahedron index {i} out of range")
        return i

    def vertex(word: str) -> int:
        v = int(word)
        if not 0 <= v <= 3:
            raise ValueError(f"vertex or face index {v} out of range")
        return v

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        try:
            if head == "tetrahedra":
                if count is not None or len(words) != 2:
                    raise ValueError("expected a single 'tetrahedra N' line")
                count = int(words[1])
                if count < 1:
                    raise ValueError("no tetrahedra")
            elif head == "glue":
                if len(words) != 6:
                    raise ValueError("expected 'glue i f j g PERM'")
                i, f = tet_index(words[1]), vertex(words[2])
                j, g = tet_index(words[3]), vertex(words[4])
                perm = _perm_from_string(words[5])
                if perm[f] != g:
                    raise ValueError(f"permutation {words[5]} does not send face {f} to face {g}")
                if (i, f) == (j, g):
                    raise ValueError("fixed point in gluing involution")
                for key in ((i, f), (j, g)):
                    if key in gluings:
                        raise ValueError(f"face {key[1]} of tetrahedron {key[0]} glued twice")
                gluings[(i, f)] = (j, g, perm)
                gluings[(j, g)] = (i, f, _invert(perm))
            elif head == "taut":
                if len(words) != 8 or words[2] != "bottom" or words[5] != "top":
                    raise ValueError("expected 'taut i bottom a b top c d'")
                i = tet_index(words[1])
                if i in taut:
                    raise ValueError(f"taut data for tetrahedron {i} given twice")
                bot = frozenset((vertex(words[3]), vertex(words[4])))
                top = frozenset((vertex(words[6]), vertex(words[7])))
                if len(bot) != 2 or len(top) != 2 or bot & top:
                    raise ValueError("bottom and top edges must be opposite vertex pairs")
                taut[i] = (bot, top)
            elif head == "label":
                if len(words) != 3:
                    raise ValueError("expected 'label i NAME'")
                labels[tet_index(words[1])] = words[2]
            elif head == "frame":
                frame.append(tuple(int(x) for x in words[1:]))
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise TriangulationError(f"line {lineno}: {exc}") from None

    if count is None:
        raise TriangulationError("no tetrahedra")
    for i in range(count):
        for f in range(4):
            if (i, f) not in gluings:
                raise TriangulationError(f"face {f} of tetrahedron {i} is not glued")
        if i not in taut:
            raise TriangulationError(f"tetrahedron {i} has no taut data")
    if frame and any(len(r) != len(frame) for r in frame):
        raise TriangulationError("frame must be a square integer matrix")
    names = [labels.get(i) for i in range(count)]
    if len({n for n in names if n is not None}) != sum(1 for n in names if n is not None):
        raise TriangulationError("duplicate vertex labels")
    return TautTriangulation(
        count,
        gluings,
        tuple(taut[i][0] for i in range(count)),
        tuple(taut[i][1] for i in range(count)),
        tuple(names) if labels else (),
        tuple(frame),
    )


# -- edge classes ---------------------------------------------------------


@dataclass(frozen=True)
class Incidence:
    tet: int
    pair: Pair
    side: str  # "bottom", "top" or "equator"


@dataclass(frozen=True)
class EdgeClass:
    id: int
    incidences: tuple[Incidence, ...]  # cyclic order around the edge


def _side(t: TautTriangulation, tet: int, pair: Pair) -> str:
    if pair == t.bottom[tet]:
        return "bottom"
    if pair == t.top[tet]:
        return "top"
    return "equator"


def _walk_fan(t: TautTriangulation, tet: int, a: int, b: int, exit_face: int) -> list[tuple[int, int, int, int]]:
    """Walk around edge (a, b) of ``tet`` leaving through ``exit_face``.

    Returns the (tet, a, b, exit face) corners met until the walk returns to
    the starting corner.  Raises if the link of the edge is not a circle.
    """
    steps = []
    cur = (tet, a, b, exit_face)
    while True:
        steps.append(cur)
        cur_tet, cur_a, cur_b, cur_exit = cur
        j, g, perm = t.gluings[(cur_tet, cur_exit)]
        na, nb = perm[cur_a], perm[cur_b]
        (other,) = set(range(4)) - {na, nb, g}
        cur = (j, na, nb, other)
        if (j, frozenset((na, nb))) == (tet, frozenset((a, b))):
            if cur != (tet, a, b, exit_face):
                raise TriangulationError(f"edge link is not a circle around tetrahedron {tet} edge {sorted((a, b))}")
            return steps
        if len(steps) > 6 * t.tetrahedra_count:
            raise TriangulationError("edge link walk did not close up")


def edge_classes(t: TautTriangulation) -> tuple[EdgeClass, ...]:
    """Edge identification with the cyclic fan of each edge; validates layeredness."""
    seen: set[tuple[int, Pair]] = set()
    classes: list[EdgeClass] = []
    for tet in range(t.tetrahedra_count):
        for pair in ALL_PAIRS:
            if (tet, pair) in seen:
                continue
            a, b = sorted(pair)
            exit_face = min(set(range(4)) - pair)
            steps = _walk_fan(t, tet, a, b, exit_face)
            inc = []
            for tt, aa, bb, _ in steps:
                key = (tt, frozenset((aa, bb)))
                if key in seen:
                    raise TriangulationError("edge link is not a circle (edge visited twice)")
                seen.add(key)
                inc.append(Incidence(tt, key[1], _side(t, tt, key[1])))
            classes.append(EdgeClass(len(classes), tuple(inc)))
    _check_layered(t, classes)
    return tuple(classes)


def _check_layered(t: TautTriangulation, classes: Sequence[EdgeClass]) -> None:
    for (i, f), (j, g, _) in t.gluings.items():
        is_bottom_i = f in t.bottom_faces(i)
        is_bottom_j = g in t.bottom_faces(j)
        if is_bottom_i == is_bottom_j:
            raise TriangulationError(
                f"face {f} of tetrahedron {i} is not a bottom triangle of exactly one of its two sides (not layered)"
            )
    for c in classes:
        bottoms = [x.tet for x in c.incidences if x.side == "bottom"]
        tops = [x.tet for x in c.incidences if x.side == "top"]
        if len(bottoms) != 1:
            raise TriangulationError(
                f"edge class {c.id} is the bottom edge of {len(bottoms)} tetrahedra, expected exactly one (not layered)"
            )
        if len(tops) != 1:
            raise TriangulationError(
                f"edge class {c.id} is the top edge of {len(tops)} tetrahedra, expected exactly one (not layered)"
            )


# -- flow graph and drifts ------------------------------------------------


@dataclass(frozen=True)
class Face:
    id: int
    upper: tuple[int, int]  # (tet, face) where it is a bottom triangle
    lower: tuple[int, int]  # (tet, face) where it is a top triangle


@dataclass(frozen=True)
class Ingested:
    triangulation: TautTriangulation
    classes: tuple[EdgeClass, ...]
    faces: tuple[Face, ...]
    bottom_class: tuple[int, ...]  # tet -> class id of its bottom edge
    top_class: tuple[int, ...]
    vertex_names: tuple[str, ...]  # indexed by tet
    homology_rank: int
    face_classes: tuple[IntVec, ...]  # projected class of each face generator
    flow_graph: FlowGraph


def _faces(t: TautTriangulation) -> tuple[Face, ...]:
    faces = []
    for (i, f), (j, g, _) in sorted(t.gluings.items()):
        if f in t.bottom_faces(i):
            faces.append(Face(len(faces), (i, f), (j, g)))
    return tuple(faces)


def _class_of(classes: Sequence[EdgeClass], tet: int, pair: Pair) -> int:
    for c in classes:
        for x in c.incidences:
            if x.tet == tet and x.pair == pair:
                return c.id
    raise KeyError((tet, pair))


def _fan_sides(t: TautTriangulation, c: EdgeClass, face_at: dict[tuple[int, int], int]) -> tuple[list[int], list[int]]:
    """Faces crossed downward on the two sides of the fan around ``c``.

    Both lists run from the tetrahedron above the edge (whose bottom edge it
    is) to the tetrahedron below it (whose top edge it is).
    """
    (above,) = [x for x in c.incidences if x.side == "bottom"]
    a, b = sorted(above.pair)
    sides = []
    for exit_face in sorted(t.bottom_faces(above.tet)):
        steps = _walk_fan(t, above.tet, a, b, exit_face)
        crossed = []
        for tt, aa, bb, ex in steps:
            if _side(t, tt, frozenset((aa, bb))) == "top":
                break
            crossed.append(face_at[(tt, ex)])
        sides.append(crossed)
    return sides[0], sides[1]


def _spanning_tree_faces(t: TautTriangulation, faces: Sequence[Face]) -> set[int]:
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(t.tetrahedra_count)}
    for fc in faces:
        u, v = fc.upper[0], fc.lower[0]
        adj[u].append((v, fc.id))
        adj[v].append((u, fc.id))
    tree: set[int] = set()
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v, fid in adj[u]:
            if v not in seen:
                seen.add(v)
                tree.add(fid)
                queue.append(v)
    if len(seen) != t.tetrahedra_count:
        raise TriangulationError("triangulation is not connected")
    return tree


def ingest(t: TautTriangulation) -> Ingested:
    """Edge classes, homology of the dual spine, and the drift-labelled flow graph."""
    classes = edge_classes(t)
    faces = _faces(t)
    face_at: dict[tuple[int, int], int] = {}
    for fc in faces:
        face_at[fc.upper] = fc.id
        face_at[fc.lower] = fc.id
    bottom_class = tuple(_class_of(classes, i, t.bottom[i]) for i in range(t.tetrahedra_count))
    top_class = tuple(_class_of(classes, i, t.top[i]) for i in range(t.tetrahedra_count))
    tet_of_class = {c: i for i, c in enumerate(bottom_class)}

    # H_1 of the dual spine: one generator per face (dual 1-cell), one
    # relation per edge (boundary of the dual 2-cell), and the faces of a
    # spanning tree of the dual graph set to zero.
    nf = len(faces)
    relations: list[list[int]] = []
    sides = {}
    for c in classes:
        side1, side2 = _fan_sides(t, c, face_at)
        sides[c.id] = (side1, side2)
        row = [0] * nf
        for fid in side1:
            row[fid] += 1
        for fid in side2:
            row[fid] -= 1
        relations.append(row)
    for fid in sorted(_spanning_tree_faces(t, faces)):
        relations.append([int(k == fid) for k in range(nf)])
    _, d, v = smith_normal_form(relations)
    r = sum(1 for k in range(min(len(d), nf)) if d[k][k])
    n = nf - r
    if n == 0:
        raise TriangulationError("first homology has rank zero")
    face_classes = [tuple(v[fid][r:]) for fid in range(nf)]
    if t.frame:
        if len(t.frame) != n:
            raise TriangulationError(f"frame has size {len(t.frame)} but the homology rank is {n}")
        face_classes = [tuple(row[0] for row in matmul(t.frame, [[x] for x in fc])) for fc in face_classes]
    face_classes = tuple(face_classes)

    if t.labels:
        if any(name is None for name in t.labels):
            raise TriangulationError("either label every tetrahedron or none")
        names = tuple(t.labels)
    else:
        names = tuple(f"e{bottom_class[i]}" for i in range(t.tetrahedra_count))
    order = sorted(range(t.tetrahedra_count), key=lambda i: bottom_class[i])
    vertices = [names[i] for i in order]

    tri = []
    for fc in faces:
        tri.append((names[fc.upper[0]], names[fc.lower[0]], face_classes[fc.id]))
    tet_edges = []
    for i in order:
        e = top_class[i]
        side1, side2 = sides[e]
        d1 = _sum(face_classes[f] for f in side1)
        d2 = _sum(face_classes[f] for f in side2)
        if d1 != d2:
            raise TriangulationError(f"fan sides around edge class {e} disagree: orientation or sign bug")
        tet_edges.append((names[tet_of_class[e]], names[i], d1))
    try:
        fg = FlowGraph.build(n, vertices, tri, tet_edges)
    except FlowGraphError as exc:
        raise TriangulationError(str(exc)) from None
    return Ingested(t, classes, faces, bottom_class, top_class, names, n, face_classes, fg)


def _sum(vectors) -> IntVec:
    vectors = list(vectors)
    out = vectors[0]
    for x in vectors[1:]:
        out = add(out, x)
    return out


def build_flow_graph(t: TautTriangulation) -> FlowGraph:
    return ingest(t).flow_graph

