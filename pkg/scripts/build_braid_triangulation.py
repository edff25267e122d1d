"""Generate the layered triangulation of the braid fixture.

The fibre is a sphere with four punctures P, P1, P2, P3, triangulated as
the boundary of a tetrahedron.  Flipping P1P2 and PP3, then P2P3 and PP1,
turns the triangulation into its image under the monodromy.  Each flip
attaches one tetrahedron below the current surface; the final surface is
glued back to the initial one by a combinatorial isomorphism.

Every orientation-preserving isomorphism between the final and initial
surface triangulations is tried.  The candidates whose flow graph
reproduces the known minimal-cycle drifts (after an integral change of
basis) are kept.  The first such candidate is written out.

Usage: python scripts/build_braid_triangulation.py OUTPUT.tri
"""

from __future__ import annotations

import itertools
import sys

from translen.exact.linalg import determinant
from translen.flowgraph import Skeleton
from translen.triangulation import TautTriangulation, TriangulationError, ingest

# Side tuples in counter-clockwise order; corner k is opposite side k.
INITIAL = {
    "TA": ("p1p2", "pp2", "pp1"),
    "TB": ("pp3", "p1p3", "pp1"),
    "TC": ("pp3", "pp2", "p2p3"),
    "TM": ("p2p3", "p1p2", "p1p3"),
}
FLIPS = [["p1p2", "pp3"], ["p2p3", "pp1"]]
COLOUR = {"p1p2": "R", "p1p3": "R", "pp1": "B", "p2p3": "G", "pp2": "P", "pp3": "P"}
EXPECTED_CYCLES = {
    "RBR": (-1, 1),
    "RGR": (0, 1),
    "BPB": (0, 1),
    "GPG": (1, 1),
    "RBPGR": (2, 2),
    "RGPBR": (-2, 2),
}


def rotate(t, r):
    sides, attach = t
    return (sides[r:] + sides[:r], attach[r:] + attach[:r])


def layer():
    """Run the flips; return the glue list, taut data and both boundary surfaces."""
    tris = []  # list of (sides, attachments); attachment = ("top", name, corner) or (tet, vertex)
    for name, sides in INITIAL.items():
        tris.append((sides, tuple(("top", name, k) for k in range(3))))
    glues = []
    taut = []
    top_faces = {}  # (initial name) -> (tet, face, {initial corner: tet vertex})
    new_edge_count = 0
    tet_top_edge = []
    tet_bottom_edge = []

    def attach(t, tet, face, verts):
        """Glue the (old) triangle t to face ``face`` of new tetrahedron ``tet``."""
        _, att = t
        if att[0][0] == "top":
            name = att[0][1]
            top_faces[name] = (tet, face, {att[k][2]: verts[k] for k in range(3)})
            return
        upper = att[0][0]
        upper_verts = [a[1] for a in att]
        (upper_face,) = set(range(4)) - set(upper_verts)
        perm = [None] * 4
        for k in range(3):
            perm[upper_verts[k]] = verts[k]
        perm[upper_face] = face
        glues.append((upper, upper_face, tet, face, "".join(map(str, perm))))

    for stage in FLIPS:
        for e in stage:
            # fixed by old triangulation: the two triangles containing e
            hits = [(i, t) for i, t in enumerate(tris) if e in t[0]]
            assert len(hits) == 2, (e, hits)
            (i1, t1), (i2, t2) = hits
            t1 = rotate(t1, t1[0].index(e))
            t2 = rotate(t2, t2[0].index(e))
            _, a_side, b_side = t1[0]
            _, c_side, d_side = t2[0]
            new = f"n{new_edge_count}"
            new_edge_count += 1
            tet = len(taut)
            # x -> 0, y -> 1, w -> 2, z -> 3
            attach(t1, tet, 2, (0, 1, 3))  # (x, y, z)
            attach(t2, tet, 0, (2, 3, 1))  # (w, z, y)
            n1 = ((c_side, new, b_side), ((tet, 0), (tet, 1), (tet, 2)))  # (x, y, w)
            n2 = ((d_side, a_side, new), ((tet, 0), (tet, 2), (tet, 3)))  # (x, w, z)
            taut.append(((0, 2), (1, 3)))
            tet_top_edge.append(e)
            tet_bottom_edge.append(new)
            tris = [t for k, t in enumerate(tris) if k not in (i1, i2)] + [n1, n2]
    return glues, taut, top_faces, tris, tet_top_edge, tet_bottom_edge


def isomorphisms(src, dst):
    """Orientation-preserving maps from triangle list ``src`` onto ``dst``.

    Yields dicts: src index -> (dst index, rotation r) meaning src corner k
    goes to dst corner (k + r) % 3.
    """

    def occurrences(tris):
        occ = {}
        for i, sides in enumerate(tris):
            for k, s in enumerate(sides):
                occ.setdefault(s, []).append((i, k))
        return occ

    occ_src, occ_dst = occurrences(src), occurrences(dst)
    for j0, r0 in itertools.product(range(len(dst)), range(3)):
        image = {0: (j0, r0)}
        edge_map = {}
        stack = [0]
        ok = True
        while stack and ok:
            i = stack.pop()
            j, r = image[i]
            for k, s in enumerate(src[i]):
                kk = (k + r) % 3
                s_img = dst[j][kk]
                if edge_map.setdefault(s, s_img) != s_img:
                    ok = False
                    break
                ((u, ku),) = [o for o in occ_src[s] if o != (i, k)]
                ((v, kv),) = [o for o in occ_dst[s_img] if o != (j, kk)]
                want = (v, (kv - ku) % 3)
                if u in image:
                    if image[u] != want:
                        ok = False
                        break
                else:
                    image[u] = want
                    stack.append(u)
        if ok and len(image) == len(src) and len(set(edge_map.values())) == len(edge_map):
            yield image


def candidates():
    glues, taut, top_faces, bottom_tris, tops, bottoms = layer()
    names = list(INITIAL)
    src = [INITIAL[n] for n in names]
    dst = [t[0] for t in bottom_tris]
    seen = set()
    for image in isomorphisms(src, dst):
        key = tuple(sorted(image.items()))
        if key in seen:
            continue
        seen.add(key)
        extra = []
        for i, name in enumerate(names):
            j, r = image[i]
            top_tet, top_face, top_map = top_faces[name]
            sides, att = bottom_tris[j]
            low_tet = att[0][0]
            low_verts = [a[1] for a in att]
            (low_face,) = set(range(4)) - set(low_verts)
            perm = [None] * 4
            for k in range(3):
                perm[low_verts[(k + r) % 3]] = top_map[k]
            perm[low_face] = top_face
            extra.append((low_tet, low_face, top_tet, top_face, "".join(map(str, perm))))
        yield image, glues + extra, taut, top_faces


def to_triangulation(all_glues, taut, labels=None, frame=()):
    gl = {}
    for i, f, j, g, p in all_glues:
        perm = tuple(int(c) for c in p)
        inv = [0] * 4
        for a, b in enumerate(perm):
            inv[b] = a
        gl[(i, f)] = (j, g, perm)
        gl[(j, g)] = (i, f, tuple(inv))
    return TautTriangulation(
        len(taut),
        gl,
        tuple(frozenset(b) for b, _ in taut),
        tuple(frozenset(t) for _, t in taut),
        tuple(labels) if labels else (),
        tuple(frame),
    )


def fit_basis(skeleton):
    """Unimodular matrix F with F @ drift(word) == expected for every expected cycle."""
    by_word = {}
    for c in skeleton.cycles:
        by_word.setdefault(rotation_free_word(c.vertices), []).append(c.drift)
    if set(by_word) != {rotation_free_word(tuple(w[:-1])) for w in EXPECTED_CYCLES}:
        return None
    pairs = []
    for w, target in EXPECTED_CYCLES.items():
        (d,) = by_word[rotation_free_word(tuple(w[:-1]))]
        pairs.append((d, target))
    # Solve using two independent cycles, then verify all.
    for (d1, t1), (d2, t2) in itertools.combinations(pairs, 2):
        det = determinant([d1, d2])
        if det == 0:
            continue
        # F @ [d1 d2] = [t1 t2]
        from translen.exact.linalg import inverse, matmul

        dm = [[d1[0], d2[0]], [d1[1], d2[1]]]
        tm = [[t1[0], t2[0]], [t1[1], t2[1]]]
        f = matmul(tm, inverse(dm))
        if any(x.denominator != 1 for row in f for x in row):
            return None
        f = [[int(x) for x in row] for row in f]
        if abs(determinant(f)) != 1:
            return None
        for d, t in pairs:
            if tuple(sum(f[r][c] * d[c] for c in range(2)) for r in range(2)) != t:
                return None
        return f
    return None


def rotation_free_word(verts):
    k = min(range(len(verts)), key=lambda i: verts[i:] + verts[:i])
    return "".join(verts[k:] + verts[:k])


def main(argv):
    found = []
    for image, glues, taut, top_faces in candidates():
        t = to_triangulation(glues, taut)
        try:
            data = ingest(t)
        except TriangulationError as exc:
            print("candidate rejected:", exc)
            continue
        # name each tetrahedron by the colour of its bottom edge's class
        colours = _class_colours(data, top_faces)
        if colours is None:
            print("candidate rejected: colours of identified surface edges disagree")
            continue
        labels = [colours.get(data.bottom_class[i]) for i in range(len(taut))]
        if None in labels or len(set(labels)) != len(labels):
            print("candidate rejected: colour classes do not match")
            continue
        t = to_triangulation(glues, taut, labels)
        data = ingest(t)
        sk = Skeleton.of(data.flow_graph)
        frame = fit_basis(sk)
        words = sorted(c.word() for c in sk.cycles)
        print("candidate", image, "rank", data.homology_rank, "cycles", words, "frame", frame)
        if frame is not None:
            found.append(to_triangulation(glues, taut, labels, frame))
    if not found:
        print("no candidate matches")
        return 1
    if len(argv) > 1:
        with open(argv[1], "w") as fh:
            fh.write(found[0].to_text())
    print(f"{len(found)} matching candidates")
    return 0


def _class_colours(data, top_faces):
    """Colour of each edge class, read off the initial surface edges."""
    colours = {}
    for name, sides in INITIAL.items():
        tet, _, corner_map = top_faces[name]
        for k, side in enumerate(sides):
            pair = frozenset((corner_map[(k + 1) % 3], corner_map[(k + 2) % 3]))
            cls = next(c.id for c in data.classes for x in c.incidences if x.tet == tet and x.pair == pair)
            if colours.setdefault(cls, COLOUR[side]) != COLOUR[side]:
                return None
    return colours


if __name__ == "__main__":
    sys.exit(main(sys.argv))
