"""Exact volumes of truncated cones and polytopes."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .cones import Cone
from .linalg import determinant, rank
from .rational import dot, primitive


def triangulate_cone(c: Cone) -> list[tuple[int, ...]]:
    """Pulling triangulation of a pointed full-dimensional cone.

    Returns simplicial cones as tuples of indices into ``c.extreme_rays``.
    The first ray of each face is pulled: a face is the union of the cones
    spanned by that ray and the triangulated facets of the face avoiding it.
    """
    rays = c.extreme_rays
    facet_sets = [s for _, s in c.facets()]

    def faces_of(face: frozenset[int], dim: int) -> list[frozenset[int]]:
        out: set[frozenset[int]] = set()
        for f in facet_sets:
            sub = face & f
            if sub != face and sub and rank([rays[i] for i in sorted(sub)]) == dim - 1:
                out.add(sub)
        return sorted(out, key=lambda s: sorted(s))

    def pull(face: frozenset[int], dim: int) -> list[tuple[int, ...]]:
        if len(face) == dim:
            return [tuple(sorted(face))]
        apex = min(face)
        out = []
        for sub in faces_of(face, dim):
            if apex in sub:
                continue
            for simplex in pull(sub, dim - 1):
                out.append(tuple(sorted((apex,) + simplex)))
        return out

    n = c.ambient_dim
    return pull(frozenset(range(len(rays))), n)


def pyramid_volume(c: Cone, beta: Sequence) -> Fraction:
    """Volume of ``c ∩ {x : 0 <= beta(x) <= 1}`` in the given coordinates.

    The region is the pyramid over ``conv{r / beta(r)}`` with apex 0, so its
    volume is the sum of ``|det| / n!`` over a triangulation of the cone.
    """
    n = c.ambient_dim
    if len(beta) != n:
        raise ValueError("beta has the wrong dimension")
    if not c.is_full_dimensional():
        raise ValueError("pyramid volume needs a full-dimensional cone")
    if not c.is_pointed():
        raise ValueError("pyramid is unbounded: cone is not pointed")
    rays = c.extreme_rays
    values = [Fraction(dot(beta, r)) for r in rays]
    if any(v <= 0 for v in values):
        raise ValueError("pyramid is unbounded: beta is not positive on every extreme ray")
    vertices = [tuple(Fraction(x) / v for x in r) for r, v in zip(rays, values)]
    total = Fraction(0)
    for simplex in triangulate_cone(c):
        total += abs(determinant([vertices[i] for i in simplex]))
    return total / factorial(n)


def polytope_volume(vertices: Sequence[Sequence]) -> Fraction:
    """Volume of a full-dimensional polytope in Q^k, k <= 3, given by vertices."""
    if not vertices:
        raise ValueError("empty polytope")
    k = len(vertices[0])
    base = vertices[0]
    if rank([[Fraction(x) - Fraction(y) for x, y in zip(v, base)] for v in vertices]) != k:
        raise ValueError("degenerate polytope")
    # Lift to the cone over {1} x P; the slab 0 <= x_0 <= 1 is the pyramid over P.
    lifted = [(1,) + tuple(v) for v in vertices]
    cone = Cone.from_generators([primitive(v) for v in lifted], k + 1)
    e0 = (1,) + (0,) * k
    return pyramid_volume(cone, e0) * (k + 1)
