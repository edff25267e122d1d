"""Occupancy coefficients of polytopes with respect to lattices.

The occupancy of a convex body K with respect to a lattice L is the largest
volume of an affine copy ``a + b·K`` (b > 0) whose interior contains no
point of L, divided by the covolume of L.  In dimension one the answer is
exactly 1.  In higher dimension there is no closed form, so
:func:`occupancy` returns a non-certified numerical estimate together with
the certified lower bound 1.

Estimator: K is recentred at its vertex centroid and written in lattice
coordinates (so L becomes Z^k).  For each translation a on an N^k grid of
the unit cube, the largest empty scale is exactly ``min_z gauge(z - a)``
over integer points z, where ``gauge`` is the Minkowski gauge of the
recentred K.  The estimate is the maximum over the grid of
``scale^k · vol(K)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, sqrt
from typing import Sequence

import numpy as np

from .cones import Cone
from .linalg import Lattice, rank, solve_row_combination
from .rational import primitive
from .volume import polytope_volume

DEFAULT_GRID = 64


@dataclass(frozen=True)
class OccupancyEstimate:
    dimension: int
    value: Fraction | float
    certified: bool
    certified_lower_bound: Fraction
    grid: int | None = None
    best_translation: tuple[float, ...] | None = None
    best_scale: float | None = None

    def as_float(self) -> float:
        return float(self.value)


def _lattice_coordinates(lattice: Lattice, polytope: Sequence[Sequence]) -> list[list[Fraction]]:
    base = polytope[0]
    coords = []
    for v in polytope:
        diff = [Fraction(x) - Fraction(y) for x, y in zip(v, base)]
        x = solve_row_combination(lattice.basis, diff)
        if x is None:
            raise ValueError("polytope does not lie in a translate of the lattice's span")
        coords.append(x)
    return coords


def _facet_inequalities(vertices: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Rows (c0, c) with ``c0 + c·x >= 0`` describing conv(vertices) exactly."""
    k = len(vertices[0])
    cone = Cone.from_generators([primitive((1,) + tuple(v)) for v in vertices], k + 1)
    return [tuple(Fraction(x) for x in psi) for psi in cone.dual_generators]


def occupancy(lattice: Lattice, polytope: Sequence[Sequence], grid: int = DEFAULT_GRID) -> OccupancyEstimate:
    """Occupancy of ``conv(polytope)`` with respect to ``lattice``.

    The polytope must be full-dimensional inside a translate of the lattice's
    rational span.
    """
    if len(polytope) < 2:
        raise ValueError("degenerate polytope")
    coords = _lattice_coordinates(lattice, polytope)
    k = lattice.rank
    if rank(coords) != k:
        raise ValueError("degenerate polytope: not full-dimensional in the lattice's span")
    if k == 1:
        return OccupancyEstimate(1, Fraction(1), True, Fraction(1))
    if grid < 1:
        raise ValueError("grid size must be positive")

    centroid = [sum(c[i] for c in coords) / len(coords) for i in range(k)]
    centred = [[x - m for x, m in zip(c, centroid)] for c in coords]
    rows = _facet_inequalities(centred)
    # Each facet reads c0 + c·x >= 0 with c0 > 0 after centring; gauge(x) = max(-c·x / c0).
    normals = np.array([[float(-x / r[0]) for x in r[1:]] for r in rows])
    volume = polytope_volume(centred)

    # Upper bound on any empty scale: once s·K contains a ball of radius
    # sqrt(k)/2 every translate meets Z^k.
    inradius = min(1.0 / float(np.linalg.norm(n)) for n in normals)
    s_max = (sqrt(k) / 2.0) / inradius
    reach = s_max * max(float(np.linalg.norm([float(x) for x in v])) for v in centred)
    radius = int(ceil(reach)) + 1
    points = np.array(list(product(range(-radius, radius + 2), repeat=k)), dtype=float)

    axis = np.arange(grid, dtype=float) / grid
    translations = np.array(list(product(axis, repeat=k)))
    best_scale = -1.0
    best_a = None
    for a in translations:
        gauges = (points - a) @ normals.T
        scale = float(np.min(np.max(gauges, axis=1)))
        if scale > best_scale:
            best_scale, best_a = scale, a
    estimate = best_scale**k * float(volume)
    return OccupancyEstimate(
        dimension=k,
        value=max(estimate, 1.0),
        certified=False,
        certified_lower_bound=Fraction(1),
        grid=grid,
        best_translation=tuple(float(x) for x in best_a),
        best_scale=best_scale,
    )

