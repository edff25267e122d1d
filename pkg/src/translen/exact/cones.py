"""Rational polyhedral cones by exact double description.

A cone is given by integer generators.  Its canonical generating set is
``extreme_rays``: primitive integer vectors, sorted lexicographically.  For
a pointed cone these are exactly the extreme rays; for a cone with a
lineality space they are the rays of the pointed part (projected onto the
orthogonal complement of the lineality space) together with ``±`` a
Hermite-reduced basis of the lineality lattice.

Only ambient dimensions up to 4 are accepted, which keeps the quadratic
pair-combination step cheap and every intermediate exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import rank, saturate
from .rational import IntVec, dot, primitive

MAX_DIMENSION = 4


def _check_dimension(n: int) -> None:
    if n < 1:
        raise ValueError("cone ambient dimension must be positive")
    if n > MAX_DIMENSION:
        raise ValueError(f"exact cone computations are limited to dimension <= {MAX_DIMENSION}, got {n}")


def _double_description(inequalities: Sequence[Sequence[int]], n: int) -> tuple[list[IntVec], list[IntVec]]:
    """Generators of ``{x : a·x >= 0 for every a}`` as (lineality basis, rays)."""
    lineality: list[tuple[Fraction, ...]] = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    rays: list[tuple[Fraction, ...]] = []
    processed: list[Sequence[int]] = []
    for a in inequalities:
        processed.append(a)
        k = next((i for i, l in enumerate(lineality) if dot(a, l) != 0), None)
        if k is not None:
            pivot = lineality[k]
            pa = dot(a, pivot)
            if pa < 0:
                pivot = tuple(-x for x in pivot)
                pa = -pa
            rest = lineality[:k] + lineality[k + 1 :]
            lineality = [tuple(x - (dot(a, l) / pa) * y for x, y in zip(l, pivot)) for l in rest]
            rays = [tuple(x - (dot(a, r) / pa) * y for x, y in zip(r, pivot)) for r in rays]
            rays.append(pivot)
            continue
        plus = [r for r in rays if dot(a, r) > 0]
        zero = [r for r in rays if dot(a, r) == 0]
        minus = [r for r in rays if dot(a, r) < 0]
        new = plus + zero
        for rp in plus:
            ap = dot(a, rp)
            for rm in minus:
                am = dot(a, rm)
                new.append(tuple(ap * y - am * x for x, y in zip(rp, rm)))
        lin_dim = len(lineality)
        seen: set[frozenset[int]] = set()
        rays = []
        for r in new:
            if not any(r):
                continue
            tight = frozenset(i for i, b in enumerate(processed) if dot(b, r) == 0)
            if tight in seen:
                continue
            tight_rows = [processed[i] for i in sorted(tight)]
            if (rank(tight_rows) if tight_rows else 0) != n - lin_dim - 1:
                continue
            seen.add(tight)
            rays.append(r)
    lin_int = [primitive(l) for l in lineality]
    if lin_int:
        lin_basis = [tuple(row) for row in saturate(lin_int).basis]
    else:
        lin_basis = []
    out_rays = []
    for r in rays:
        r = _project_off(r, lin_basis)
        if any(r):
            out_rays.append(primitive(r))
    return lin_basis, sorted(set(out_rays))


def _project_off(r: Sequence, basis: Sequence[Sequence[int]]) -> tuple[Fraction, ...]:
    """Orthogonal projection of ``r`` onto the complement of span(basis)."""
    if not basis:
        return tuple(Fraction(x) for x in r)
    # Gram-Schmidt over Q.
    ortho: list[tuple[Fraction, ...]] = []
    for b in basis:
        w = tuple(Fraction(x) for x in b)
        for o in ortho:
            w = tuple(x - (dot(w, o) / dot(o, o)) * y for x, y in zip(w, o))
        ortho.append(w)
    out = tuple(Fraction(x) for x in r)
    for o in ortho:
        out = tuple(x - (dot(out, o) / dot(o, o)) * y for x, y in zip(out, o))
    return out


@dataclass(frozen=True)
class Cone:
    """Closed convex cone generated by integer vectors."""

    ambient_dim: int
    generators: tuple[IntVec, ...]
    _rays: tuple[IntVec, ...] = field(default=(), compare=False, repr=False)
    _lineality: tuple[IntVec, ...] = field(default=(), compare=False, repr=False)
    _dual: tuple[IntVec, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence], ambient_dim: int | None = None) -> "Cone":
        gens = [tuple(g) for g in generators]
        if ambient_dim is None:
            if not gens:
                raise ValueError("cone needs at least one generator")
            ambient_dim = len(gens[0])
        _check_dimension(ambient_dim)
        if any(len(g) != ambient_dim for g in gens):
            raise ValueError("generator of wrong dimension")
        prim = [primitive(g) for g in gens if any(g)]
        if not prim:
            raise ValueError("cone needs a nonzero generator")
        # dual = {psi : psi·g >= 0}
        dual_lin, dual_rays = _double_description(prim, ambient_dim)
        dual_gens = dual_rays + dual_lin + [tuple(-x for x in v) for v in dual_lin]
        if dual_gens:
            lin, rays = _double_description(dual_gens, ambient_dim)
        else:
            lin = [tuple(row) for row in saturate([tuple(int(i == j) for j in range(ambient_dim)) for i in range(ambient_dim)]).basis]
            rays = []
        extreme = sorted(set(rays + lin + [tuple(-x for x in v) for v in lin]))
        dual_sorted = tuple(sorted(set(dual_gens)))
        return cls(ambient_dim, tuple(prim), tuple(extreme), tuple(lin), dual_sorted)

    @property
    def extreme_rays(self) -> tuple[IntVec, ...]:
        return self._rays

    @property
    def lineality_basis(self) -> tuple[IntVec, ...]:
        return self._lineality

    @property
    def dual_generators(self) -> tuple[IntVec, ...]:
        """Canonical generators of the dual cone; these are inward facet normals."""
        return self._dual

    def is_pointed(self) -> bool:
        return not self._lineality

    def dimension(self) -> int:
        return rank(self._rays)

    def is_full_dimensional(self) -> bool:
        return self.dimension() == self.ambient_dim

    def contains(self, x: Sequence) -> bool:
        return all(dot(psi, x) >= 0 for psi in self._dual)

    def contains_in_interior(self, x: Sequence) -> bool:
        """Interior relative to the ambient space (requires full dimension)."""
        if not self.is_full_dimensional():
            return False
        return all(dot(psi, x) > 0 for psi in self._dual)

    def facets(self) -> list[tuple[IntVec, frozenset[int]]]:
        """(inward normal, indices of extreme rays on it) for a pointed full-dimensional cone."""
        if not (self.is_pointed() and self.is_full_dimensional()):
            raise ValueError("facets are only provided for pointed full-dimensional cones")
        out = []
        for psi in self._dual:
            out.append((psi, frozenset(i for i, r in enumerate(self._rays) if dot(psi, r) == 0)))
        return out

    def same_cone(self, other: "Cone") -> bool:
        return self.ambient_dim == other.ambient_dim and self._rays == other._rays


def extreme_rays(c: Cone) -> tuple[IntVec, ...]:
    return c.extreme_rays


def dual_cone(c: Cone) -> Cone:
    return Cone.from_generators(c.dual_generators, c.ambient_dim) if c.dual_generators else _zero_cone(c.ambient_dim)


def _zero_cone(n: int) -> Cone:
    # The dual of the whole space: represented with an empty generator set.
    return Cone(n, (), (), (), tuple(sorted({tuple(int(i == j) * s for j in range(n)) for i in range(n) for s in (1, -1)})))


def cone_from_rational(generators: Sequence[Sequence], ambient_dim: int | None = None) -> Cone:
    """Cone generated by rational vectors (each replaced by its primitive integer multiple)."""
    return Cone.from_generators([primitive(g) for g in generators], ambient_dim)


__all__ = ["Cone", "MAX_DIMENSION", "cone_from_rational", "dual_cone", "extreme_rays"]
