"""The fibred cone, primitive classes and rational slices.

Cohomology classes are rational covectors on G ≅ Z^n (their values on
the basis of G).  The cone of fibred classes is the closed cone
``{phi : phi(b) <= 0 for every minimal-cycle drift b}``; its interior
classes are exactly those with ``phi(b) < 0`` for all b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact.cones import Cone
from .exact.linalg import Lattice, rank, saturate, smith_normal_form, solve_row_combination
from .exact.rational import IntVec, RatVec, dot, parse_rational, primitive
from .flowgraph import MinimalCycle


class NotFibrationClass(ValueError):
    """The class does not lie in the open fibred cone."""


class SliceError(ValueError):
    """Invalid slice data."""


class BoundaryPoint(ValueError):
    """A slice point lies on the boundary of the fibred face, where g diverges."""


@dataclass(frozen=True)
class FiberedConeData:
    rank: int
    drifts: tuple[IntVec, ...]  # B, deduplicated and sorted
    cone_b: Cone  # nonnegative span of B
    cone: Cone  # the closed fibred cone {phi : phi(b) <= 0}

    @classmethod
    def from_drifts(cls, drifts: Sequence[Sequence[int]]) -> "FiberedConeData":
        b = tuple(sorted({tuple(int(x) for x in d) for d in drifts}))
        if not b:
            raise ValueError("no drifts")
        n = len(b[0])
        if rank(b) != n:
            raise ValueError("the cycle drifts do not span G: the drift cone has empty interior")
        cone_b = Cone.from_generators(b, n)
        if not cone_b.is_pointed():
            raise ValueError("the drift cone contains a line: there is no fibred class")
        # {phi : phi(b) <= 0} = - dual(cone_b)
        cone = Cone.from_generators([tuple(-x for x in r) for r in cone_b.dual_generators], n)
        return cls(n, b, cone_b, cone)

    @property
    def rays(self) -> tuple[IntVec, ...]:
        return self.cone.extreme_rays

    def is_interior(self, phi: Sequence) -> bool:
        return all(dot(phi, b) < 0 for b in self.drifts)

    def in_closed_cone(self, phi: Sequence) -> bool:
        return all(dot(phi, b) <= 0 for b in self.drifts)

    def require_interior(self, phi: Sequence) -> None:
        if len(phi) != self.rank:
            raise NotFibrationClass(f"class has {len(phi)} coordinates, expected {self.rank}")
        if not self.is_interior(phi):
            raise NotFibrationClass("not a fibration class: the class is not in the open fibred cone")


def fibered_cone(cycles: Sequence[MinimalCycle]) -> FiberedConeData:
    return FiberedConeData.from_drifts([c.drift for c in cycles])


def primitivize(phi: Sequence) -> IntVec:
    """The primitive integral class on the ray through a nonzero rational class."""
    if all(Fraction(x) == 0 for x in phi):
        raise ValueError("the zero class has no primitive representative")
    return primitive(phi)


# -- slices ---------------------------------------------------------------


@dataclass(frozen=True)
class SliceContext:
    """A rational subspace Σ of H^1 with its lattice, cones and norm.

    Slice coordinates of a class are its coefficients in the Hermite basis
    ``lattice_basis`` of Λ = Σ ∩ H^1(M; Z).  In these coordinates Λ is the
    standard lattice, and dual coordinates on Σ* are values on that basis,
    so Λ* is standard too.
    """

    d: int
    fibered: FiberedConeData
    spanning: tuple[RatVec, ...]
    lattice: Lattice
    lattice_basis: tuple[IntVec, ...]
    cone: Cone  # C: slice coordinates of fibred classes
    dual: Cone  # C*: generated by -p(b)
    norm: RatVec  # values on the lattice basis

    def project(self, gamma: Sequence[int]) -> IntVec:
        """p : G -> Σ*, an element of G evaluated on the lattice basis."""
        return tuple(dot(lam, gamma) for lam in self.lattice_basis)

    def to_class(self, coords: Sequence) -> RatVec:
        n = self.fibered.rank
        return tuple(sum((Fraction(c) * lam[j] for c, lam in zip(coords, self.lattice_basis)), Fraction(0)) for j in range(n))

    def coordinates(self, phi: Sequence) -> RatVec:
        x = solve_row_combination(self.lattice_basis, phi)
        if x is None:
            raise SliceError("class does not lie in the slice")
        return tuple(x)

    def norm_of(self, coords: Sequence) -> Fraction:
        return Fraction(dot(self.norm, coords))

    def class_norm(self, phi: Sequence) -> Fraction:
        return self.norm_of(self.coordinates(phi))

    def normalize(self, coords: Sequence) -> RatVec:
        """Rescale slice coordinates to norm one (a point of Ω)."""
        nv = self.norm_of(coords)
        if nv <= 0:
            raise SliceError("norm is not positive at this point")
        return tuple(Fraction(c) / nv for c in coords)

    def beta(self, coords: Sequence) -> RatVec:
        """β_φ as a covector on Σ* in Λ*-coordinates: x ↦ Σ c_i x_i."""
        return tuple(Fraction(c) for c in coords)

    def is_interior(self, coords: Sequence) -> bool:
        return self.dual_positive(coords)

    def dual_positive(self, coords: Sequence) -> bool:
        return all(dot(coords, r) > 0 for r in self.dual.extreme_rays)

    def vertices(self) -> tuple[RatVec, ...]:
        """Vertices of Ω = C ∩ {norm = 1}, in the canonical ray order."""
        return tuple(self.normalize(r) for r in self.cone.extreme_rays)


def make_slice(basis: Sequence[Sequence], norm: Sequence, fibered: FiberedConeData) -> SliceContext:
    if not basis:
        raise SliceError("slice basis is empty")
    n = fibered.rank
    if any(len(v) != n for v in basis):
        raise SliceError(f"slice basis vectors must have {n} coordinates")
    spanning = tuple(tuple(Fraction(x) for x in v) for v in basis)
    d1 = rank(spanning)
    if d1 != len(spanning):
        raise SliceError("slice basis vectors are linearly dependent")
    if len(norm) != d1:
        raise SliceError(f"norm must have {d1} coordinates")
    lattice = saturate(spanning)
    lam = lattice.basis
    # p(G) must be the standard lattice of Σ*: the evaluation matrix is onto.
    _, dmat, _ = smith_normal_form([list(r) for r in lam])
    if any(dmat[i][i] != 1 for i in range(d1)):
        raise SliceError("projection onto the slice dual is not onto the standard lattice")
    proj = [tuple(dot(l, b) for l in lam) for b in fibered.drifts]
    dual = Cone.from_generators([tuple(-x for x in p) for p in proj if any(p)], d1)
    if not (dual.is_pointed() and dual.is_full_dimensional()):
        raise SliceError("slice misses the interior of the fibred cone")
    cone = Cone.from_generators(dual.dual_generators, d1)
    norm_vec = tuple(Fraction(x) for x in norm)
    for r in cone.extreme_rays:
        if dot(norm_vec, r) <= 0:
            raise SliceError("norm is not positive on the slice cone")
    # C and C* must be mutually dual.
    if Cone.from_generators(cone.dual_generators, d1).extreme_rays != dual.extreme_rays:
        raise SliceError("slice cones are not mutually dual")
    return SliceContext(d1 - 1, fibered, spanning, lattice, tuple(lam), cone, dual, norm_vec)


def parse_slice(text: str) -> tuple[int, list[RatVec], RatVec]:
    """Parse a slice file: ``dim d``, ``basis ...`` rows, one ``norm ...`` row."""
    dim = None
    basis: list[RatVec] = []
    norm = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.replace(",", " ").split()
        try:
            if words[0] == "dim":
                if dim is not None or len(words) != 2:
                    raise ValueError("expected a single 'dim d' line")
                dim = int(words[1])
                if dim < 1:
                    raise ValueError("slice dimension must be at least 1")
            elif words[0] == "basis":
                basis.append(tuple(parse_rational(x) for x in words[1:]))
            elif words[0] == "norm":
                if norm is not None:
                    raise ValueError("norm given twice")
                norm = tuple(parse_rational(x) for x in words[1:])
            else:
                raise ValueError(f"unknown directive {words[0]!r}")
        except ValueError as exc:
            raise SliceError(f"line {lineno}: {exc}") from None
    if dim is None or norm is None or not basis:
        raise SliceError("slice file needs 'dim', 'basis' and 'norm' lines")
    if len(basis) != dim + 1:
        raise SliceError(f"a {dim}-dimensional slice needs {dim + 1} basis rows, got {len(basis)}")
    return dim, basis, norm
