"""The bounding function g, its simplex closed form, the shape law and slice scans.

Points of a slice are given in slice coordinates (coefficients in the
lattice basis of Λ).  For a point φ of Ω (norm one),

    g(φ) = ( (d+1) · vol_{Λ*}(C* ∩ β_φ^{-1}[0,1]) / minocc(C* ∩ β_φ^{-1}(1)) )^(1/d).

The volume is an exact pyramid volume.  In dimension one the minimal
occupancy is 1 and g is an exact rational.  For d >= 2 the minimal
occupancy is unknown in general; unless the caller supplies it, the
occupancy of the base with respect to the lattice Λ* ∩ β^{-1}(0) is
estimated numerically (an upper estimate of the infimum over lattices)
and the value is flagged as uncertified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Sequence

from .atl import MuValue, atl, mu_from_parts
from .exact.linalg import Lattice, determinant, integer_kernel, inverse
from .exact.occupancy import DEFAULT_GRID, occupancy
from .exact.rational import RatVec, dot, format_rational, format_vector, primitive
from .exact.volume import pyramid_volume
from .fibered import BoundaryPoint, SliceContext, SliceError, primitivize
from .flowgraph import Skeleton


@dataclass(frozen=True)
class GValue:
    point: RatVec  # normalized slice coordinates
    d: int
    volume: Fraction  # vol_{Λ*}(C* ∩ β^{-1}[0,1])
    minocc: Fraction | float
    radicand: Fraction | float  # g = radicand ** (1/d)
    exact: Fraction | None  # g itself, when d = 1
    value: float
    uncertified_occupancy: bool

    def render(self, as_float: bool = False) -> str:
        if self.exact is not None and not as_float:
            return format_rational(self.exact)
        if as_float or not isinstance(self.radicand, Fraction):
            return repr(self.value)
        return f"({format_rational(self.radicand)})^(1/{self.d})"


def _base_lattice(beta: RatVec) -> Lattice:
    """Λ* ∩ β^{-1}(0) in standard coordinates of Σ*."""
    return Lattice.from_basis(integer_kernel([list(primitive(beta))], len(beta)))


def g_value(
    slice_: SliceContext,
    point: Sequence,
    minocc: Fraction | float | None = None,
    grid: int = DEFAULT_GRID,
) -> GValue:
    """g at the point of Ω on the ray of ``point`` (slice coordinates)."""
    if len(point) != slice_.d + 1:
        raise SliceError(f"point needs {slice_.d + 1} slice coordinates")
    if not slice_.is_interior(point):
        raise BoundaryPoint("g diverges at the boundary of Ω: the point is not interior")
    x = slice_.normalize(point)
    beta = slice_.beta(x)
    vol = pyramid_volume(slice_.dual, beta)
    d = slice_.d
    if d == 1:
        occ: Fraction | float = Fraction(1)
    elif minocc is not None:
        occ = minocc
    else:
        base = [tuple(Fraction(c) / dot(beta, r) for c in r) for r in slice_.dual.extreme_rays]
        shift = base[0]
        est = occupancy(_base_lattice(beta), [tuple(a - b for a, b in zip(v, shift)) for v in base], grid)
        occ = est.value
    radicand = (d + 1) * vol / occ
    exact = radicand if d == 1 else None
    return GValue(x, d, vol, occ, radicand, exact, float(radicand) ** (1.0 / d), d >= 2)


def simplex_g(
    vertices: Sequence[Sequence],
    alphas: Sequence,
    covolume: Fraction | None = None,
    occupancy_constant: Fraction | float | None = None,
) -> tuple[Fraction | float, Fraction | None]:
    """Closed form of g on a simplex slice with vertices ω_i, at Σ α_i ω_i.

    ``covolume`` is vol_Λ(Σ/<ω_1..ω_{d+1}>), computed from the vertices
    (given in lattice coordinates) when omitted.  Returns (radicand, exact
    g or None); g = radicand ** (1/d).
    """
    d = len(vertices) - 1
    if d < 1 or len(alphas) != d + 1:
        raise ValueError("need d+1 vertices and d+1 barycentric weights")
    alphas = [Fraction(a) for a in alphas]
    if any(a <= 0 for a in alphas) or sum(alphas) != 1:
        raise ValueError("barycentric weights must lie in the open standard simplex")
    if covolume is None:
        covolume = abs(determinant([[Fraction(x) for x in v] for v in vertices]))
    if covolume == 0:
        raise ValueError("simplex vertices are linearly dependent")
    if d == 1:
        occ: Fraction | float = Fraction(1)
    elif occupancy_constant is None:
        unit_simplex = [tuple(Fraction(i == j) for j in range(d)) for i in range(d)] + [(Fraction(0),) * d]
        occ = occupancy(Lattice.standard(d), unit_simplex).value
    else:
        occ = occupancy_constant
    prod = Fraction(1)
    for a in alphas:
        prod *= a
    radicand = 1 / (occ * factorial(d) * covolume * prod)
    return radicand, (radicand if d == 1 else None)


def barycentric(slice_: SliceContext, point: Sequence) -> tuple[Fraction, ...]:
    """Barycentric weights of the normalized point with respect to the vertices of a simplex Ω."""
    verts = slice_.vertices()
    if len(verts) != slice_.d + 1:
        raise SliceError("Ω is not a simplex")
    x = slice_.normalize(point)
    inv = inverse([list(v) for v in verts])  # rows ω_i; x = Σ α_i ω_i
    return tuple(sum((x[j] * inv[j][i] for j in range(len(x))), Fraction(0)) for i in range(len(verts)))


def shape_transport(
    slice1: SliceContext,
    slice2: SliceContext,
    iso: Sequence[Sequence],
    samples: Iterable[Sequence] = (),
) -> Fraction:
    """θ for a linear isomorphism Σ_1 -> Σ_2 (matrix on slice coordinates) carrying Ω_1 onto Ω_2.

    Checks the isomorphism on the vertices of Ω and, for every sample
    point, that g_2(i(φ)) = θ^(1/d) g_1(φ) (exactly when d = 1).
    """
    m = [[Fraction(x) for x in row] for row in iso]
    if slice1.d != slice2.d or len(m) != slice1.d + 1 or any(len(r) != slice1.d + 1 for r in m):
        raise SliceError("isomorphism does not match the slice dimensions")
    det = determinant(m)
    if det == 0:
        raise SliceError("map is not an isomorphism")

    def apply(x):
        return tuple(sum((row[j] * Fraction(x[j]) for j in range(len(x))), Fraction(0)) for row in m)

    images = sorted(apply(v) for v in slice1.vertices())
    if images != sorted(slice2.vertices()):
        raise SliceError("isomorphism does not carry Ω_1 onto Ω_2")
    theta = 1 / abs(det)
    d = slice1.d
    for x in samples:
        g1 = g_value(slice1, x)
        g2 = g_value(slice2, apply(x))
        if d == 1:
            if g2.exact != theta * g1.exact:
                raise AssertionError(f"shape law fails at {format_vector(x)}")
        elif abs(g2.value - float(theta) ** (1.0 / d) * g1.value) > 1e-9 * max(1.0, g2.value):
            raise AssertionError(f"shape law fails at {format_vector(x)}")
    return theta


# -- rows, scans and convergence -------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    point: RatVec  # normalized slice coordinates
    phi_bar: tuple[int, ...]
    norm: Fraction
    ell: Fraction
    max_mean: Fraction
    mu: MuValue
    g: GValue
    witness: tuple[str, ...]

    @property
    def gap(self) -> Fraction | float:
        if self.g.exact is not None and self.mu.exact is not None:
            return self.g.exact - self.mu.exact
        return self.g.value - self.mu.value


def evaluate_point(skeleton: Skeleton, slice_: SliceContext, point: Sequence, minocc=None) -> ScanRow:
    """μ_d and g at the rational point of Ω on the ray of ``point``."""
    x = slice_.normalize(point)
    gv = g_value(slice_, x, minocc)
    phi_bar = primitivize(slice_.to_class(x))
    result = atl(skeleton, phi_bar, slice_.fibered)
    norm = slice_.class_norm(phi_bar)
    muv = mu_from_parts(norm, result.ell, slice_.d)
    return ScanRow(x, phi_bar, norm, result.ell, result.max_mean, muv, gv, result.witness)


def point_from_parameter(slice_: SliceContext, t) -> RatVec:
    """The point ((1+t)/2)·ω_1 + ((1-t)/2)·ω_2 of a one-dimensional Ω, for t in (-1, 1)."""
    if slice_.d != 1:
        raise SliceError("the t parameter is defined only on one-dimensional slices")
    t = Fraction(t)
    if not -1 < t < 1:
        raise BoundaryPoint("g diverges at the boundary of Ω: t must lie strictly between -1 and 1")
    w1, w2 = slice_.vertices()
    return tuple((1 + t) / 2 * a + (1 - t) / 2 * b for a, b in zip(w1, w2))


def farey(depth: int, low: Fraction, high: Fraction) -> list[Fraction]:
    """Reduced fractions strictly between ``low`` and ``high`` with denominator <= depth."""
    out = set()
    for q in range(1, depth + 1):
        p_lo = (low * q).__floor__()
        p_hi = (high * q).__ceil__()
        for p in range(p_lo, p_hi + 1):
            f = Fraction(p, q)
            if low < f < high and f.denominator == q:
                out.add(f)
    return sorted(out)


def scan_points(slice_: SliceContext, depth: int) -> list[RatVec]:
    """Rational interior points of Ω in a fixed order.

    d = 1: the parameters t in (-1, 1) with denominator <= depth.
    d >= 2: slice coordinates other than the last one with nonzero norm
    coefficient run over fractions with denominator <= depth inside the
    bounding box of Ω; that coordinate is solved from norm = 1.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if slice_.d == 1:
        return [point_from_parameter(slice_, t) for t in farey(depth, Fraction(-1), Fraction(1))]
    verts = slice_.vertices()
    k = slice_.d + 1
    pivot = max(j for j in range(k) if slice_.norm[j] != 0)
    free = [j for j in range(k) if j != pivot]
    ranges = []
    for j in free:
        lo = min(v[j] for v in verts)
        hi = max(v[j] for v in verts)
        vals = farey(depth, lo, hi)
        if lo == hi:
            vals = [lo]
        ranges.append(vals)
    out = []
    for combo in product(*ranges):
        x = [Fraction(0)] * k
        for j, v in zip(free, combo):
            x[j] = v
        rest = 1 - sum(slice_.norm[j] * x[j] for j in free)
        x[pivot] = rest / slice_.norm[pivot]
        if slice_.is_interior(x):
            out.append(tuple(x))
    return out


def scan(skeleton: Skeleton, slice_: SliceContext, depth: int, minocc=None) -> list[ScanRow]:
    return [evaluate_point(skeleton, slice_, x, minocc) for x in scan_points(slice_, depth)]


@dataclass(frozen=True)
class ConvergenceRow:
    index: int
    row: ScanRow
    ratio: Fraction | float  # max_mean / norm^(1+1/d) = 1/μ_d
    predicted: Fraction | float  # 1/g(φ_0)
    residual: Fraction | float
    scaled_residual: float  # residual · norm^(1/d)


def convergence_scan(
    skeleton: Skeleton,
    slice_: SliceContext,
    target: Sequence,
    sequence: Sequence[Sequence],
    minocc=None,
) -> list[ConvergenceRow]:
    """Residuals of max_mean / norm^(1+1/d) against 1/g(φ_0) along a sequence of classes.

    ``target`` and the members of ``sequence`` are slice coordinates; the
    sequence must consist of pairwise distinct primitive classes.
    """
    phis = [primitivize(slice_.to_class(slice_.normalize(x))) for x in sequence]
    if len(set(phis)) != len(phis):
        raise ValueError("the sequence must consist of pairwise distinct classes")
    g0 = g_value(slice_, target, minocc)
    d = slice_.d
    predicted = 1 / g0.exact if g0.exact is not None else 1.0 / g0.value
    out = []
    for i, x in enumerate(sequence):
        row = evaluate_point(skeleton, slice_, x, minocc)
        if d == 1:
            ratio = row.max_mean / row.norm**2
            residual = ratio - predicted
            scaled = float(residual * row.norm)
        else:
            ratio = float(row.max_mean) / float(row.norm) ** (1 + 1 / d)
            residual = ratio - float(predicted)
            scaled = residual * float(row.norm) ** (1 / d)
        out.append(ConvergenceRow(i, row, ratio, predicted, residual, scaled))
    return out


__all__ = [
    "GValue",
    "ScanRow",
    "ConvergenceRow",
    "g_value",
    "simplex_g",
    "barycentric",
    "shape_transport",
    "evaluate_point",
    "point_from_parameter",
    "farey",
    "scan_points",
    "scan",
    "convergence_scan",
]
