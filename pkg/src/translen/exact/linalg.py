"""Exact integer and rational linear algebra.

Matrices are lists of rows.  Integer routines (Smith and Hermite normal
forms) never leave the integers; rational routines work over
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rational import IntVec, lcm_denominators, vec_gcd

IntMatrix = list[list[int]]


def identity(k: int) -> IntMatrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise ValueError("shape mismatch in matmul")
    cols = len(b[0]) if b else 0
    return [[sum((row[k] * b[k][j] for k in range(inner)), 0) for j in range(cols)] for row in a]


def transpose(m: Sequence[Sequence]) -> list[list]:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def _shape(m: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return rows, cols


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries and each diagonal entry divides the next.  The pivot choice is
    fixed (smallest absolute value, first in row-major order), so the output
    is deterministic.
    """
    rows, cols = _shape(m)
    a = [[int(x) for x in row] for row in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, src: int, q: int) -> None:
        # row[target] += q * row[src]
        if q:
            a[target] = [x + q * y for x, y in zip(a[target], a[src])]
            u[target] = [x + q * y for x, y in zip(u[target], u[src])]

    def add_col(target: int, src: int, q: int) -> None:
        if q:
            for row in a:
                row[target] += q * row[src]
            for row in v:
                row[target] += q * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return u, a, v
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                add_row(i, t, -(a[i][t] // pivot))
                clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                add_col(j, t, -(a[t][j] // pivot))
                clean = clean and a[t][j] == 0
            if not clean:
                continue
            offender = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % pivot),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def hermite_normal_form(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style Hermite normal form of the integer row span, zero rows dropped.

    Pivots are positive and strictly increase in column; entries above a
    pivot lie in ``[0, pivot)``.  Two integer matrices have the same output
    exactly when their rows span the same lattice.
    """
    rows, cols = _shape(m)
    a = [[int(x) for x in row] for row in m]
    out: IntMatrix = []
    r = 0
    for c in range(cols):
        # Euclid down column c among rows r..end
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
    out = [row for row in a[:r]]
    return out


def rank(m: Sequence[Sequence]) -> int:
    return len(row_echelon(m)[0])


def row_echelon(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q: (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def determinant(m: Sequence[Sequence]) -> Fraction:
    n, cols = _shape(m)
    if n != cols:
        raise ValueError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n, cols = _shape(m)
    if n != cols:
        raise ValueError("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValueError("singular matrix")
    return [row[n:] for row in red]


def solve_row_combination(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coefficients x with ``sum x_i basis_i == v`` (basis rows independent), or None."""
    k = len(basis)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    # Solve basis^T x = v.
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(len(v))]
    red, piv = row_echelon(aug)
    if k in piv:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(red, piv):
        x[c] = row[k]
    return x


def integer_kernel(m: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
    """Basis (as rows) of the integer vectors x with ``m @ x == 0``."""
    if not m:
        if cols is None:
            raise ValueError("column count needed for an empty matrix")
        return identity(cols)
    _, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    n = len(m[0])
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def integer_rows(vectors: Sequence[Sequence]) -> IntMatrix:
    """Scale each rational row by the lcm of its denominators (same rational span)."""
    out = []
    for vec in vectors:
        s = lcm_denominators(vec)
        out.append([int(Fraction(x) * s) for x in vec])
    return out


@dataclass(frozen=True)
class Lattice:
    """A lattice in Z^n, stored by its Hermite normal form basis."""

    ambient_dim: int
    basis: tuple[IntVec, ...]

    @classmethod
    def from_basis(cls, vectors: Sequence[Sequence[int]], ambient_dim: int | None = None) -> "Lattice":
        if ambient_dim is None:
            if not vectors:
                raise ValueError("ambient dimension needed for an empty basis")
            ambient_dim = len(vectors[0])
        rows = [[int(x) for x in v] for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("basis vector of wrong dimension")
        if rows and rank(rows) != len(rows):
            raise ValueError("lattice basis is not linearly independent")
        hnf = hermite_normal_form(rows) if rows else []
        return cls(ambient_dim, tuple(tuple(r) for r in hnf))

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls.from_basis(identity(n), n)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        return solve_row_combination(self.basis, v)

    def contains(self, v: Sequence) -> bool:
        x = self.coordinates(v)
        return x is not None and all(c.denominator == 1 for c in x)

    def is_saturated(self) -> bool:
        return saturate(self.basis) == self


def saturate(vectors: Sequence[Sequence], ambient_lattice: Lattice | None = None) -> Lattice:
    """The lattice ``span_Q(vectors) ∩ ambient_lattice``.

    The ambient lattice defaults to Z^n and must have full rank.  The result
    is saturated: the quotient of the ambient lattice by it is torsion free.
    """
    if not vectors:
        raise ValueError("cannot saturate an empty set of vectors")
    n = len(vectors[0])
    if ambient_lattice is None:
        ambient_lattice = Lattice.standard(n)
    if ambient_lattice.ambient_dim != n or ambient_lattice.rank != n:
        raise ValueError("ambient lattice must be full rank in the vectors' space")
    # Work in ambient-lattice coordinates, where the ambient lattice is Z^n.
    coords = []
    for v in vectors:
        x = ambient_lattice.coordinates(v)
        if x is None:
            raise ValueError("vector outside the ambient space")
        coords.append(x)
    ints = integer_rows(coords)
    if rank(ints) == 0:
        raise ValueError("cannot saturate a rank-0 span")
    # Saturation = integer vectors orthogonal to the integer kernel.
    kernel = integer_kernel(ints)
    sat = integer_kernel(kernel, cols=n) if kernel else identity(n)
    mapped = matmul(sat, [list(b) for b in ambient_lattice.basis])
    return Lattice.from_basis(mapped, n)


__all__ = [
    "IntMatrix",
    "Lattice",
    "determinant",
    "hermite_normal_form",
    "identity",
    "integer_kernel",
    "integer_rows",
    "inverse",
    "matmul",
    "rank",
    "row_echelon",
    "saturate",
    "smith_normal_form",
    "solve_row_combination",
    "transpose",
    "vec_gcd",
]
