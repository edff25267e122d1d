"""Rational scalars and small vector helpers.

Rationals are :class:`fractions.Fraction`, which is always reduced with a
positive denominator and backed by Python's arbitrary-precision integers.
Vectors are plain tuples.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

Rat = Fraction
IntVec = tuple[int, ...]
RatVec = tuple[Fraction, ...]


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-2/5"`` or ``"0.25"`` into an exact rational."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc


def parse_rational_list(text: str) -> RatVec:
    """Parse a comma separated list such as ``"1,-1/2"``."""
    parts = [p for p in text.split(",")]
    if any(not p.strip() for p in parts):
        raise ValueError(f"bad rational list {text!r}")
    return tuple(parse_rational(p) for p in parts)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_vector(v: Iterable[Fraction | int]) -> str:
    return "(" + ",".join(format_rational(x) for x in v) + ")"


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(u, v)), 0)


def add(u: Sequence, v: Sequence) -> tuple:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def vec_gcd(v: Iterable[int]) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def lcm_denominators(v: Iterable) -> int:
    out = 1
    for x in v:
        d = Fraction(x).denominator
        out = out * d // gcd(out, d)
    return out


def primitive(v: Sequence) -> IntVec:
    """Positive rescaling of a nonzero rational vector to a primitive integer vector."""
    m = lcm_denominators(v)
    ints = [int(Fraction(x) * m) for x in v]
    g = vec_gcd(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)
