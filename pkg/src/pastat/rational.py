"""Exact rational scalars and vectors.

Scalars are ``gmpy2.mpq`` values (always in lowest terms with a positive
denominator).  Vectors are plain tuples of rationals.  Bulk dot products
go through integer-scaled numpy arrays, using int64 when a bound check
proves there can be no overflow and Python integers otherwise.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

Rational = type(mpq(0))
RVec = tuple

INF = math.inf

_LITERAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

# |entries| products summed over this many terms stay below 2**62.
_INT64_BUDGET = 1 << 62


def rat(x) -> Rational:
    """Convert ints, rational strings, Fractions and mpq values to mpq.

    Floats and decimal strings are rejected so that no rounded value can
    enter an exact computation.
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, np.integer)):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Rational:
    m = _LITERAL.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return mpq(num, den)


def fmt_rational(x) -> str:
    if x == INF:
        return "inf"
    return str(rat(x))


def vec(xs: Iterable) -> RVec:
    return tuple(rat(x) for x in xs)


def zeros(d: int) -> RVec:
    return (mpq(0),) * d


def unit(d: int, i: int, scale=1) -> RVec:
    v = [mpq(0)] * d
    v[i] = rat(scale)
    return tuple(v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), mpq(0))


def add(u: Sequence, v: Sequence) -> RVec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> RVec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> RVec:
    return tuple(c * a for a in u)


def neg(u: Sequence) -> RVec:
    return tuple(-a for a in u)


def norm_sq(u: Sequence):
    return dot(u, u)


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def lincomb(coeffs: Sequence, points: Sequence[Sequence]) -> RVec:
    d = len(points[0])
    out = [mpq(0)] * d
    for c, p in zip(coeffs, points):
        if c:
            for i in range(d):
                out[i] += c * p[i]
    return tuple(out)


def fmt_vec(u: Sequence) -> list:
    return [fmt_rational(a) for a in u]


def common_denominator(values: Iterable) -> int:
    return reduce(math.lcm, (rat(v).denominator for v in values), 1)


def to_int_rows(rows: Sequence[Sequence]) -> tuple[list[tuple[int, ...]], int]:
    """Scale all rows by one common denominator L; returns (integer rows, L)."""
    L = common_denominator(x for r in rows for x in r)
    return [tuple(int(x * L) for x in r) for r in rows], L


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = reduce(math.gcd, (int(a) for a in v), 0)
    if g <= 1:
        return tuple(int(a) for a in v)
    return tuple(int(a) // g for a in v)


def primitive_rational(v: Sequence) -> tuple[int, ...]:
    """Smallest integer vector that is a positive multiple of a rational one."""
    ints, _ = to_int_rows([v])
    return primitive(ints[0])


def bit_length(x) -> int:
    if x == INF:
        return 0
    q = rat(x)
    return max(int(q.numerator).bit_length(), int(q.denominator).bit_length())


def int_array(rows: Sequence[Sequence[int]], width: int | None = None) -> np.ndarray:
    """Integer matrix as int64 when entries fit comfortably, else object."""
    if len(rows) == 0:
        return np.zeros((0, width or 0), dtype=np.int64)
    m = max((abs(int(a)) for r in rows for a in r), default=0)
    if m < (1 << 62):
        return np.array(rows, dtype=np.int64).reshape(len(rows), -1)
    return np.array([[int(a) for a in r] for r in rows], dtype=object)


def max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def as_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    if a.size == 0:
        return a.astype(object)
    return np.array(a.tolist(), dtype=object)


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product; falls back to Python integers on overflow risk."""
    inner = a.shape[-1]
    if a.dtype != object and b.dtype != object:
        bound = max_abs(a) * max_abs(b) * max(inner, 1)
        if bound < _INT64_BUDGET:
            return a @ b
    return as_object(a) @ as_object(b)
