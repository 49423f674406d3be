"""Brute-force falsifiers: exhaustive lattice search and recession sampling.

These only ever refute. A negative grid value proves ``h >= 0`` false; a
negative recession slope proves ``h`` unbounded below. Silence proves nothing.

Lattice evaluation is exact: all data are scaled by a common denominator and
handled as integers (numpy int64 when the magnitudes allow it, Python ints
otherwise).
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .dcfunc import PolyhedralDC, Vector, as_rational, recession
from .errors import DimensionMismatch, GridTooLarge

DEFAULT_POINT_BUDGET = 10 ** 7
_CHUNK = 1 << 16


def point_budget() -> int:
    return int(os.environ.get("PDC_POINT_BUDGET", DEFAULT_POINT_BUDGET))


@dataclass(frozen=True)
class GridSpec:
    """The lattice ``-radius + step * k`` on each of ``dimension`` axes."""

    radius: Fraction
    step: Fraction
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "radius", as_rational(self.radius))
        object.__setattr__(self, "step", as_rational(self.step))
        if self.radius <= 0 or self.step <= 0 or self.dimension < 1:
            raise ValueError("radius, step and dimension must be positive")
        if self.step > 2 * self.radius:
            raise ValueError("step exceeds the box width")
        if (2 * self.radius / self.step).denominator != 1:
            raise ValueError("2*radius must be an integer multiple of step")

    @property
    def points_per_axis(self) -> int:
        return int(2 * self.radius / self.step) + 1

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dimension

    def axis(self) -> List[Fraction]:
        return [-self.radius + k * self.step for k in range(self.points_per_axis)]

    def points(self):
        """Lattice points in lexicographic order."""
        return itertools.product(self.axis(), repeat=self.dimension)


def _lattice_forms(pieces, g: GridSpec):
    """Rows ``(c, s_1..s_n)`` with ``piece(-r + step*k) = c + sum s_i k_i``."""
    return [
        [p.constant - g.radius * sum(p.gradient, Fraction(0))] + [g.step * x for x in p.gradient]
        for p in pieces
    ]


def _scaled_values(h: PolyhedralDC, g: GridSpec):
    """Yield ``(first lattice index, integer array of scale*h, scale)`` per chunk."""
    plus = _lattice_forms(h.plus_pieces, g)
    minus = _lattice_forms(h.minus_pieces, g)
    scale = math.lcm(*(x.denominator for row in plus + minus for x in row))
    plus = [[int(x * scale) for x in row] for row in plus]
    minus = [[int(x * scale) for x in row] for row in minus]
    npts = g.points_per_axis
    worst = max(abs(v) for row in plus + minus for v in row) * (1 + g.dimension * npts)
    dtype = np.int64 if 2 * worst < 2 ** 62 else object
    P = np.array(plus, dtype=dtype)
    M = np.array(minus, dtype=dtype)
    total = g.size
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        # lexicographic order: the last axis varies fastest
        ks = np.empty((len(idx), g.dimension), dtype=dtype)
        rest = idx.copy()
        for ax in range(g.dimension - 1, -1, -1):
            ks[:, ax] = rest % npts
            rest //= npts
        vp = (P[:, 0][None, :] + ks @ P[:, 1:].T).max(axis=1)
        vm = (M[:, 0][None, :] + ks @ M[:, 1:].T).max(axis=1)
        yield start, vp - vm, scale


def _lattice_point(g: GridSpec, flat: int) -> Vector:
    npts = g.points_per_axis
    ks = []
    for _ in range(g.dimension):
        ks.append(flat % npts)
        flat //= npts
    return tuple(-g.radius + k * g.step for k in reversed(ks))


def _grid_extreme(h: PolyhedralDC, g: GridSpec, sign: int) -> Tuple[Fraction, Vector]:
    if g.dimension != h.dimension:
        raise DimensionMismatch(f"grid dimension {g.dimension} != function dimension {h.dimension}")
    budget = point_budget()
    if g.size > budget:
        raise GridTooLarge(f"lattice has {g.size} points, budget is {budget}")
    best, best_at, scale = None, None, 1
    for start, vals, scale in _scaled_values(h, g):
        vals = vals * sign
        k = int(np.argmin(vals))
        v = int(vals[k])
        if best is None or v < best:
            best, best_at = v, start + k
    return Fraction(sign * best, scale), _lattice_point(g, best_at)


def grid_min(h: PolyhedralDC, g: GridSpec) -> Tuple[Fraction, Vector]:
    """Exact minimum of ``h`` on the lattice and its lexicographically first argmin."""
    return _grid_extreme(h, g, 1)


def grid_max(h: PolyhedralDC, g: GridSpec) -> Tuple[Fraction, Vector]:
    return _grid_extreme(h, g, -1)


# ---------------------------------------------------------------------------
# recession sampling

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def _radical_inverse(k: int, base: int) -> Fraction:
    out, f = Fraction(0), Fraction(1, base)
    while k:
        k, digit = divmod(k, base)
        out += digit * f
        f /= base
    return out


def instance_seed(h: PolyhedralDC) -> int:
    text = repr((h.dimension, h.plus_pieces, h.minus_pieces)).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:4], "big")


def recession_directions(h: PolyhedralDC, count: int) -> List[Vector]:
    """Deterministic direction set: ``{1, -1}`` in one dimension; otherwise
    the signed coordinate axes followed by Halton points of ``[-1, 1]^n``
    starting at an index derived from the instance."""
    n = h.dimension
    one, zero = Fraction(1), Fraction(0)
    if n == 1:
        return [(one,), (-one,)]
    dirs = []
    for ax in range(n):
        for s in (one, -one):
            dirs.append(tuple(s if i == ax else zero for i in range(n)))
    k = instance_seed(h) % 4096 + 1
    while len(dirs) < count:
        d = tuple(2 * _radical_inverse(k, _PRIMES[i % len(_PRIMES)]) - 1 for i in range(n))
        k += 1
        if any(d):
            dirs.append(d)
    return dirs[:count]


def sample_recession(h: PolyhedralDC, directions: int = 64) -> Optional[Vector]:
    """First sampled direction along which ``h`` decreases without bound."""
    if directions < 1:
        raise ValueError("need at least one direction")
    for d in recession_directions(h, directions):
        if recession(h, d) < 0:
            return d
    return None


def sample_recession_above(h: PolyhedralDC, directions: int = 64) -> Optional[Vector]:
    """First sampled direction along which ``h`` increases without bound."""
    if directions < 1:
        raise ValueError("need at least one direction")
    for d in recession_directions(h, directions):
        if recession(h, d) > 0:
            return d
    return None
