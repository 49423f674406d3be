"""Codifferentials and coexhausters of a normalized polyhedral DC function.

Sign conventions follow the min-form: the lower set collects ``(a_i, v_i)``
from the plus pieces, the upper set collects ``(-b_j, -w_j)`` from the minus
pieces, so that

    h(d) = max_{lower} [a + <v, d>] + min_{upper} [b + <w, d>].

Polytopes are kept as raw vertex lists. No hull reduction is ever done, so
listed sets compare exactly against hand-written ones.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .dcfunc import NormalizedDC, PolyhedralDC, Vector, as_rational, as_vector, dot
from .errors import DimensionMismatch


@dataclass(frozen=True)
class LiftedPoint:
    """A point ``[height, gradient]`` of R^{n+1}."""

    height: Fraction
    gradient: Vector

    @classmethod
    def of(cls, height, gradient) -> "LiftedPoint":
        return cls(as_rational(height), as_vector(gradient))

    @property
    def coords(self) -> Vector:
        return (self.height,) + self.gradient

    def __add__(self, other: "LiftedPoint") -> "LiftedPoint":
        return LiftedPoint(
            self.height + other.height,
            tuple(p + q for p, q in zip(self.gradient, other.gradient)),
        )

    def __sub__(self, other: "LiftedPoint") -> "LiftedPoint":
        return LiftedPoint(
            self.height - other.height,
            tuple(p - q for p, q in zip(self.gradient, other.gradient)),
        )

    def __neg__(self) -> "LiftedPoint":
        return LiftedPoint(-self.height, tuple(-g for g in self.gradient))

    def affine_value(self, delta: Sequence[Fraction]) -> Fraction:
        return self.height + dot(self.gradient, delta)


@dataclass(frozen=True)
class Polytope:
    """Convex hull of ``vertices``; listed points need not be extreme."""

    vertices: Tuple[LiftedPoint, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a polytope needs at least one vertex")
        n = len(self.vertices[0].gradient)
        if any(len(p.gradient) != n for p in self.vertices):
            raise DimensionMismatch("vertices of one polytope must share a dimension")

    @classmethod
    def of(cls, points) -> "Polytope":
        """From ``(height, gradient)`` pairs or flat ``(height, g1, ..., gn)`` tuples."""
        out = []
        for p in points:
            if isinstance(p, LiftedPoint):
                out.append(p)
                continue
            p = tuple(p)
            if len(p) == 2 and isinstance(p[1], (list, tuple)):
                out.append(LiftedPoint.of(p[0], p[1]))
            else:
                out.append(LiftedPoint.of(p[0], p[1:]))
        return cls(tuple(out))

    @property
    def dimension(self) -> int:
        return len(self.vertices[0].gradient)

    def translate(self, shift: LiftedPoint) -> "Polytope":
        return Polytope(tuple(p + shift for p in self.vertices))

    def max_form(self, delta) -> Fraction:
        return max(p.affine_value(delta) for p in self.vertices)

    def min_form(self, delta) -> Fraction:
        return min(p.affine_value(delta) for p in self.vertices)

    def vertex_multiset(self) -> Counter:
        return Counter(p.coords for p in self.vertices)

    def same_vertices(self, other: "Polytope") -> bool:
        """Multiset equality of the listed vertices (not of the hulls)."""
        return self.vertex_multiset() == other.vertex_multiset()


@dataclass(frozen=True)
class Codifferential:
    lower: Polytope
    upper: Polytope

    @property
    def dimension(self) -> int:
        return self.lower.dimension


@dataclass(frozen=True)
class Coexhauster:
    kind: str  # "upper" or "lower"
    members: Tuple[Polytope, ...]

    def __post_init__(self):
        if self.kind not in ("upper", "lower"):
            raise ValueError(f"kind must be 'upper' or 'lower', not {self.kind!r}")
        if not self.members:
            raise ValueError("a coexhauster needs at least one member")

    @property
    def dimension(self) -> int:
        return self.members[0].dimension


def _function_of(h) -> PolyhedralDC:
    return h.function if isinstance(h, NormalizedDC) else h


def to_codifferential(h: NormalizedDC) -> Codifferential:
    f = _function_of(h)
    lower = Polytope(tuple(LiftedPoint(p.constant, p.gradient) for p in f.plus_pieces))
    upper = Polytope(
        tuple(-LiftedPoint(p.constant, p.gradient) for p in f.minus_pieces)
    )
    return Codifferential(lower, upper)


def upper_coexhauster(cd: Codifferential) -> Coexhauster:
    """One translate of ``cd.lower`` per vertex of ``cd.upper``, in vertex order."""
    return Coexhauster("upper", tuple(cd.lower.translate(u) for u in cd.upper.vertices))


def lower_coexhauster(cd: Codifferential) -> Coexhauster:
    """One translate of ``cd.upper`` per vertex of ``cd.lower``, in vertex order."""
    return Coexhauster("lower", tuple(cd.upper.translate(l) for l in cd.lower.vertices))


def _delta(delta, n: int) -> Vector:
    delta = as_vector(delta)
    if len(delta) != n:
        raise DimensionMismatch(f"delta has length {len(delta)}, expected {n}")
    return delta


def eval_codifferential(cd: Codifferential, delta) -> Fraction:
    delta = _delta(delta, cd.dimension)
    return cd.lower.max_form(delta) + cd.upper.min_form(delta)


def eval_coexhauster(E: Coexhauster, delta) -> Fraction:
    delta = _delta(delta, E.dimension)
    if E.kind == "upper":
        return min(C.max_form(delta) for C in E.members)
    return max(C.min_form(delta) for C in E.members)
