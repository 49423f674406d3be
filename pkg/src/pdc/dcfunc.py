"""Polyhedral DC functions: a max of affine forms minus another max of affine forms.

    h(d) = max_i [a_i + <v_i, d>] - max_j [b_j + <w_j, d>]

Every scalar is a :class:`fractions.Fraction`; nothing in here touches floats.
Index sets reported to the user are 1-based, storage keeps input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Tuple

from .errors import DimensionMismatch, EmptyPieceList

Vector = Tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/2"`` or ``"0.25"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} exactly to a rational")


def as_vector(xs: Iterable) -> Vector:
    return tuple(as_rational(x) for x in xs)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((p * q for p, q in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class AffinePiece:
    """The affine form ``constant + <gradient, d>``."""

    constant: Fraction
    gradient: Vector

    def __call__(self, delta: Sequence[Fraction]) -> Fraction:
        return self.constant + dot(self.gradient, delta)

    def scaled(self, t: Fraction) -> "AffinePiece":
        return AffinePiece(self.constant * t, tuple(g * t for g in self.gradient))


def _piece(item) -> AffinePiece:
    if isinstance(item, AffinePiece):
        return item
    constant, gradient = item
    return AffinePiece(as_rational(constant), as_vector(gradient))


@dataclass(frozen=True)
class PolyhedralDC:
    dimension: int
    plus_pieces: Tuple[AffinePiece, ...]
    minus_pieces: Tuple[AffinePiece, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch(f"dimension must be positive, got {self.dimension}")
        if not self.plus_pieces or not self.minus_pieces:
            raise EmptyPieceList("both piece lists must be nonempty")
        for part, pieces in (("plus", self.plus_pieces), ("minus", self.minus_pieces)):
            for k, p in enumerate(pieces, start=1):
                if len(p.gradient) != self.dimension:
                    raise DimensionMismatch(
                        f"{part} piece {k} has gradient length {len(p.gradient)}, "
                        f"expected {self.dimension}"
                    )

    def __call__(self, delta) -> Fraction:
        return evaluate(self, delta)

    def negated(self) -> "PolyhedralDC":
        """``-h``, obtained by swapping the two piece lists."""
        return PolyhedralDC(self.dimension, self.minus_pieces, self.plus_pieces)

    def scaled(self, t) -> "PolyhedralDC":
        t = as_rational(t)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        return PolyhedralDC(
            self.dimension,
            tuple(p.scaled(t) for p in self.plus_pieces),
            tuple(p.scaled(t) for p in self.minus_pieces),
        )


@dataclass(frozen=True)
class NormalizedDC:
    """A DC function whose plus and minus constants both peak at zero.

    ``offset`` is what was subtracted: original(d) == function(d) + offset.
    """

    function: PolyhedralDC
    offset: Fraction

    @property
    def dimension(self) -> int:
        return self.function.dimension


def make_polyhedral_dc(dimension: int, plus, minus) -> PolyhedralDC:
    """Build and validate a function from ``(constant, gradient)`` pairs."""
    plus = tuple(_piece(p) for p in plus)
    minus = tuple(_piece(p) for p in minus)
    if not plus or not minus:
        raise EmptyPieceList("both piece lists must be nonempty")
    return PolyhedralDC(int(dimension), plus, minus)


def _check_arity(h: PolyhedralDC, vec, what="delta") -> Vector:
    vec = as_vector(vec)
    if len(vec) != h.dimension:
        raise DimensionMismatch(f"{what} has length {len(vec)}, expected {h.dimension}")
    return vec


def evaluate(h: PolyhedralDC, delta) -> Fraction:
    delta = _check_arity(h, delta)
    return max(p(delta) for p in h.plus_pieces) - max(p(delta) for p in h.minus_pieces)


def recession(h: PolyhedralDC, direction) -> Fraction:
    """Asymptotic slope ``lim h(t d) / t``; constants drop out."""
    d = _check_arity(h, direction, "direction")
    return max(dot(p.gradient, d) for p in h.plus_pieces) - max(
        dot(p.gradient, d) for p in h.minus_pieces
    )


def _argmax_set(values):
    top = max(values)
    return frozenset(k for k, x in enumerate(values, start=1) if x == top)


def active_sets(h: PolyhedralDC, point) -> Tuple[frozenset, frozenset]:
    """1-based indices of the plus and minus pieces attaining their maxima."""
    x = _check_arity(h, point, "point")
    return (
        _argmax_set([p(x) for p in h.plus_pieces]),
        _argmax_set([p(x) for p in h.minus_pieces]),
    )


def directional_derivative(h: PolyhedralDC, point, direction) -> Fraction:
    d = _check_arity(h, direction, "direction")
    active_plus, active_minus = active_sets(h, point)
    return max(dot(h.plus_pieces[i - 1].gradient, d) for i in active_plus) - max(
        dot(h.minus_pieces[j - 1].gradient, d) for j in active_minus
    )


def normalize(h: PolyhedralDC) -> NormalizedDC:
    top_plus = max(p.constant for p in h.plus_pieces)
    top_minus = max(p.constant for p in h.minus_pieces)
    shifted = PolyhedralDC(
        h.dimension,
        tuple(AffinePiece(p.constant - top_plus, p.gradient) for p in h.plus_pieces),
        tuple(AffinePiece(p.constant - top_minus, p.gradient) for p in h.minus_pieces),
    )
    return NormalizedDC(shifted, top_plus - top_minus)


def is_normalized(h: PolyhedralDC) -> bool:
    return (
        max(p.constant for p in h.plus_pieces) == 0
        and max(p.constant for p in h.minus_pieces) == 0
    )


def zero_function(dimension: int = 1) -> PolyhedralDC:
    zero = AffinePiece(Fraction(0), (Fraction(0),) * dimension)
    return PolyhedralDC(dimension, (zero,), (zero,))
