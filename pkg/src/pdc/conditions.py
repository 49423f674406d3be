"""Boundedness and optimality checkers for normalized polyhedral DC functions.

Each checker decides its condition along three independent routes:

``dc``
    intersection tests written directly on the pieces ``(a_i, v_i)``,
    ``(b_j, w_j)``;
``codifferential``
    the same tests phrased on the lower/upper sets of the codifferential
    (min-form signs, so the upper set holds ``(-b_j, -w_j)``);
``coexhauster``
    line/ray intersection tests on the members of a coexhauster.

The routes are equivalent, so a disagreement raises
:class:`~pdc.errors.RouteDisagreement`. On failure a witness is extracted and
verified against ``h`` before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import geometry as geo
from .approx import (
    LiftedPoint,
    Polytope,
    lower_coexhauster,
    to_codifferential,
    upper_coexhauster,
)
from .dcfunc import NormalizedDC, PolyhedralDC, Vector, evaluate, is_normalized, recession
from .errors import CertificateError, NonzeroOffset, NotNormalized, RouteDisagreement

ROUTES = ("dc", "codifferential", "coexhauster")
CHECKS = ("bounded_below", "bounded_above", "min", "max")

MAX_WITNESS_RADIUS = 2 ** 16


@dataclass(frozen=True)
class Verdict:
    check: str
    holds: bool
    route_results: Dict[str, bool]
    element_certificates: Dict[str, Tuple[geo.Certificate, ...]] = field(repr=False)
    witness: Optional[Vector] = None
    witness_kind: Optional[str] = None  # "point" or "direction"
    failing_index: Optional[int] = None  # 1-based j (or i) of the first failure

    def __bool__(self) -> bool:
        return self.holds


def _as_normalized(h) -> NormalizedDC:
    if isinstance(h, NormalizedDC):
        f = h.function
    elif isinstance(h, PolyhedralDC):
        f = h
        h = NormalizedDC(f, Fraction(0))
    else:
        raise TypeError(f"expected NormalizedDC, got {type(h).__name__}")
    if not is_normalized(f):
        raise NotNormalized("constants of both piece lists must peak at exactly 0; call normalize() first")
    return h


def _lift(p) -> LiftedPoint:
    return LiftedPoint(p.constant, p.gradient)


def _segment_to_axis(p: LiftedPoint) -> Polytope:
    """``co{(c, g), (0, g)}``"""
    return Polytope((p, LiftedPoint(Fraction(0), p.gradient)))


# ---------------------------------------------------------------------------
# routes, one function per (check, route); each returns per-element certificates


def _route_results(h: NormalizedDC, check: str) -> Dict[str, Tuple[geo.Certificate, ...]]:
    f = h.function
    plus = [_lift(p) for p in f.plus_pieces]
    minus = [_lift(p) for p in f.minus_pieces]
    cd = to_codifferential(h)
    if check == "bounded_below":
        return {
            "dc": tuple(geo.hull_contains([p.gradient for p in plus], q.gradient) for q in minus),
            "codifferential": tuple(
                geo.hull_contains([p.gradient for p in cd.lower.vertices], (-u).gradient)
                for u in cd.upper.vertices
            ),
            "coexhauster": tuple(geo.polytope_meets_line(C) for C in upper_coexhauster(cd).members),
        }
    if check == "bounded_above":
        return {
            "dc": tuple(geo.hull_contains([q.gradient for q in minus], p.gradient) for p in plus),
            "codifferential": tuple(
                geo.hull_contains([(-u).gradient for u in cd.upper.vertices], p.gradient)
                for p in cd.lower.vertices
            ),
            "coexhauster": tuple(geo.polytope_meets_line(C) for C in lower_coexhauster(cd).members),
        }
    if check == "min":
        lower = Polytope(tuple(plus))
        return {
            "dc": tuple(geo.hulls_intersect(lower, _segment_to_axis(q)) for q in minus),
            "codifferential": tuple(
                geo.hulls_intersect(cd.lower, _segment_to_axis(-u)) for u in cd.upper.vertices
            ),
            "coexhauster": tuple(
                geo.polytope_meets_ray(C, geo.NONNEGATIVE) for C in upper_coexhauster(cd).members
            ),
        }
    if check == "max":
        upper = Polytope(tuple(minus))
        return {
            "dc": tuple(geo.hulls_intersect(upper, _segment_to_axis(p)) for p in plus),
            "codifferential": tuple(
                geo.hulls_intersect(cd.upper, _segment_to_axis(-l)) for l in cd.lower.vertices
            ),
            "coexhauster": tuple(
                geo.polytope_meets_ray(C, geo.NONPOSITIVE) for C in lower_coexhauster(cd).members
            ),
        }
    raise ValueError(f"unknown check {check!r}")


# ---------------------------------------------------------------------------
# witnesses


def _primitive(v) -> Vector:
    """Positive rescaling of ``v`` to coprime integers."""
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(x // g) for x in ints)


def _recession_witness(f: PolyhedralDC, cert: geo.Certificate, sign: int) -> Vector:
    # hull_contains certificate: <d, generators> <= bound < <d, query>
    d = _primitive(cert.functional)
    if sign * recession(f, d) <= 0:
        raise CertificateError("separating direction does not give the expected recession sign")
    return d


def _point_witness(f: PolyhedralDC, member: Polytope, sign: int) -> Optional[Vector]:
    """A point where ``sign * h < 0``, found from one failing coexhauster member.

    For sign=+1 the member's max-form bounds h from above; for sign=-1 the
    min-form of a lower member bounds h from below. Either way we minimize a
    max of affine forms over growing boxes.
    """
    forms = [(sign * p.height, tuple(sign * g for g in p.gradient)) for p in member.vertices]
    radius = 1
    while radius <= MAX_WITNESS_RADIUS:
        value, delta = geo.minimize_max_affine(forms, radius)
        if value < 0:
            if sign * evaluate(f, delta) >= 0:
                raise CertificateError("member bound did not transfer to h")
            return delta
        radius *= 2
    return None


def _ray_witness(f: PolyhedralDC, d: Vector, sign: int) -> Vector:
    t = Fraction(1)
    while sign * evaluate(f, tuple(t * x for x in d)) >= 0:
        t *= 2
    return tuple(t * x for x in d)


# ---------------------------------------------------------------------------
# checkers


def _decide(h, check: str) -> Tuple[NormalizedDC, Dict[str, Tuple[geo.Certificate, ...]], bool]:
    h = _as_normalized(h)
    certs = _route_results(h, check)
    results = {r: all(c.feasible for c in certs[r]) for r in ROUTES}
    if len(set(results.values())) != 1:
        raise RouteDisagreement(f"{check}: routes disagree {results}")
    return h, certs, results["dc"]


def _first_failure(certs) -> int:
    return next(k for k, c in enumerate(certs) if not c.feasible)


def bounded_below(h) -> Verdict:
    h, certs, holds = _decide(h, "bounded_below")
    results = {r: holds for r in ROUTES}
    if holds:
        return Verdict("bounded_below", True, results, certs)
    k = _first_failure(certs["dc"])
    d = _recession_witness(h.function, certs["dc"][k], -1)
    return Verdict("bounded_below", False, results, certs, d, "direction", k + 1)


def bounded_above(h) -> Verdict:
    h, certs, holds = _decide(h, "bounded_above")
    results = {r: holds for r in ROUTES}
    if holds:
        return Verdict("bounded_above", True, results, certs)
    k = _first_failure(certs["dc"])
    d = _recession_witness(h.function, certs["dc"][k], +1)
    return Verdict("bounded_above", False, results, certs, d, "direction", k + 1)


def _optimality(h, check: str) -> Verdict:
    h, certs, holds = _decide(h, check)
    results = {r: holds for r in ROUTES}
    if holds:
        return Verdict(check, True, results, certs)
    f = h.function
    sign = 1 if check == "min" else -1
    cd = to_codifferential(h)
    members = (upper_coexhauster(cd) if check == "min" else lower_coexhauster(cd)).members
    k = _first_failure(certs["coexhauster"])
    witness = _point_witness(f, members[k], sign)
    if witness is None:
        # beyond the box cap; fall back on an unbounded direction
        bound = bounded_below(h) if check == "min" else bounded_above(h)
        if bound.holds:
            raise CertificateError(f"{check}: no witness within radius {MAX_WITNESS_RADIUS}")
        witness = _ray_witness(f, bound.witness, sign)
    if sign * evaluate(f, witness) >= 0:
        raise CertificateError(f"{check}: witness does not verify")
    return Verdict(check, False, results, certs, witness, "point", k + 1)


def min_condition(h) -> Verdict:
    """Decide ``h(d) >= 0`` for every ``d``."""
    return _optimality(h, "min")


def max_condition(h) -> Verdict:
    """Decide ``h(d) <= 0`` for every ``d``."""
    return _optimality(h, "max")


CHECKERS = {
    "bounded_below": bounded_below,
    "bounded_above": bounded_above,
    "min": min_condition,
    "max": max_condition,
}


# ---------------------------------------------------------------------------
# reports

INF_SUFFICIENT = "inf-stationary-sufficient"
SUP_SUFFICIENT = "sup-stationary-sufficient"
BOTH = "both"
INCONCLUSIVE = "inconclusive"

INCONCLUSIVE_NOTE = (
    "sufficient conditions not met; this does not rule out stationarity "
    "when h only approximates the increment of a non-polyhedral function"
)


@dataclass(frozen=True)
class StationarityReport:
    min_verdict: Verdict
    max_verdict: Verdict
    classification: str
    note: str


def stationarity_report(h: NormalizedDC) -> StationarityReport:
    h = _as_normalized(h)
    if h.offset != 0:
        raise NonzeroOffset(f"increment approximation must vanish at 0, offset is {h.offset}")
    lo, hi = min_condition(h), max_condition(h)
    if lo.holds and hi.holds:
        kind, note = BOTH, "h is identically zero; both sufficient conditions hold"
    elif lo.holds:
        kind, note = INF_SUFFICIENT, "h >= 0 everywhere, sufficient for inf-stationarity"
    elif hi.holds:
        kind, note = SUP_SUFFICIENT, "h <= 0 everywhere, sufficient for sup-stationarity"
    else:
        kind, note = INCONCLUSIVE, INCONCLUSIVE_NOTE
    return StationarityReport(lo, hi, kind, note)


@dataclass
class AuditReport:
    matrix: Dict[str, Dict[str, bool]]
    disagreements: List[str]

    @property
    def agree(self) -> bool:
        return not self.disagreements


def equivalence_audit(h: NormalizedDC) -> AuditReport:
    """Run every route of every check and collect disagreements without raising."""
    h = _as_normalized(h)
    matrix, bad = {}, []
    for check in CHECKS:
        certs = _route_results(h, check)
        row = {r: all(c.feasible for c in certs[r]) for r in ROUTES}
        matrix[check] = row
        if len(set(row.values())) != 1:
            bad.append(check)
        # element-wise agreement, not just the conjunction
        for k in range(len(certs["dc"])):
            if len({certs[r][k].feasible for r in ROUTES}) != 1:
                bad.append(f"{check}[{k + 1}]")
                break
    return AuditReport(matrix, bad)
