"""Exact LP feasibility over convex multipliers, and the geometric predicates
built on it (hull membership, polytope vs. line/ray, hull vs. hull).

Every predicate returns a :class:`Certificate`. A feasible certificate carries
convex multipliers; an infeasible one carries a Farkas vector, which for the
predicates below reads as a strictly separating linear functional. Both kinds
are checked by :func:`verify_certificate`, which only substitutes numbers and
shares no code with the simplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .approx import LiftedPoint, Polytope
from .dcfunc import Vector, as_vector, dot
from .errors import CertificateError, DimensionMismatch, MalformedProblem, NotSeparable

try:  # much faster exact rationals for the tableau; results leave as Fraction
    from gmpy2 import mpq as _q
except ImportError:  # pragma: no cover
    _q = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

NONNEGATIVE = "nonnegative"
NONPOSITIVE = "nonpositive"


# ---------------------------------------------------------------------------
# exact simplex


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    farkas: Optional[List[Fraction]] = None


def _pivot(rows, rhs, cost, basis, r, k):
    prow = rows[r]
    piv = prow[k]
    if piv != 1:
        inv = piv ** -1
        for c, a in enumerate(prow):
            if a:
                prow[c] = a * inv
        rhs[r] *= inv
    nz = [c for c, a in enumerate(prow) if a]
    for s, row in enumerate(rows):
        if s == r:
            continue
        f = row[k]
        if f:
            for c in nz:
                row[c] -= f * prow[c]
            rhs[s] -= f * rhs[r]
    f = cost[k]
    if f:
        for c in nz:
            cost[c] -= f * prow[c]
        cost[-1] -= f * rhs[r]
    basis[r] = k


def _run_simplex(rows, rhs, cost, basis, allowed):
    """Bland's rule on a tableau already in canonical form.

    ``cost`` holds reduced costs with ``-objective`` in its last slot.
    Returns ``"optimal"`` or ``"unbounded"``.
    """
    while True:
        k = next((c for c in allowed if cost[c] < 0), None)
        if k is None:
            return "optimal"
        best = None
        for r, row in enumerate(rows):
            a = row[k]
            if a > 0:
                ratio = rhs[r] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return "unbounded"
        _pivot(rows, rhs, cost, basis, best[1], k)


def solve_lp(A: Sequence[Sequence], b: Sequence, c: Optional[Sequence] = None) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b, x >= 0`` in exact arithmetic.

    Two-phase simplex with Bland's rule. When infeasible, ``farkas`` is a
    vector ``y`` with ``y A <= 0`` componentwise and ``y b > 0``.
    Without ``c`` only feasibility is decided.
    """
    m = len(A)
    N = len(A[0]) if m else (len(c) if c is not None else 0)
    if any(len(row) != N for row in A) or len(b) != m:
        raise MalformedProblem("constraint matrix is ragged or does not match rhs")
    flips = [(-1 if bi < 0 else 1) for bi in b]
    zero, one = _q(0), _q(1)
    rows = [[_q(a) * s for a in row] + [zero] * m for row, s in zip(A, flips)]
    for r in range(m):
        rows[r][N + r] = one
    rhs = [_q(bi) * s for bi, s in zip(b, flips)]
    basis = [N + r for r in range(m)]

    # phase one: minimize the sum of artificials
    cost = [zero] * (N + m + 1)
    for r in range(m):
        for col in range(N):
            cost[col] -= rows[r][col]
        cost[-1] -= rhs[r]
    _run_simplex(rows, rhs, cost, basis, range(N + m))
    if cost[-1] != 0:
        # reduced cost of artificial r is 1 - y_r
        y = [_frac(one - cost[N + r]) * flips[r] for r in range(m)]
        return LPResult("infeasible", farkas=y)

    # drive artificials out of the basis; rows that cannot pivot are redundant
    keep = []
    for r in range(m):
        if basis[r] >= N:
            k = next((col for col in range(N) if rows[r][col] != 0), None)
            if k is None:
                continue
            _pivot(rows, rhs, cost, basis, r, k)
        keep.append(r)
    rows = [rows[r] for r in keep]
    rhs = [rhs[r] for r in keep]
    basis = [basis[r] for r in keep]

    def solution():
        x = [ZERO] * N
        for r, col in enumerate(basis):
            x[col] = _frac(rhs[r])
        return x

    if c is None:
        return LPResult("optimal", x=solution(), value=ZERO)

    cost = [_q(ci) for ci in c] + [zero] * m + [zero]
    for r, col in enumerate(basis):
        f = cost[col]
        if f:
            for j, a in enumerate(rows[r]):
                if a:
                    cost[j] -= f * a
            cost[-1] -= f * rhs[r]
    status = _run_simplex(rows, rhs, cost, basis, range(N))
    if status == "unbounded":
        return LPResult("unbounded")
    return LPResult("optimal", x=solution(), value=_frac(-cost[-1]))


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(int(x.numerator), int(x.denominator))


# ---------------------------------------------------------------------------
# feasibility problems over convex combinations


@dataclass(frozen=True)
class Constraint:
    """``sum_b <coefficients[b], x_b>  (sense)  rhs`` where ``x_b`` is the
    convex combination formed from block ``b``."""

    coefficients: Tuple[Vector, ...]
    sense: str  # "==", ">=" or "<="
    rhs: Fraction = ZERO


@dataclass(frozen=True)
class FeasibilityProblem:
    blocks: Tuple[Tuple[Vector, ...], ...]
    constraints: Tuple[Constraint, ...] = ()

    def __post_init__(self):
        if not self.blocks or len(self.blocks) > 2:
            raise MalformedProblem("need one or two generator blocks")
        for blk in self.blocks:
            if not blk:
                raise MalformedProblem("generator blocks must be nonempty")
            if len({len(p) for p in blk}) != 1:
                raise MalformedProblem("generators within a block differ in length")
        for con in self.constraints:
            if con.sense not in ("==", ">=", "<="):
                raise MalformedProblem(f"unknown sense {con.sense!r}")
            if len(con.coefficients) != len(self.blocks):
                raise MalformedProblem("constraint does not address every block")
            for coef, blk in zip(con.coefficients, self.blocks):
                if len(coef) != len(blk[0]):
                    raise MalformedProblem("constraint row width does not match generators")

    @property
    def width(self) -> int:
        return sum(len(blk) for blk in self.blocks)


@dataclass(frozen=True)
class Certificate:
    """Outcome of a feasibility question.

    feasible: ``multipliers`` holds one convex weight vector per block.

    infeasible: ``row_multipliers`` (one per constraint) and
    ``block_offsets`` (one per block) form a Farkas vector. ``functionals``
    are the induced linear functionals on each block's space. For all
    predicates in this module the first block lies in the half-space
    ``<functional, .> <= bound`` while the set it was tested against lies
    strictly above ``bound``.
    """

    feasible: bool
    multipliers: Tuple[Vector, ...] = ()
    row_multipliers: Vector = ()
    block_offsets: Vector = ()
    functionals: Tuple[Vector, ...] = ()

    @property
    def kind(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    @property
    def functional(self) -> Optional[Vector]:
        return self.functionals[0] if self.functionals else None

    @property
    def bound(self) -> Optional[Fraction]:
        return -self.block_offsets[0] if self.block_offsets else None

    def point(self, block: int = 0) -> Vector:
        """The convex combination realised by a feasible certificate."""
        return combine(self._problem_blocks[block], self.multipliers[block])

    _problem_blocks: Tuple = field(default=(), repr=False, compare=False)

    def __bool__(self) -> bool:
        return self.feasible


def combine(points: Sequence[Vector], weights: Sequence[Fraction]) -> Vector:
    dim = len(points[0])
    return tuple(
        sum((w * p[c] for w, p in zip(weights, points)), ZERO) for c in range(dim)
    )


def _standard_form(problem: FeasibilityProblem):
    cols = problem.width
    n_ineq = sum(1 for con in problem.constraints if con.sense != "==")
    A, b = [], []
    slack = cols
    for con in problem.constraints:
        row = []
        for coef, blk in zip(con.coefficients, problem.blocks):
            row.extend(dot(coef, p) for p in blk)
        row.extend([ZERO] * n_ineq)
        if con.sense == ">=":
            row[slack] = -ONE
            slack += 1
        elif con.sense == "<=":
            row[slack] = ONE
            slack += 1
        A.append(row)
        b.append(con.rhs)
    start = 0
    for blk in problem.blocks:
        row = [ZERO] * (cols + n_ineq)
        for k in range(len(blk)):
            row[start + k] = ONE
        start += len(blk)
        A.append(row)
        b.append(ONE)
    return A, b


def solve_feasibility(problem: FeasibilityProblem) -> Certificate:
    A, b = _standard_form(problem)
    res = solve_lp(A, b)
    n_con = len(problem.constraints)
    if res.status == "optimal":
        mults, start = [], 0
        for blk in problem.blocks:
            mults.append(tuple(res.x[start:start + len(blk)]))
            start += len(blk)
        cert = Certificate(True, multipliers=tuple(mults), _problem_blocks=problem.blocks)
    else:
        y = res.farkas
        rows, offsets = tuple(y[:n_con]), tuple(y[n_con:])
        functionals = []
        for bi, blk in enumerate(problem.blocks):
            dim = len(blk[0])
            functionals.append(tuple(
                sum((yr * con.coefficients[bi][c] for yr, con in zip(rows, problem.constraints)), ZERO)
                for c in range(dim)
            ))
        cert = Certificate(
            False,
            row_multipliers=rows,
            block_offsets=offsets,
            functionals=tuple(functionals),
            _problem_blocks=problem.blocks,
        )
    if not verify_certificate(problem, cert):
        raise CertificateError("solver produced a certificate that does not verify")
    return cert


def verify_certificate(problem: FeasibilityProblem, cert: Certificate) -> bool:
    """Check a certificate by direct substitution."""
    if cert.feasible:
        if len(cert.multipliers) != len(problem.blocks):
            return False
        points = []
        for lam, blk in zip(cert.multipliers, problem.blocks):
            if len(lam) != len(blk) or any(w < 0 for w in lam) or sum(lam) != 1:
                return False
            points.append(combine(blk, lam))
        for con in problem.constraints:
            lhs = sum((dot(coef, x) for coef, x in zip(con.coefficients, points)), ZERO)
            if con.sense == "==" and lhs != con.rhs:
                return False
            if con.sense == ">=" and lhs < con.rhs:
                return False
            if con.sense == "<=" and lhs > con.rhs:
                return False
        return True

    y, tau = cert.row_multipliers, cert.block_offsets
    if len(y) != len(problem.constraints) or len(tau) != len(problem.blocks):
        return False
    for yr, con in zip(y, problem.constraints):
        if con.sense == ">=" and yr < 0:
            return False
        if con.sense == "<=" and yr > 0:
            return False
    for bi, blk in enumerate(problem.blocks):
        for p in blk:
            col = sum((yr * dot(con.coefficients[bi], p) for yr, con in zip(y, problem.constraints)), ZERO)
            if col + tau[bi] > 0:
                return False
    total = sum((yr * con.rhs for yr, con in zip(y, problem.constraints)), ZERO) + sum(tau, ZERO)
    return total > 0


# ---------------------------------------------------------------------------
# geometric predicates


def _unit(dim: int, c: int, scale=ONE) -> Vector:
    v = [ZERO] * dim
    v[c] = scale
    return tuple(v)


def _vertices(c: Polytope) -> Tuple[Vector, ...]:
    return tuple(p.coords for p in c.vertices)


def hull_contains(points, query) -> Certificate:
    """Is ``query`` a convex combination of ``points``?"""
    pts = tuple(as_vector(p) for p in points)
    q = as_vector(query)
    if not pts:
        raise DimensionMismatch("need at least one point")
    if any(len(p) != len(q) for p in pts):
        raise DimensionMismatch("points and query differ in length")
    dim = len(q)
    cons = tuple(Constraint((_unit(dim, c),), "==", q[c]) for c in range(dim))
    return solve_feasibility(FeasibilityProblem((pts,), cons))


def polytope_meets_line(c: Polytope) -> Certificate:
    """Does ``c`` meet the height axis ``{(a, 0) : a real}``?"""
    dim = c.dimension + 1
    cons = tuple(Constraint((_unit(dim, k),), "==") for k in range(1, dim))
    return solve_feasibility(FeasibilityProblem((_vertices(c),), cons))


def polytope_meets_ray(c: Polytope, sign: str) -> Certificate:
    """Does ``c`` meet ``{(a, 0) : a >= 0}`` (or ``a <= 0`` for nonpositive)?"""
    if sign not in (NONNEGATIVE, NONPOSITIVE):
        raise ValueError(f"sign must be {NONNEGATIVE!r} or {NONPOSITIVE!r}")
    dim = c.dimension + 1
    cons = tuple(Constraint((_unit(dim, k),), "==") for k in range(1, dim))
    cons += (Constraint((_unit(dim, 0),), ">=" if sign == NONNEGATIVE else "<="),)
    return solve_feasibility(FeasibilityProblem((_vertices(c),), cons))


def hulls_intersect(a: Polytope, b: Polytope) -> Certificate:
    if a.dimension != b.dimension:
        raise DimensionMismatch("polytopes live in different spaces")
    dim = a.dimension + 1
    cons = tuple(
        Constraint((_unit(dim, k), _unit(dim, k, -ONE)), "==") for k in range(dim)
    )
    return solve_feasibility(FeasibilityProblem((_vertices(a), _vertices(b)), cons))


def separating_direction(c: Polytope, sign: str) -> LiftedPoint:
    """A functional ``(beta, d)`` negative on every vertex of ``c`` and
    nonnegative on the ray selected by ``sign``."""
    cert = polytope_meets_ray(c, sign)
    if cert.feasible:
        raise NotSeparable("the polytope meets the ray")
    f = cert.functional
    return LiftedPoint(f[0], tuple(f[1:]))


def minimize_max_affine(forms: Sequence[Tuple[Fraction, Vector]], radius) -> Tuple[Fraction, Vector]:
    """Minimize ``max_k [c_k + <g_k, d>]`` over the box ``[-radius, radius]^n``.

    Epigraph LP in standard form: ``d = u - radius`` with ``0 <= u <= 2 radius``
    and the level split as ``t = t_plus - t_minus``.
    """
    radius = Fraction(radius)
    n = len(forms[0][1])
    K = len(forms)
    # columns: u (n), box slacks (n), t+, t-, epigraph slacks (K)
    N = 2 * n + 2 + K
    A, b = [], []
    for i in range(n):
        row = [ZERO] * N
        row[i] = ONE
        row[n + i] = ONE
        A.append(row)
        b.append(2 * radius)
    for k, (ck, gk) in enumerate(forms):
        # t - <g, u> - s = c - radius * sum(g)
        row = [ZERO] * N
        for i in range(n):
            row[i] = -gk[i]
        row[2 * n] = ONE
        row[2 * n + 1] = -ONE
        row[2 * n + 2 + k] = -ONE
        A.append(row)
        b.append(ck - radius * sum(gk, ZERO))
    cost = [ZERO] * N
    cost[2 * n] = ONE
    cost[2 * n + 1] = -ONE
    res = solve_lp(A, b, cost)
    if res.status != "optimal":
        raise CertificateError(f"box-constrained epigraph LP reported {res.status}")
    delta = tuple(res.x[i] - radius for i in range(n))
    value = max(ck + dot(gk, delta) for ck, gk in forms)
    return value, delta
