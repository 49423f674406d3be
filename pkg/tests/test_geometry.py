from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdc.approx import Polytope
from pdc.dcfunc import dot
from pdc.errors import DimensionMismatch, MalformedProblem, NotSeparable
from pdc.geometry import (
    NONNEGATIVE,
    NONPOSITIVE,
    Constraint,
    FeasibilityProblem,
    combine,
    hull_contains,
    hulls_intersect,
    minimize_max_affine,
    polytope_meets_line,
    polytope_meets_ray,
    separating_direction,
    solve_feasibility,
    solve_lp,
    verify_certificate,
)

from conftest import rationals

C1_EX1 = Polytope.of([(-3, 1), (1, -1), (-3, -3)])
C3_EX2 = Polytope.of([(0, 2), (0, -2), (0, 0)])
C5_EX2 = Polytope.of([(-4, -5), (-2, -3), (-4, -4)])


# -- independent checks: plain substitution, nothing from the solver ---------

def check_hull_certificate(points, q, cert):
    if cert.feasible:
        (lam,) = cert.multipliers
        assert all(w >= 0 for w in lam) and sum(lam) == 1
        assert combine(points, lam) == tuple(q)
    else:
        d, bound = cert.functional, cert.bound
        assert all(dot(d, p) <= bound for p in points)
        assert dot(d, q) > bound


def check_ray_certificate(c, sign, cert):
    if cert.feasible:
        x = combine([p.coords for p in c.vertices], cert.multipliers[0])
        assert all(g == 0 for g in x[1:])
        assert (x[0] >= 0) if sign == NONNEGATIVE else (x[0] <= 0)
    else:
        f = cert.functional
        assert cert.bound < 0
        assert all(dot(f, p.coords) <= cert.bound for p in c.vertices)
        # nonnegative on the ray
        assert f[0] * (1 if sign == NONNEGATIVE else -1) >= 0


def check_pair_certificate(a, b, cert):
    A = [p.coords for p in a.vertices]
    B = [p.coords for p in b.vertices]
    if cert.feasible:
        assert combine(A, cert.multipliers[0]) == combine(B, cert.multipliers[1])
    else:
        z, bound = cert.functional, cert.bound
        assert all(dot(z, x) <= bound for x in A)
        assert all(dot(z, y) > bound for y in B)


# -- worked examples --------------------------------------------------------

def test_solve_feasibility_examples():
    blk = ((F(2),), (F(0),), (F(-2),))
    p = FeasibilityProblem((blk,), (Constraint(((F(1),),), "==", F(0)),))
    cert = solve_feasibility(p)
    assert cert.feasible and verify_certificate(p, cert)
    assert combine(blk, cert.multipliers[0]) == (0,)

    p = FeasibilityProblem((((F(2),),),), (Constraint(((F(1),),), "==", F(0)),))
    cert = solve_feasibility(p)
    assert not cert.feasible and verify_certificate(p, cert)

    p = FeasibilityProblem((((F(1),), (F(5),)),))
    cert = solve_feasibility(p)
    assert cert.multipliers == ((1, 0),)


def test_malformed_problems():
    with pytest.raises(MalformedProblem):
        FeasibilityProblem(((((F(1),),)),), (Constraint(((F(1), F(2)),), "=="),))
    with pytest.raises(MalformedProblem):
        FeasibilityProblem(((((F(1),),)),), (Constraint(((F(1),),), "!="),))
    with pytest.raises(MalformedProblem):
        FeasibilityProblem(())
    with pytest.raises(MalformedProblem):
        solve_lp([[1, 2], [1]], [0, 0])


def test_tampered_certificate_is_rejected():
    p = FeasibilityProblem((((F(2),), (F(-2),)),), (Constraint(((F(1),),), "==", F(0)),))
    cert = solve_feasibility(p)
    bad = type(cert)(True, multipliers=((F(1), F(0)),))
    assert not verify_certificate(p, bad)


@pytest.mark.parametrize("points, q, expected", [
    ([[2], [0], [-2]], [0], True),
    ([[2], [0], [-2]], [1], True),
    ([[0]], [1], False),
])
def test_hull_contains(points, q, expected):
    cert = hull_contains(points, q)
    assert cert.feasible is expected
    check_hull_certificate([tuple(map(F, p)) for p in points], tuple(map(F, q)), cert)


def test_hull_contains_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        hull_contains([[1, 2]], [1])


def test_meets_line():
    cert = polytope_meets_line(C1_EX1)
    assert cert.feasible
    x = combine([p.coords for p in C1_EX1.vertices], cert.multipliers[0])
    assert x[1] == 0
    assert not polytope_meets_line(C5_EX2).feasible
    assert polytope_meets_line(Polytope.of([(5, 0, 0)])).feasible


def test_meets_ray():
    cert = polytope_meets_ray(C3_EX2, NONNEGATIVE)
    assert cert.feasible
    check_ray_certificate(C3_EX2, NONNEGATIVE, cert)
    cert = polytope_meets_ray(C5_EX2, NONPOSITIVE)
    assert not cert.feasible
    check_ray_certificate(C5_EX2, NONPOSITIVE, cert)
    c = Polytope.of([(-1, 0)])
    assert not polytope_meets_ray(c, NONNEGATIVE).feasible
    assert polytope_meets_ray(c, NONPOSITIVE).feasible


def test_hulls_intersect():
    a = Polytope.of([(0, 2), (0, -2), (0, 0)])
    b = Polytope.of([(-1, 1), (0, 1)])
    cert = hulls_intersect(a, b)
    assert cert.feasible
    check_pair_certificate(a, b, cert)
    assert hulls_intersect(Polytope.of([(0, 0)]), Polytope.of([(0, 0)])).feasible
    a, b = Polytope.of([(0, 1)]), Polytope.of([(0, -1)])
    cert = hulls_intersect(a, b)
    assert not cert.feasible
    check_pair_certificate(a, b, cert)
    with pytest.raises(DimensionMismatch):
        hulls_intersect(Polytope.of([(0, 1)]), Polytope.of([(0, 1, 2)]))


def test_separating_direction():
    f = separating_direction(Polytope.of([(-1, 0)]), NONNEGATIVE)
    assert f.height * -1 < 0 and f.height >= 0
    f = separating_direction(C5_EX2, NONPOSITIVE)
    assert all(p.height * f.height + dot(p.gradient, f.gradient) < 0 for p in C5_EX2.vertices)
    assert f.height <= 0
    assert f.gradient[0] > 0
    with pytest.raises(NotSeparable):
        separating_direction(Polytope.of([(0, 0)]), NONNEGATIVE)


# -- LP optimization ---------------------------------------------------------

def test_solve_lp_optimum():
    # min -x - y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
    res = solve_lp([[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [-1, -1, 0, 0])
    assert res.status == "optimal"
    assert res.value == F(-14, 5)
    assert res.x[:2] == [F(8, 5), F(6, 5)]
    assert solve_lp([[1, -1]], [0], [-1, 0]).status == "unbounded"
    assert solve_lp([[1, 1]], [-1]).status == "infeasible"


def test_solve_lp_redundant_rows():
    res = solve_lp([[1, 1], [2, 2]], [1, 2], [1, 2])
    assert res.status == "optimal" and res.value == 1


def _brute_min_max_affine_1d(forms, R):
    cands = {F(-R), F(R)}
    for (c1, g1), (c2, g2) in combinations(forms, 2):
        if g1[0] != g2[0]:
            x = (c2 - c1) / (g1[0] - g2[0])
            if -R <= x <= R:
                cands.add(x)
    return min(max(c + g[0] * x for c, g in forms) for x in cands)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=5), st.sampled_from([1, 2, 8]))
def test_minimize_max_affine_matches_breakpoint_enumeration(pairs, R):
    forms = [(c, (g,)) for c, g in pairs]
    value, delta = minimize_max_affine(forms, R)
    assert -R <= delta[0] <= R
    assert value == max(c + g[0] * delta[0] for c, g in forms)
    assert value == _brute_min_max_affine_1d(forms, R)


# -- properties --------------------------------------------------------------

points_2d = st.lists(st.tuples(rationals, rationals), min_size=1, max_size=5)
lifted_2d = st.lists(st.tuples(rationals, rationals, rationals), min_size=1, max_size=5)


@settings(max_examples=150, deadline=None)
@given(points_2d, st.tuples(rationals, rationals))
def test_hull_certificates_are_sound(points, q):
    cert = hull_contains(points, q)
    check_hull_certificate(points, q, cert)


@settings(max_examples=100, deadline=None)
@given(points_2d, st.data())
def test_listed_points_and_midpoints_are_in_hull(points, data):
    i = data.draw(st.integers(0, len(points) - 1))
    j = data.draw(st.integers(0, len(points) - 1))
    assert hull_contains(points, points[i]).feasible
    mid = tuple((a + b) / 2 for a, b in zip(points[i], points[j]))
    assert hull_contains(points, mid).feasible


@settings(max_examples=150, deadline=None)
@given(lifted_2d, st.sampled_from([NONNEGATIVE, NONPOSITIVE]))
def test_ray_certificates_are_sound(pts, sign):
    c = Polytope.of(pts)
    check_ray_certificate(c, sign, polytope_meets_ray(c, sign))


@settings(max_examples=150, deadline=None)
@given(lifted_2d)
def test_line_and_rays_are_consistent(pts):
    c = Polytope.of(pts)
    line = polytope_meets_line(c).feasible
    pos = polytope_meets_ray(c, NONNEGATIVE).feasible
    neg = polytope_meets_ray(c, NONPOSITIVE).feasible
    assert line == (pos or neg)


@settings(max_examples=150, deadline=None)
@given(lifted_2d, lifted_2d)
def test_hulls_intersect_sound_and_symmetric(pa, pb):
    a, b = Polytope.of(pa), Polytope.of(pb)
    ab, ba = hulls_intersect(a, b), hulls_intersect(b, a)
    check_pair_certificate(a, b, ab)
    check_pair_certificate(b, a, ba)
    assert ab.feasible == ba.feasible


@settings(max_examples=100, deadline=None)
@given(lifted_2d, st.randoms(use_true_random=False))
def test_invariance_under_duplication_and_reordering(pts, rnd):
    c = Polytope.of(pts)
    shuffled = list(pts) + [pts[0]]
    rnd.shuffle(shuffled)
    d = Polytope.of(shuffled)
    assert polytope_meets_line(c).feasible == polytope_meets_line(d).feasible
    for sign in (NONNEGATIVE, NONPOSITIVE):
        assert polytope_meets_ray(c, sign).feasible == polytope_meets_ray(d, sign).feasible
    grads = [p[1:] for p in pts]
    q = grads[-1]
    assert hull_contains(grads, (0, 0)).feasible == hull_contains([p[1:] for p in shuffled], (0, 0)).feasible
    assert hulls_intersect(c, Polytope.of([(0, 0, 0)])).feasible == \
        hulls_intersect(d, Polytope.of([(0, 0, 0)])).feasible
    assert hull_contains(grads, q).feasible
