from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdc.dcfunc import (
    active_sets,
    directional_derivative,
    evaluate,
    is_normalized,
    make_polyhedral_dc,
    normalize,
    recession,
)
from pdc.errors import DimensionMismatch, EmptyPieceList

from conftest import dc_functions, vectors


def test_example1_pieces(ex1):
    assert ex1.dimension == 1
    assert [(p.constant, p.gradient) for p in ex1.plus_pieces] == [
        (-4, (2,)), (0, (0,)), (-4, (-2,))]
    assert [(p.constant, p.gradient) for p in ex1.minus_pieces] == [
        (-1, (1,)), (0, (0,)), (-1, (-1,))]


def test_construction_errors():
    with pytest.raises(DimensionMismatch):
        make_polyhedral_dc(2, [(0, [1, 0])], [(0, [1])])
    with pytest.raises(EmptyPieceList):
        make_polyhedral_dc(1, [], [(0, [1])])
    with pytest.raises(EmptyPieceList):
        make_polyhedral_dc(1, [(0, [1])], [])
    with pytest.raises(TypeError):
        make_polyhedral_dc(1, [(0.5, [1])], [(0, [0])])


def test_rational_inputs_are_exact():
    h = make_polyhedral_dc(1, [("3/2", ["0.25"])], [(0, [0])])
    assert h.plus_pieces[0].constant == F(3, 2)
    assert h.plus_pieces[0].gradient == (F(1, 4),)


@pytest.mark.parametrize("delta, expected", [(0, 0), (3, 0), (F(3, 2), F(-1, 2)), (2, -1), (-2, -1)])
def test_eval_example1(ex1, delta, expected):
    assert evaluate(ex1, [delta]) == expected


def test_eval_zero_and_arity(zero):
    assert evaluate(zero, [F(7, 3)]) == 0
    with pytest.raises(DimensionMismatch):
        evaluate(zero, [1, 2])


def test_recession(ex1, neg_abs):
    assert recession(ex1, [1]) == 1
    assert recession(ex1, [-1]) == 1
    assert recession(ex1, [0]) == 0
    assert recession(neg_abs, [1]) == -1


def test_active_sets(ex1, zero):
    assert active_sets(ex1, [0]) == ({2}, {2})
    assert active_sets(ex1, [3]) == ({1}, {1})
    assert active_sets(zero, [5]) == ({1}, {1})


def test_directional_derivative(ex1, neg_abs):
    assert directional_derivative(ex1, [0], [1]) == 0
    assert directional_derivative(neg_abs, [0], [1]) == -1
    assert directional_derivative(ex1, [3], [1]) == 1


def test_normalize():
    h = make_polyhedral_dc(1, [(3, [1])], [(1, [0])])
    hn = normalize(h)
    assert hn.offset == 2
    assert [(p.constant, p.gradient) for p in hn.function.plus_pieces] == [(0, (1,))]
    assert [(p.constant, p.gradient) for p in hn.function.minus_pieces] == [(0, (0,))]


def test_normalize_example1_and_zero(ex1, zero):
    hn = normalize(ex1)
    assert hn.offset == 0 and hn.function == ex1
    assert normalize(zero).function == zero


@settings(max_examples=200, deadline=None)
@given(dc_functions(), st.data())
def test_normalization_preserves_values(h, data):
    hn = normalize(h)
    assert is_normalized(hn.function)
    assert evaluate(hn.function, (0,) * h.dimension) == 0
    assert hn.offset == evaluate(h, (0,) * h.dimension)
    for _ in range(5):
        d = data.draw(vectors(h.dimension))
        assert evaluate(hn.function, d) + hn.offset == evaluate(h, d)


def _difference_quotient_limit(h, x, d):
    """(h(x + t d) - h(x)) / t with t below every kink of h along the ray."""
    t = F(1)
    for pieces in (h.plus_pieces, h.minus_pieces):
        for p in pieces:
            for q in pieces:
                slope = sum(a * b for a, b in zip(p.gradient, d)) - sum(a * b for a, b in zip(q.gradient, d))
                gap = _piece_value(q, x) - _piece_value(p, x)
                if slope != 0 and gap / slope > 0:
                    t = min(t, gap / slope / 2)
    return (evaluate(h, [xi + t * di for xi, di in zip(x, d)]) - evaluate(h, x)) / t


def _piece_value(p, x):
    return p.constant + sum(a * b for a, b in zip(p.gradient, x))


@settings(max_examples=150, deadline=None)
@given(dc_functions(), st.data())
def test_directional_derivative_matches_difference_quotient(h, data):
    x = data.draw(vectors(h.dimension))
    d = data.draw(vectors(h.dimension))
    assert directional_derivative(h, x, d) == _difference_quotient_limit(h, x, d)


@settings(max_examples=150, deadline=None)
@given(dc_functions(), st.data(), st.builds(F, st.integers(0, 16), st.sampled_from([1, 3, 4])))
def test_positive_homogeneity(h, data, t):
    x = data.draw(vectors(h.dimension))
    d = data.draw(vectors(h.dimension))
    td = [t * di for di in d]
    assert recession(h, td) == t * recession(h, d)
    assert directional_derivative(h, x, td) == t * directional_derivative(h, x, d)


@settings(max_examples=100, deadline=None)
@given(dc_functions(), st.data())
def test_recession_is_asymptotic_slope(h, data):
    d = data.draw(vectors(h.dimension))
    # beyond every breakpoint h is affine along d with slope recession(h, d)
    big = F(10 ** 6)
    lhs = evaluate(h, [2 * big * x for x in d]) - evaluate(h, [big * x for x in d])
    assert lhs == big * recession(h, d)
