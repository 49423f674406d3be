from fractions import Fraction

import pytest
from hypothesis import strategies as st

from pdc.dcfunc import make_polyhedral_dc, normalize, zero_function
from pdc.instances import load_bundled

F = Fraction


@pytest.fixture
def ex1():
    return load_bundled("example1.json")


@pytest.fixture
def ex2_x1():
    return load_bundled("example2_x1.json")


@pytest.fixture
def ex2_x2():
    return load_bundled("example2_x2.json")


@pytest.fixture
def zero():
    return zero_function(1)


@pytest.fixture
def neg_abs():
    """h(d) = -|d|"""
    return make_polyhedral_dc(1, [(0, [0])], [(0, [1]), (0, [-1])])


rationals = st.builds(F, st.integers(-8, 8), st.sampled_from([1, 2, 4]))


@st.composite
def dc_functions(draw, max_dim=3, max_pieces=5):
    n = draw(st.integers(1, max_dim))
    piece = st.tuples(rationals, st.lists(rationals, min_size=n, max_size=n))
    plus = draw(st.lists(piece, min_size=1, max_size=max_pieces))
    minus = draw(st.lists(piece, min_size=1, max_size=max_pieces))
    return make_polyhedral_dc(n, plus, minus)


@st.composite
def normalized_functions(draw, **kw):
    return normalize(draw(dc_functions(**kw)))


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n).map(tuple)


# -- one summary line per acceptance criterion ---------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        status = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
