"""Exact analysis of polyhedral DC functions.

``h(d) = max_i [a_i + <v_i, d>] - max_j [b_j + <w_j, d>]``: representation,
codifferentials and coexhausters, and certified boundedness and optimality
checks.
"""

from .approx import (
    Codifferential,
    Coexhauster,
    LiftedPoint,
    Polytope,
    eval_codifferential,
    eval_coexhauster,
    lower_coexhauster,
    to_codifferential,
    upper_coexhauster,
)
from .conditions import (
    Verdict,
    bounded_above,
    bounded_below,
    equivalence_audit,
    max_condition,
    min_condition,
    stationarity_report,
)
from .dcfunc import (
    AffinePiece,
    NormalizedDC,
    PolyhedralDC,
    active_sets,
    directional_derivative,
    evaluate,
    make_polyhedral_dc,
    normalize,
    recession,
)

eval = evaluate  # noqa: A001  -- name used throughout the docs

__version__ = "0.1.0"
