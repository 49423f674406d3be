"""Reading and writing instance files.

An instance is a JSON object::

    {"label": "...", "dimension": 1,
     "plus":  [{"a": "-4", "v": ["2"]}, ...],
     "minus": [{"b": "-1", "w": ["1"]}, ...]}

Numbers are strings such as ``"-4"``, ``"3/2"`` or ``"0.25"`` and are read
exactly. Plain JSON integers are tolerated; JSON floats are not.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Tuple

from .dcfunc import PolyhedralDC, make_polyhedral_dc
from .errors import DimensionMismatch, EmptyPieceList, ParseError

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+|\.\d+)?$")
_TOP_KEYS = {"label", "dimension", "plus", "minus"}


def parse_rational(text, where: str = "value") -> Fraction:
    if isinstance(text, bool):
        raise ParseError(f"{where}: expected a rational, got a boolean")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"{where}: expected a rational string, got {type(text).__name__}")
    s = text.strip()
    if not _RATIONAL.match(s):
        raise ParseError(f"{where}: {text!r} is not a rational like '-4', '3/2' or '0.25'")
    if "/" in s and int(s.split("/")[1]) == 0:
        raise ParseError(f"{where}: zero denominator")
    return Fraction(s)


def parse_vector(text: str, where: str = "vector") -> Tuple[Fraction, ...]:
    """Comma-separated rationals, e.g. ``"3/2,-1"``."""
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if not parts:
        raise ParseError(f"{where}: empty")
    return tuple(parse_rational(p, where) for p in parts)


def _pieces(data, key: str, const: str, grad: str):
    if not isinstance(data, list):
        raise ParseError(f"'{key}' must be a list")
    out = []
    for k, item in enumerate(data, start=1):
        where = f"{key}[{k}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where}: expected an object with keys '{const}' and '{grad}'")
        extra = set(item) - {const, grad}
        if extra:
            raise ParseError(f"{where}: unknown key(s) {sorted(extra)}")
        if const not in item or grad not in item:
            raise ParseError(f"{where}: needs both '{const}' and '{grad}'")
        if not isinstance(item[grad], list):
            raise ParseError(f"{where}.{grad}: expected a list")
        c = parse_rational(item[const], f"{where}.{const}")
        g = [parse_rational(x, f"{where}.{grad}[{i}]") for i, x in enumerate(item[grad], start=1)]
        out.append((c, g))
    return out


def loads(text: str) -> Tuple[PolyhedralDC, Optional[str]]:
    """Parse instance text; returns the function and its optional label."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise ParseError(f"unknown key(s) {sorted(extra)}")
    for key in ("dimension", "plus", "minus"):
        if key not in data:
            raise ParseError(f"missing key '{key}'")
    dim = data["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError("'dimension' must be a positive integer")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("'label' must be a string")
    plus = _pieces(data["plus"], "plus", "a", "v")
    minus = _pieces(data["minus"], "minus", "b", "w")
    try:
        return make_polyhedral_dc(dim, plus, minus), label
    except (DimensionMismatch, EmptyPieceList) as exc:
        raise ParseError(str(exc)) from None


def fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps(h: PolyhedralDC, label: Optional[str] = None) -> str:
    data = {}
    if label is not None:
        data["label"] = label
    data["dimension"] = h.dimension
    data["plus"] = [
        {"a": fmt_rational(p.constant), "v": [fmt_rational(x) for x in p.gradient]}
        for p in h.plus_pieces
    ]
    data["minus"] = [
        {"b": fmt_rational(p.constant), "w": [fmt_rational(x) for x in p.gradient]}
        for p in h.minus_pieces
    ]
    return json.dumps(data, indent=2) + "\n"


def bundled_names():
    return sorted(p.name for p in resources.files("pdc.data").iterdir() if p.name.endswith(".json"))


def load(path) -> Tuple[PolyhedralDC, Optional[str]]:
    """Load an instance from disk, falling back to the bundled fixtures by name."""
    p = Path(path)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    else:
        bundled = resources.files("pdc.data") / p.name
        if p.parent != Path(".") or not bundled.is_file():
            raise FileNotFoundError(f"no such instance file: {path}")
        text = bundled.read_text(encoding="utf-8")
    return loads(text)


def load_bundled(name: str) -> PolyhedralDC:
    return loads((resources.files("pdc.data") / name).read_text(encoding="utf-8"))[0]
