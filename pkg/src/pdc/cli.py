"""``pdc`` command line: eval, show, check, plot, audit.

Exit status: 0 the checked condition holds, 1 it fails (witness printed),
2 usage or parse error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import conditions, instances, oracle
from .approx import Polytope, lower_coexhauster, to_codifferential, upper_coexhauster
from .audit import ORACLE_DIRECTIONS, ORACLE_GRID, run_audit, summarize
from .dcfunc import (
    PolyhedralDC,
    active_sets,
    directional_derivative,
    evaluate,
    normalize,
    recession,
)
from .errors import CertificateError, PDCError, ParseError, RouteDisagreement, UnsupportedDimension
from .instances import fmt_rational

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

CHECK_NAMES = {
    "bounded-below": "bounded_below",
    "bounded-above": "bounded_above",
    "min": "min",
    "max": "max",
}


class Report:
    """Ordered key/value tree. ``kv`` is the machine form; ``human`` indents it."""

    def __init__(self):
        self.items: List[Tuple[str, str]] = []

    def add(self, key: str, value) -> None:
        self.items.append((key, _fmt(value)))

    def kv(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.items)

    def human(self) -> str:
        out, prev = [], []
        for key, value in self.items:
            parts = key.split(".")
            common = 0
            while common < min(len(prev), len(parts) - 1) and prev[common] == parts[common]:
                common += 1
            for depth in range(common, len(parts) - 1):
                out.append("  " * depth + parts[depth] + ":")
            out.append("  " * (len(parts) - 1) + f"{parts[-1]}: {value}")
            prev = parts[:-1]
        return "\n".join(out) + "\n"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return fmt_rational(value)
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    if value is None:
        return "none"
    return str(value)


def fmt_decimal(x: Fraction) -> str:
    """Terminating decimal when the denominator is 2^i 5^j, else ``p/q``."""
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return fmt_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    digits = 0
    while (x * 10 ** digits).denominator != 1:
        digits += 1
    scaled = abs(x.numerator * 10 ** digits // x.denominator)
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _polytope_lines(name: str, c: Polytope) -> List[str]:
    pts = ", ".join(_fmt(p.coords) for p in c.vertices)
    return [f"{name} = co{{{pts}}}"]


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    h, _ = instances.load(args.file)
    delta = instances.parse_vector(args.delta, "--delta")
    lines = [fmt_rational(evaluate(h, delta))]
    if args.detail:
        act_plus, act_minus = active_sets(h, delta)
        lines.append("active.plus = " + _fmt(tuple(sorted(act_plus))))
        lines.append("active.minus = " + _fmt(tuple(sorted(act_minus))))
        if args.direction:
            d = instances.parse_vector(args.direction, "--direction")
            lines.append("directional_derivative = " + fmt_rational(directional_derivative(h, delta, d)))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_HOLDS


def cmd_show(args) -> int:
    h, _ = instances.load(args.file)
    hn = normalize(h)
    cd = to_codifferential(hn)
    lines = []
    if hn.offset != 0:
        lines.append(f"offset = {fmt_rational(hn.offset)}")
    if args.which == "codifferential":
        lines += _polytope_lines("lower", cd.lower)
        lines += _polytope_lines("upper", cd.upper)
    elif args.which == "upper-coexhauster":
        for k, c in enumerate(upper_coexhauster(cd).members, start=1):
            lines += _polytope_lines(f"C{k}", c)
    else:
        for k, c in enumerate(lower_coexhauster(cd).members, start=1):
            lines += _polytope_lines(f"C{k}", c)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_HOLDS


def _certificate_text(cert) -> str:
    if cert.feasible:
        return "feasible multipliers=" + " | ".join(_fmt(m) for m in cert.multipliers)
    return f"infeasible functional={_fmt(cert.functional)} bound={_fmt(cert.bound)}"


def build_check_report(h: PolyhedralDC, label, which: str, with_oracle: bool) -> Tuple[Report, bool]:
    hn = normalize(h)
    f = hn.function
    rep = Report()
    rep.add("instance.label", label or "")
    rep.add("instance.dimension", h.dimension)
    rep.add("instance.plus_pieces", len(h.plus_pieces))
    rep.add("instance.minus_pieces", len(h.minus_pieces))
    rep.add("normalization.offset", hn.offset)

    names = list(CHECK_NAMES) if which == "all" else [which]
    verdicts = {}
    for name in names:
        v = conditions.CHECKERS[CHECK_NAMES[name]](hn)
        verdicts[name] = v
        key = f"check.{name}"
        rep.add(f"{key}.holds", v.holds)
        for route in conditions.ROUTES:
            rep.add(f"{key}.route.{route}", v.route_results[route])
        if not v.holds:
            rep.add(f"{key}.failing_index", v.failing_index)
            rep.add(f"{key}.witness.kind", v.witness_kind)
            rep.add(f"{key}.witness.value", v.witness)
            if v.witness_kind == "point":
                rep.add(f"{key}.witness.h", evaluate(f, v.witness))
            else:
                rep.add(f"{key}.witness.recession", recession(f, v.witness))
        for route in conditions.ROUTES:
            for k, cert in enumerate(v.element_certificates[route], start=1):
                rep.add(f"{key}.certificate.{route}.{k}", _certificate_text(cert))

    if hn.offset == 0 and any(n in ("min", "max") for n in names):
        sr = conditions.stationarity_report(hn)
        rep.add("stationarity.classification", sr.classification)
        rep.add("stationarity.note", sr.note)

    if with_oracle:
        conflicts = []
        g = oracle.GridSpec(ORACLE_GRID[0], ORACLE_GRID[1], h.dimension)
        lo, lo_at = oracle.grid_min(f, g)
        hi, hi_at = oracle.grid_max(f, g)
        down = oracle.sample_recession(f, ORACLE_DIRECTIONS)
        up = oracle.sample_recession_above(f, ORACLE_DIRECTIONS)
        rep.add("oracle.grid.radius", ORACLE_GRID[0])
        rep.add("oracle.grid.step", ORACLE_GRID[1])
        rep.add("oracle.grid.min", lo)
        rep.add("oracle.grid.min_at", lo_at)
        rep.add("oracle.grid.max", hi)
        rep.add("oracle.grid.max_at", hi_at)
        rep.add("oracle.recession.decreasing", down)
        rep.add("oracle.recession.increasing", up)
        if "min" in verdicts and verdicts["min"].holds and lo < 0:
            conflicts.append("min")
        if "max" in verdicts and verdicts["max"].holds and hi > 0:
            conflicts.append("max")
        if "bounded-below" in verdicts and verdicts["bounded-below"].holds and down is not None:
            conflicts.append("bounded-below")
        if "bounded-above" in verdicts and verdicts["bounded-above"].holds and up is not None:
            conflicts.append("bounded-above")
        rep.add("oracle.conflicts", ",".join(conflicts) if conflicts else "none")
        if conflicts:
            raise RouteDisagreement(f"oracle refutes a verdict: {conflicts}")

    holds = all(v.holds for v in verdicts.values())
    rep.add("result.holds", holds)
    return rep, holds


def cmd_check(args) -> int:
    h, label = instances.load(args.file)
    rep, holds = build_check_report(h, label, args.which, args.oracle)
    _emit(rep.kv() if args.format == "kv" else rep.human(), args.out)
    return EXIT_HOLDS if holds else EXIT_FAILS


def _parse_range(tokens: Sequence[str]) -> Tuple[Fraction, Fraction]:
    parts = [p for t in tokens for p in t.split(",") if p.strip()]
    if len(parts) != 2:
        raise ParseError("--range needs two values, e.g. --range -5 5 or --range=-5,5")
    lo = instances.parse_rational(parts[0].strip(), "--range")
    hi = instances.parse_rational(parts[1].strip(), "--range")
    if hi < lo:
        raise ParseError("--range: upper end below lower end")
    return lo, hi


def plot_rows(h: PolyhedralDC, lo: Fraction, hi: Fraction, step: Fraction):
    if h.dimension not in (1, 2):
        raise UnsupportedDimension(f"plot supports dimension 1 or 2, got {h.dimension}")
    if step <= 0:
        raise ParseError("--step must be positive")
    count = int((hi - lo) / step)
    axis = [lo + k * step for k in range(count + 1)]
    if h.dimension == 1:
        return [((x,), evaluate(h, (x,))) for x in axis]
    return [((x, y), evaluate(h, (x, y))) for x in axis for y in axis]


def cmd_plot(args) -> int:
    h, _ = instances.load(args.file)
    lo, hi = _parse_range(args.range)
    step = instances.parse_rational(args.step, "--step")
    rows = plot_rows(h, lo, hi, step)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta", "h"] if h.dimension == 1 else ["delta1", "delta2", "h"])
    for point, value in rows:
        writer.writerow([fmt_decimal(x) for x in point] + [fmt_decimal(value)])
    _emit(buf.getvalue(), args.out)
    return EXIT_HOLDS


def cmd_audit(args) -> int:
    if args.count < 1:
        print("pdc audit: --count must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    results = run_audit(args.count, args.seed, oracle=not args.no_oracle, workers=args.workers)
    elapsed = time.perf_counter() - t0
    lines = [f"{'#':>5} {'n':>2} {'|I|':>3} {'|J|':>3}  {'below':>5} {'above':>5} {'min':>5} {'max':>5}  status"]
    for r in results:
        cols = []
        for check in conditions.CHECKS:
            cols.append("-" if r.disagreements else ("yes" if r.verdict(check) else "no"))
        problems = r.disagreements + r.oracle_conflicts + r.witness_failures + r.implication_failures
        status = "ok" if r.ok else "FAIL " + ",".join(problems)
        lines.append(f"{r.index:>5} {r.dimension:>2} {r.sizes[0]:>3} {r.sizes[1]:>3}  "
                     + " ".join(f"{c:>5}" for c in cols) + f"  {status}")
    summary = summarize(results)
    lines.append("")
    for key, value in summary.items():
        lines.append(f"{key} = {value}")
    lines.append(f"seconds = {elapsed:.2f}")
    _emit("\n".join(lines) + "\n", args.out)
    bad = summary["disagreements"] + summary["oracle_conflicts"] + summary["witness_failures"] \
        + summary["implication_failures"]
    return EXIT_HOLDS if bad == 0 else EXIT_FAILS


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdc", description="Polyhedral DC function analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate h exactly at a point")
    p.add_argument("--file", required=True)
    p.add_argument("--delta", required=True, help="comma-separated rationals, e.g. 3/2,-1")
    p.add_argument("--detail", action="store_true", help="also print active piece indices")
    p.add_argument("--direction", help="with --detail: directional derivative along this vector")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("show", help="print codifferential or coexhauster vertex sets")
    p.add_argument("--file", required=True)
    p.add_argument("--which", required=True,
                   choices=["codifferential", "upper-coexhauster", "lower-coexhauster"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("check", help="decide boundedness or optimality conditions")
    p.add_argument("--file", required=True)
    p.add_argument("--which", default="all", choices=list(CHECK_NAMES) + ["all"])
    p.add_argument("--oracle", action="store_true", help="cross-check against brute-force falsifiers")
    p.add_argument("--format", default="human", choices=["human", "kv"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("plot", help="tabulate h on a lattice as CSV")
    p.add_argument("--file", required=True)
    p.add_argument("--range", nargs="+", default=["-5", "5"], metavar="LO HI")
    p.add_argument("--step", default="1/4")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("audit", help="randomized route-equivalence and oracle audit")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", default="pdc", help="label the random instances are derived from")
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RouteDisagreement, CertificateError) as exc:
        print(f"pdc: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (PDCError, FileNotFoundError) as exc:
        print(f"pdc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
