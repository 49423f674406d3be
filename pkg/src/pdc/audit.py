"""Randomized cross-validation of the checkers.

Instances: dimension 1..3, 1..5 pieces on each side, every entry p/q with
p in [-8, 8] and q in {1, 2, 4}. Generation is seeded from a text label so
runs are reproducible.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .conditions import CHECKERS, ROUTES, equivalence_audit
from .dcfunc import PolyhedralDC, evaluate, make_polyhedral_dc, normalize, recession
from .oracle import GridSpec, grid_max, grid_min, sample_recession, sample_recession_above

ORACLE_GRID = (Fraction(5), Fraction(1, 4))
ORACLE_DIRECTIONS = 64


def _entry(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4)))


def random_instance(rng: random.Random, max_dim: int = 3, max_pieces: int = 5) -> PolyhedralDC:
    n = rng.randint(1, max_dim)

    def pieces():
        return [(_entry(rng), [_entry(rng) for _ in range(n)]) for _ in range(rng.randint(1, max_pieces))]

    return make_polyhedral_dc(n, pieces(), pieces())


def rng_for(label: str) -> random.Random:
    return random.Random(int.from_bytes(hashlib.sha256(label.encode()).digest()[:8], "big"))


def random_instances(count: int, label: str = "pdc") -> List[PolyhedralDC]:
    rng = rng_for(label)
    return [random_instance(rng) for _ in range(count)]


@dataclass
class InstanceAudit:
    index: int
    dimension: int
    sizes: tuple
    matrix: Dict[str, Dict[str, bool]]
    disagreements: List[str]
    oracle_conflicts: List[str] = field(default_factory=list)
    witness_failures: List[str] = field(default_factory=list)
    implication_failures: List[str] = field(default_factory=list)
    grid_min: Optional[Fraction] = None
    grid_max: Optional[Fraction] = None

    @property
    def ok(self) -> bool:
        return not (self.disagreements or self.oracle_conflicts
                    or self.witness_failures or self.implication_failures)

    def verdict(self, check: str) -> bool:
        return self.matrix[check]["dc"]


def audit_instance(h: PolyhedralDC, index: int = 0, oracle: bool = True) -> InstanceAudit:
    hn = normalize(h)
    f = hn.function
    rep = equivalence_audit(hn)
    out = InstanceAudit(index, h.dimension, (len(h.plus_pieces), len(h.minus_pieces)),
                        rep.matrix, list(rep.disagreements))
    if rep.disagreements:
        return out

    verdicts = {name: check(hn) for name, check in CHECKERS.items()}
    for name, v in verdicts.items():
        if v.holds:
            continue
        w = v.witness
        ok = {
            "bounded_below": lambda: recession(f, w) < 0,
            "bounded_above": lambda: recession(f, w) > 0,
            "min": lambda: evaluate(f, w) < 0,
            "max": lambda: evaluate(f, w) > 0,
        }[name]()
        if not ok:
            out.witness_failures.append(name)

    if verdicts["min"].holds and not verdicts["bounded_below"].holds:
        out.implication_failures.append("min => bounded_below")
    if verdicts["max"].holds and not verdicts["bounded_above"].holds:
        out.implication_failures.append("max => bounded_above")

    if oracle:
        g = GridSpec(ORACLE_GRID[0], ORACLE_GRID[1], h.dimension)
        out.grid_min, _ = grid_min(f, g)
        out.grid_max, _ = grid_max(f, g)
        if out.grid_min < 0 and verdicts["min"].holds:
            out.oracle_conflicts.append("min")
        if out.grid_max > 0 and verdicts["max"].holds:
            out.oracle_conflicts.append("max")
        if verdicts["bounded_below"].holds and sample_recession(f, ORACLE_DIRECTIONS) is not None:
            out.oracle_conflicts.append("bounded_below")
        if verdicts["bounded_above"].holds and sample_recession_above(f, ORACLE_DIRECTIONS) is not None:
            out.oracle_conflicts.append("bounded_above")
    return out


def _audit_args(args):
    return audit_instance(*args)


def run_audit(count: int, label: str = "pdc", oracle: bool = True, workers: int = 1) -> List[InstanceAudit]:
    """Audit ``count`` random instances; results come back in instance order."""
    jobs = [(h, k + 1, oracle) for k, h in enumerate(random_instances(count, label))]
    if workers <= 1:
        return [audit_instance(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_audit_args, jobs, chunksize=8))


def summarize(results: List[InstanceAudit]) -> Dict[str, int]:
    summary = {"instances": len(results)}
    for check in CHECKERS:
        summary[f"{check}.holds"] = sum(r.verdict(check) for r in results if not r.disagreements)
    summary["disagreements"] = sum(bool(r.disagreements) for r in results)
    summary["oracle_conflicts"] = sum(bool(r.oracle_conflicts) for r in results)
    summary["witness_failures"] = sum(bool(r.witness_failures) for r in results)
    summary["implication_failures"] = sum(bool(r.implication_failures) for r in results)
    return summary


__all__ = [
    "ROUTES",
    "InstanceAudit",
    "audit_instance",
    "random_instance",
    "random_instances",
    "run_audit",
    "summarize",
]
