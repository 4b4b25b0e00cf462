"""Cross-check one engine run against the brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .core import PLUS_INF, ProblemInstance, viable_parameter
from .engine import EngineConfig, RunReport, run
from .oracle import (
    MAX_ORACLE_IMAGES,
    MAX_ORACLE_K,
    enumerate_upper_bounds,
    in_general_position,
    nondominated_of,
    true_combination_tree,
)
from .warmstart import CascadeVerificationError, run_cascade


@dataclass
class VerificationResult:
    report: RunReport
    expected_size: int
    checks: List[str] = field(default_factory=list)
    mismatches: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def _check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(name)
        if not passed:
            self.mismatches.append(f"{name}: {detail}" if detail else name)


def upper_bound_image(combination, optimum):
    """Point ``(eps(c), y*_k)`` with ``+inf`` in the last slot for an infeasible node."""
    last = PLUS_INF if optimum is None else optimum.coords[-1]
    return tuple(viable_parameter(combination).bounds) + (last,)


def verify_instance(instance: ProblemInstance, thread_budget: int = 1, *,
                    cascade: bool = True, compare_threads: Optional[int] = None) -> VerificationResult:
    report = run(instance, config=EngineConfig(thread_budget=thread_budget, instrument=True))
    expected = nondominated_of(instance)
    res = VerificationResult(report, len(expected))
    got = set(report.nondominated)
    res._check("nondominated set equals brute force", got == expected,
               f"{len(got - expected)} extra, {len(expected - got)} missing")
    res._check("no duplicate storage", report.duplicate_stores == 0, f"{report.duplicate_stores} duplicates")
    nodes = [c for c, _, _ in report.provenance]
    res._check("every node explored once", len(nodes) == len(set(nodes)),
               f"{len(nodes) - len(set(nodes))} repeats")
    roots = [c for c, parent, _ in report.provenance if parent is None]
    res._check("single root", len(roots) == 1, f"{len(roots)} parentless nodes")

    if len(expected) <= MAX_ORACLE_IMAGES and instance.k <= MAX_ORACLE_K:
        tree = true_combination_tree(expected, instance.k)
        true_nodes = {t.combination for t in tree}
        res._check("explored nodes equal true combinations", set(nodes) == true_nodes,
                   f"{len(set(nodes) - true_nodes)} extra, {len(true_nodes - set(nodes))} missing")
        res._check("scalarization count equals true combinations",
                   report.scalarizations_solved == len(tree),
                   f"{report.scalarizations_solved} != {len(tree)}")
        if instance.k <= 4 and len(expected) <= 60:
            bounds = {u.point for u in enumerate_upper_bounds(expected, instance.k)}
            if in_general_position([im.coords for im in expected]):
                mapped = [upper_bound_image(c, y) for c, y in report.solved]
                res._check("solved parameters map to distinct upper bounds",
                           len(set(mapped)) == len(mapped) and set(mapped) <= bounds,
                           f"{len(mapped) - len(set(mapped))} collisions, {len(set(mapped) - bounds)} off-bound")
            else:
                res.notes.append(f"not in general position: {report.scalarizations_solved} scalarizations,"
                                 f" {len(bounds)} upper bounds")
    else:
        res.notes.append("instance above oracle ceiling; combination checks skipped")

    if compare_threads is not None and compare_threads != thread_budget:
        other = run(instance, config=EngineConfig(thread_budget=compare_threads))
        res._check(f"{compare_threads}-thread run agrees",
                   other.nondominated == report.nondominated
                   and other.scalarizations_solved == report.scalarizations_solved)
    if cascade:
        try:
            casc = run_cascade(instance, thread_budget=thread_budget, verify=True)
        except CascadeVerificationError as exc:
            res._check("cascade skips are infeasible", False, str(exc))
        else:
            res._check("cascade agrees", set(casc.ladder.levels[-1]) == expected)
    return res
