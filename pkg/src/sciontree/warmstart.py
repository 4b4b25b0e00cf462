"""Level-by-level computation of the nested sets ``Y_N(1) <= ... <= Y_N(k)``.

``Y_N(r)`` keeps the nondominated images that no other nondominated image
dominates on the first ``r`` objectives.  Level ``r`` reorders the objectives
by :meth:`Permutation.cascade` and keeps the first ``k-r`` bounds of every
combination at ``+inf`` (those members stay dummies), so only ``r-1`` bound
positions ever change.  Any scalarization at level ``r`` is feasible exactly
when some member of ``Y_N(r-1)`` satisfies its bounds.  The cascade uses that
to skip infeasible queries without calling the backend and to hand the backend
a feasible incumbent for every other query.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Image, Permutation, ProblemInstance, lex_key, permute_problem
from .engine import (
    ConfigurationError,
    EngineError,
    RunReport,
    _report_from_sink,
    ResultSink,
    traverse,
    validate_instance,
)
from .scalarizer import INFEASIBLE, Backend, BackendError, ScalarizationQuery, make_backend


class CascadeVerificationError(AssertionError):
    """A query skipped as infeasible turned out to be feasible."""


@dataclass
class FeasibilityLadder:
    """``levels[r - 1]`` is ``Y_N(r)`` in original objective order."""

    levels: List[Tuple[Image, ...]] = field(default_factory=list)
    witnesses: Dict[Image, object] = field(default_factory=dict)

    def level(self, r: int) -> Tuple[Image, ...]:
        return self.levels[r - 1]


@dataclass
class LevelStats:
    r: int
    scalarizations: int
    backend_calls: int
    skipped_infeasible: int
    backend_infeasible: int
    incumbent_hits: int
    verified_skips: int
    stored: int
    wall_time: float


@dataclass
class CascadeReport:
    ladder: FeasibilityLadder
    report: RunReport
    levels: List[LevelStats]

    @property
    def skipped_infeasible(self) -> int:
        return sum(s.skipped_infeasible for s in self.levels)

    @property
    def backend_calls(self) -> int:
        return sum(s.backend_calls for s in self.levels)


def _feasibility_hook(backend: Backend, lower: Sequence[Tuple[Tuple[int, ...], object]] | None,
                      warm_start: bool, verify: bool, counters: dict, lock: threading.Lock):
    """Solver hook that consults the lower level before calling the backend."""

    def solve(parameter, partial):
        bounds = parameter.bounds
        if lower is not None:
            witness = None
            found = False
            for coords, w in lower:
                if all(c < b for c, b in zip(coords, bounds)):
                    found, witness = True, w
                    break
            if not found:
                partial.skipped += 1
                if verify:
                    check = backend.solve(ScalarizationQuery(parameter))
                    if check.is_optimal:
                        raise CascadeVerificationError(
                            f"skipped bounds {bounds} but the backend found {check.image}"
                        )
                    with lock:
                        counters["verified"] += 1
                return INFEASIBLE
            partial.calls += 1
            if warm_start:
                partial.hits += 1
                answer = backend.solve(ScalarizationQuery(parameter, incumbent=witness))
            else:
                answer = backend.solve(ScalarizationQuery(parameter))
        else:
            partial.calls += 1
            answer = backend.solve(ScalarizationQuery(parameter))
        if not answer.is_optimal:
            with lock:
                counters["backend_infeasible"] += 1
        return answer

    return solve


def compute_level(
    r: int,
    lower_level: Optional[Sequence[Image]],
    instance: ProblemInstance,
    backend: Backend | None = None,
    thread_budget: int = 1,
    *,
    lower_witnesses: Optional[Dict[Image, object]] = None,
    warm_start: bool = True,
    verify: bool = False,
    instrument: bool = False,
) -> Tuple[Tuple[Image, ...], Dict[Image, object], LevelStats, RunReport]:
    """Compute ``Y_N(r)`` given ``Y_N(r-1)``.

    ``lower_level`` is ignored for ``r = 1``; ``None`` for ``r > 1`` turns off
    skipping and warm starts (every query goes to the backend).

    ``backend`` must solve the *permuted* instance; by default one is built.
    Returns the level set and witnesses in original objective order, the
    level statistics and the raw run report (permuted order).
    """
    validate_instance(instance)
    k = instance.k
    if not 1 <= r <= k:
        raise ConfigurationError(f"level r={r} outside 1..{k}")
    sigma = Permutation.cascade(r, k)
    permuted = permute_problem(instance, sigma)
    if backend is None:
        backend = make_backend(permuted)
    lower = None
    if r > 1 and lower_level is not None:
        lower_witnesses = lower_witnesses or {}
        ordered = sorted(lower_level, key=lambda im: lex_key(im.coords))
        lower = [(sigma.apply(im.coords), lower_witnesses.get(im)) for im in ordered]
    counters = {"verified": 0, "backend_infeasible": 0}
    lock = threading.Lock()
    hook = _feasibility_hook(backend, lower, warm_start, verify, counters, lock)
    free = range(k - r, k - 1)
    t0 = time.perf_counter()
    sink = ResultSink(instrument)
    try:
        sink, task_counts = traverse(k, hook, thread_budget, positions=free, sink=sink)
    except BackendError as exc:
        raise EngineError(str(exc), _report_from_sink(sink, thread_budget, ())) from exc
    elapsed = time.perf_counter() - t0
    report = _report_from_sink(sink, thread_budget, task_counts)
    report.order = sigma
    inv = sigma.inverse()
    images = []
    witnesses = {}
    for im in report.nondominated:
        orig = Image(inv.apply(im.coords))
        images.append(orig)
        witnesses[orig] = report.witnesses.get(im)
    images.sort(key=lambda im: lex_key(im.coords))
    stats = LevelStats(
        r=r,
        scalarizations=report.scalarizations_solved,
        backend_calls=report.backend_calls,
        skipped_infeasible=report.skipped_infeasible,
        backend_infeasible=counters["backend_infeasible"],
        incumbent_hits=report.incumbent_hits,
        verified_skips=counters["verified"],
        stored=len(images),
        wall_time=elapsed,
    )
    return tuple(images), witnesses, stats, report


def run_cascade(
    instance: ProblemInstance,
    backend: Backend | None = None,
    thread_budget: int = 1,
    *,
    warm_start: bool = True,
    verify: bool = False,
) -> CascadeReport:
    """Compute ``Y_N(1), ..., Y_N(k)`` in turn; the last level is the answer.

    ``backend`` is only used for the final level, whose ordering is the
    identity; the other levels build backends for their permuted instances.
    With ``verify`` every skipped query is re-solved and must be infeasible.
    """
    validate_instance(instance)
    k = instance.k
    ladder = FeasibilityLadder()
    stats: List[LevelStats] = []
    lower: Tuple[Image, ...] = ()
    witnesses: Dict[Image, object] = {}
    final_report = None
    t0 = time.perf_counter()
    for r in range(1, k + 1):
        level_backend = backend if r == k else None
        images, level_witnesses, level_stats, report = compute_level(
            r, lower, instance, level_backend, thread_budget,
            lower_witnesses=witnesses, warm_start=warm_start, verify=verify,
        )
        ladder.levels.append(images)
        witnesses = {**witnesses, **level_witnesses}
        stats.append(level_stats)
        lower = images
        final_report = report
    ladder.witnesses = witnesses
    final_report.nondominated = ladder.levels[-1]
    final_report.witnesses = {im: witnesses.get(im) for im in ladder.levels[-1]}
    final_report.scalarizations_solved = sum(s.scalarizations for s in stats)
    final_report.backend_calls = sum(s.backend_calls for s in stats)
    final_report.skipped_infeasible = sum(s.skipped_infeasible for s in stats)
    final_report.incumbent_hits = sum(s.incumbent_hits for s in stats)
    final_report.infeasible_count = sum(s.skipped_infeasible + s.backend_infeasible for s in stats)
    final_report.wall_time = {"total": time.perf_counter() - t0}
    final_report.order = None
    return CascadeReport(ladder, final_report, stats)
