"""Enumeration of the nondominated set by traversing the scion tree.

Starting from the all-dummy combination, every node solves one scalarization.
Its optimum ``y*`` is stored when the node is the unique combination owning
``y*`` (:func:`storage_rule`) and spawns one child per admissible position
(:func:`scion_candidates`).  The nodes form a tree, so subtrees are explored
independently, here as tasks on a :class:`~sciontree.pool.WorkStealingPool`.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import (
    Combination,
    DimensionError,
    ExplicitSet,
    Image,
    Permutation,
    ProblemInstance,
    lex_key,
    permute_problem,
    viable_parameter,
)
from .pool import WorkStealingPool
from .scalarizer import Backend, BackendError, ScalarizationAnswer, ScalarizationQuery, make_backend

THREADS_ENV = "SCIONTREE_THREADS"


class ConfigurationError(ValueError):
    """The run cannot start with the given instance or configuration."""


class EngineError(RuntimeError):
    """A run aborted; ``partial`` holds what was collected before the failure."""

    def __init__(self, message, partial: "RunReport"):
        super().__init__(message)
        self.partial = partial


def default_thread_budget() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError as exc:
            raise ConfigurationError(f"{THREADS_ENV}={value!r} is not an integer") from exc
    return 1


@dataclass
class EngineConfig:
    thread_budget: int = 1
    order: Optional[Permutation] = None
    warm_start: bool = True
    instrument: bool = False


@dataclass(frozen=True)
class TraversalNode:
    combination: Combination
    depth: int = 0
    parent: Optional[Combination] = None
    position: Optional[int] = None


@dataclass
class RunReport:
    nondominated: Tuple[Image, ...] = ()
    witnesses: Dict[Image, object] = field(default_factory=dict)
    scalarizations_solved: int = 0
    infeasible_count: int = 0
    backend_calls: int = 0
    skipped_infeasible: int = 0
    incumbent_hits: int = 0
    store_events: int = 0
    max_depth: int = 0
    thread_count: int = 1
    task_counts: Tuple[int, ...] = ()
    wall_time: Dict[str, float] = field(default_factory=dict)
    order: Optional[Permutation] = None
    provenance: Optional[List[Tuple[Combination, Optional[Combination], Optional[int]]]] = None
    solved: Optional[List[Tuple[Combination, Optional[Image]]]] = None

    @property
    def duplicate_stores(self) -> int:
        return self.store_events - len(self.nondominated)

    @property
    def incumbent_hit_rate(self) -> float:
        return self.incumbent_hits / self.backend_calls if self.backend_calls else 0.0


def storage_rule(c: Combination, y_star: Image) -> bool:
    """True when member ``i`` is weakly below ``y_star`` on all coordinates after ``i``."""
    ys = y_star.coords
    k = len(ys)
    for i, member in enumerate(c.members):
        mc = member.coords
        for j in range(i + 1, k):
            if not mc[j] <= ys[j]:
                return False
    return True


def scion_candidates(
    c: Combination, y_star: Image, positions: Optional[Sequence[int]] = None
) -> List[Tuple[int, Combination]]:
    """Children of ``c``: replace member ``l`` by ``y_star`` when ``y_star[l]`` is
    at least every other member's coordinate ``l``.  Ascending ``l``."""
    members = c.members
    ys = y_star.coords
    out = []
    for pos in range(len(members)) if positions is None else positions:
        v = ys[pos]
        if all(v >= m.coords[pos] for i, m in enumerate(members) if i != pos):
            out.append((pos, c.replace(pos, y_star)))
    return out


class _Partial:
    """Per-task counters and findings, merged into the sink once per task."""

    __slots__ = ("stored", "solved", "infeasible", "calls", "skipped", "hits", "max_depth", "provenance", "answers")

    def __init__(self, instrument):
        self.stored = []
        self.solved = 0
        self.infeasible = 0
        self.calls = 0
        self.skipped = 0
        self.hits = 0
        self.max_depth = 0
        self.provenance = [] if instrument else None
        self.answers = [] if instrument else None


class ResultSink:
    """Append-only collector shared by all workers."""

    def __init__(self, instrument: bool = False):
        self._lock = threading.Lock()
        self.instrument = instrument
        self.stored: List[Tuple[Image, object]] = []
        self.solved = 0
        self.infeasible = 0
        self.calls = 0
        self.skipped = 0
        self.hits = 0
        self.max_depth = 0
        self.provenance = [] if instrument else None
        self.answers = [] if instrument else None

    def merge(self, p: _Partial) -> None:
        with self._lock:
            self.stored.extend(p.stored)
            self.solved += p.solved
            self.infeasible += p.infeasible
            self.calls += p.calls
            self.skipped += p.skipped
            self.hits += p.hits
            self.max_depth = max(self.max_depth, p.max_depth)
            if self.instrument:
                self.provenance.extend(p.provenance)
                self.answers.extend(p.answers)


# A solver hook maps (parameter, partial) to an answer and books its own counters.
SolverHook = Callable[[object, _Partial], ScalarizationAnswer]


def backend_hook(backend: Backend) -> SolverHook:
    def solve(parameter, partial):
        partial.calls += 1
        return backend.solve(ScalarizationQuery(parameter))

    return solve


def explore_subtree(
    node: TraversalNode,
    backend: Backend | None,
    sink: ResultSink,
    *,
    spawn: Optional[Callable[[TraversalNode], None]] = None,
    positions: Optional[Sequence[int]] = None,
    solver: Optional[SolverHook] = None,
) -> ResultSink:
    """Solve ``node`` and everything below it.

    With ``spawn`` every child except the first is handed to the scheduler and
    the first child is processed inline; without it the whole subtree is
    walked depth-first here.
    """
    if solver is None:
        solver = backend_hook(backend)
    partial = _Partial(sink.instrument)
    stack = [node]
    try:
        while stack:
            cur = stack.pop()
            comb = cur.combination
            answer = solver(viable_parameter(comb), partial)
            partial.solved += 1
            if cur.depth > partial.max_depth:
                partial.max_depth = cur.depth
            if partial.provenance is not None:
                partial.provenance.append((comb, cur.parent, cur.position))
                partial.answers.append((comb, answer.image))
            if not answer.is_optimal:
                partial.infeasible += 1
                continue
            y = answer.image
            if storage_rule(comb, y):
                partial.stored.append((y, answer.witness))
            children = [
                TraversalNode(child, cur.depth + 1, comb, pos)
                for pos, child in scion_candidates(comb, y, positions)
            ]
            if not children:
                continue
            if spawn is None:
                stack.extend(reversed(children))
            else:
                for child in children[1:]:
                    spawn(child)
                stack.append(children[0])
    finally:
        sink.merge(partial)
    return sink


def traverse(
    k: int,
    solver: SolverHook,
    thread_budget: int = 1,
    *,
    positions: Optional[Sequence[int]] = None,
    instrument: bool = False,
    sink: Optional[ResultSink] = None,
) -> Tuple[ResultSink, Tuple[int, ...]]:
    """Explore the whole tree from the all-dummy root; returns the sink and per-worker task counts."""
    if thread_budget < 1:
        raise ConfigurationError("thread_budget must be at least 1")
    if sink is None:
        sink = ResultSink(instrument)
    root = TraversalNode(Combination.root(k))
    if thread_budget == 1:
        explore_subtree(root, None, sink, positions=positions, solver=solver)
        return sink, (1,)
    pool = WorkStealingPool(thread_budget)

    def handle(task, spawn, wid):
        explore_subtree(task, None, sink, spawn=spawn, positions=positions, solver=solver)

    pool.run(root, handle)
    return sink, tuple(pool.task_counts)


def _report_from_sink(sink: ResultSink, thread_count, task_counts) -> RunReport:
    stored = sorted(sink.stored, key=lambda item: lex_key(item[0].coords))
    images = tuple(im for im, _ in stored)
    witnesses = {}
    for im, w in stored:
        witnesses.setdefault(im, w)
    return RunReport(
        nondominated=tuple(dict.fromkeys(images)),
        witnesses=witnesses,
        scalarizations_solved=sink.solved,
        infeasible_count=sink.infeasible,
        backend_calls=sink.calls,
        skipped_infeasible=sink.skipped,
        incumbent_hits=sink.hits,
        store_events=len(stored),
        max_depth=sink.max_depth,
        thread_count=thread_count,
        task_counts=task_counts,
        provenance=sink.provenance,
        solved=sink.answers,
    )


def _unpermute_report(report: RunReport, sigma: Permutation) -> RunReport:
    inv = sigma.inverse()
    mapped = [(Image(inv.apply(im.coords)), report.witnesses.get(im)) for im in report.nondominated]
    mapped.sort(key=lambda item: lex_key(item[0].coords))
    report.nondominated = tuple(im for im, _ in mapped)
    report.witnesses = {im: w for im, w in mapped}
    report.order = sigma
    return report


def validate_instance(instance: ProblemInstance) -> None:
    try:
        k = instance.k
    except (AttributeError, IndexError) as exc:
        raise ConfigurationError(f"cannot determine the objective count of {instance!r}") from exc
    if k < 2:
        raise ConfigurationError(f"need at least two objectives, got k={k}")


def run(
    instance: ProblemInstance,
    backend: Backend | None = None,
    thread_budget: int | None = None,
    config: EngineConfig | None = None,
) -> RunReport:
    """Compute the nondominated set of ``instance``.

    ``backend`` defaults to the shipped backend for the instance type.  With
    ``config.order`` the objectives are reordered before solving and the
    result is mapped back.
    """
    config = config or EngineConfig()
    budget = config.thread_budget if thread_budget is None else thread_budget
    if budget is None or budget < 1:
        raise ConfigurationError(f"thread_budget must be at least 1, got {budget}")
    validate_instance(instance)
    k = instance.k
    sigma = config.order
    if sigma is not None and sigma.k != k:
        raise ConfigurationError(f"ordering of size {sigma.k} for k={k}")
    if sigma is not None and not sigma.is_identity:
        instance = permute_problem(instance, sigma)
        backend = None
    t0 = time.perf_counter()
    if backend is None:
        backend = make_backend(instance)
    elif backend.k != k:
        raise DimensionError(f"backend for k={backend.k}, instance has k={k}")
    t1 = time.perf_counter()
    sink = ResultSink(config.instrument)
    try:
        sink, counts = traverse(k, backend_hook(backend), budget, sink=sink)
    except BackendError as exc:
        raise EngineError(str(exc), _report_from_sink(sink, budget, ())) from exc
    t2 = time.perf_counter()
    report = _report_from_sink(sink, budget, counts)
    report.wall_time = {"setup": t1 - t0, "traverse": t2 - t1, "total": t2 - t0}
    if sigma is not None and not sigma.is_identity:
        report = _unpermute_report(report, sigma)
    else:
        report.order = sigma
    return report


def solve_images(points, k: int | None = None, thread_budget: int = 1) -> RunReport:
    """Convenience wrapper for an explicit list of integer points."""
    return run(ExplicitSet.from_points(points, k or 0), thread_budget=thread_budget)
