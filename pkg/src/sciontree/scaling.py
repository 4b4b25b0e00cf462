"""Thread-ladder timing runs written as CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from statistics import fmean
from typing import Dict, Iterable, List, Optional, Sequence

from .core import ProblemInstance
from .engine import EngineConfig, run


@dataclass(frozen=True)
class ScalingRecord:
    instance_id: str
    k: int
    n: int
    nondominated: int
    scalarizations: int
    thread_budget: int
    wall_time_seconds: float
    slowdown: float


CSV_COLUMNS = tuple(f.name for f in fields(ScalingRecord))


def thread_ladder(max_threads: int) -> List[int]:
    """1, 2, 4, ... up to and including ``max_threads`` (appended if not a power of two)."""
    if max_threads < 1:
        raise ValueError("max_threads must be at least 1")
    out = [1]
    while out[-1] * 2 <= max_threads:
        out.append(out[-1] * 2)
    if out[-1] != max_threads:
        out.append(max_threads)
    return out


def instance_size(instance: ProblemInstance) -> int:
    for attr in ("n", "images"):
        if hasattr(instance, attr):
            v = getattr(instance, attr)
            return v if isinstance(v, int) else len(v)
    return 0


def scale_instance(instance: ProblemInstance, instance_id: str, budgets: Sequence[int],
                   baseline: Optional[int] = None, repeats: int = 1) -> List[ScalingRecord]:
    """Run ``instance`` once per thread budget (best of ``repeats``).

    ``slowdown`` is each run's time over the time of the ``baseline`` budget
    (default: the first budget).
    """
    baseline = budgets[0] if baseline is None else baseline
    if baseline not in budgets:
        raise ValueError(f"baseline budget {baseline} is not in the ladder")
    times: Dict[int, float] = {}
    reports = {}
    for b in budgets:
        best = None
        for _ in range(max(1, repeats)):
            rep = run(instance, config=EngineConfig(thread_budget=b))
            t = rep.wall_time["total"]
            if best is None or t < best[0]:
                best = (t, rep)
        times[b], reports[b] = best
    base = times[baseline]
    return [
        ScalingRecord(
            instance_id=instance_id,
            k=instance.k,
            n=instance_size(instance),
            nondominated=len(reports[b].nondominated),
            scalarizations=reports[b].scalarizations_solved,
            thread_budget=b,
            wall_time_seconds=times[b],
            slowdown=times[b] / base if base > 0 else float("nan"),
        )
        for b in budgets
    ]


def mean_slowdown(records: Iterable[ScalingRecord]) -> Dict[int, float]:
    """Arithmetic mean of ``slowdown`` over instances, per thread budget."""
    per: Dict[int, List[float]] = {}
    for r in records:
        per.setdefault(r.thread_budget, []).append(r.slowdown)
    return {b: fmean(v) for b, v in sorted(per.items())}


def records_to_csv(records: Iterable[ScalingRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = asdict(r)
        row["wall_time_seconds"] = repr(r.wall_time_seconds)
        row["slowdown"] = repr(r.slowdown)
        writer.writerow(row)
    return buf.getvalue()


def records_from_csv(text: str) -> List[ScalingRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(ScalingRecord(
            instance_id=row["instance_id"],
            k=int(row["k"]),
            n=int(row["n"]),
            nondominated=int(row["nondominated"]),
            scalarizations=int(row["scalarizations"]),
            thread_budget=int(row["thread_budget"]),
            wall_time_seconds=float(row["wall_time_seconds"]),
            slowdown=float(row["slowdown"]),
        ))
    return out
