"""Lexicographic epsilon-constraint solvers.

A backend answers ``lexmin (f_{k-1}, ..., f_0)`` subject to ``f_i < eps_i``
for every finite bound ``i < k-1``.  With integer objectives a strict bound
``f_i < eps_i`` is the same as ``f_i <= eps_i - 1``.

Backends are stateless per query and only read their instance data, so the
engine may call :meth:`Backend.solve` from several threads at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .core import (
    DimensionError,
    ExplicitSet,
    Image,
    Infinity,
    Knapsack,
    Parameter,
    Permutation,
    ProblemInstance,
    TinyIlp,
    is_finite,
)

_INT64_SAFE = 2**62


class BackendError(RuntimeError):
    """A backend could not answer a query (overflow, refused size, ...)."""


@dataclass(frozen=True)
class ScalarizationQuery:
    parameter: Parameter
    incumbent: Any = None
    permutation: Optional[Permutation] = None


@dataclass(frozen=True)
class ScalarizationAnswer:
    """``image is None`` means the query is infeasible."""

    image: Optional[Image] = None
    witness: Any = None

    @property
    def is_optimal(self) -> bool:
        return self.image is not None


INFEASIBLE = ScalarizationAnswer()


class Backend:
    """Base class; subclasses implement :meth:`_solve`."""

    k: int

    def solve(self, query: ScalarizationQuery) -> ScalarizationAnswer:
        bounds = query.parameter.bounds
        if len(bounds) != self.k - 1:
            raise DimensionError(f"query with {len(bounds)} bounds for a {self.k}-objective backend")
        if any(isinstance(b, Infinity) and b.sign < 0 for b in bounds):
            return INFEASIBLE
        limits = tuple(None if not is_finite(b) else b - 1 for b in bounds)
        return self._solve(limits, query.incumbent)

    def _solve(self, limits, incumbent) -> ScalarizationAnswer:
        raise NotImplementedError


def solve(backend: Backend, q: ScalarizationQuery) -> ScalarizationAnswer:
    return backend.solve(q)


def _checked_array(rows, what) -> np.ndarray:
    for row in rows:
        for v in row:
            if abs(v) >= _INT64_SAFE:
                raise BackendError(f"{what} value {v} overflows the 64-bit backend")
    return np.asarray(rows, dtype=np.int64)


class _SortedImageTable:
    """Images sorted once by the lexicographic order; a query is one masked scan."""

    def __init__(self, points, witnesses, k):
        self.k = k
        arr = _checked_array(points, "objective") if len(points) else np.zeros((0, k), dtype=np.int64)
        order = np.lexsort(arr.T) if len(arr) else np.zeros(0, dtype=np.intp)
        self.array = arr[order]
        self.witnesses = [witnesses[i] for i in order]
        self.images = [Image(tuple(int(v) for v in row)) for row in self.array]

    def first_admitted(self, limits):
        if not len(self.array):
            return None
        mask = None
        for i, lim in enumerate(limits):
            if lim is None:
                continue
            if lim >= _INT64_SAFE:
                continue
            if lim <= -_INT64_SAFE:
                return None
            col = self.array[:, i] <= lim
            mask = col if mask is None else (mask & col)
        if mask is None:
            return 0
        idx = int(np.argmax(mask))
        return idx if mask[idx] else None


class ExplicitSetBackend(Backend):
    """Linear scan over an explicit image list (witness = index in the instance)."""

    def __init__(self, instance: ExplicitSet):
        self.instance = instance
        self.k = instance.k
        points = [im.coords for im in instance.images]
        self._table = _SortedImageTable(points, list(range(len(points))), self.k)

    def _solve(self, limits, incumbent):
        idx = self._table.first_admitted(limits)
        if idx is None:
            return INFEASIBLE
        return ScalarizationAnswer(self._table.images[idx], self._table.witnesses[idx])


def solve_explicit(images: Sequence[Image], q: ScalarizationQuery) -> ScalarizationAnswer:
    """Reference scan: the lexicographically smallest image strictly below the bounds."""
    best = None
    for idx, im in enumerate(images):
        if not q.parameter.admits(im.coords):
            continue
        if best is None or tuple(reversed(im.coords)) < tuple(reversed(images[best].coords)):
            best = idx
    if best is None:
        return INFEASIBLE
    return ScalarizationAnswer(images[best], best)


class KnapsackBackend(Backend):
    """Staged depth-first branch and bound for the 0-1 knapsack.

    Stage ``t = k-1, ..., 0`` maximizes profit row ``t`` (minimizes its cost)
    under the capacity, the epsilon bounds and equality pins on the rows
    already fixed.  The bound is the fractional (Dantzig) relaxation of the
    stage row, rounded down.  With ``verify=True`` every answer is checked
    against exhaustive enumeration, which is refused above ``verify_limit``
    items.
    """

    def __init__(self, instance: Knapsack, *, verify: bool = False, verify_limit: int = 20):
        if verify and instance.n > verify_limit:
            raise BackendError(
                f"verification needs exhaustive enumeration; n={instance.n} exceeds the limit {verify_limit}"
            )
        for row in instance.profits:
            if sum(abs(v) for v in row) >= _INT64_SAFE:
                raise BackendError("profit sums overflow the 64-bit range")
        self.instance = instance
        self.k = instance.k
        self.n = instance.n
        self.verify = verify
        self._profits = [list(row) for row in instance.profits]
        self._weights = list(instance.weights)
        self._capacity = instance.capacity
        self._stage_order = [self._ratio_order(row) for row in self._profits]

    def _ratio_order(self, row):
        def key(j):
            p, w = row[j], self._weights[j]
            if p <= 0:
                return (2, 0, j)
            if w == 0:
                return (0, 0, j)
            return (1, -Fraction(p, w), j)

        return sorted(range(self.n), key=key)

    def _solve(self, limits, incumbent):
        k, n = self.k, self.n
        # profit lower bounds: cost_i <= lim  <=>  profit_i >= -lim
        need = [None] * k
        for i, lim in enumerate(limits):
            if lim is not None:
                need[i] = -lim
        pins = [None] * k
        seed = tuple(incumbent) if incumbent is not None else None
        if seed is not None and len(seed) != n:
            seed = None
        witness = None
        for t in range(k - 1, -1, -1):
            value, x = self._stage(t, need, pins, seed)
            if x is None:
                if t == k - 1:
                    answer = INFEASIBLE
                    break
                raise BackendError("stage lost feasibility after earlier stage succeeded")
            pins[t] = value
            seed = x
            witness = x
        else:
            image = Image(tuple(-sum(p * xj for p, xj in zip(row, witness)) for row in self._profits))
            answer = ScalarizationAnswer(image, witness)
        if self.verify:
            self._cross_check(limits, answer)
        return answer

    def _feasible(self, x, need, pins):
        if sum(w * xj for w, xj in zip(self._weights, x)) > self._capacity:
            return False
        for i, row in enumerate(self._profits):
            p = sum(a * xj for a, xj in zip(row, x))
            if need[i] is not None and p < need[i]:
                return False
            if pins[i] is not None and p != pins[i]:
                return False
        return True

    def _stage(self, t, need, pins, seed):
        n, k = self.n, self.k
        order = self._stage_order[t]
        weights = [self._weights[j] for j in order]
        rows = [[self._profits[i][j] for j in order] for i in range(k)]
        target = rows[t]
        capacity = self._capacity
        constrained = [i for i in range(k) if i != t and (need[i] is not None or pins[i] is not None)]
        # suffix sums of positive / negative profit per constrained row
        pos_rest = {}
        neg_rest = {}
        for i in constrained + [t]:
            pos = [0] * (n + 1)
            neg = [0] * (n + 1)
            for idx in range(n - 1, -1, -1):
                v = rows[i][idx]
                pos[idx] = pos[idx + 1] + (v if v > 0 else 0)
                neg[idx] = neg[idx + 1] + (v if v < 0 else 0)
            pos_rest[i], neg_rest[i] = pos, neg
        lower_t = need[t] if need[t] is not None else None

        best = [None]
        best_x = [None]
        if seed is not None and self._feasible(seed, need, pins):
            best[0] = sum(a * xj for a, xj in zip(self._profits[t], seed))
            best_x[0] = tuple(seed)

        x = [0] * n
        prof = [0] * k

        def dantzig(idx, room):
            bound = 0
            for j in range(idx, n):
                p = target[j]
                if p <= 0:
                    break
                w = weights[j]
                if w <= room:
                    room -= w
                    bound += p
                else:
                    return bound + (room * p) // w
            return bound

        def prune(idx):
            for i in constrained:
                hi = prof[i] + pos_rest[i][idx]
                if need[i] is not None and hi < need[i]:
                    return True
                if pins[i] is not None:
                    if hi < pins[i] or prof[i] + neg_rest[i][idx] > pins[i]:
                        return True
            if lower_t is not None and prof[t] + pos_rest[t][idx] < lower_t:
                return True
            return False

        def visit(idx, room):
            if prune(idx):
                return
            if best[0] is not None and prof[t] + dantzig(idx, room) <= best[0]:
                return
            if idx == n:
                # every constraint is tight at a leaf, so prune() certified feasibility
                best[0] = prof[t]
                sol = [0] * n
                for pos, j in enumerate(order):
                    sol[j] = x[pos]
                best_x[0] = tuple(sol)
                return
            w = weights[idx]
            if w <= room:
                x[idx] = 1
                for i in range(k):
                    prof[i] += rows[i][idx]
                visit(idx + 1, room - w)
                for i in range(k):
                    prof[i] -= rows[i][idx]
                x[idx] = 0
            visit(idx + 1, room)

        visit(0, capacity)
        return best[0], best_x[0]

    def _cross_check(self, limits, answer):
        expected = brute_force_answer(self.instance, limits)
        got = answer.image
        if (expected is None) != (got is None) or (got is not None and expected != got):
            raise BackendError(f"branch and bound returned {got}, enumeration gives {expected}")


def knapsack_images(instance: Knapsack) -> tuple[np.ndarray, np.ndarray]:
    """All ``2^n`` solutions and their (cost) images, by plain enumeration."""
    n = instance.n
    if n > 24:
        raise BackendError(f"refusing to enumerate 2^{n} knapsack solutions")
    xs = ((np.arange(2**n, dtype=np.int64)[:, None] >> np.arange(n, dtype=np.int64)) & 1)
    w = np.asarray(instance.weights, dtype=np.int64)
    feasible = xs @ w <= instance.capacity
    xs = xs[feasible]
    costs = -(xs @ np.asarray(instance.profits, dtype=np.int64).T)
    return xs, costs


def brute_force_answer(instance: Knapsack, limits) -> Optional[Image]:
    xs, costs = knapsack_images(instance)
    mask = np.ones(len(costs), dtype=bool)
    for i, lim in enumerate(limits):
        if lim is not None:
            mask &= costs[:, i] <= lim
    cand = costs[mask]
    if not len(cand):
        return None
    best = min(map(tuple, cand.tolist()), key=lambda c: tuple(reversed(c)))
    return Image(best)


def solve_knapsack_lex(instance: Knapsack, q: ScalarizationQuery) -> ScalarizationAnswer:
    return KnapsackBackend(instance).solve(q)


class TinyIlpBackend(Backend):
    """Exhaustive enumeration of the integer box; only for very small models."""

    def __init__(self, instance: TinyIlp, *, max_points: int = 1_000_000):
        sizes = [hi - lo + 1 for lo, hi in zip(instance.lower, instance.upper)]
        total = 1
        for s in sizes:
            total *= s
        if total > max_points:
            raise BackendError(f"box of {total} integer points exceeds the enumeration limit {max_points}")
        self.instance = instance
        self.k = instance.k
        points, witnesses, seen = [], [], set()
        ranges = [range(lo, hi + 1) for lo, hi in zip(instance.lower, instance.upper)]
        for x in itertools.product(*ranges):
            if any(sum(a * v for a, v in zip(row, x)) > b for row, b in zip(instance.constraints, instance.rhs)):
                continue
            y = tuple(sum(c * v for c, v in zip(row, x)) for row in instance.objectives)
            if y in seen:
                continue
            seen.add(y)
            points.append(y)
            witnesses.append(x)
        self._table = _SortedImageTable(points, witnesses, self.k)

    def feasible_images(self):
        return list(self._table.images)

    def _solve(self, limits, incumbent):
        idx = self._table.first_admitted(limits)
        if idx is None:
            return INFEASIBLE
        return ScalarizationAnswer(self._table.images[idx], self._table.witnesses[idx])


def make_backend(instance: ProblemInstance, **options) -> Backend:
    if isinstance(instance, ExplicitSet):
        return ExplicitSetBackend(instance)
    if isinstance(instance, Knapsack):
        return KnapsackBackend(instance, **options)
    if isinstance(instance, TinyIlp):
        return TinyIlpBackend(instance, **options)
    raise TypeError(f"no backend for {type(instance).__name__}")
