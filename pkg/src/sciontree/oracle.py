"""Brute-force reference computations used to check the solver.

Everything here is single threaded and exact.  Rational coordinates are
:class:`fractions.Fraction`; the infinite sentinels come from
:mod:`sciontree.core`.  Nothing in this module calls the engine or the
backends.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .core import MINUS_INF, PLUS_INF, Combination, Image, Infinity, Knapsack, TinyIlp, ExplicitSet

MAX_ORACLE_IMAGES = 200
MAX_ORACLE_K = 5
DEFAULT_DELTA = Fraction(1, 2)

RationalImage = Tuple[Fraction, ...]


@dataclass(frozen=True)
class UpperBound:
    point: Tuple[object, ...]
    defining_points: Tuple[Image, ...]


def _reversed_key(coords):
    return tuple(reversed(tuple(coords)))


def brute_nondominated(images: Iterable[Image]) -> Set[Image]:
    """Pairwise dominance filter."""
    pts = list(dict.fromkeys(images))
    if not pts:
        return set()
    arr = np.asarray([p.coords for p in pts], dtype=np.int64)
    keep = set()
    for start in range(0, len(pts), 256):
        block = arr[start:start + 256, None, :]
        le = np.all(arr[None, :, :] <= block, axis=2)
        ne = np.any(arr[None, :, :] != block, axis=2)
        dominated = np.any(le & ne, axis=1)
        keep.update(pts[start + i] for i in np.flatnonzero(~dominated))
    return keep


def sweep_nondominated(images: Iterable[Image]) -> Set[Image]:
    """Sort-and-sweep filter: after a lexicographic sort only earlier points can dominate."""
    pts = sorted(set(images), key=lambda p: p.coords)
    front: List[Image] = []
    for p in pts:
        if not any(all(a <= b for a, b in zip(q.coords, p.coords)) for q in front):
            front.append(p)
    return set(front)


def instance_images(instance) -> List[Image]:
    """Every feasible image of ``instance`` (minimization sense), by enumeration."""
    if isinstance(instance, ExplicitSet):
        return list(instance.images)
    if isinstance(instance, Knapsack):
        n = instance.n
        if n > 24:
            raise ValueError(f"refusing to enumerate 2^{n} knapsack solutions")
        w = np.asarray(instance.weights, dtype=np.int64)
        p = np.asarray(instance.profits, dtype=np.int64)
        x = (np.arange(2**n, dtype=np.int64)[:, None] >> np.arange(n)) & 1
        x = x[x @ w <= instance.capacity]
        costs = np.unique(-(x @ p.T), axis=0)
        return [Image(tuple(int(v) for v in row)) for row in costs]
    if isinstance(instance, TinyIlp):
        import itertools

        out = set()
        for x in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(instance.lower, instance.upper))):
            if all(sum(a * v for a, v in zip(row, x)) <= b for row, b in zip(instance.constraints, instance.rhs)):
                out.add(tuple(sum(c * v for c, v in zip(row, x)) for row in instance.objectives))
        return [Image(c) for c in out]
    raise TypeError(f"cannot enumerate {type(instance).__name__}")


def nondominated_of(instance) -> Set[Image]:
    return brute_nondominated(instance_images(instance))


# ---------------------------------------------------------------------------
# perturbation to general position


def phi_perturb(y_n: Sequence[Image], delta: Fraction = DEFAULT_DELTA) -> List[RationalImage]:
    """Shift repeated coordinates so that no two images share a value.

    ``y_n`` must be sorted ascending in the lexicographic order that compares
    the last objective first.  The ``i``-th image (1-based) gets
    ``i * delta / (K + 1)`` added to every coordinate already taken by an
    earlier image, ``K = len(y_n)``.
    """
    pts = [tuple(im.coords) for im in y_n]
    for a, b in zip(pts, pts[1:]):
        if not _reversed_key(a) < _reversed_key(b):
            raise ValueError("phi_perturb needs images sorted by reversed-lexicographic order")
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    big_k = len(pts)
    out = []
    for i, y in enumerate(pts, start=1):
        shift = Fraction(i) * delta / (big_k + 1)
        out.append(tuple(
            Fraction(v) + shift if any(pts[s][j] == v for s in range(i - 1)) else Fraction(v)
            for j, v in enumerate(y)
        ))
    return out


def in_general_position(points: Sequence[Sequence]) -> bool:
    if not points:
        return True
    k = len(points[0])
    return all(len({p[j] for p in points}) == len(points) for j in range(k))


def _dummy_coords(t: int, k: int):
    return tuple(PLUS_INF if i == t else MINUS_INF for i in range(k))


class _RationalScan:
    """Exact lexicographic epsilon-constraint scan over a fixed point list."""

    def __init__(self, points: Sequence[Sequence[Fraction]]):
        self.k = len(points[0]) if points else 0
        order = sorted(range(len(points)), key=lambda i: _reversed_key(points[i]))
        self.order = order
        self.points = points
        if points:
            denom = lcm(*(Fraction(v).denominator for p in points for v in p))
            scaled = [[int(Fraction(v) * denom) for v in points[i]] for i in order]
            self.denom = denom
            self.scaled = np.asarray(scaled, dtype=object)
        else:
            self.denom = 1
            self.scaled = None

    def argmin(self, bounds) -> Optional[int]:
        if self.scaled is None:
            return None
        mask = np.ones(len(self.order), dtype=bool)
        for i, b in enumerate(bounds):
            if isinstance(b, Infinity):
                if b.sign < 0:
                    return None
                continue
            lim = Fraction(b) * self.denom
            mask &= np.array([v < lim for v in self.scaled[:, i]], dtype=bool)
        hits = np.flatnonzero(mask)
        return self.order[int(hits[0])] if len(hits) else None


def _check_ceiling(y_n):
    if len(y_n) > MAX_ORACLE_IMAGES:
        raise ValueError(f"oracle limited to {MAX_ORACLE_IMAGES} images, got {len(y_n)}")
    if y_n and y_n[0].k > MAX_ORACLE_K:
        raise ValueError(f"oracle limited to k <= {MAX_ORACLE_K}")


@dataclass(frozen=True)
class TreeNode:
    combination: Combination
    optimum: Optional[Image]
    parent: Optional[Combination]
    position: Optional[int]


def true_combination_tree(y_n: Iterable[Image], k: int | None = None,
                          delta: Fraction = DEFAULT_DELTA) -> List[TreeNode]:
    """Breadth-first scion tree of the perturbed set, mapped back to ``y_n``.

    Each node carries its optimum in ``y_n`` (``None`` if infeasible).  In
    the perturbed set all coordinates differ, so the strict child condition
    applies.
    """
    pts = sorted(set(y_n), key=lambda im: _reversed_key(im.coords))
    _check_ceiling(pts)
    if k is None:
        if not pts:
            raise ValueError("k is required for an empty set")
        k = pts[0].k
    phi = phi_perturb(pts, delta)
    scan = _RationalScan(phi)
    dummies = [_dummy_coords(t, k) for t in range(k)]
    root = tuple(("d", t) for t in range(k - 1))

    def coords_of(ref):
        return dummies[ref[1]] if ref[0] == "d" else phi[ref[1]]

    def to_image(ref):
        return Image.dummy(ref[1], k) if ref[0] == "d" else pts[ref[1]]

    out = []
    seen = set()
    queue = deque([(root, None, None)])
    while queue:
        comb, parent, pos = queue.popleft()
        if comb in seen:
            raise AssertionError(f"combination {comb} reached twice")
        seen.add(comb)
        bounds = tuple(coords_of(ref)[i] for i, ref in enumerate(comb))
        best = scan.argmin(bounds)
        image_comb = Combination(tuple(to_image(ref) for ref in comb))
        parent_comb = None if parent is None else Combination(tuple(to_image(ref) for ref in parent))
        out.append(TreeNode(image_comb, None if best is None else pts[best], parent_comb, pos))
        if best is None:
            continue
        y = phi[best]
        for ell in range(k - 1):
            if all(y[ell] > coords_of(ref)[ell] for i, ref in enumerate(comb) if i != ell):
                child = comb[:ell] + (("y", best),) + comb[ell + 1:]
                queue.append((child, comb, ell))
    return out


def enumerate_true_combinations(y_n: Iterable[Image], k: int | None = None,
                                delta: Fraction = DEFAULT_DELTA) -> Set[Combination]:
    return {node.combination for node in true_combination_tree(y_n, k, delta)}


# ---------------------------------------------------------------------------
# local upper bounds


def _strictly_below(a, b) -> bool:
    return all(x < y for x, y in zip(a, b))


def _is_upper_bound(u, points) -> bool:
    return not any(_strictly_below(p, u) for p in points)


def enumerate_upper_bounds(y_n: Iterable[Image], k: int | None = None) -> Set[UpperBound]:
    """All local upper bounds of ``y_n``, by definition.

    Candidate bounds are built from their defining points: slot ``i`` takes a
    point ``p`` of ``y_n`` or the dummy ``d^i`` with ``u_i = p_i``, and every
    choice must sit strictly below ``u`` outside its own slot.  Surviving
    candidates are kept when no point of ``y_n`` lies strictly below them.
    """
    pts = sorted(set(y_n), key=lambda im: im.coords)
    if k is None:
        if not pts:
            raise ValueError("k is required for an empty set")
        k = pts[0].k
    coords = [im.coords for im in pts]
    choices = [[(c, im) for c, im in zip(coords, pts)] + [(_dummy_coords(i, k), Image.dummy(i, k))]
               for i in range(k)]
    found: Dict[tuple, UpperBound] = {}
    chosen: List[Tuple[tuple, Image]] = []

    def extend(i):
        if i == k:
            u = tuple(chosen[j][0][j] for j in range(k))
            if u not in found and _is_upper_bound(u, coords):
                found[u] = UpperBound(u, tuple(im for _, im in chosen))
            return
        for c, im in choices[i]:
            ui = c[i]
            if isinstance(ui, Infinity) and ui.sign < 0:
                continue
            # new point below earlier slots, earlier points below the new slot
            if all(c[j] < chosen[j][0][j] for j in range(i)) and all(chosen[j][0][i] < ui for j in range(i)):
                chosen.append((c, im))
                extend(i + 1)
                chosen.pop()

    extend(0)
    return set(found.values())


def upper_bounds_by_grid(y_n: Iterable[Image], k: int | None = None) -> Set[tuple]:
    """Local upper bound points by scanning the full coordinate grid (small sets only)."""
    import itertools

    pts = sorted(set(y_n), key=lambda im: im.coords)
    if k is None:
        k = pts[0].k
    coords = [im.coords for im in pts]
    axes = [sorted({c[j] for c in coords}) + [PLUS_INF] for j in range(k)]
    dummies = [_dummy_coords(i, k) for i in range(k)]
    out = set()
    for u in itertools.product(*axes):
        if not _is_upper_bound(u, coords):
            continue
        ok = True
        for i in range(k):
            cands = coords + [dummies[i]]
            if not any(p[i] == u[i] and all(p[j] < u[j] for j in range(k) if j != i) for p in cands):
                ok = False
                break
        if ok:
            out.add(u)
    return out


# ---------------------------------------------------------------------------
# epsilon components


def epsilon_component_member(y: Image, eps, y_n: Iterable[Image]) -> bool:
    """True iff ``y`` is the lexicographic minimizer among images strictly below ``eps``."""
    bounds = tuple(getattr(eps, "bounds", eps))
    feasible = [im for im in y_n if _strictly_below(im.coords[:-1], bounds)]
    if not feasible:
        return False
    best = min(feasible, key=lambda im: _reversed_key(im.coords))
    return best == y


def level_sets(y_n: Iterable[Image]) -> List[Set[Image]]:
    """``Y_N(1), ..., Y_N(k)`` straight from their recursive definition."""
    pts = set(y_n)
    if not pts:
        return []
    k = next(iter(pts)).k
    levels = [None] * (k + 1)
    levels[k] = set(pts)
    for r in range(k - 1, 0, -1):
        levels[r] = {
            y for y in levels[r + 1]
            if not any(
                other.coords[:r] != y.coords[:r] and all(a <= b for a, b in zip(other.coords[:r], y.coords[:r]))
                for other in pts
            )
        }
    return [levels[r] for r in range(1, k + 1)]
