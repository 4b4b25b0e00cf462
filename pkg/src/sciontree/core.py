"""Domain types shared by the solver, the backends and the oracle.

Objective values are plain Python integers.  The two infinite values are the
singleton sentinels :data:`PLUS_INF` and :data:`MINUS_INF`; they order
correctly against integers and fractions but refuse any arithmetic.

All indices are 0-based.  The dummy image ``Image.dummy(t, k)`` has
``+inf`` in coordinate ``t`` and ``-inf`` everywhere else.  The engine always
minimizes, and the lexicographic order compares the *last* objective first.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Sequence, Tuple, Union


class SentinelArithmeticError(ArithmeticError):
    """Raised when arithmetic touches an infinite sentinel."""


class DimensionError(ValueError):
    """Raised when objects of different objective counts are combined."""


class Infinity:
    """Signed infinity that compares against any real number."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "PLUS_INF" if self.sign > 0 else "MINUS_INF"

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __reduce__(self):
        return (_infinity, (self.sign,))

    def _cmp(self, other) -> int:
        if isinstance(other, Infinity):
            return (self.sign > other.sign) - (self.sign < other.sign)
        if isinstance(other, numbers.Real):
            return self.sign
        return NotImplemented

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("Infinity", self.sign))

    def _refuse(self, *_):
        raise SentinelArithmeticError(f"arithmetic on {self!s} is undefined here")

    __add__ = __radd__ = __sub__ = __rsub__ = _refuse
    __mul__ = __rmul__ = __truediv__ = __rtruediv__ = _refuse
    __floordiv__ = __rfloordiv__ = __mod__ = __rmod__ = _refuse
    __neg__ = __pos__ = __abs__ = __int__ = __index__ = __float__ = _refuse


PLUS_INF = Infinity(1)
MINUS_INF = Infinity(-1)


def _infinity(sign):
    return PLUS_INF if sign > 0 else MINUS_INF


ExtendedValue = Union[int, Infinity]


def is_finite(value) -> bool:
    return not isinstance(value, Infinity)


@dataclass(frozen=True)
class Image:
    """A point in objective space, or the dummy image ``d^t``.

    Real images carry integer coordinates only; use :meth:`dummy` to build a
    dummy.
    """

    coords: Tuple[ExtendedValue, ...]
    dummy_index: int | None = None

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) < 2:
            raise DimensionError("images need at least two objectives")
        if self.dummy_index is None:
            try:
                coords = tuple(_as_int(c) for c in coords)
            except (TypeError, ValueError, SentinelArithmeticError) as exc:
                raise ValueError(f"real image needs integer coordinates: {self.coords!r}") from exc
        else:
            t = self.dummy_index
            expected = tuple(PLUS_INF if i == t else MINUS_INF for i in range(len(coords)))
            if not 0 <= t < len(coords) or coords != expected:
                raise ValueError(f"malformed dummy image d^{t}: {coords!r}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def real(cls, coords: Sequence[int]) -> "Image":
        return cls(tuple(coords))

    @classmethod
    def dummy(cls, t: int, k: int) -> "Image":
        return cls(tuple(PLUS_INF if i == t else MINUS_INF for i in range(k)), t)

    @property
    def k(self) -> int:
        return len(self.coords)

    @property
    def is_dummy(self) -> bool:
        return self.dummy_index is not None

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        if self.is_dummy:
            return f"d^{self.dummy_index}"
        return f"Image{self.coords}"


def _as_int(value) -> int:
    if isinstance(value, Infinity):
        raise SentinelArithmeticError("sentinel in a real image")
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            return int(value)
        raise TypeError(f"not an integer: {value!r}")
    return int(value)


@dataclass(frozen=True)
class Parameter:
    """Strict upper bounds on objectives ``0..k-2``; ``PLUS_INF`` means free."""

    bounds: Tuple[ExtendedValue, ...]

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(self.bounds))

    def admits(self, coords) -> bool:
        """True when ``coords`` lies strictly below every bound."""
        return all(c < b for c, b in zip(coords, self.bounds))


@dataclass(frozen=True)
class Combination:
    """``k-1`` images; member ``i`` supplies bound ``i`` of the parameter."""

    members: Tuple[Image, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise DimensionError("a combination needs at least one member")
        k = members[0].k
        if len(members) != k - 1 or any(m.k != k for m in members):
            raise DimensionError(f"combination of {len(members)} members does not fit k={k}")
        object.__setattr__(self, "members", members)

    @classmethod
    def root(cls, k: int) -> "Combination":
        return cls(tuple(Image.dummy(t, k) for t in range(k - 1)))

    @property
    def k(self) -> int:
        return self.members[0].k

    def replace(self, position: int, image: Image) -> "Combination":
        members = list(self.members)
        members[position] = image
        return Combination(tuple(members))

    def __getitem__(self, i):
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return "(" + ", ".join(map(repr, self.members)) + ")"


def viable_parameter(c: Combination) -> Parameter:
    return Parameter(tuple(m.coords[i] for i, m in enumerate(c.members)))


@dataclass(frozen=True)
class Permutation:
    """Objective reordering; ``sigma[i]`` is the source objective of slot ``i``."""

    sigma: Tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(s) for s in self.sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise ValueError(f"not a bijection on range({len(sigma)}): {self.sigma!r}")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(k)))

    @classmethod
    def from_one_based(cls, values: Sequence[int]) -> "Permutation":
        return cls(tuple(v - 1 for v in values))

    @classmethod
    def cascade(cls, r: int, k: int) -> "Permutation":
        """The level-``r`` ordering ``(k, k-1, ..., r+1, 1, 2, ..., r)`` (1-based)."""
        if not 1 <= r <= k:
            raise ValueError(f"level r={r} outside 1..{k}")
        one_based = [k - j + 1 if j <= k - r else r - k + j for j in range(1, k + 1)]
        return cls.from_one_based(one_based)

    @property
    def k(self) -> int:
        return len(self.sigma)

    @property
    def one_based(self) -> Tuple[int, ...]:
        return tuple(s + 1 for s in self.sigma)

    @property
    def is_identity(self) -> bool:
        return self.sigma == tuple(range(len(self.sigma)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.sigma)
        for i, s in enumerate(self.sigma):
            inv[s] = i
        return Permutation(tuple(inv))

    def apply(self, coords: Sequence) -> tuple:
        if len(coords) != len(self.sigma):
            raise DimensionError(f"permutation of size {len(self.sigma)} applied to {len(coords)} values")
        return tuple(coords[s] for s in self.sigma)

    def apply_image(self, image: Image) -> Image:
        if image.is_dummy:
            return Image.dummy(self.inverse().sigma[image.dummy_index], image.k)
        return Image(self.apply(image.coords))


def _check_same_k(a: Image, b: Image):
    if a.k != b.k:
        raise DimensionError(f"images of dimension {a.k} and {b.k}")


def lex_less(a: Image, b: Image, sigma: Permutation | None = None) -> bool:
    """Strict lexicographic order comparing the highest-priority objective first.

    With ``sigma`` the compared sequence is ``a[sigma[k-1]], ..., a[sigma[0]]``.
    """
    _check_same_k(a, b)
    order = range(a.k - 1, -1, -1) if sigma is None else reversed(sigma.sigma)
    for j in order:
        if a.coords[j] != b.coords[j]:
            return a.coords[j] < b.coords[j]
    return False


def lex_key(coords: Sequence) -> tuple:
    """Sort key realizing the identity-order :func:`lex_less`."""
    return tuple(reversed(tuple(coords)))


def dominates(a: Image, b: Image) -> bool:
    """Componentwise ``a <= b`` with ``a != b``."""
    _check_same_k(a, b)
    return a.coords != b.coords and all(x <= y for x, y in zip(a.coords, b.coords))


# ---------------------------------------------------------------------------
# problem instances


def _matrix(rows) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(_as_int(v) for v in row) for row in rows)


def _vector(values) -> Tuple[int, ...]:
    return tuple(_as_int(v) for v in values)


@dataclass(frozen=True)
class ExplicitSet:
    """Feasible images listed one by one; the witness of an image is its index.

    ``dimension`` only needs to be given for an empty set.
    """

    images: Tuple[Image, ...]
    dimension: int = 0

    def __post_init__(self):
        images = tuple(im if isinstance(im, Image) else Image.real(im) for im in self.images)
        if any(im.is_dummy for im in images):
            raise ValueError("explicit sets hold real images only")
        dims = {im.k for im in images}
        if len(dims) > 1:
            raise DimensionError("explicit set mixes objective counts")
        if len(set(images)) != len(images):
            raise ValueError("explicit set images must be pairwise distinct")
        dimension = dims.pop() if dims else self.dimension
        if self.dimension and dimension != self.dimension:
            raise DimensionError(f"images have k={dimension}, declared {self.dimension}")
        if dimension < 2:
            raise DimensionError("an empty explicit set needs its objective count")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "dimension", dimension)

    @classmethod
    def from_points(cls, points, k: int = 0) -> "ExplicitSet":
        return cls(tuple(Image.real(p) for p in points), k)

    @property
    def k(self) -> int:
        return self.dimension

    def __len__(self):
        return len(self.images)


@dataclass(frozen=True)
class Knapsack:
    """0-1 knapsack with ``k`` profit rows to be maximized.

    The engine sees the negated profits (``costs``); reports un-negate them.
    """

    profits: Tuple[Tuple[int, ...], ...]
    weights: Tuple[int, ...]
    capacity: int

    def __post_init__(self):
        profits, weights = _matrix(self.profits), _vector(self.weights)
        capacity = _as_int(self.capacity)
        if len(profits) < 2:
            raise DimensionError("a knapsack needs at least two profit rows")
        if any(len(row) != len(weights) for row in profits):
            raise DimensionError("profit rows and weights differ in length")
        if any(w < 0 for w in weights) or capacity < 0:
            raise ValueError("weights and capacity must be nonnegative")
        object.__setattr__(self, "profits", profits)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "capacity", capacity)

    @property
    def k(self) -> int:
        return len(self.profits)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def costs(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(-p for p in row) for row in self.profits)


@dataclass(frozen=True)
class TinyIlp:
    """``min C x`` over integer ``x`` with ``A x <= b`` and ``lower <= x <= upper``."""

    objectives: Tuple[Tuple[int, ...], ...]
    constraints: Tuple[Tuple[int, ...], ...]
    rhs: Tuple[int, ...]
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]

    def __post_init__(self):
        objectives, constraints = _matrix(self.objectives), _matrix(self.constraints)
        rhs, lower, upper = _vector(self.rhs), _vector(self.lower), _vector(self.upper)
        n = len(lower)
        if len(objectives) < 2:
            raise DimensionError("a multi-objective ILP needs at least two objectives")
        if len(upper) != n or any(len(r) != n for r in objectives + constraints):
            raise DimensionError("ILP rows disagree on the number of variables")
        if len(rhs) != len(constraints):
            raise DimensionError("one right-hand side per constraint row")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise ValueError("empty variable domain")
        for name, value in [("objectives", objectives), ("constraints", constraints), ("rhs", rhs),
                            ("lower", lower), ("upper", upper)]:
            object.__setattr__(self, name, value)

    @property
    def k(self) -> int:
        return len(self.objectives)

    @property
    def n(self) -> int:
        return len(self.lower)


ProblemInstance = Union[ExplicitSet, Knapsack, TinyIlp]


def permute_problem(p: ProblemInstance, sigma: Permutation) -> ProblemInstance:
    """Reorder objectives so that objective ``i`` of the result is ``sigma[i]`` of ``p``."""
    if sigma.k != p.k:
        raise DimensionError(f"permutation of size {sigma.k} for a {p.k}-objective instance")
    if isinstance(p, ExplicitSet):
        return ExplicitSet(tuple(Image(sigma.apply(im.coords)) for im in p.images), p.k)
    if isinstance(p, Knapsack):
        return Knapsack(sigma.apply(p.profits), p.weights, p.capacity)
    if isinstance(p, TinyIlp):
        return TinyIlp(sigma.apply(p.objectives), p.constraints, p.rhs, p.lower, p.upper)
    raise TypeError(f"unknown instance type {type(p).__name__}")


def reported_coords(p: ProblemInstance, image: Image) -> Tuple[int, ...]:
    """Coordinates in the instance's own sense (knapsack profits un-negated)."""
    if isinstance(p, Knapsack):
        return tuple(-c for c in image.coords)
    return tuple(image.coords)
