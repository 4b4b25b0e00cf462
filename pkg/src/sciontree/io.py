"""Plain-text instance formats, result serialization and a seeded generator.

Three whitespace-separated formats share the same conventions: ``#`` starts
a comment, blank lines are ignored, every value is an integer.

explicit (``.set``)::

    k m
    m rows of k integers, one image per row

(k rows of m integers, one objective per row, is also read when k != m)

knapsack (``.kp``), maximization::

    k n
    k rows of n profits
    1 row of n weights
    capacity

tinyilp (``.ilp``), minimize each objective over integer ``x`` in a box
subject to ``A x <= b``::

    k n m
    k rows of n objective coefficients
    m rows of n coefficients followed by the right-hand side
    n lower bounds
    n upper bounds

Writers prepend a ``# format: <name>`` line, which the parser honours.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import ExplicitSet, Image, Knapsack, ProblemInstance, TinyIlp, lex_key

FORMATS = ("explicit", "knapsack", "tinyilp")
EXTENSIONS = {".set": "explicit", ".kp": "knapsack", ".ilp": "tinyilp"}
KP_VALUE_RANGE = (1, 100)

_DIRECTIVE = re.compile(r"#\s*format:\s*(\w+)")


class ParseError(ValueError):
    """Malformed instance text; ``line`` is 1-based (0 when no line applies)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line
        self.reason = message


@dataclass(frozen=True)
class _Row:
    line: int
    tokens: Tuple[str, ...]


def _rows(text: str) -> Tuple[List[_Row], Optional[str]]:
    rows = []
    directive = None
    for n, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            m = _DIRECTIVE.match(stripped)
            if m and directive is None:
                directive = m.group(1).lower()
            continue
        body = stripped.split("#", 1)[0].split()
        if body:
            rows.append(_Row(n, tuple(body)))
    return rows, directive


def _ints(row: _Row, expected: Optional[int] = None, what: str = "row") -> List[int]:
    if expected is not None and len(row.tokens) != expected:
        raise ParseError(f"{what} has {len(row.tokens)} values, expected {expected}", row.line)
    out = []
    for tok in row.tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"non-integer token {tok!r}", row.line) from None
    return out


def _header(rows: List[_Row], size: int) -> List[int]:
    if not rows:
        raise ParseError("missing header")
    head = rows[0]
    if len(head.tokens) != size:
        raise ParseError(f"malformed header: expected {size} integers", head.line)
    try:
        values = [int(t) for t in head.tokens]
    except ValueError:
        raise ParseError("malformed header: expected integers", head.line) from None
    if values[0] < 2:
        raise ParseError(f"malformed header: need k >= 2, got {values[0]}", head.line)
    if any(v < 0 for v in values[1:]):
        raise ParseError("malformed header: negative size", head.line)
    return values


def _expect_rows(rows: List[_Row], count: int) -> None:
    have = len(rows) - 1
    if have != count:
        line = rows[count + 1].line if have > count else rows[-1].line
        raise ParseError(f"row count mismatch: expected {count} data rows, found {have}", line)


def _parse_explicit(rows: List[_Row]) -> ExplicitSet:
    k, m = _header(rows, 2)
    data = rows[1:]
    if k != m and len(data) == k and all(len(r.tokens) == m for r in data):
        # column layout: row j holds objective j of every image
        cols = [_ints(r, m) for r in data]
        return _explicit_from(k, [(data[0].line, tuple(c[i] for c in cols)) for i in range(m)])
    _expect_rows(rows, m)
    return _explicit_from(k, [(row.line, tuple(_ints(row, k, "image row"))) for row in data])


def _explicit_from(k: int, entries) -> ExplicitSet:
    images = []
    seen = {}
    for line, coords in entries:
        if coords in seen:
            raise ParseError(f"duplicate image {coords} (first on line {seen[coords]})", line)
        seen[coords] = line
        images.append(Image(coords))
    return ExplicitSet(tuple(images), k)


def _parse_knapsack(rows: List[_Row]) -> Knapsack:
    k, n = _header(rows, 2)
    if n < 1:
        raise ParseError("malformed header: need n >= 1", rows[0].line)
    _expect_rows(rows, k + 2)
    profits = tuple(tuple(_ints(r, n, "profit row")) for r in rows[1:k + 1])
    weight_row = rows[k + 1]
    weights = tuple(_ints(weight_row, n, "weight row"))
    if any(w < 0 for w in weights):
        raise ParseError("negative weight", weight_row.line)
    cap_row = rows[k + 2]
    (capacity,) = _ints(cap_row, 1, "capacity line")
    if capacity < 0:
        raise ParseError("negative capacity", cap_row.line)
    return Knapsack(profits, weights, capacity)


def _parse_tinyilp(rows: List[_Row]) -> TinyIlp:
    k, n, m = _header(rows, 3)
    if n < 1:
        raise ParseError("malformed header: need n >= 1", rows[0].line)
    _expect_rows(rows, k + m + 2)
    objectives = tuple(tuple(_ints(r, n, "objective row")) for r in rows[1:k + 1])
    cons = [_ints(r, n + 1, "constraint row") for r in rows[k + 1:k + 1 + m]]
    lower = tuple(_ints(rows[k + m + 1], n, "lower bound row"))
    upper_row = rows[k + m + 2]
    upper = tuple(_ints(upper_row, n, "upper bound row"))
    if any(lo > hi for lo, hi in zip(lower, upper)):
        raise ParseError("lower bound exceeds upper bound", upper_row.line)
    return TinyIlp(objectives, tuple(tuple(c[:n]) for c in cons), tuple(c[n] for c in cons), lower, upper)


_PARSERS = {"explicit": _parse_explicit, "knapsack": _parse_knapsack, "tinyilp": _parse_tinyilp}


def _guess_format(rows: List[_Row]) -> str:
    if rows and len(rows[0].tokens) == 3:
        return "tinyilp"
    if len(rows) > 1 and len(rows[-1].tokens) == 1:
        return "knapsack"
    return "explicit"


def parse_text(text: str, fmt: Optional[str] = None) -> ProblemInstance:
    rows, directive = _rows(text)
    fmt = fmt or directive or _guess_format(rows)
    if fmt not in _PARSERS:
        raise ParseError(f"unknown format {fmt!r}")
    return _PARSERS[fmt](rows)


def parse_instance(source: Union[str, os.PathLike], fmt: Optional[str] = None) -> ProblemInstance:
    """Parse a path or, if ``source`` contains a newline, literal text."""
    if isinstance(source, str) and "\n" in source:
        return parse_text(source, fmt)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_text(text, fmt or EXTENSIONS.get(path.suffix.lower()))


def _line(values: Iterable) -> str:
    return " ".join(str(v) for v in values)


def format_of(instance: ProblemInstance) -> str:
    if isinstance(instance, ExplicitSet):
        return "explicit"
    if isinstance(instance, Knapsack):
        return "knapsack"
    if isinstance(instance, TinyIlp):
        return "tinyilp"
    raise TypeError(f"no text format for {type(instance).__name__}")


def serialize_instance(instance: ProblemInstance, comments: Sequence[str] = ()) -> str:
    fmt = format_of(instance)
    out = [f"# format: {fmt}"] + [f"# {c}" for c in comments]
    if fmt == "explicit":
        out.append(_line((instance.k, len(instance.images))))
        out.extend(_line(im.coords) for im in instance.images)
    elif fmt == "knapsack":
        out.append(_line((instance.k, instance.n)))
        out.extend(_line(row) for row in instance.profits)
        out.append(_line(instance.weights))
        out.append(str(instance.capacity))
    else:
        n = len(instance.lower)
        out.append(_line((instance.k, n, len(instance.rhs))))
        out.extend(_line(row) for row in instance.objectives)
        out.extend(_line(tuple(row) + (b,)) for row, b in zip(instance.constraints, instance.rhs))
        out.append(_line(instance.lower))
        out.append(_line(instance.upper))
    return "\n".join(out) + "\n"


def serialize_images(images: Iterable[Sequence[int]], k: int, metadata: Optional[dict] = None) -> str:
    """ExplicitSetText of ``images`` sorted by reversed-lex order, metadata as comments."""
    pts = sorted((tuple(p) for p in images), key=lex_key)
    out = ["# format: explicit"]
    for key, value in (metadata or {}).items():
        out.append(f"# {key}: {value}")
    out.append(_line((k, len(pts))))
    out.extend(_line(p) for p in pts)
    return "\n".join(out) + "\n"


def read_metadata(text: str) -> dict:
    meta = {}
    for raw in text.splitlines():
        s = raw.strip()
        if s.startswith("#") and ":" in s:
            key, value = s[1:].split(":", 1)
            meta[key.strip()] = value.strip()
    return meta


# ---------------------------------------------------------------------------
# generation


def generate_instance(kind: str, k: int, n: int, seed: int, *, general_position: bool = False,
                      value_range: Tuple[int, int] | None = None) -> ProblemInstance:
    """Seeded random instance.

    ``kind="kp"``: profits and weights uniform on ``[1, 100]``, capacity the
    ceiling of half the weight sum.  ``kind="explicit"``: ``n`` distinct
    images with coordinates uniform on ``value_range`` (default ``[0, 4n]``),
    pairwise distinct per coordinate when ``general_position`` is set.
    ``kind="ilp"``: ``n`` variables in ``[0, 3]``, two knapsack-style rows and
    objectives with mixed signs.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    kind = kind.lower()
    if kind in ("kp", "knapsack"):
        lo, hi = value_range or KP_VALUE_RANGE
        profits = rng.integers(lo, hi, size=(k, n), endpoint=True)
        weights = rng.integers(lo, hi, size=n, endpoint=True)
        capacity = math.ceil(int(weights.sum()) / 2)
        return Knapsack(tuple(tuple(int(v) for v in row) for row in profits),
                        tuple(int(w) for w in weights), capacity)
    if kind in ("explicit", "set"):
        lo, hi = value_range or (0, 4 * n)
        if general_position:
            if hi - lo + 1 < n:
                raise ValueError("value range too small for general position")
            cols = [rng.permutation(np.arange(lo, hi + 1))[:n] for _ in range(k)]
            pts = np.stack(cols, axis=1)
        else:
            if (hi - lo + 1) ** k < n:
                raise ValueError("value range too small for n distinct images")
            seen = {}
            while len(seen) < n:
                for row in rng.integers(lo, hi, size=(n, k), endpoint=True):
                    seen.setdefault(tuple(int(v) for v in row), None)
                    if len(seen) == n:
                        break
            pts = np.asarray(list(seen))
        return ExplicitSet(tuple(Image(tuple(int(v) for v in row)) for row in pts), k)
    if kind in ("ilp", "tinyilp"):
        objectives = rng.integers(-9, 9, size=(k, n), endpoint=True)
        a = rng.integers(0, 9, size=(2, n), endpoint=True)
        rhs = np.maximum(1, a.sum(axis=1) * 3 // 2)
        return TinyIlp(tuple(tuple(int(v) for v in row) for row in objectives),
                       tuple(tuple(int(v) for v in row) for row in a),
                       tuple(int(b) for b in rhs), (0,) * n, (3,) * n)
    raise ValueError(f"unknown instance kind {kind!r}")


def generator_comments(kind: str, k: int, n: int, seed: int) -> List[str]:
    lines = [f"generated: kind={kind} k={k} n={n} seed={seed}"]
    if kind.lower() in ("kp", "knapsack"):
        lines.append("profits and weights uniform on [1, 100] (assumed range), capacity = ceil(sum(weights) / 2)")
    return lines


def generate_text(kind: str, k: int, n: int, seed: int, **options) -> str:
    inst = generate_instance(kind, k, n, seed, **options)
    return serialize_instance(inst, generator_comments(kind, k, n, seed))
