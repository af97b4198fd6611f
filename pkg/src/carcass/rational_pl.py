"""Exact rationals and continuous piecewise-linear maps of [0, 1].

Scalars are :class:`fractions.Fraction` throughout; nothing in this package
ever touches a float.  A :class:`PLMap` is the linear interpolant of a finite
list of breakpoints whose abscissae run strictly from 0 to 1.
"""

from __future__ import annotations

import contextlib
import contextvars
import json
import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Tuple, Union

from .errors import (
    DomainError,
    FlatSegmentError,
    NotHomeomorphismError,
    ParseError,
    ResourceError,
    ValidationError,
)

Rational = Fraction
Point = Tuple[Fraction, Fraction]
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

_denominator_bits: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "denominator_bits", default=None
)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: their binary expansion is never what the caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValidationError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ParseError(f"malformed rational {text!r}; expected 'p/q' or 'n'")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction) -> str:
    return str(q)


def set_denominator_bit_cap(bits: int | None) -> None:
    """Abort with :class:`ResourceError` when a denominator exceeds ``bits`` bits.

    ``None`` (the default) removes the cap.
    """
    if bits is not None and bits < 1:
        raise ValidationError("denominator bit cap must be positive")
    _denominator_bits.set(bits)


@contextlib.contextmanager
def denominator_bit_cap(bits: int | None) -> Iterator[None]:
    if bits is not None and bits < 1:
        raise ValidationError("denominator bit cap must be positive")
    token = _denominator_bits.set(bits)
    try:
        yield
    finally:
        _denominator_bits.reset(token)


def check_denominators(values: Iterable[Fraction]) -> None:
    cap = _denominator_bits.get()
    if cap is None:
        return
    for q in values:
        if q.denominator.bit_length() > cap:
            raise ResourceError(
                f"denominator of {q} has {q.denominator.bit_length()} bits (cap {cap})"
            )


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear map [0, 1] -> [0, 1].

    ``breakpoints`` is a tuple of ``(x, y)`` pairs with strictly increasing
    x running from 0 to 1.  Calling the map evaluates it exactly.
    """

    breakpoints: Tuple[Point, ...]

    def __init__(self, breakpoints: Iterable[Sequence[RationalLike]]):
        pts = tuple((as_rational(x), as_rational(y)) for x, y in breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        self._validate()

    def _validate(self) -> None:
        pts = self.breakpoints
        if len(pts) < 2:
            raise ValidationError("a PL map needs at least two breakpoints")
        if pts[0][0] != 0 or pts[-1][0] != 1:
            raise ValidationError("breakpoint abscissae must start at 0 and end at 1")
        for i in range(1, len(pts)):
            if pts[i][0] <= pts[i - 1][0]:
                raise ValidationError(
                    f"breakpoint abscissae not strictly increasing at index {i}"
                )
        for i, (_, y) in enumerate(pts):
            if not 0 <= y <= 1:
                raise ValidationError(f"breakpoint {i} has value {y} outside [0, 1]")
        check_denominators(q for p in pts for q in p)

    @cached_property
    def xs(self) -> Tuple[Fraction, ...]:
        return tuple(p[0] for p in self.breakpoints)

    @cached_property
    def ys(self) -> Tuple[Fraction, ...]:
        return tuple(p[1] for p in self.breakpoints)

    @cached_property
    def slopes(self) -> Tuple[Fraction, ...]:
        pts = self.breakpoints
        return tuple(
            (pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0])
            for i in range(len(pts) - 1)
        )

    def __call__(self, x: RationalLike) -> Fraction:
        return evaluate(self, x)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.breakpoints)

    def __len__(self) -> int:
        return len(self.breakpoints)

    def __repr__(self) -> str:
        body = ", ".join(f"({x}, {y})" for x, y in self.breakpoints)
        return f"PLMap([{body}])"


def identity() -> PLMap:
    return PLMap([(0, 0), (1, 1)])


def _segment_index(m: PLMap, x: Fraction) -> int:
    # index i of a segment [x_i, x_{i+1}] containing x
    i = bisect_right(m.xs, x) - 1
    return min(max(i, 0), len(m.xs) - 2)


def evaluate(m: PLMap, x: RationalLike) -> Fraction:
    """Exact value of ``m`` at ``x``; raises :class:`DomainError` off [0, 1]."""
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    i = _segment_index(m, x)
    x0, y0 = m.breakpoints[i]
    if x == x0:
        return y0
    return y0 + m.slopes[i] * (x - x0)


def simplify(m: PLMap) -> PLMap:
    """Drop interior breakpoints where the slope does not change."""
    pts = m.breakpoints
    kept = [pts[0]]
    for i in range(1, len(pts) - 1):
        if m.slopes[i - 1] != m.slopes[i]:
            kept.append(pts[i])
    kept.append(pts[-1])
    if len(kept) == len(pts):
        return m
    return PLMap(kept)


def compose(outer: PLMap, inner: PLMap) -> PLMap:
    """Return ``outer ∘ inner`` in canonical form.

    New breakpoints are the preimages under ``inner`` of the interior
    breakpoints of ``outer``; on a constant piece of ``inner`` the composition
    is constant, so such pieces add nothing.
    """
    cuts = outer.xs[1:-1]
    xs = set(inner.xs)
    pts = inner.breakpoints
    for i, slope in enumerate(inner.slopes):
        if slope == 0:
            continue
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        for c in cuts[bisect_right(cuts, lo):bisect_left(cuts, hi)]:
            xs.add(x0 + (c - y0) / slope)
    out = [(x, evaluate(outer, evaluate(inner, x))) for x in sorted(xs)]
    return simplify(PLMap(out))


def is_increasing_homeomorphism(m: PLMap) -> bool:
    return m.ys[0] == 0 and m.ys[-1] == 1 and all(s > 0 for s in m.slopes)


def invert_monotone(m: PLMap) -> PLMap:
    """Inverse of an increasing PL homeomorphism of [0, 1]."""
    if m.ys[0] != 0 or m.ys[-1] != 1:
        raise NotHomeomorphismError("endpoints must be fixed: m(0)=0 and m(1)=1")
    for i, s in enumerate(m.slopes):
        if s <= 0:
            raise NotHomeomorphismError(f"segment {i} has non-positive slope {s}")
    return PLMap([(y, x) for x, y in m.breakpoints])


def preimage_points(m: PLMap, y: RationalLike) -> list[Fraction]:
    """All x in [0, 1] with m(x) = y, sorted ascending."""
    y = as_rational(y)
    if not 0 <= y <= 1:
        raise DomainError(f"y={y} outside [0, 1]")
    found = set()
    pts = m.breakpoints
    for i, slope in enumerate(m.slopes):
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        if slope == 0:
            if y0 == y:
                raise FlatSegmentError(
                    f"segment [{x0}, {x1}] is constant at {y}; preimage is infinite"
                )
            continue
        if min(y0, y1) <= y <= max(y0, y1):
            found.add(x0 + (y - y0) / slope)
    return sorted(found)


def kinks(m: PLMap) -> list[Fraction]:
    """Interior abscissae where the left and right slopes differ."""
    return [
        m.xs[i]
        for i in range(1, len(m.xs) - 1)
        if m.slopes[i - 1] != m.slopes[i]
    ]


def one_sided_slope(m: PLMap, x: RationalLike, side: str) -> Fraction:
    """Slope of the segment immediately left or right of ``x``."""
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    if side == "left":
        if x == 0:
            raise DomainError("no left slope at 0")
        return m.slopes[bisect_left(m.xs, x) - 1]
    if side == "right":
        if x == 1:
            raise DomainError("no right slope at 1")
        return m.slopes[bisect_right(m.xs, x) - 1]
    raise ValidationError(f"side must be 'left' or 'right', got {side!r}")


def linear_slope_on(m: PLMap, a: RationalLike, b: RationalLike) -> Fraction | None:
    """Slope of ``m`` on [a, b] if it is linear there, else None."""
    a, b = as_rational(a), as_rational(b)
    if not 0 <= a < b <= 1:
        raise DomainError(f"bad interval [{a}, {b}]")
    i = bisect_right(m.xs, a) - 1
    j = bisect_left(m.xs, b) - 1
    s = set(m.slopes[i:j + 1])
    return s.pop() if len(s) == 1 else None


def collinearity_defects(points: Sequence[Sequence[Fraction]]) -> list[int]:
    """Interior indices ``i`` where points ``i-1, i, i+1`` are not collinear."""
    for i in range(1, len(points)):
        if points[i][0] == points[i - 1][0]:
            raise ValidationError(f"duplicate abscissa {points[i][0]} at index {i}")
        if points[i][0] < points[i - 1][0]:
            raise ValidationError(f"points not sorted by x at index {i}")
    defects = []
    for i in range(1, len(points) - 1):
        (x0, y0), (x1, y1), (x2, y2) = points[i - 1], points[i], points[i + 1]
        if (x1 - x0) * (y2 - y0) != (y1 - y0) * (x2 - x0):
            defects.append(i)
    return defects


# --- text format -----------------------------------------------------------


def to_document(m: PLMap) -> dict:
    return {"breakpoints": [[format_rational(x), format_rational(y)] for x, y in m]}


def dumps(m: PLMap) -> str:
    rows = ",\n".join(
        f'    ["{format_rational(x)}", "{format_rational(y)}"]' for x, y in m
    )
    return '{\n  "breakpoints": [\n' + rows + "\n  ]\n}\n"


def _pair_line(text: str, index: int) -> int | None:
    # line of the index-th inner "[" after the breakpoints key
    start = text.find('"breakpoints"')
    if start < 0:
        return None
    pos = text.find("[", start)
    for _ in range(index + 1):
        pos = text.find("[", pos + 1)
        if pos < 0:
            return None
    return text.count("\n", 0, pos) + 1


def from_document(doc: object, text: str | None = None) -> PLMap:
    """Build a PLMap from a parsed ``{"breakpoints": [...]}`` document."""

    def where(i: int) -> str:
        line = _pair_line(text, i) if text is not None else None
        return f"breakpoint {i}" + (f" (line {line})" if line else "")

    if not isinstance(doc, dict) or "breakpoints" not in doc:
        raise ParseError("document must be an object with a 'breakpoints' field")
    raw = doc["breakpoints"]
    if not isinstance(raw, list):
        raise ParseError("'breakpoints' must be a list of pairs")
    pts = []
    for i, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"{where(i)}: expected a pair [x, y]")
        try:
            pts.append(tuple(
                parse_rational(v) if isinstance(v, str) else as_rational(v)
                for v in pair
            ))
        except ValidationError as exc:
            raise ParseError(f"{where(i)}: {exc}") from None
    try:
        return PLMap(pts)
    except ValidationError as exc:
        msg = str(exc)
        m = re.search(r"index (\d+)|breakpoint (\d+)", msg)
        if m and text is not None:
            i = int(m.group(1) or m.group(2))
            msg = f"{where(i)}: {msg}"
        raise ParseError(msg) from None


def loads(text: str) -> PLMap:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc, text)


def load_map(path: str | Path) -> PLMap:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def save_map(m: PLMap, path: str | Path) -> None:
    Path(path).write_text(dumps(m), encoding="utf-8")
