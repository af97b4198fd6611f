"""Carcass (piecewise-linear unimodal) maps, orbits and firmness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import InvariantError, ShapeError, ValidationError
from .rational_pl import (
    PLMap,
    RationalLike,
    as_rational,
    evaluate,
    kinks,
    simplify,
)


@dataclass(frozen=True)
class CarcassMap:
    """A validated unimodal PL map with its peak ``v``.

    Build one with :func:`validate_carcass`; the constructor trusts its input.
    """

    map: PLMap
    peak: Fraction

    def __call__(self, x: RationalLike) -> Fraction:
        return evaluate(self.map, x)

    @property
    def breakpoints(self):
        return self.map.breakpoints

    def kinks(self) -> list[Fraction]:
        return kinks(self.map)


def validate_carcass(m: PLMap) -> CarcassMap:
    """Check the unimodal shape of ``m`` and locate its peak.

    Raises :class:`ShapeError` naming the first violated clause.
    """
    m = simplify(m)
    if m.ys[0] != 0:
        raise ShapeError(f"boundary: g(0) = {m.ys[0]}, expected 0")
    if m.ys[-1] != 0:
        raise ShapeError(f"boundary: g(1) = {m.ys[-1]}, expected 0")
    top = max(m.ys)
    if top != 1:
        raise ShapeError(f"peak value: max g = {top}, expected 1")
    peak_index = m.ys.index(top)
    for i, s in enumerate(m.slopes):
        if i < peak_index and s <= 0:
            raise ShapeError(
                f"monotonicity: slope {s} on [{m.xs[i]}, {m.xs[i + 1]}] left of the peak"
            )
        if i >= peak_index and s >= 0:
            raise ShapeError(
                f"monotonicity: slope {s} on [{m.xs[i]}, {m.xs[i + 1]}] right of the peak"
            )
    return CarcassMap(m, m.xs[peak_index])


def tent() -> CarcassMap:
    return validate_carcass(PLMap([(0, 0), ("1/2", 1), (1, 0)]))


def asym_tent(v: RationalLike) -> CarcassMap:
    """Two-piece carcass map with peak at ``v``: slopes 1/v and -1/(1-v)."""
    v = as_rational(v)
    if not 0 < v < 1:
        raise ValidationError(f"peak {v} must lie in (0, 1)")
    return validate_carcass(PLMap([(0, 0), (v, 1), (1, 0)]))


def iterate(g: CarcassMap, x: RationalLike, n: int) -> Fraction:
    if n < 0:
        raise ValidationError("iteration count must be non-negative")
    x = as_rational(x)
    for _ in range(n):
        x = g(x)
    return x


@dataclass(frozen=True)
class FirmnessVerdict:
    status: str  # "firm" | "unknown-within-bound"
    n0: Optional[int]
    hit_times: Tuple[Tuple[Fraction, Optional[int]], ...]

    @property
    def firm(self) -> bool:
        return self.status == "firm"


def first_hit_time(g: CarcassMap, x: Fraction, n_max: int) -> Optional[int]:
    for n in range(n_max + 1):
        if x == 0:
            return n
        x = g(x)
    return None


def firmness(g: CarcassMap, n_max: int = 32) -> FirmnessVerdict:
    """Find, per kink, the first time its orbit lands on 0.

    The map is firm with ``n0`` the largest hit time when every kink lands
    within ``n_max`` steps; otherwise the status is ``unknown-within-bound``.
    0 is fixed, so the largest first-hit time is also the least uniform one.
    """
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    times = tuple((k, first_hit_time(g, k, n_max)) for k in g.kinks())
    if all(t is not None for _, t in times):
        return FirmnessVerdict("firm", max(t for _, t in times), times)
    return FirmnessVerdict("unknown-within-bound", None, times)


def positive_fixed_point(g: CarcassMap) -> Fraction:
    """The fixed point of ``g`` on its decreasing branch."""
    pts = g.map.breakpoints
    for i, s in enumerate(g.map.slopes):
        (x0, y0), (x1, _) = pts[i], pts[i + 1]
        if x1 <= g.peak:
            continue
        x = (y0 - s * x0) / (1 - s)
        if x0 <= x <= x1:
            return x
    raise InvariantError("decreasing branch has no fixed point")
