"""Preimage lattices of 0 and the interval statistics built on them.

Level ``n`` of the lattice of a carcass map ``g`` is the sorted set
``g^{-n}(0) = {mu(n, 0) < ... < mu(n, 2**(n-1))}``.  Consecutive nodes bound
the intervals ``I(n, k)``; ``delta(n, k)`` is the fraction of ``I(n, k)``
taken by its left child at level ``n + 1``.

For a firm map with kink depth ``n0`` the module also checks, on every node
the lattice reaches, a family of structural identities about these ratios
(see :func:`structure_report`).  Nothing is assumed: every identity is
reported as holding or with its exact counterexamples.
"""

from __future__ import annotations

import contextlib
import contextvars
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

from .errors import DepthError, InvariantError, LatticeIndexError, PreconditionError, ResourceError, ValidationError
from .rational_pl import _denominator_bits, check_denominators
from .unimodal import CarcassMap, FirmnessVerdict

DEFAULT_MAX_POINTS = 2 ** 20

_max_points: contextvars.ContextVar[int] = contextvars.ContextVar("max_points", default=DEFAULT_MAX_POINTS)


@contextlib.contextmanager
def point_cap(max_points: int) -> Iterator[None]:
    """Default cap on total lattice points for builds inside the block."""
    if max_points < 2:
        raise ValidationError("point cap must be at least 2")
    token = _max_points.set(max_points)
    try:
        yield
    finally:
        _max_points.reset(token)


@dataclass(frozen=True)
class PreimageLattice:
    """Levels ``1..depth`` of ``g^{-n}(0)``, each a sorted tuple."""

    levels: Tuple[Tuple[Fraction, ...], ...]
    source: CarcassMap

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> Tuple[Fraction, ...]:
        if not 1 <= n <= self.depth:
            raise LatticeIndexError(f"level {n} outside 1..{self.depth}")
        return self.levels[n - 1]

    def mu(self, n: int, k: int) -> Fraction:
        nodes = self.level(n)
        if not 0 <= k < len(nodes):
            raise LatticeIndexError(f"node index {k} outside 0..{len(nodes) - 1} at level {n}")
        return nodes[k]


def _branch_inverse(g: CarcassMap, increasing: bool) -> Callable[[Fraction], Fraction]:
    pts = [p for p in g.breakpoints if (p[0] <= g.peak if increasing else p[0] >= g.peak)]
    if not increasing:
        pts.reverse()
    ys = [p[1] for p in pts]

    def inverse(y: Fraction) -> Fraction:
        i = max(bisect_left(ys, y) - 1, 0)
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        return x0 + (y - y0) * (x1 - x0) / (y1 - y0)

    return inverse


def next_level(g: CarcassMap, nodes: Iterable[Fraction]) -> Tuple[Fraction, ...]:
    """``g^{-1}`` of a sorted node set containing 1, as a sorted tuple."""
    nodes = list(nodes)
    left = _branch_inverse(g, True)
    right = _branch_inverse(g, False)
    lower = [left(y) for y in nodes]
    upper = [right(y) for y in reversed(nodes)]
    # y = 1 is the top node; both branches send it to the peak
    return tuple(lower + upper[1:])


@lru_cache(maxsize=128)
def _build(g: CarcassMap, depth: int, max_points: int, cap: Optional[int]) -> PreimageLattice:
    levels = [(Fraction(0), Fraction(1))]
    total = 2
    for n in range(1, depth):
        size = 2 ** n + 1
        if total + size > max_points:
            raise ResourceError(
                f"level {n + 1} would bring the lattice to {total + size} points (cap {max_points})"
            )
        nxt = next_level(g, levels[-1])
        if len(nxt) != size:
            raise InvariantError(f"level {n + 1} has {len(nxt)} points, expected {size}")
        if any(nxt[i] >= nxt[i + 1] for i in range(size - 1)):
            raise InvariantError(f"level {n + 1} is not strictly increasing")
        if nxt[::2] != levels[-1]:
            raise InvariantError(f"level {n + 1} does not nest level {n}")
        check_denominators(nxt)
        levels.append(nxt)
        total += size
    return PreimageLattice(tuple(levels), g)


def build_lattice(g: CarcassMap, depth: int, max_points: Optional[int] = None) -> PreimageLattice:
    """Levels 1..depth of the preimage lattice of 0 under ``g``.

    Construction checks the node count ``2**(n-1) + 1``, strict order and the
    nesting ``mu(n, k) == mu(n + 1, 2k)`` at every level.  ``max_points``
    defaults to the cap set by :func:`point_cap` (2**20).
    """
    if depth < 1:
        raise ValidationError("lattice depth must be at least 1")
    if max_points is None:
        max_points = _max_points.get()
    return _build(g, depth, max_points, _denominator_bits.get())


def clear_lattice_cache() -> None:
    """Drop memoized lattices (they are keyed on map, depth and caps)."""
    _build.cache_clear()


def interval_length(L: PreimageLattice, n: int, k: int) -> Fraction:
    nodes = L.level(n)
    if not 0 <= k < len(nodes) - 1:
        raise LatticeIndexError(f"interval index {k} outside 0..{len(nodes) - 2} at level {n}")
    return nodes[k + 1] - nodes[k]


def interval_lengths(L: PreimageLattice, n: int) -> List[Fraction]:
    nodes = L.level(n)
    return [nodes[i + 1] - nodes[i] for i in range(len(nodes) - 1)]


def delta(L: PreimageLattice, n: int, k: int) -> Fraction:
    """Share of ``I(n, k)`` occupied by its left child ``I(n + 1, 2k)``."""
    if not 1 <= n < L.depth:
        raise LatticeIndexError(f"delta needs levels {n} and {n + 1}; depth is {L.depth}")
    parent = interval_length(L, n, k)
    child = L.mu(n + 1, 2 * k + 1) - L.mu(n, k)
    return child / parent


def deltas(L: PreimageLattice, n: int) -> List[Fraction]:
    return [delta(L, n, k) for k in range(2 ** (n - 1))]


def index_binary(k: int, digits: int) -> List[int]:
    """Big-endian bits of ``k`` padded to ``digits`` places."""
    if digits < 0 or not 0 <= k < 2 ** digits:
        raise ValidationError(f"{k} does not fit in {digits} binary digits")
    return [(k >> (digits - 1 - i)) & 1 for i in range(digits)]


def image_interval(L: PreimageLattice, n: int, k: int) -> Tuple[int, bool]:
    """Index ``k'`` with ``g(I(n, k)) == I(n - 1, k')`` and whether g keeps orientation."""
    half = 2 ** (n - 2)
    if k < half:
        return k, True
    return 2 * half - 1 - k, False


# --- structure diagnostics --------------------------------------------------

MAX_RECORDED = 64


@dataclass(frozen=True)
class Violation:
    n: int
    k: int
    expected: Fraction
    actual: Fraction


@dataclass
class Check:
    """Outcome of one identity over every node it was evaluated on."""

    name: str
    checked: int = 0
    failures: int = 0
    violations: List[Violation] = field(default_factory=list)

    def record(self, n: int, k: int, expected: Fraction, actual: Fraction) -> None:
        self.checked += 1
        if expected != actual:
            self.failures += 1
            if len(self.violations) < MAX_RECORDED:
                self.violations.append(Violation(n, k, expected, actual))

    @property
    def holds(self) -> bool:
        return self.failures == 0

    def violation_at(self, n: int, k: int) -> Optional[Violation]:
        for v in self.violations:
            if v.n == n and v.k == k:
                return v
        return None

    def summary(self) -> str:
        if self.holds:
            return f"holds ({self.checked} cases)"
        return f"{self.failures} violations in {self.checked} cases"


@dataclass
class StructureReport:
    n0: int
    depth: int
    delta_table: Dict[int, Fraction]
    l_constants: Tuple[Fraction, ...]
    digit_dependence: Check
    orientation_transport: Check
    remark_2_11: Check
    remark_2_9: Check
    remark_2_9_tracked: Check
    remark_2_12: Tuple[Check, ...]
    remark_3_3: Tuple[Check, ...]
    remark_3_4: Check

    def checks(self) -> List[Check]:
        return [
            self.digit_dependence,
            self.orientation_transport,
            self.remark_2_11,
            self.remark_2_9,
            self.remark_2_9_tracked,
            *self.remark_2_12,
            *self.remark_3_3,
            self.remark_3_4,
        ]

    def variant_holding(self, variants: Tuple[Check, ...]) -> List[str]:
        return [c.name for c in variants if c.holds]


def structure_report(L: PreimageLattice, verdict: FirmnessVerdict, window: int = 1) -> StructureReport:
    """Evaluate the firm-map interval identities on every node of ``L``.

    ``delta_table[j]`` is the left-child share of ``I(n0 + 1, j)``,
    ``j < 2**n0``; the claim under test is that for every level ``n >= n0``
    the share of ``I(n, k)`` is ``delta_table[k mod 2**n0]``.  ``l_constants``
    are the lengths of the first ``2**n0`` intervals of level ``n0 + 1``
    relative to the first one.

    Checks, each recorded with exact counterexamples:

    * ``digit_dependence`` - the claim above, every ``n0 <= n < depth``.
    * ``orientation_transport`` - ``g`` maps ``I(n + 1, k)`` onto one
      interval of level ``n``; off the kinks the child share is carried over,
      complemented on the decreasing branch.
    * ``remark_2_11`` - shares at ``k`` and ``k + 2**n0`` agree.
    * ``remark_2_9`` - ``len I(n, 2**n0 k0 + j) == l_j len I(n, 2**n0 k0)``.
    * ``remark_2_9_tracked`` - the within-block length pattern depends only
      on ``k0 mod 2**n0``.
    * ``remark_2_12`` - ``len I(n + n0, 2**n0 i) == len I(n, i) / S`` with
      ``S`` summing the l-constants from index 0 and from index 1.
    * ``remark_3_3`` - the triple-product formula for the sub-intervals of
      ``I(n, 0)`` at level ``n + 3 n0``, as stated (sum from 1, squared) and
      as obtained by chaining the two identities above (sum from 0, cubed).
    * ``remark_3_4`` - ``len I(n+1, 2k+1) / len I(n+1, 2k) == 1/delta_k - 1``.
    """
    if not verdict.firm:
        raise PreconditionError("structure report needs a firm map")
    n0 = verdict.n0
    if window < 0:
        raise ValidationError("window must be non-negative")
    need = n0 + window + 3 * n0
    if L.depth < need:
        raise DepthError(f"structure report needs depth >= {need} (n0={n0}, window={window}); have {L.depth}")
    g = L.source
    block = 2 ** n0
    lengths = {n: interval_lengths(L, n) for n in range(1, L.depth + 1)}
    shares = {n: deltas(L, n) for n in range(1, L.depth)}

    table = {j: shares[n0 + 1][j] for j in range(block)}
    ref = lengths[n0 + 1]
    l_const = tuple(ref[j] / ref[0] for j in range(block))

    digit = Check("digit_dependence")
    for n in range(n0, L.depth):
        for k, d in enumerate(shares[n]):
            digit.record(n, k, table[k % block], d)

    transport = Check("orientation_transport")
    kinks = g.kinks()
    for n in range(1, L.depth - 1):
        nodes = L.level(n + 1)
        for k in range(2 ** n):
            lo, hi = nodes[k], nodes[k + 1]
            i = bisect_left(kinks, hi)
            if i > 0 and kinks[i - 1] > lo:
                continue
            kp, keeps = image_interval(L, n + 1, k)
            if (g(lo), g(hi)) != ((L.mu(n, kp), L.mu(n, kp + 1)) if keeps else (L.mu(n, kp + 1), L.mu(n, kp))):
                raise InvariantError(f"g does not map I({n + 1},{k}) onto I({n},{kp})")
            parent = shares[n][kp]
            transport.record(n + 1, k, parent if keeps else 1 - parent, shares[n + 1][k])

    periodic = Check("remark_2_11")
    for n in range(n0, L.depth):
        row = shares[n]
        for k in range(len(row) - block):
            periodic.record(n, k + block, row[k], row[k + block])

    literal = Check("remark_2_9")
    for n in range(n0, L.depth + 1):
        row = lengths[n]
        for k, length in enumerate(row):
            k0, j = divmod(k, block)
            if j < len(l_const):
                literal.record(n, k, l_const[j] * row[block * k0], length)

    tracked = Check("remark_2_9_tracked")
    ref_level = 2 * n0 + 1
    if ref_level <= L.depth:
        pattern = lengths[ref_level]
        for n in range(2 * n0, L.depth + 1):
            row = lengths[n]
            for k, length in enumerate(row):
                k0, j = divmod(k, block)
                r0 = block * (k0 % block)
                expected = pattern[r0 + j] / pattern[r0] * row[block * k0]
                tracked.record(n, k, expected, length)

    sum0 = sum(l_const)
    sum1 = sum(l_const[1:])
    scaling = []
    for name, s in (("remark_2_12[sum from 0]", sum0), ("remark_2_12[sum from 1]", sum1)):
        c = Check(name)
        for n in range(n0, L.depth - n0 + 1):
            fine = lengths[n + n0]
            for i, length in enumerate(lengths[n]):
                c.record(n + n0, block * i, length / s, fine[block * i])
        scaling.append(c)

    product = []
    for name, s, power in (
        ("remark_3_3[sum from 1, squared]", sum1, 2),
        ("remark_3_3[sum from 0, cubed]", sum0, 3),
    ):
        c = Check(name)
        for n in range(n0, L.depth - 3 * n0 + 1):
            fine = lengths[n + 3 * n0]
            base = lengths[n][0]
            for i in range(block):
                for j in range(block):
                    for k in range(block):
                        idx = block * block * i + block * j + k
                        expected = l_const[i] * l_const[j] * l_const[k] / s ** power * base
                        c.record(n + 3 * n0, idx, expected, fine[idx])
        product.append(c)

    ratio = Check("remark_3_4")
    for n in range(n0, L.depth):
        fine = lengths[n + 1]
        for k in range(2 ** (n - 1)):
            ratio.record(n + 1, 2 * k + 1, 1 / table[k % block] - 1, fine[2 * k + 1] / fine[2 * k])

    return StructureReport(
        n0=n0,
        depth=L.depth,
        delta_table=table,
        l_constants=l_const,
        digit_dependence=digit,
        orientation_transport=transport,
        remark_2_11=periodic,
        remark_2_9=literal,
        remark_2_9_tracked=tracked,
        remark_2_12=tuple(scaling),
        remark_3_3=tuple(product),
        remark_3_4=ratio,
    )
