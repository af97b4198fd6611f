"""Self-semiconjugations: continuous ``psi`` with ``psi ∘ g == g ∘ psi``.

For the tent map these are the zig-zags :func:`xi` (and two constants).  A
carcass map ``g = h ∘ tent ∘ h⁻¹`` inherits ``psi_t = h ∘ xi(t) ∘ h⁻¹``.
When ``h`` is PL, ``psi_t`` is computed exactly; otherwise it is pinned
exactly on the preimage lattice, ``psi_t(mu(n, k)) = mu(n, j(t, n, k))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import DepthError, InvariantError, PreconditionError, ValidationError
from .conjugacy import conjugate_by
from .lattice import build_lattice
from .rational_pl import (
    PLMap,
    Point,
    collinearity_defects,
    compose,
    invert_monotone,
    kinks,
    one_sided_slope,
)
from .unimodal import CarcassMap, firmness, positive_fixed_point


def xi(t: int) -> PLMap:
    """The ``t``-tooth zig-zag through ``(k/t, k mod 2)``."""
    if t < 1:
        raise ValidationError(f"xi needs t >= 1, got {t}")
    return PLMap([(Fraction(k, t), k % 2) for k in range(t + 1)])


def verify_commutation(psi: PLMap, g: CarcassMap) -> bool:
    return compose(psi, g.map) == compose(g.map, psi)


@dataclass(frozen=True)
class SemiconjSolution:
    kind: str  # "exact-pl" | "lattice-sampled"
    t: int
    source: CarcassMap
    body: Optional[PLMap] = None
    level: Optional[int] = None
    points: Tuple[Point, ...] = ()


def psi_exact(h: PLMap, t: int) -> SemiconjSolution:
    """``h ∘ xi(t) ∘ h⁻¹`` for ``g = h ∘ tent ∘ h⁻¹``, commutation checked."""
    g = conjugate_by(h)
    body = compose(compose(h, xi(t)), invert_monotone(h))
    if not verify_commutation(body, g):
        raise InvariantError(f"psi_{t} does not commute with g")
    return SemiconjSolution("exact-pl", t, g, body=body)


def constant_solutions(g: CarcassMap) -> List[Fraction]:
    consts = [Fraction(0), positive_fixed_point(g)]
    for c in consts:
        if g(c) != c:
            raise InvariantError(f"constant {c} is not fixed by g")
    return consts


def dyadic_index_map(t: int, n: int, k: int) -> int:
    """``j`` with ``xi(t)(k / 2**(n-1)) == j / 2**(n-1)``."""
    size = 2 ** (n - 1)
    if t < 1 or n < 1 or not 0 <= k <= size:
        raise ValidationError(f"index ({t}, {n}, {k}) out of range")
    q, r = divmod(t * k, size)
    return r if q % 2 == 0 else size - r


def psi_lattice(g: CarcassMap, t: int, n: int) -> SemiconjSolution:
    """Exact values of ``psi_t`` on the level-``n`` lattice of ``g``."""
    nodes = build_lattice(g, n).level(n)
    pts = tuple((mu, nodes[dyadic_index_map(t, n, k)]) for k, mu in enumerate(nodes))
    return SemiconjSolution("lattice-sampled", t, g, level=n, points=pts)


def tangent_estimate(g: CarcassMap, t: int, n: int) -> Fraction:
    if not 1 <= t <= 2 ** (n - 1):
        raise DepthError(f"tangent estimate needs t <= 2**(n-1); t={t}, n={n}")
    L = build_lattice(g, n)
    return L.mu(n, t) / L.mu(n, 1)


def lattice_identity_defects(psi: PLMap, g: CarcassMap, t: int, depth: int, full: bool = True) -> List[tuple]:
    """Nodes where ``psi(mu(n, k)) != mu(n, j(t, n, k))``.

    With ``full=False`` only nodes with ``t k <= 2**(n-1)`` are checked.
    """
    L = build_lattice(g, depth)
    bad = []
    for n in range(1, depth + 1):
        nodes = L.level(n)
        for k, mu in enumerate(nodes):
            if not full and t * k > 2 ** (n - 1):
                break
            expected = nodes[dyadic_index_map(t, n, k)]
            if psi(mu) != expected:
                bad.append((n, k, expected, psi(mu)))
    return bad


def lattice_commutation_defects(g: CarcassMap, t: int, n: int) -> List[int]:
    """Level-``n`` nodes where the sampled ``psi_t`` breaks ``psi ∘ g == g ∘ psi``."""
    sample = dict(psi_lattice(g, t, n).points)
    bad = []
    for k, (x, y) in enumerate(psi_lattice(g, t, n).points):
        gx = g(x)
        if gx not in sample or sample[gx] != g(y):
            bad.append(k)
    return bad


@dataclass(frozen=True)
class FirstKinkResult:
    passed: bool
    first_kink_of_g: Fraction
    predicted: Fraction
    actual: Optional[Fraction]


def first_kink_check(g: CarcassMap, psi: SemiconjSolution) -> FirstKinkResult:
    """Compare the first positive kink of ``psi`` with ``a g'(0) / psi'(0)``."""
    if psi.kind != "exact-pl":
        raise PreconditionError("first-kink check needs an exact PL solution")
    g0 = one_sided_slope(g.map, 0, "right")
    p0 = one_sided_slope(psi.body, 0, "right")
    if p0 <= g0:
        raise PreconditionError(f"needs psi'(0) > g'(0); got {p0} <= {g0}")
    a = g.kinks()[0]
    predicted = a * g0 / p0
    ks = kinks(psi.body)
    actual = ks[0] if ks else None
    return FirstKinkResult(actual == predicted, a, predicted, actual)


@dataclass(frozen=True)
class NonlinearityProfile:
    levels: Tuple[int, ...]
    counts: Tuple[int, ...]
    verdict: str  # "pl-consistent" | "non-pl-evidence"


def nonlinearity_evidence(g: CarcassMap, t: int, n_min: int, n_max: int) -> NonlinearityProfile:
    """Collinearity defects of the sampled ``psi_t`` per lattice level.

    A PL solution leaves a bounded number of defects (a couple per kink)
    however fine the lattice; a count that keeps growing over the last three
    levels is reported as evidence that no PL solution exists.  This is a
    heuristic, not a proof.
    """
    if n_min < 3 or n_max < n_min + 2:
        raise DepthError(f"need n_min >= 3 and n_max >= n_min + 2; got {n_min}, {n_max}")
    levels = tuple(range(n_min, n_max + 1))
    counts = tuple(len(collinearity_defects(psi_lattice(g, t, n).points)) for n in levels)
    a, b, c = counts[-3:]
    verdict = "non-pl-evidence" if a < b < c else "pl-consistent"
    return NonlinearityProfile(levels, counts, verdict)


def is_power_of_two(t: int) -> bool:
    return t >= 1 and t & (t - 1) == 0


@dataclass(frozen=True)
class ShareUniformityResult:
    status: str  # "pass" | "fail" | "not-applicable" | "not-applicable-hypothesis"
    detail: str
    collinear_nodes: int = 0
    threshold: Optional[Fraction] = None
    delta_table: Optional[dict] = None


MIN_COLLINEAR_NODES = 4


def initial_collinear_run(points) -> int:
    """Number of leading points on one line through the origin (origin included)."""
    if len(points) < 2 or points[0] != (0, 0):
        return min(len(points), 1)
    x1, y1 = points[1]
    count = 2
    for x, y in points[2:]:
        if y * x1 != y1 * x:
            break
        count += 1
    return count


def lemma_3_5_check(g: CarcassMap, t: int, depth: int, n_max: int = 32) -> ShareUniformityResult:
    """Hypothesis -> conclusion test on one map.

    Hypothesis: on the level-``depth`` lattice, the sampled ``psi_t`` starts
    with at least ``MIN_COLLINEAR_NODES`` nodes on a line through the origin
    (``t`` not a power of two).  Conclusion: the share table at level
    ``n0 + 1`` is constant.
    """
    verdict = firmness(g, n_max)
    if not verdict.firm:
        return ShareUniformityResult("not-applicable", f"map not firm within {n_max} iterations")
    if is_power_of_two(t):
        return ShareUniformityResult("not-applicable", f"t={t} is a power of 2")
    pts = psi_lattice(g, t, depth).points
    run = initial_collinear_run(pts)
    if run < MIN_COLLINEAR_NODES:
        return ShareUniformityResult(
            "not-applicable-hypothesis",
            f"only {run} leading nodes of psi_{t} are collinear with the origin at level {depth}",
            collinear_nodes=run,
        )
    threshold = pts[run - 1][1]
    n0 = verdict.n0
    L = build_lattice(g, max(depth, n0 + 2))
    nodes, fine = L.level(n0 + 1), L.level(n0 + 2)
    table = {
        k: (fine[2 * k + 1] - nodes[k]) / (nodes[k + 1] - nodes[k])
        for k in range(2 ** n0)
    }
    values = set(table.values())
    if len(values) == 1:
        return ShareUniformityResult(
            "pass",
            f"hypothesis holds on {run} nodes (image up to {threshold}); all shares equal {values.pop()}",
            run, threshold, table,
        )
    return ShareUniformityResult(
        "fail",
        f"hypothesis holds on {run} nodes but shares differ: {sorted(set(table.values()))}",
        run, threshold, table,
    )
