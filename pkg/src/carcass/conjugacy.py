"""Conjugacies between carcass maps and the tent map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .errors import DepthError, InvariantError
from .lattice import build_lattice
from .rational_pl import PLMap, compose, invert_monotone, one_sided_slope, simplify
from .unimodal import CarcassMap, positive_fixed_point, tent, validate_carcass


def conjugate_by(h: PLMap, base: CarcassMap | None = None) -> CarcassMap:
    """The carcass map ``h ∘ base ∘ h⁻¹`` (``base`` defaults to the tent map)."""
    base = tent() if base is None else base
    h_inv = invert_monotone(h)
    g = validate_carcass(compose(compose(h, base.map), h_inv))
    if compose(h, base.map) != compose(g.map, h):
        raise InvariantError("h ∘ base != g ∘ h after conjugation")
    return g


def verify_conjugacy(h: PLMap, g1: CarcassMap, g2: CarcassMap) -> bool:
    """Exact test of ``h ∘ g1 == g2 ∘ h``."""
    return compose(h, g1.map) == compose(g2.map, h)


def lattice_conjugacy(g1: CarcassMap, g2: CarcassMap, n: int) -> PLMap:
    """Interpolant through ``(mu(n, k; g1), mu(n, k; g2))`` for all k.

    Any conjugacy from ``g1`` to ``g2`` passes through these nodes, so this
    is its level-``n`` approximant.
    """
    nodes1 = build_lattice(g1, n).level(n)
    nodes2 = build_lattice(g2, n).level(n)
    return simplify(PLMap(zip(nodes1, nodes2)))


def conjugacy_convergence_profile(g1: CarcassMap, g2: CarcassMap, N: int) -> List[Fraction]:
    """``max |h_n - h_{n+1}|`` over level-(n+1) nodes, for ``n = 2 .. N-1``.

    A tail of zeros means the interpolants stopped changing on every
    computed node.
    """
    if N < 2:
        raise DepthError("convergence profile needs depth >= 2")
    L1, L2 = build_lattice(g1, N), build_lattice(g2, N)
    profile = []
    for n in range(2, N):
        h_n = PLMap(zip(L1.level(n), L2.level(n)))
        fine = zip(L1.level(n + 1), L2.level(n + 1))
        profile.append(max(abs(h_n(x) - y) for x, y in fine))
    return profile


@dataclass(frozen=True)
class NecessaryConditions:
    passed: bool
    slope_at_zero: Fraction
    fixed_point: Fraction
    left_slope: Fraction
    right_slope: Fraction

    @property
    def slope_product(self) -> Fraction:
        return self.left_slope * self.right_slope

    @property
    def detail(self) -> str:
        failed = []
        if self.slope_at_zero != 2:
            failed.append(f"g'(0)={self.slope_at_zero}≠2")
        if self.slope_product != 4:
            failed.append(
                f"g'(x0-)·g'(x0+)={self.left_slope}·{self.right_slope}={self.slope_product}≠4 at x0={self.fixed_point}"
            )
        return "; ".join(failed) if failed else "g'(0)=2 and g'(x0-)·g'(x0+)=4"


def pl_conjugacy_necessary(g: CarcassMap) -> NecessaryConditions:
    """Slope conditions every carcass map PL-conjugate to the tent map meets."""
    s0 = one_sided_slope(g.map, 0, "right")
    x0 = positive_fixed_point(g)
    left = one_sided_slope(g.map, x0, "left")
    right = one_sided_slope(g.map, x0, "right")
    return NecessaryConditions(s0 == 2 and left * right == 4, s0, x0, left, right)


@dataclass(frozen=True)
class PLConjugacyVerdict:
    verdict: str  # "pl" | "not-pl" | "inconclusive"
    witness_tangent: Optional[Fraction]
    witness_threshold: Fraction
    failed_condition: Optional[str]
    evidence_levels: int
    mismatch: Optional[tuple] = None  # (n, k, mu, w*k/2^(n-1))


MIN_EVIDENCE_LEVELS = 3


def pl_conjugacy_detect(g: CarcassMap, depth: int) -> PLConjugacyVerdict:
    """Look for ``mu(n, k) == w k / 2**(n-1)`` on every node below ``r``.

    ``w`` is read off the deepest level's first node and ``r = g(a)`` with
    ``a`` the first positive kink of ``g``.  The verdict is ``pl`` when the
    slope conditions hold and every node below ``r`` on at least
    ``MIN_EVIDENCE_LEVELS`` levels fits.  ``not-pl`` needs a failed slope
    condition; a lattice misfit alone only gives ``inconclusive``, since a
    smaller threshold could still work.
    """
    if depth < 3:
        raise DepthError("PL-conjugacy detection needs depth >= 3")
    L = build_lattice(g, depth)
    a = g.kinks()[0]
    r = g(a)
    w = 2 ** (depth - 1) * L.mu(depth, 1)

    mismatch = None
    levels_with_evidence = 0
    for n in range(1, depth + 1):
        scale = Fraction(1, 2 ** (n - 1))
        positive = False
        for k, mu in enumerate(L.level(n)):
            if mu >= r:
                break
            if mu != w * k * scale:
                mismatch = (n, k, mu, w * k * scale)
                break
            positive = positive or k > 0
        if mismatch:
            break
        levels_with_evidence += positive

    nec = pl_conjugacy_necessary(g)
    if not nec.passed:
        return PLConjugacyVerdict("not-pl", None, r, nec.detail, levels_with_evidence, mismatch)
    if mismatch is None and levels_with_evidence >= MIN_EVIDENCE_LEVELS:
        return PLConjugacyVerdict("pl", w, r, None, levels_with_evidence)
    return PLConjugacyVerdict("inconclusive", None, r, None, levels_with_evidence, mismatch)


def recover_conjugacy(g: CarcassMap, depth: int) -> Optional[PLMap]:
    """The PL conjugacy ``h`` with ``h ∘ tent == g ∘ h``, if the level-``depth``
    interpolant already is one; ``None`` otherwise."""
    h = lattice_conjugacy(tent(), g, depth)
    return h if verify_conjugacy(h, tent(), g) else None
