"""Evidence suite: run every check on one map and cross-check two implications.

Rigidity (firm maps): a PL solution whose tangent at 0 is not a power of two
forces every solution to be PL.  Conjugacy transfer: if every solution is
PL, so is the conjugacy to the tent map.  On a single instance these become
consistency checks between independently computed verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .conjugacy import PLConjugacyVerdict, pl_conjugacy_detect, recover_conjugacy
from .errors import ResourceError
from .lattice import StructureReport, build_lattice, structure_report
from .rational_pl import PLMap, compose, invert_monotone, one_sided_slope
from .semiconj import (
    ShareUniformityResult,
    NonlinearityProfile,
    is_power_of_two,
    lattice_commutation_defects,
    lattice_identity_defects,
    lemma_3_5_check,
    nonlinearity_evidence,
    verify_commutation,
    xi,
)
from .unimodal import CarcassMap, FirmnessVerdict, firmness


@dataclass
class TangentResult:
    t: int
    exact: Optional[PLMap]
    tangent: Optional[Fraction]
    commutes: Optional[bool]
    lattice_identity_defects: Optional[int]
    lattice_commutation_defects: int
    nonlinearity: NonlinearityProfile
    share_uniformity: ShareUniformityResult

    @property
    def pl(self) -> bool:
        """Exact PL solution, or lattice sample consistent with one."""
        if self.exact is not None:
            return bool(self.commutes)
        return self.nonlinearity.verdict == "pl-consistent"


@dataclass
class EvidenceSuiteReport:
    name: str
    depth: int
    firmness: FirmnessVerdict
    structure: Optional[StructureReport]
    structure_note: str
    conjugacy: PLConjugacyVerdict
    conjugacy_map: Optional[PLMap]
    per_t: List[TangentResult] = field(default_factory=list)
    rigidity: str = ""
    rigidity_witness: str = ""
    conjugacy_transfer: str = ""
    conjugacy_transfer_witness: str = ""


def _rigidity(firm: FirmnessVerdict, per_t: Sequence[TangentResult]):
    if not firm.firm:
        return "vacuous", "map not certified firm"
    premise = [r for r in per_t if r.exact is not None and r.commutes and not is_power_of_two(r.t)]
    if not premise:
        return "vacuous", "no exact PL solution with tangent outside the powers of 2 among tested t"
    w = premise[0]
    non_pl = [r for r in per_t if not r.pl]
    failed = [r for r in premise if r.share_uniformity.status == "fail"]
    if non_pl or failed:
        bad = ", ".join(
            [f"t={r.t} counts {list(r.nonlinearity.counts)}" for r in non_pl]
            + [f"t={r.t} share uniformity {r.share_uniformity.detail}" for r in failed]
        )
        return "violation", f"premise from t={w.t} (tangent {w.tangent}); {bad}"
    return "consistent", f"t={w.t} has exact PL solution with tangent {w.tangent}; all tested t PL"


def _conjugacy_transfer(conj: PLConjugacyVerdict, per_t: Sequence[TangentResult]):
    all_pl = all(r.pl for r in per_t)
    if conj.verdict == "pl":
        witness = f"w={conj.witness_tangent}, r={conj.witness_threshold}"
        if all_pl:
            return "consistent", witness
        bad = [r.t for r in per_t if not r.pl]
        return "evidence-conflict", f"conjugacy PL ({witness}) yet t={bad} look non-PL"
    if conj.verdict == "not-pl":
        if all_pl:
            return "violation", f"all tested psi_t PL-consistent but conjugacy not PL: {conj.failed_condition}"
        bad = [r for r in per_t if not r.pl]
        return "consistent-contrapositive", (
            f"conjugacy not PL ({conj.failed_condition}); "
            + ", ".join(f"t={r.t} defect counts {list(r.nonlinearity.counts)}" for r in bad)
        )
    return "undetermined", "conjugacy verdict inconclusive at this depth"


def run_evidence_suite(
    g: CarcassMap,
    ts: Sequence[int],
    depth: int,
    name: str = "g",
    window: int = 1,
    n_max: int = 32,
) -> EvidenceSuiteReport:
    firm = firmness(g, n_max)
    structure, note = None, "map not certified firm"
    if firm.firm:
        s_depth = max(depth, 4 * firm.n0 + window)
        try:
            structure = structure_report(build_lattice(g, s_depth), firm, window)
            note = f"computed at depth {s_depth}"
        except ResourceError as exc:
            note = f"skipped: {exc}"
    conj = pl_conjugacy_detect(g, depth)
    h = recover_conjugacy(g, depth) if conj.verdict == "pl" else None

    per_t = []
    n_lo = max(3, depth - 4)
    for t in ts:
        exact = tangent = commutes = id_defects = None
        if h is not None:
            exact = compose(compose(h, xi(t)), invert_monotone(h))
            tangent = one_sided_slope(exact, 0, "right")
            commutes = verify_commutation(exact, g)
            id_defects = len(lattice_identity_defects(exact, g, t, depth))
        per_t.append(TangentResult(
            t=t,
            exact=exact,
            tangent=tangent,
            commutes=commutes,
            lattice_identity_defects=id_defects,
            lattice_commutation_defects=len(lattice_commutation_defects(g, t, depth)),
            nonlinearity=nonlinearity_evidence(g, t, n_lo, depth),
            share_uniformity=lemma_3_5_check(g, t, depth, n_max),
        ))

    report = EvidenceSuiteReport(name, depth, firm, structure, note, conj, h, per_t)
    report.rigidity, report.rigidity_witness = _rigidity(firm, per_t)
    report.conjugacy_transfer, report.conjugacy_transfer_witness = _conjugacy_transfer(conj, per_t)
    return report
