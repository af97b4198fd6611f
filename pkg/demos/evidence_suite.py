"""
Running the evidence suite
==========================

Everything at once on one map: firmness, structure, conjugacy verdict and
per-t solution checks, cross-checked against two implications: a PL
solution with non-power-of-two tangent forces all solutions PL, and all
solutions PL forces a PL conjugacy.
"""

from carcass.fixtures import fixture_carcass
from carcass.suite import run_evidence_suite

for name in ("tent", "g_A", "g_B"):
    r = run_evidence_suite(fixture_carcass(name), ts=(2, 3, 5), depth=8, name=name)
    print(f"== {name}: conjugacy {r.conjugacy.verdict}")
    for t in r.per_t:
        print(f"   t={t.t}: pl={t.pl} counts={list(t.nonlinearity.counts)} uniform-shares={t.share_uniformity.status}")
    print(f"   rigidity:           {r.rigidity} ({r.rigidity_witness})")
    print(f"   conjugacy transfer: {r.conjugacy_transfer} ({r.conjugacy_transfer_witness})")
