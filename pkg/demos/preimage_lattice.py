"""
Preimage lattices and their interval statistics
===============================================

The sorted points of g^-n(0) form a nested lattice.  For the tent map it is
the dyadic grid; for a skewed tent the intervals shrink at uneven rates.
"""

from carcass.fixtures import fixture_carcass
from carcass.lattice import build_lattice, deltas, interval_lengths, structure_report
from carcass.unimodal import firmness

tent = fixture_carcass("tent")
skew = fixture_carcass("g_B")  # peak at 1/3

print("tent, level 4:", [str(x) for x in build_lattice(tent, 4).level(4)])

L = build_lattice(skew, 5)
for n in (2, 3, 4):
    print(f"skew level {n} lengths:", [str(x) for x in interval_lengths(L, n)])
    print(f"skew level {n} shares: ", [str(x) for x in deltas(L, n)])

# Every kink of the skewed tent reaches 0 after two steps, so the shares
# repeat with period 4 in the interval index.  The report checks that and
# several length identities on every node, recording exact counterexamples.
verdict = firmness(skew)
report = structure_report(build_lattice(skew, 10), verdict)
print("share table:", {k: str(v) for k, v in report.delta_table.items()})
for check in report.checks():
    print(f"  {check.name:34s} {check.summary()}")
