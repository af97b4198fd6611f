"""
Recovering the conjugacy to the tent map
========================================

A map conjugate to the tent map has a lattice that is the image of the
dyadic grid, so the conjugacy can be read off node by node.  Whether it is
piecewise linear shows up in two slope conditions and in how the lattice
looks near 0.
"""

from carcass.conjugacy import (
    conjugacy_convergence_profile,
    lattice_conjugacy,
    pl_conjugacy_detect,
    recover_conjugacy,
)
from carcass.fixtures import fixture_carcass

tent = fixture_carcass("tent")

for name in ("g_A", "g_B"):
    g = fixture_carcass(name)
    v = pl_conjugacy_detect(g, 8)
    print(f"{name}: verdict {v.verdict}, w={v.witness_tangent}, r={v.witness_threshold}")
    if v.failed_condition:
        print("   failed:", v.failed_condition)
    # Successive interpolants stop moving once every kink of h is a node.
    print("   profile:", [str(p) for p in conjugacy_convergence_profile(tent, g, 8)])

print("recovered h for g_A:", recover_conjugacy(fixture_carcass("g_A"), 4))
print("level-4 interpolant for g_B:", lattice_conjugacy(tent, fixture_carcass("g_B"), 4))
