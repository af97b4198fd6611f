"""
Self-semiconjugations
=====================

The zig-zags xi_t commute with the tent map.  Transporting them through a
conjugacy h gives maps psi_t that commute with g = h∘T∘h⁻¹.
"""

from carcass.conjugacy import conjugate_by
from carcass.fixtures import fixture_carcass, fixture_map
from carcass.semiconj import (
    first_kink_check,
    nonlinearity_evidence,
    psi_exact,
    psi_lattice,
    verify_commutation,
    xi,
)

tent = fixture_carcass("tent")
print("xi_3 =", xi(3))
print("xi_t commutes with T for t=1..8:", all(verify_commutation(xi(t), tent) for t in range(1, 9)))

h = fixture_map("h_A")
g = conjugate_by(h)
sol = psi_exact(h, 3)
print("psi_3 =", sol.body)

# The first kink of psi sits where the slopes at 0 predict.
r = first_kink_check(g, sol)
print(f"first kink predicted {r.predicted}, found {r.actual}")

# Without a PL conjugacy psi is only known on lattice nodes.  Counting
# non-collinear node triples per level separates the two cases: a PL
# solution keeps the count bounded.
skew = fixture_carcass("g_B")
print("skew psi_3 on level 3:", [(str(x), str(y)) for x, y in psi_lattice(skew, 3, 3).points])
for name, m in (("g_A", g), ("g_B", skew)):
    p = nonlinearity_evidence(m, 3, 4, 8)
    print(f"{name}: defect counts {list(p.counts)} -> {p.verdict}")
