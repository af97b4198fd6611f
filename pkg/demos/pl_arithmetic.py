"""
Exact piecewise-linear maps
===========================

Maps on [0, 1] are stored as breakpoint lists of fractions, so composition,
inversion and preimages never round.
"""

from fractions import Fraction

from carcass.rational_pl import PLMap, compose, dumps, invert_monotone, kinks, preimage_points

# The tent map and a homeomorphism that squeezes the left half into [0, 1/4].
T = PLMap([(0, 0), ("1/2", 1), (1, 0)])
h = PLMap([(0, 0), ("1/2", "1/4"), (1, 1)])

print("T(3/4) =", T(Fraction(3, 4)))
print("h^-1   =", invert_monotone(h))

# Composing twice doubles the teeth; kinks land on the dyadic quarters.
T2 = compose(T, T)
print("kinks of T∘T:", kinks(T2))

# Preimages are exact as well.
print("T^-1(1/2):", preimage_points(T, Fraction(1, 2)))

# Conjugating the tent map by h gives a four-piece unimodal map.
g = compose(compose(h, T), invert_monotone(h))
print(dumps(g))
