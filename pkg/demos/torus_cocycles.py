"""
Cocycle groups of tame torus actions
====================================

"""

from typea_pi0 import TorusAction, cocycle_group, is_connected_over

# trivial action on a rank-1 torus with q = 5 and s of order dividing 8
g = cocycle_group(TorusAction([[1]], [[1]], 5, 8))
print(g, "connected over Z:", is_connected_over(g, ()), "over Z[1/2]:", is_connected_over(g, (2,)))

# s acting by inversion, q = 3, b = 2
g = cocycle_group(TorusAction([[-1]], [[1]], 3, 2))
print(g)

# a rank-2 action: s rotates by a quarter turn, Fr fixes the lattice
g = cocycle_group(TorusAction([[0, -1], [1, 0]], [[1, 0], [0, 1]], 5, 4))
print(g, "torsion only at primes of b:", g.torsion_order)
