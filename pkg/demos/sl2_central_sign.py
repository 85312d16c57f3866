"""
SL2: the sign of the central constant decides where the two tori meet
=====================================================================

"""

from typea_pi0 import Perm, components, direct_edge, make_setup

ident, swap = Perm.identity(2), Perm.parse("(1 2)", 2)

for q in (3, 5, 7, 9):
    plus = make_setup(2, q, "0/1")
    minus = make_setup(2, q, "1/2")
    # z = 1: mu_(q-1) and mu_(q+1) share the point 1 in every characteristic
    at_plus = [ell for ell in (0, 2) if direct_edge(plus, ident, swap, ell)]
    # z = -1: they only meet once -1 = 1, i.e. over F_2-bar
    at_minus = [ell for ell in (0, 2) if direct_edge(minus, ident, swap, ell)]
    print(f"q = {q}: z = 1 meets at {at_plus}, z = -1 meets at {at_minus}")

# with only characteristic 0 allowed, z = -1 splits W0 into two components
print(components(make_setup(2, 3, "1/2", allowed_chars=[0])).verdict)
print(components(make_setup(2, 3, "1/2")).verdict)
