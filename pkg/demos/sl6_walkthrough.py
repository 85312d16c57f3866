"""
Components of W0 for SL6 with a central constant of order 6
===========================================================

"""

from fractions import Fraction

from typea_pi0 import EdgeWitness, Perm, candidate_chars, chain_to_base, components, direct_edge, make_setup
from typea_pi0 import verify_edge_witness

# q = 7 and alpha = 1/6; the only characteristics worth testing are 0, 2, 3
setup = make_setup(6, 7, "1/6")
print("normalized alpha:", setup.alpha, "candidate chars:", candidate_chars(setup))

# the identity and the 6-cycle never meet directly
ident, six = Perm.identity(6), Perm.parse("(1 2 3 4 5 6)", 6)
print("id vs 6-cycle:", [direct_edge(setup, ident, six, ell) for ell in (0, 2, 3)])

# but the 6-cycle meets (1 2 3)(4 5 6) over F_2-bar, with an explicit point
split = Perm.parse("(1 2 3)(4 5 6)", 6)
wit = direct_edge(setup, six, split, 2)
print("6-cycle vs (1 2 3)(4 5 6) at 2:", [str(x) for x in wit.point])

# a certified chain from the 6-cycle back to the base vertex
chain = chain_to_base(setup, six)
for step in chain.steps:
    print(f"  {step.source} -> {step.target}  [{step.rule}, char {step.witness.char}]")

# the full partition: one component, 719 verified spanning edges
report = components(setup)
print(report.verdict, report.stats)

# a point in characteristic 0 sits at t = (1,1,1,1,1,-5)/36 for ((1 2 3), id)
t = tuple(Fraction(k, 36) for k in (1, 1, 1, 1, 1, -5))
print("unit point verifies:", verify_edge_witness(setup, EdgeWitness(Perm.parse("(1 2 3)", 6), ident, 0, t)))
