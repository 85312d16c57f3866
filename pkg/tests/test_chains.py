import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typea_pi0.abelian import prime_factors
from typea_pi0.chains import (
    Chain,
    chain_to_base,
    congruence_sum_1,
    congruence_sum_2,
    fixed_subtorus_group,
    helper_edge,
    split_cycle,
    split_point,
    split_target,
    verify_chain,
)
from typea_pi0.errors import ContractViolation
from typea_pi0.lparam import EdgeWitness, direct_edge, edge_chars, make_setup, verify_edge_witness
from typea_pi0.weyl import Perm, enumerate_W0, s_cycle_decomposition


def test_congruence_examples():
    assert sum(4**i for i in range(9)) == 87381
    assert congruence_sum_1(9, 1, 4) == 0
    assert sum(3**i for i in range(4)) == 40
    assert sum((3 - i) * 3**i for i in range(4)) == 18
    assert congruence_sum_1(4, 1, 3) == 0 and congruence_sum_2(4, 1, 3) == 0
    assert congruence_sum_1(3, 1, 4) == 0 and congruence_sum_2(3, 1, 4) == 0


def test_congruence_hypothesis_violation():
    with pytest.raises(ContractViolation):
        congruence_sum_1(3, 1, 5)
    with pytest.raises(ContractViolation):
        congruence_sum_2(4, 2, 4)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 120), st.integers(1, 4), st.integers(0, 40))
def test_congruence_sums_vanish(n0, e, k):
    rad = 1
    for ell in prime_factors(n0):
        rad *= ell
    q = 1 + rad * (k + 1)
    assert congruence_sum_1(n0, e, q) == 0
    assert congruence_sum_2(n0, e, q) == 0


def test_congruence_sum_2_needs_halved_modulus():
    # over the full modulus the weighted sum can fail for even n0
    n0, q = 2, 3
    assert sum((n0 - 1 - i) * q**i for i in range(n0)) % n0 == 1
    assert congruence_sum_2(n0, 1, q) == 0


def test_fixed_subtorus_group(P):
    assert fixed_subtorus_group(P("()")).is_free
    assert fixed_subtorus_group(P("(1 2 3)")).is_free
    # a 2-cycle and its complement: S^tau meets mu_2 in two components
    assert not fixed_subtorus_group(P("(1 2)(3 4 5 6)")).is_free


def test_helper_edges(sl6, P):
    wit = helper_edge(sl6, P("(1 2 3)"), P("()"))
    assert wit is not None and wit.char == 0 and verify_edge_witness(sl6, wit)
    wit = helper_edge(sl6, P("(1 2 3)(4 5 6)"), P("(1 2 3)"))
    assert wit is not None and verify_edge_witness(sl6, wit)
    with pytest.raises(ContractViolation):
        helper_edge(sl6, P("(1 2)"), P("(2 3)"))


def test_helper_edge_not_a_torus():
    s = make_setup(4, 5, "1/4")
    w = Perm.parse("(1 2)(3 4)", 4)
    assert helper_edge(s, w, Perm.identity(4)) is None


def test_split_cycle_default(sl6, P):
    w_prime, wit = split_cycle(sl6, P("(1 2 3 4 5 6)"))
    assert w_prime == P("(1 2 3)(4 5 6)")
    assert wit.char == 2 and verify_edge_witness(sl6, wit)
    assert edge_chars(sl6, wit.w, wit.w_prime, [0, 2, 3]) == [2]


def test_split_cycle_at_three(sl6, P):
    w = P("(1 2 3 4 5 6)")
    assert split_target(sl6, w, 3) == P("(1 2)(3 4)(5 6)")
    # the closed form breaks the determinant row here; the solver still finds a point
    formula = EdgeWitness(w, P("(1 2)(3 4)(5 6)"), 3, split_point(sl6, w, 3))
    assert not verify_edge_witness(sl6, formula)
    w_prime, wit = split_cycle(sl6, w, 3)
    assert w_prime == P("(1 2)(3 4)(5 6)")
    assert verify_edge_witness(sl6, wit)
    assert edge_chars(sl6, w, w_prime, [0, 2, 3]) == [3]


def test_split_cycle_preconditions(sl6, P):
    with pytest.raises(ContractViolation):
        split_cycle(sl6, P("(1 2 3)(4 5 6)"))
    with pytest.raises(ContractViolation):
        split_cycle(sl6, P("(1 2 3 4 5 6)"), 5)
    with pytest.raises(ContractViolation):
        split_cycle(make_setup(4, 5, "1/4"), Perm.parse("(1 2 3 4)", 4))


def test_chain_golden(sl6, P):
    chain = chain_to_base(sl6, P("(1 2 3 4 5 6)"))
    assert [st.rule for st in chain.steps] == ["split-cycle", "peel", "helper"]
    assert [str(st.target) for st in chain.steps] == ["(1 2 3)(4 5 6)", "(1 2 3)", "()"]
    assert chain.chars == (2, 0, 0)
    assert verify_chain(sl6, chain)
    data = chain.to_json(sl6)
    assert set(data["steps"][0]) == {"from", "to", "rule", "char", "point"}


def test_chain_base_vertex_is_empty(sl6):
    chain = chain_to_base(sl6, sl6.base)
    assert chain.steps == () and verify_chain(sl6, chain)


def test_chain_hub():
    s = make_setup(4, 5, "1/4")
    chain = chain_to_base(s, Perm.parse("(1 2 3 4)", 4))
    assert [st.rule for st in chain.steps] == ["hub"] and chain.chars == (2,)


def test_chain_rejects_foreign_vertex():
    s = make_setup(5, 3, 0, eps_s=-1)
    with pytest.raises(ContractViolation):
        chain_to_base(s, Perm.parse("(1 2)", 5))


def test_tampered_chain_fails(sl6, P):
    chain = chain_to_base(sl6, P("(1 2 3 4 5 6)"))
    first = chain.steps[0]
    bad_point = (first.witness.point[0] + Fraction(1, 5),) + first.witness.point[1:]
    bad = type(first)(first.source, first.target, first.rule, EdgeWitness(first.witness.w, first.witness.w_prime, 2, bad_point))
    assert not verify_chain(sl6, Chain(chain.start, chain.base, (bad,) + chain.steps[1:]))


def test_all_sl6_chains(sl6):
    for w in enumerate_W0(6, 1):
        chain = chain_to_base(sl6, w)
        assert len(chain.steps) <= 3
        for step in chain.steps:
            # every step is an edge the pairwise solver also finds
            assert step.witness.char in edge_chars(sl6, step.source, step.target, [step.witness.char])
            assert direct_edge(sl6, step.source, step.target, step.witness.char) is not None


def _random_flip_centralizer(n, rng):
    # permute the pairs {k, n + 1 - k} and swap inside some of them
    half = n // 2
    order = list(range(1, half + 1))
    rng.shuffle(order)
    images = list(range(1, n + 1))
    for k, target in zip(range(1, half + 1), order):
        a, b = (target, n + 1 - target) if rng.random() < 0.5 else (n + 1 - target, target)
        images[k - 1], images[n - k] = a, b
    return Perm(tuple(images))


def _sample_W0(n, eps_s, rng, k):
    out = []
    for _ in range(k):
        if eps_s == -1:
            out.append(_random_flip_centralizer(n, rng))
            continue
        images = list(range(1, n + 1))
        rng.shuffle(images)
        out.append(Perm(tuple(images)))
    return out


@pytest.mark.parametrize("eps_s", [1, -1])
def test_random_chains(eps_s):
    rng = random.Random(7)
    for n in (6, 10, 12):
        for q in (7, 13, 31):
            s = make_setup(n, q, Fraction(1, n), eps_s=eps_s)
            for sigma in _sample_W0(n, eps_s, rng, 15):
                chain = chain_to_base(s, s.from_sigma(sigma))
                assert verify_chain(s, chain) and len(chain.steps) <= 3


def _full_cycle(s):
    if s.eps_s == 1:
        return Perm(tuple(range(2, s.n + 1)) + (1,))
    rng = random.Random(1)
    for sigma in (_random_flip_centralizer(s.n, rng) for _ in range(10**5)):
        decomp = s_cycle_decomposition(sigma, -1)
        if len(decomp) == 1 and decomp[0].length == s.n and decomp[0].kind == "plain":
            return sigma
    raise AssertionError("no full-length s-cycle")


def test_split_shortens_cycles():
    # a paired split can keep one s-cycle of length n, but the longest
    # ordinary cycle of sigma always shrinks
    for n, q, eps_s in ((6, 7, 1), (6, 7, -1), (10, 11, -1), (12, 13, 1)):
        s = make_setup(n, q, Fraction(1, n), eps_s=eps_s)
        chain = chain_to_base(s, s.from_sigma(_full_cycle(s)))
        longest = [n]
        for step in chain.steps:
            if step.rule != "split-cycle":
                break
            longest.append(max(s.sigma(step.target).orbit_sizes(), default=1))
        assert len(longest) >= 2 and all(a > b for a, b in zip(longest, longest[1:]))
