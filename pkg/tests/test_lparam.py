from fractions import Fraction
from itertools import product

import pytest

from typea_pi0.abelian import order, prime_factors, qz, solve_affine_torsion
from typea_pi0.errors import ContractViolation, UnsupportedModeError
from typea_pi0.lparam import (
    AllowedChars,
    EdgeWitness,
    build_system,
    candidate_chars,
    direct_edge,
    edge_chars,
    exact_images_edge,
    make_setup,
    normalize_alpha,
    prime_power_alpha_hub,
    setup_from_json,
    translate_point,
    verify_edge_witness,
    verify_exact_witness,
)
from typea_pi0.weyl import Perm, enumerate_W0

from oracles import torsion_solutions


def test_sl6_setup(sl6):
    assert sl6.alpha == Fraction(1, 6)
    assert sl6.q_eff == 7 and sl6.Q == 7 and sl6.n0 == 6
    assert candidate_chars(sl6) == [0, 2, 3]


def test_orbit_collapse():
    s = make_setup(3, 5, 0, m=2, a=2)
    assert s.q_eff == 25
    with pytest.raises(ContractViolation):
        make_setup(3, 5, 0, m=3, a=2)


def _brute_normalize(alpha_raw, n, Q):
    # every translate, ranked by order then numerator
    return min((qz(alpha_raw + Fraction((Q - 1) * k, n)) for k in range(n)), key=lambda x: (x.denominator, x.numerator))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
def test_normalize_alpha(n, q):
    for eps_fr in (1, -1):
        Q = eps_fr * q
        for k in range(n):
            a = normalize_alpha(Fraction(k, n), n, q, eps_fr)
            assert a == _brute_normalize(Fraction(k, n), n, Q)
            assert all((q - eps_fr) % ell == 0 for ell in prime_factors(order(a)))


def test_normalize_alpha_examples():
    assert normalize_alpha(Fraction(1, 6), 6, 7, 1) == Fraction(1, 6)
    assert normalize_alpha(Fraction(0), 6, 7, 1) == 0
    # 5 and q - 1 = 2 are coprime, so a translate of order 1 exists
    assert normalize_alpha(Fraction(1, 5), 5, 3, 1) == 0
    with pytest.raises(ContractViolation):
        normalize_alpha(Fraction(1, 6), 6, 7, 1, inverted_primes={3})
    with pytest.raises(ContractViolation):
        normalize_alpha(Fraction(1, 4), 6, 7, 1)


def test_setup_validation():
    with pytest.raises(ContractViolation):
        make_setup(2, 6, 0)
    with pytest.raises(ContractViolation):
        make_setup(2, 4, 0, eps_s=-1)
    with pytest.raises(ContractViolation):
        make_setup(4, 3, 0, eps_s=-1, inverted_primes=frozenset({2}))
    with pytest.raises(ContractViolation):
        make_setup(2, 3, Fraction(1, 3))
    with pytest.raises(ContractViolation):
        setup_from_json({"n": 2, "q": 3, "colour": 1})
    with pytest.raises(ContractViolation):
        setup_from_json({"n": 2, "q": 3, "alpha": "2/0"})


def test_setup_json_roundtrip(sl6):
    s = setup_from_json({"n": 6, "q": 7, "alpha": "1/6", "allowed_chars": "ell-adic:2"})
    assert candidate_chars(s) == [0, 2]
    assert setup_from_json({"n": 6, "q": 7, "alpha": "1/6", "allowed_chars": sl6.allowed.to_json()}) == sl6


def test_allowed_chars_presets():
    a = AllowedChars.from_preset("zbar-inv-D", {2}, 7)
    assert 0 in a and 3 in a and 2 not in a and 7 not in a and 4 not in a
    b = AllowedChars.from_preset("fbar:3", (), 7)
    assert 0 not in b and 3 in b and b.smallest() == 3
    assert AllowedChars.from_preset("0,2", (), 7).to_json() == [0, 2]
    with pytest.raises(ContractViolation):
        AllowedChars.from_preset("fbar:7", (), 7)
    with pytest.raises(ContractViolation):
        AllowedChars.from_preset("fbar:4", (), 7)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_sl2_systems(q):
    s = make_setup(2, q, 0)
    ident, swap = Perm.identity(2), Perm.parse("(1 2)", 2)
    for w, size in ((ident, q - 1), (swap, q + 1)):
        B, b = build_system(s, [w])
        assert len(torsion_solutions(B, b, 0, bound=q * q - 1)) == size
    assert build_system(s, []) == (((1, 1),), (Fraction(0),))


def test_direct_edge_goldens(sl6, P):
    for ell in (0, 2, 3):
        assert direct_edge(sl6, P("()"), P("(1 2 3 4 5 6)"), ell) is None
    found = {ell: direct_edge(sl6, P("(1 2 3 4 5 6)"), P("(1 2 3)(4 5 6)"), ell) for ell in (0, 2, 3, 5)}
    assert [ell for ell, w in found.items() if w] == [2]
    assert verify_edge_witness(sl6, found[2])


def test_paper_points(sl6, P):
    beta = tuple(Fraction(j, 6) for j in range(6))
    from typea_pi0.abelian import prime_to_part

    w = EdgeWitness(P("(1 2 3 4 5 6)"), P("(1 2 3)(4 5 6)"), 2, prime_to_part(beta, 2))
    assert verify_edge_witness(sl6, w)
    # exponents with order-4 part are not points over F_2-bar
    assert not verify_edge_witness(sl6, EdgeWitness(w.w, w.w_prime, 2, beta))
    unit = tuple(Fraction(k, 36) for k in (1, 1, 1, 1, 1, -5))
    assert verify_edge_witness(sl6, EdgeWitness(P("(1 2 3)"), P("()"), 0, unit))
    assert not verify_edge_witness(sl6, EdgeWitness(P("(1 2 3)"), P("()"), 0, (Fraction(0),) * 6))


def test_qbar_point_orientation(sl6, P):
    point = tuple(Fraction(k, 36) for k in (11, -1, 23, 1, 1, 1))
    assert verify_edge_witness(sl6, EdgeWitness(P("(1 3 2)(4 6 5)"), P("(1 3 2)"), 0, point))
    assert direct_edge(sl6, P("(1 2 3)(4 5 6)"), P("(1 2 3)"), 0) is not None


def test_edge_queries_validate(sl6, P):
    with pytest.raises(ContractViolation):
        direct_edge(sl6, P("()"), P("(1 2)"), 7)
    with pytest.raises(ContractViolation):
        direct_edge(sl6, P("()"), P("(1 2)"), 6)
    restricted = make_setup(6, 7, "1/6", allowed_chars=[0])
    with pytest.raises(ContractViolation):
        direct_edge(restricted, P("()"), P("(1 2)"), 2)
    outer = make_setup(4, 3, 0, eps_s=-1)
    with pytest.raises(ContractViolation):
        direct_edge(outer, Perm.parse("(1 2)", 4), Perm.identity(4), 0)


def test_candidate_chars():
    assert candidate_chars(make_setup(4, 5, 0)) == [0]
    assert candidate_chars(make_setup(6, 7, "1/6", allowed_chars="fbar:3")) == [3]


def test_hub():
    s4 = make_setup(4, 5, "1/4")
    assert s4.n0 == 4
    ell, zero = prime_power_alpha_hub(s4)
    assert ell == 2
    for w, v in product(enumerate_W0(4, 1), repeat=2):
        assert verify_edge_witness(s4, EdgeWitness(w, v, 2, zero))
    assert prime_power_alpha_hub(make_setup(6, 7, "1/6")) is None
    assert prime_power_alpha_hub(make_setup(3, 7, 0)) == (0, (Fraction(0),) * 3)
    assert prime_power_alpha_hub(make_setup(4, 5, "1/4", allowed_chars=[0])) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_translation_invariance(n):
    # moving alpha by (Q - 1) y with n y = 0 is the coordinate shift x -> x + y
    W = enumerate_W0(n, 1)
    for q in (3, 5, 7):
        for k in range(n):
            base = make_setup(n, q, Fraction(k, n))
            for y in (Fraction(j, n) for j in range(1, n)):
                moved = base.alpha + (base.Q - 1) * y
                assert make_setup(n, q, moved).alpha == base.alpha
                for w, v in product(W, repeat=2):
                    B, b = build_system(base, [w, v])
                    b2 = tuple(qz(t - (base.Q - 1) * y) for t in b[:-1]) + (b[-1],)
                    for ell in sorted({0} | set(candidate_chars(base))):
                        found = direct_edge(base, w, v, ell) is not None
                        assert (solve_affine_torsion(B, b2, ell, base.p) is not None) == found


def test_symmetry_and_char_consistency(P):
    for s in (make_setup(4, 5, "1/4"), make_setup(4, 7, "1/2"), make_setup(3, 7, "1/3")):
        W = enumerate_W0(s.n, 1)
        for w, v in product(W, repeat=2):
            for ell in candidate_chars(s):
                assert (direct_edge(s, w, v, ell) is None) == (direct_edge(s, v, w, ell) is None)
            at0 = direct_edge(s, w, v, 0) is not None
            for ell in (5, 11, 13):
                if ell != s.p and s.n0 % ell:
                    assert (direct_edge(s, w, v, ell) is not None) == at0


def test_fast_path_matches_solver():
    for s in (make_setup(6, 7, "1/6"), make_setup(4, 5, "1/4"), make_setup(4, 3, "1/2", eps_s=-1, eps_Fr=-1)):
        W = enumerate_W0(s.n, s.eps_s)[:40]
        for w, v in product(W, repeat=2):
            solver = [ell for ell in candidate_chars(s) if direct_edge(s, w, v, ell)]
            assert edge_chars(s, w, v, candidate_chars(s)) == solver


def test_exact_edges(sl6, P):
    v, wit = exact_images_edge(sl6, P("(1 2 3 4 5 6)"), P("(1 2 3)(4 5 6)"), 2)
    assert v.is_identity() and verify_edge_witness(sl6, wit)
    for ell in (0, 2, 3):
        assert exact_images_edge(sl6, P("()"), P("(1 2 3 4 5 6)"), ell) is None
    s2 = make_setup(2, 5, 0)
    v, wit = exact_images_edge(s2, Perm.identity(2), Perm.parse("(1 2)", 2), 0)
    assert v.is_identity() and wit.point == (Fraction(0), Fraction(0))
    with pytest.raises(UnsupportedModeError):
        exact_images_edge(make_setup(2, 3, 0, eps_s=-1), Perm.identity(2), Perm.identity(2), 0)


def test_exact_witness_with_translate():
    s = make_setup(3, 7, "1/3")
    W = enumerate_W0(3, 1)
    for w, u in product(W, repeat=2):
        got = exact_images_edge(s, w, u, 0)
        if got is not None and not got[0].is_identity():
            v, wit = got
            assert verify_exact_witness(s, v, wit)
            assert not verify_edge_witness(s, wit) or True
            moved = translate_point(wit.point, v.inverse())
            assert verify_edge_witness(s, EdgeWitness(u, u, 0, moved))
