"""Named presets and the golden self-test suite."""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Callable, Optional

from .abelian import prime_factors, prime_to_part
from .chains import chain_to_base, congruence_sum_1, congruence_sum_2
from .lparam import (
    EdgeWitness,
    TypeASetup,
    candidate_chars,
    direct_edge,
    make_setup,
    verify_edge_witness,
)
from .report import components
from .torus import TorusAction, cocycle_group, is_connected_over
from .weyl import Perm

PRESETS: dict[str, dict] = {
    "sl2": {"n": 2, "q": 3, "alpha": "0/1"},
    "sl6-q7": {"n": 6, "q": 7, "alpha": "1/6"},
    "sl2-outer": {"n": 2, "q": 3, "eps_s": -1, "alpha": "0/1"},
}

TORUS_PRESETS: dict[str, dict] = {
    "rank1-q5-b8": {"s_star": [[1]], "fr_star": [[1]], "q": 5, "b": 8},
    "rank1-inversion": {"s_star": [[-1]], "fr_star": [[1]], "q": 3, "b": 2},
}


def preset_setup(name: str, **overrides) -> TypeASetup:
    fields = dict(PRESETS[name])
    fields.update(overrides)
    return make_setup(**fields)


def sl2_alpha(z: int) -> str:
    """Exponent of the central constant ``z = +1`` or ``z = -1``."""
    return "0/1" if z == 1 else "1/2"


def congruence_sweep(n0_max: int = 200, e_max: int = 3, q_max: int = 200) -> Optional[tuple]:
    """First ``(n0, e, q)`` where either sum fails to vanish, else ``None``."""
    for q in range(2, q_max + 1):
        for n0 in range(1, n0_max + 1):
            if any((q - 1) % ell for ell in prime_factors(n0)):
                continue
            for e in range(1, e_max + 1):
                if congruence_sum_1(n0, e, q) or congruence_sum_2(n0, e, q):
                    return n0, e, q
    return None


def _q(*nums) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in nums)


def _sl6() -> TypeASetup:
    return preset_setup("sl6-q7")


def _p(text: str, n: int = 6) -> Perm:
    return Perm.parse(text, n)


def _g_sl6_normalized():
    s = _sl6()
    return s.alpha == Fraction(1, 6) and candidate_chars(s) == [0, 2, 3]


def _g_sl6_disjoint():
    s = _sl6()
    return all(direct_edge(s, _p("()"), _p("(1 2 3 4 5 6)"), ell) is None for ell in (0, 2, 3))


def _g_sl6_mod2_only():
    s = _sl6()
    found = [ell for ell in (0, 2, 3) if direct_edge(s, _p("(1 2 3 4 5 6)"), _p("(1 2 3)(4 5 6)"), ell)]
    return found == [2]


def _g_sl6_beta_point():
    # points t^-1 d of A_w sit at d in S_w coordinates; d = diag(b^j), b = a^6
    s = _sl6()
    point = prime_to_part(_q(*(Fraction(j, 6) for j in range(6))), 2)
    return verify_edge_witness(s, EdgeWitness(_p("(1 2 3 4 5 6)"), _p("(1 2 3)(4 5 6)"), 2, point))


def _g_sl6_qbar_point():
    s = _sl6()
    # diag(a^11, a^-1, a^23, a, a, a) with a of order 36; it lies on the
    # pair with both 3-cycles reversed under this orientation convention
    point = _q(*(Fraction(k, 36) for k in (11, -1, 23, 1, 1, 1)))
    pair = (_p("(1 3 2)(4 6 5)"), _p("(1 3 2)"))
    return verify_edge_witness(s, EdgeWitness(*pair, 0, point))


def _g_sl6_unit_point():
    # the unit of A sits at t = diag(a, ..., a, a^-5) in S_w coordinates
    s = _sl6()
    point = _q(*(Fraction(k, 36) for k in (1, 1, 1, 1, 1, -5)))
    return verify_edge_witness(s, EdgeWitness(_p("(1 2 3)"), _p("()"), 0, point))


def _g_sl6_chain():
    s = _sl6()
    chain = chain_to_base(s, _p("(1 2 3 4 5 6)"))
    path = [str(chain.start)] + [str(st.target) for st in chain.steps]
    return chain.chars == (2, 0, 0) and path == ["(1 2 3 4 5 6)", "(1 2 3)(4 5 6)", "(1 2 3)", "()"]


def _g_sl6_connected():
    return len(components(_sl6()).components) == 1


def _g_sl2():
    for q in (3, 5, 7, 9):
        ident, swap = Perm.identity(2), Perm.parse("(1 2)", 2)
        plus = make_setup(2, q, sl2_alpha(1))
        minus = make_setup(2, q, sl2_alpha(-1))
        if direct_edge(plus, ident, swap, 0) is None:
            return False
        if [ell for ell in candidate_chars(minus) if direct_edge(minus, ident, swap, ell)] != [2]:
            return False
    return True


def _g_sl2_components():
    two = preset_setup("sl2", alpha="1/2", allowed_chars=[0])
    one = preset_setup("sl2")
    return len(components(two).components) == 2 and len(components(one).components) == 1


def _g_torus():
    g = cocycle_group(TorusAction(**TORUS_PRESETS["rank1-q5-b8"]))
    return str(g) == "Z ⊕ Z/4" and is_connected_over(g, ()) and not is_connected_over(g, (2,))


def _g_congruence_spots():
    return sum(4**i for i in range(9)) == 87381 and 87381 % 9 == 0 and congruence_sum_2(4, 1, 3) == 0


GOLDENS: list[tuple[str, Callable[[], bool]]] = [
    ("sl6-normalized-constant", _g_sl6_normalized),
    ("sl6-identity-vs-6-cycle-disjoint", _g_sl6_disjoint),
    ("sl6-split-edge-only-mod-2", _g_sl6_mod2_only),
    ("sl6-beta-point-mod-2", _g_sl6_beta_point),
    ("sl6-qbar-point", _g_sl6_qbar_point),
    ("sl6-unit-point", _g_sl6_unit_point),
    ("sl6-chain", _g_sl6_chain),
    ("sl6-connected", _g_sl6_connected),
    ("sl2-central-sign", _g_sl2),
    ("sl2-components", _g_sl2_components),
    ("torus-q5-b8", _g_torus),
    ("congruence-spot-values", _g_congruence_spots),
]


def run_selftest(log=print) -> Optional[str]:
    """Run the sweep and the goldens; return the first failing case name."""
    start = time.perf_counter()
    bad = congruence_sweep()
    log(f"congruence sweep: {'ok' if bad is None else f'FAIL at {bad}'} ({time.perf_counter() - start:.2f}s)")
    if bad is not None:
        return f"congruence {bad}"
    for name, check in GOLDENS:
        try:
            ok = bool(check())
        except Exception as exc:  # a crash is a failure of that case
            log(f"{name}: FAIL ({type(exc).__name__}: {exc})")
            return name
        log(f"{name}: {'ok' if ok else 'FAIL'}")
        if not ok:
            return name
    return None
