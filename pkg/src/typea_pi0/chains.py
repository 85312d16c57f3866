"""Certified chains from any ``w`` in W0 to the base vertex ``Fr``.

The construction follows the type-A argument: a full-length s-cycle is split
into shorter cycles by an intersection over F_ell-bar for a well-chosen prime
``ell``, after which cycles are cut off one at a time by intersections inside
a fixed subtorus. Witness points are written down from closed formulas and
then checked; the check, not the formula, is what the chain relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .abelian import QZVector, cokernel, prime_factors, prime_to_part, qz, solve_affine_torsion, split_prime_power
from .errors import ContractViolation, VerificationError
from .lparam import EdgeWitness, TypeASetup, _torsor_rows, build_system, verify_edge_witness
from .weyl import Perm, is_compatible, s_cycle_decomposition


def _check_hypothesis(n0: int, q: int):
    if n0 < 1 or q < 1:
        raise ContractViolation("n0 and q must be positive")
    bad = [ell for ell in prime_factors(n0) if (q - 1) % ell]
    if bad:
        raise ContractViolation(f"primes {bad} of n0 = {n0} do not divide q - 1 = {q - 1}")


def congruence_sum_1(n0: int, e: int, q: int) -> int:
    """``sum(q**i for i < n0*e) mod n0``; zero whenever the hypothesis holds."""
    _check_hypothesis(n0, q)
    return sum(pow(q, i, n0) for i in range(n0 * e)) % n0


def congruence_sum_2(n0: int, e: int, q: int) -> int:
    """Weighted sum ``sum((n0*e - 1 - i) * q**i) mod n0'``.

    ``n0' = n0`` for odd ``n0`` and ``n0 / 2`` for even ``n0``.
    """
    _check_hypothesis(n0, q)
    mod = n0 if n0 % 2 else n0 // 2
    N = n0 * e
    return sum((N - 1 - i) * pow(q, i, mod) for i in range(N)) % mod


# --------------------------------------------------------------------------
# Steps and chains
# --------------------------------------------------------------------------

RULES = ("helper", "split-cycle", "peel", "hub")


@dataclass(frozen=True)
class ChainStep:
    source: Perm
    target: Perm
    rule: str
    witness: EdgeWitness

    def to_json(self) -> dict:
        return {
            "from": str(self.source),
            "to": str(self.target),
            "rule": self.rule,
            **{k: v for k, v in self.witness.to_json().items() if k in ("char", "point")},
        }


@dataclass(frozen=True)
class Chain:
    start: Perm
    base: Perm
    steps: tuple[ChainStep, ...]

    @property
    def chars(self) -> tuple[int, ...]:
        return tuple(s.witness.char for s in self.steps)

    def outside_allowed(self, setup: TypeASetup) -> tuple[int, ...]:
        """Characteristics used by the chain but missing from the ring."""
        return tuple(sorted({c for c in self.chars if c not in setup.allowed}))

    def to_json(self, setup: Optional[TypeASetup] = None) -> dict:
        out = {
            "w": str(self.start),
            "base": str(self.base),
            "steps": [s.to_json() for s in self.steps],
        }
        if setup is not None:
            out["outside_allowed_chars"] = list(self.outside_allowed(setup))
        return out


def verify_chain(setup: TypeASetup, chain: Chain) -> bool:
    """Endpoints match and every witness passes the independent checker."""
    cur = chain.start
    for step in chain.steps:
        if step.source != cur or step.rule not in RULES:
            return False
        w = step.witness
        if {w.w, w.w_prime} != {step.source, step.target} and not (
            w.w == w.w_prime == step.source == step.target
        ):
            return False
        if not verify_edge_witness(setup, w):
            return False
        cur = step.target
    return cur == chain.base


def _verified(setup: TypeASetup, witness: EdgeWitness, what: str) -> EdgeWitness:
    if not verify_edge_witness(setup, witness):
        raise VerificationError(f"{what}: witness {witness.to_json()} does not verify")
    return witness


# --------------------------------------------------------------------------
# Edges built from the structure of sigma
# --------------------------------------------------------------------------


def fixed_subtorus_group(tau: Perm):
    """Character group of the fixed subgroup ``S^tau`` of the SL_n torus."""
    n = tau.n
    cols = [[1] * n]
    for j in range(1, n + 1):
        if tau(j) != j:
            col = [0] * n
            col[j - 1] += 1
            col[tau(j) - 1] -= 1
            cols.append(col)
    return cokernel([list(r) for r in zip(*cols)])


def helper_edge(setup: TypeASetup, w: Perm, w_prime: Perm, char: int = 0) -> Optional[EdgeWitness]:
    """Point of ``S_w`` and ``S_w'`` inside ``S^tau``, ``tau = sigma_w^-1 sigma_w'``.

    Requires commuting twisted elements. Returns ``None`` unless ``S^tau`` is a
    torus (torsion-free character group), in which case a point exists in
    every characteristic other than p.
    """
    s, sp = setup.sigma(w), setup.sigma(w_prime)
    if s * sp != sp * s:
        raise ContractViolation(f"sigma({w}) and sigma({w_prime}) do not commute")
    tau = s.inverse() * sp
    if not fixed_subtorus_group(tau).is_free:
        return None
    n = setup.n
    rows = _torsor_rows(s, setup.Q) + _torsor_rows(sp, setup.Q)
    rhs = [qz(-setup.alpha)] * (2 * n)
    for j in range(1, n + 1):
        if tau(j) != j:
            row = [0] * n
            row[j - 1] += 1
            row[tau(j) - 1] -= 1
            rows.append(row)
            rhs.append(Fraction(0))
    rows.append([1] * n)
    rhs.append(Fraction(0))
    x = solve_affine_torsion(rows, rhs, char, p=setup.p)
    if x is None:
        raise VerificationError(f"no point in the fixed torus for ({w}, {w_prime})")
    return _verified(setup, EdgeWitness(w, w_prime, char, x), "helper edge")


def _orbit(sigma: Perm, start: int, length: int) -> list[int]:
    out, x = [], start
    for _ in range(length):
        out.append(x)
        x = sigma(x)
    return out


def split_prime(setup: TypeASetup, w: Perm) -> tuple[int, int]:
    """``(n', ell)`` used to split the full-length s-cycle ``sigma_w``."""
    n1, candidates = _split_candidates(setup, w)
    if not candidates:
        raise ContractViolation(f"no admissible prime divides n' = {n1}")
    return n1, candidates[0]


def _split_candidates(setup: TypeASetup, w: Perm) -> tuple[int, tuple[int, ...]]:
    sigma = setup.sigma(w)
    decomp = s_cycle_decomposition(sigma, setup.eps_s)
    if len(decomp) != 1 or decomp[0].length != setup.n:
        raise ContractViolation(f"sigma({w}) = {sigma} is not a single s-cycle of length n")
    if len(setup.dprime_primes(setup.n)) < 2:
        raise ContractViolation(f"n = {setup.n} has fewer than two non-inverted prime divisors")
    n1 = setup.n if decomp[0].kind == "plain" else setup.n // 2
    candidates = setup.dprime_primes(n1)
    if setup.eps_s == -1 and n1 == setup.n:
        candidates = tuple(ell for ell in candidates if ell == 2)
    return n1, candidates


def split_target(setup: TypeASetup, w: Perm, ell: int) -> Perm:
    """The element ``w'`` whose cycles close up every ``d`` steps, ``n' = ell^c d``."""
    n1, _ = _split_candidates(setup, w)
    sigma = setup.sigma(w)
    _, d = split_prime_power(n1, ell)
    images = list(range(1, setup.n + 1))
    for start in [1] if n1 == setup.n else [1, setup.n]:
        orb = _orbit(sigma, start, n1)
        for i, x in enumerate(orb):
            images[x - 1] = orb[i + 1] if (i + 1) % d else orb[i + 1 - d]
    return setup.from_sigma(Perm(tuple(images)))


def split_point(setup: TypeASetup, w: Perm, ell: int) -> QZVector:
    """Closed-form candidate ``x[sigma^-j(1)] = -alpha * sum(Q^i, i < j)`` over F_ell-bar.

    In the paired case the orbit of ``n`` gets the same values.
    """
    n1, _ = _split_candidates(setup, w)
    inv = setup.sigma(w).inverse()
    point = [Fraction(0)] * setup.n
    for start in [1] if n1 == setup.n else [1, setup.n]:
        pos, acc, power = start, 0, 1
        for _ in range(n1):
            point[pos - 1] = qz(-setup.alpha * acc)
            acc += power
            power *= setup.Q
            pos = inv(pos)
    return prime_to_part(point, ell)


def split_cycle(setup: TypeASetup, w: Perm, ell: Optional[int] = None) -> tuple[Perm, EdgeWitness]:
    """Break a full-length s-cycle into shorter s-cycles over F_ell-bar.

    ``ell`` defaults to the smallest admissible prime (forced to 2 when
    ``eps_s = -1`` and the cycle is plain). The closed-form point of
    ``split_point`` is tried first; when it fails the check, the pair is
    handed to the solver at the same ``ell``.
    """
    n1, candidates = _split_candidates(setup, w)
    if ell is None:
        if not candidates:
            raise ContractViolation(f"no admissible prime divides n' = {n1}")
        ell = candidates[0]
    elif ell not in candidates:
        raise ContractViolation(f"{ell} is not an admissible splitting prime for {w}")
    w_prime = split_target(setup, w, ell)
    if not is_compatible(w_prime, setup.eps_s):
        raise VerificationError(f"split of {w} left W0")
    witness = EdgeWitness(w, w_prime, ell, split_point(setup, w, ell))
    if not verify_edge_witness(setup, witness):
        # equal values on both orbits of a paired cycle can break the
        # determinant row; the intersection itself is still nonempty
        B, b = build_system(setup, [w, w_prime])
        x = solve_affine_torsion(B, b, ell, p=setup.p)
        if x is None:
            raise VerificationError(f"split of {w} at {ell}: no common point with {w_prime}")
        witness = EdgeWitness(w, w_prime, ell, x)
    return w_prime, _verified(setup, witness, "split-cycle")


def _helper_char(setup: TypeASetup) -> int:
    ell = setup.allowed.smallest()
    return 0 if ell is None else ell


def _hub_char(setup: TypeASetup) -> Optional[int]:
    primes = prime_factors(setup.n0)
    if not primes:
        return _helper_char(setup)
    return primes[0] if len(primes) == 1 else None


def chain_to_base(setup: TypeASetup, w: Perm) -> Chain:
    """Verified chain of edges from ``w`` to the base vertex ``Fr``.

    A single hub step when ``alpha`` has prime-power order; otherwise split
    full-length s-cycles, then cut off all but the first s-cycle and finally
    the first one. Characteristics outside the ring are recorded by
    ``Chain.outside_allowed`` rather than refused.
    """
    if w.n != setup.n or not is_compatible(w, setup.eps_s):
        raise ContractViolation(f"{w} is not in W0")
    base = setup.base
    if w == base:
        return Chain(w, base, ())
    hub = _hub_char(setup)
    if hub is not None:
        zero = (Fraction(0),) * setup.n
        wit = _verified(setup, EdgeWitness(w, base, hub, zero), "hub")
        return Chain(w, base, (ChainStep(w, base, "hub", wit),))

    steps = []
    cur = w
    for _ in range(3):
        decomp = s_cycle_decomposition(setup.sigma(cur), setup.eps_s)
        if not (len(decomp) == 1 and decomp[0].length == setup.n):
            break
        nxt, wit = split_cycle(setup, cur)
        steps.append(ChainStep(cur, nxt, "split-cycle", wit))
        cur = nxt
    else:
        raise VerificationError(f"splitting {w} did not terminate")

    char = _helper_char(setup)
    decomp = s_cycle_decomposition(setup.sigma(cur), setup.eps_s)
    if len(decomp) >= 2:
        nxt = setup.from_sigma(decomp[0].as_perm(setup.n))
        wit = helper_edge(setup, cur, nxt, char)
        if wit is None:
            raise VerificationError(f"fixed group of ({cur}, {nxt}) is not a torus")
        steps.append(ChainStep(cur, nxt, "peel", wit))
        cur = nxt
    if cur != base:
        wit = helper_edge(setup, cur, base, char)
        if wit is None:
            raise VerificationError(f"fixed group of ({cur}, {base}) is not a torus")
        steps.append(ChainStep(cur, base, "helper", wit))
    chain = Chain(w, base, tuple(steps))
    if not verify_chain(setup, chain):
        raise VerificationError(f"chain from {w} does not verify")
    return chain
