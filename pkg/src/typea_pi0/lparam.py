"""Type-A setups, the torsors S_w as affine systems over Q/Z, and edges.

Coordinates: a point of the diagonal torus S of SL_n is an exponent vector
``x`` in (Q/Z)^n with ``sum(x) = 0``. For ``w`` in W0 with
``sigma = Fr * w``, the torsor ``S_w`` is cut out by

    x[sigma^-1(j)] - Q * x[j] = -alpha      for every j,

where ``Q = eps_Fr * q_eff`` and ``alpha`` is the normalized central
constant. The central element ``t`` of the original action has already been
absorbed by the change of coordinates ``A_w = [t]^-1 A'_w``, so every point
reported here is in these shifted coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence

from .abelian import (
    QZVector,
    check_char,
    format_qz,
    is_prime,
    order,
    parse_qz,
    prime_factors,
    qz,
    smith_normal_form,
    solve_affine_torsion,
    split_prime_power,
)
from .checker import verify_solution
from .errors import ContractViolation, UnsupportedModeError
from .weyl import Perm, check_outer, enumerate_W0, involution, is_compatible, sigma_of


# --------------------------------------------------------------------------
# Residue characteristics available in the coefficient ring
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AllowedChars:
    """Residue characteristics of the coefficient ring R.

    ``primes is None`` means every prime outside ``excluded``; otherwise the
    explicit finite set ``primes``. The excluded prime p is never allowed.
    """

    zero: bool = True
    primes: Optional[frozenset[int]] = None
    excluded: frozenset[int] = frozenset()

    def __contains__(self, ell: int) -> bool:
        if ell == 0:
            return self.zero
        if ell in self.excluded or not is_prime(ell):
            return False
        return self.primes is None or ell in self.primes

    def smallest(self) -> Optional[int]:
        if self.zero:
            return 0
        if self.primes is not None:
            ok = sorted(ell for ell in self.primes if ell not in self.excluded)
            return ok[0] if ok else None
        ell = 2
        while ell in self.excluded or not is_prime(ell):
            ell += 1
        return ell

    @classmethod
    def zbar_inverting(cls, inverted: Iterable[int], p: int) -> AllowedChars:
        """{0} and every prime not inverted: R = Zbar[1/D]."""
        return cls(True, None, frozenset(inverted) | {p})

    @classmethod
    def explicit(cls, chars: Iterable[int], p: int) -> AllowedChars:
        chars = {check_char(c) for c in chars}
        if p in chars:
            raise ContractViolation(f"characteristic {p} = p cannot be allowed")
        return cls(0 in chars, frozenset(c for c in chars if c), frozenset({p}))

    @classmethod
    def from_preset(cls, value, inverted: Iterable[int], p: int) -> AllowedChars:
        """``zbar-inv-D``, ``ell-adic:L``, ``fbar:L`` or an explicit list."""
        if isinstance(value, AllowedChars):
            return value
        if isinstance(value, dict):
            if set(value) != {"zero", "all_primes_except"}:
                raise ContractViolation(f"bad characteristic object {value!r}")
            excluded = frozenset(int(x) for x in value["all_primes_except"]) | {p}
            return cls(bool(value["zero"]), None, excluded)
        if isinstance(value, (list, tuple, set, frozenset)):
            return cls.explicit(value, p)
        text = str(value).strip()
        if text == "zbar-inv-D":
            return cls.zbar_inverting(inverted, p)
        for prefix, with_zero in (("ell-adic:", True), ("fbar:", False)):
            if text.startswith(prefix):
                try:
                    ell = int(text[len(prefix):])
                except ValueError:
                    raise ContractViolation(f"bad characteristic preset {text!r}") from None
                if not is_prime(ell):
                    raise ContractViolation(f"{ell} is not prime")
                return cls.explicit(([0] if with_zero else []) + [ell], p)
        try:
            return cls.explicit([int(tok) for tok in text.split(",") if tok.strip()], p)
        except ValueError:
            raise ContractViolation(f"unknown characteristic preset {text!r}") from None

    def to_json(self):
        if self.primes is None:
            return {"zero": self.zero, "all_primes_except": sorted(self.excluded)}
        return sorted(([0] if self.zero else []) + [c for c in self.primes if c not in self.excluded])


# --------------------------------------------------------------------------
# Setups
# --------------------------------------------------------------------------


def _prime_of_power(q: int) -> Optional[int]:
    ps = prime_factors(q)
    return ps[0] if len(ps) == 1 else None


@dataclass(frozen=True)
class RawSetup:
    """Input data before orbit collapse and normalization of the constant."""

    n: int
    q: int
    alpha_raw: Fraction = Fraction(0)
    m: int = 1
    a: int = 1
    eps_s: int = 1
    eps_Fr: int = 1
    inverted_primes: frozenset[int] = frozenset()
    allowed_chars: object = "zbar-inv-D"
    p: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha_raw", qz(Fraction(self.alpha_raw)))
        object.__setattr__(self, "inverted_primes", frozenset(int(x) for x in self.inverted_primes))
        if self.n < 1 or self.m < 1 or self.a < 1:
            raise ContractViolation("n, m and a must be positive")
        if self.m % self.a:
            raise ContractViolation(f"a = {self.a} must divide m = {self.m}")
        p = _prime_of_power(self.q) if self.q >= 2 else None
        if p is None:
            raise ContractViolation(f"q = {self.q} is not a prime power")
        if self.p is not None and self.p != p:
            raise ContractViolation(f"q = {self.q} is not a power of p = {self.p}")
        object.__setattr__(self, "p", p)
        check_outer(self.eps_s)
        check_outer(self.eps_Fr)
        if self.eps_s == -1 and self.q % 2 == 0:
            raise ContractViolation("eps_s = -1 forces q odd (eps_s = eps_s^q)")
        if self.eps_s == -1 and 2 in self.inverted_primes:
            raise ContractViolation("eps_s = -1 is not D-tame when 2 is inverted")
        for ell in self.inverted_primes:
            if not is_prime(ell):
                raise ContractViolation(f"inverted prime {ell} is not prime")
        if (self.n * self.alpha_raw).denominator != 1:
            raise ContractViolation(f"alpha {self.alpha_raw} is not an n-th root of unity for n = {self.n}")


@dataclass(frozen=True)
class TypeASetup:
    """Normalized single-factor setup: SL_n over the degree-a extension."""

    n: int
    q: int
    p: int
    q_eff: int
    eps_s: int
    eps_Fr: int
    alpha: Fraction
    inverted_primes: frozenset[int]
    allowed: AllowedChars
    m: int = 1
    a: int = 1
    alpha_raw: Fraction = Fraction(0)

    @property
    def Q(self) -> int:
        """Signed Frobenius exponent ``eps_Fr * q_eff``."""
        return self.eps_Fr * self.q_eff

    @property
    def n0(self) -> int:
        return order(self.alpha)

    @property
    def base(self) -> Perm:
        """The base vertex Fr of W0."""
        return involution(self.n, self.eps_Fr)

    def sigma(self, w: Perm) -> Perm:
        return sigma_of(w, self.eps_Fr)

    def from_sigma(self, sigma: Perm) -> Perm:
        return involution(self.n, self.eps_Fr) * sigma

    def dprime_primes(self, n: int) -> tuple[int, ...]:
        """Primes dividing ``n`` that are not invertible (p always is)."""
        return tuple(ell for ell in prime_factors(n) if ell not in self.inverted_primes and ell != self.p)

    def vertices(self) -> list[Perm]:
        return enumerate_W0(self.n, self.eps_s)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a": self.a,
            "q": self.q,
            "p": self.p,
            "q_eff": self.q_eff,
            "eps_s": self.eps_s,
            "eps_Fr": self.eps_Fr,
            "alpha_raw": format_qz(self.alpha_raw),
            "alpha": format_qz(self.alpha),
            "inverted_primes": sorted(self.inverted_primes),
            "allowed_chars": self.allowed.to_json(),
        }


def normalize_alpha(
    alpha_raw: Fraction,
    n: int,
    q_eff: int,
    eps_Fr: int,
    inverted_primes: Iterable[int] = (),
) -> Fraction:
    """Canonical translate ``alpha_raw + (Q - 1) y`` with ``n y = 0``.

    Chooses the least order, then the least numerator. The least-order
    translate has its order supported on primes dividing ``q_eff - eps_Fr``.
    Raises ``ContractViolation`` if an inverted prime survives, which means the
    input was not D-tame.
    """
    alpha_raw = qz(alpha_raw)
    if (n * alpha_raw).denominator != 1:
        raise ContractViolation(f"alpha {alpha_raw} is not an n-th root of unity")
    Q = eps_Fr * q_eff
    best = min(
        (qz(alpha_raw + Fraction((Q - 1) * k, n)) for k in range(n)),
        key=lambda x: (x.denominator, x.numerator),
    )
    bad = set(prime_factors(best.denominator)) & set(inverted_primes)
    if bad:
        raise ContractViolation(
            f"normalized constant {format_qz(best)} has order divisible by inverted primes {sorted(bad)}"
        )
    return best


def reduce_setup(raw: RawSetup) -> TypeASetup:
    """Collapse the Frobenius orbits on factors and normalize the constant."""
    q_eff = raw.q**raw.a
    alpha = normalize_alpha(raw.alpha_raw, raw.n, q_eff, raw.eps_Fr, raw.inverted_primes)
    allowed = raw.allowed_chars
    if not isinstance(allowed, AllowedChars):
        allowed = AllowedChars.from_preset(allowed, raw.inverted_primes, raw.p)
    return TypeASetup(
        n=raw.n,
        q=raw.q,
        p=raw.p,
        q_eff=q_eff,
        eps_s=raw.eps_s,
        eps_Fr=raw.eps_Fr,
        alpha=alpha,
        inverted_primes=raw.inverted_primes,
        allowed=allowed,
        m=raw.m,
        a=raw.a,
        alpha_raw=raw.alpha_raw,
    )


def make_setup(n: int, q: int, alpha=0, **kwargs) -> TypeASetup:
    """Shorthand for ``reduce_setup(RawSetup(...))``."""
    if isinstance(alpha, str):
        alpha = parse_qz(alpha)
    return reduce_setup(RawSetup(n=n, q=q, alpha_raw=Fraction(alpha), **kwargs))


SETUP_FIELDS = {"n", "m", "a", "q", "eps_s", "eps_Fr", "alpha", "inverted_primes", "allowed_chars"}


def setup_from_json(data: dict) -> TypeASetup:
    """Build a setup from the JSON config schema; unknown fields rejected."""
    if not isinstance(data, dict):
        raise ContractViolation("setup must be a JSON object")
    unknown = set(data) - SETUP_FIELDS
    if unknown:
        raise ContractViolation(f"unknown setup fields {sorted(unknown)}")
    missing = {"n", "q"} - set(data)
    if missing:
        raise ContractViolation(f"missing setup fields {sorted(missing)}")
    try:
        ints = {k: int(data[k]) for k in ("n", "m", "a", "q", "eps_s", "eps_Fr") if k in data}
        inverted = frozenset(int(x) for x in data.get("inverted_primes", ()))
    except (TypeError, ValueError):
        raise ContractViolation("integer setup fields must be integers") from None
    for k in ("n", "m", "a", "q", "eps_s", "eps_Fr"):
        if k in data and isinstance(data[k], bool):
            raise ContractViolation(f"{k} must be an integer")
    alpha = parse_qz(data.get("alpha", "0/1"))
    return reduce_setup(
        RawSetup(
            alpha_raw=alpha,
            inverted_primes=inverted,
            allowed_chars=data.get("allowed_chars", "zbar-inv-D"),
            **ints,
        )
    )


# --------------------------------------------------------------------------
# Systems and edges
# --------------------------------------------------------------------------


def _torsor_rows(sigma: Perm, Q: int) -> list[list[int]]:
    n = sigma.n
    inv = sigma.inverse()
    rows = []
    for j in range(1, n + 1):
        row = [0] * n
        row[inv(j) - 1] += 1
        row[j - 1] -= Q
        rows.append(row)
    return rows


def build_system(setup: TypeASetup, ws: Sequence[Perm]) -> tuple[tuple[tuple[int, ...], ...], QZVector]:
    """Matrix and right-hand side of the intersection of the ``S_w``.

    One block of ``n`` rows per ``w`` followed by the determinant row.
    """
    rows: list[list[int]] = []
    rhs: list[Fraction] = []
    for w in ws:
        rows += _torsor_rows(setup.sigma(w), setup.Q)
        rhs += [qz(-setup.alpha)] * setup.n
    rows.append([1] * setup.n)
    rhs.append(Fraction(0))
    return tuple(tuple(r) for r in rows), tuple(rhs)


@dataclass(frozen=True)
class EdgeWitness:
    """A point of ``S_w`` and ``S_w'`` over a field of characteristic ``char``."""

    w: Perm
    w_prime: Perm
    char: int
    point: QZVector

    def to_json(self) -> dict:
        return {
            "w": str(self.w),
            "w_prime": str(self.w_prime),
            "char": self.char,
            "point": [format_qz(x) for x in self.point],
        }

    @classmethod
    def from_json(cls, data: dict, n: int) -> EdgeWitness:
        return cls(
            Perm.parse(data["w"], n),
            Perm.parse(data["w_prime"], n),
            int(data["char"]),
            tuple(parse_qz(x) for x in data["point"]),
        )


def _check_query(setup: TypeASetup, ell: int, ws: Iterable[Perm]):
    ell = check_char(ell)
    if ell == setup.p:
        raise ContractViolation(f"characteristic {ell} equals p")
    if ell not in setup.allowed:
        raise ContractViolation(f"characteristic {ell} is not available in the coefficient ring")
    for w in ws:
        if w.n != setup.n or not is_compatible(w, setup.eps_s):
            raise ContractViolation(f"{w} is not in W0")
    return ell


def direct_edge(setup: TypeASetup, w: Perm, w_prime: Perm, ell: int) -> Optional[EdgeWitness]:
    """Witness for ``S_w`` meeting ``S_w'`` in characteristic ``ell``, if any."""
    ell = _check_query(setup, ell, (w, w_prime))
    B, b = build_system(setup, [w, w_prime])
    x = solve_affine_torsion(B, b, ell, p=setup.p)
    return None if x is None else EdgeWitness(w, w_prime, ell, x)


def verify_edge_witness(setup: TypeASetup, witness: EdgeWitness) -> bool:
    """Check the point against both torsor systems; shares no solver code."""
    try:
        ell = check_char(witness.char)
    except ContractViolation:
        return False
    if ell == setup.p or len(witness.point) != setup.n:
        return False
    for w in (witness.w, witness.w_prime):
        if w.n != setup.n or not is_compatible(w, setup.eps_s):
            return False
    B, b = build_system(setup, [witness.w, witness.w_prime])
    return verify_solution(B, b, ell, witness.point)


def candidate_chars(setup: TypeASetup) -> list[int]:
    """Characteristics that can add edges beyond those present at 0.

    Obstructions have order dividing ``n0``, so for ``ell`` prime to ``n0``
    solvability agrees with characteristic 0.
    """
    out = [0] if 0 in setup.allowed else []
    out += [ell for ell in prime_factors(setup.n0) if ell in setup.allowed]
    return out


def prime_power_alpha_hub(setup: TypeASetup) -> Optional[tuple[int, QZVector]]:
    """``(ell, 0)`` if the zero point lies in every ``S_w`` at ``ell``.

    Happens when ``alpha`` has ``ell``-power order; for ``alpha = 0`` the
    smallest allowed characteristic (0 when available) is used.
    """
    zero = (Fraction(0),) * setup.n
    primes = prime_factors(setup.n0)
    if not primes:
        ell = setup.allowed.smallest()
        return None if ell is None else (ell, zero)
    if len(primes) == 1 and primes[0] in setup.allowed:
        return primes[0], zero
    return None


def exact_images_edge(setup: TypeASetup, w: Perm, w_prime: Perm, ell: int) -> Optional[tuple[Perm, EdgeWitness]]:
    """Common point of ``S_w`` and a W0-translate ``v . S_w'``.

    Returns ``(v, witness)`` where ``witness.point`` lies in ``S_w`` and its
    ``v^-1``-translate lies in ``S_w'``. Only ``eps_s = +1`` is modeled.
    """
    if setup.eps_s != 1:
        raise UnsupportedModeError("exact image edges are not modeled for eps_s = -1")
    ell = _check_query(setup, ell, (w, w_prime))
    direct = direct_edge(setup, w, w_prime, ell)
    if direct is not None:
        return Perm.identity(setup.n), direct
    sp = setup.sigma(w_prime)
    for v in setup.vertices():
        if v.is_identity():
            continue
        translated = setup.from_sigma(v * sp * v.inverse())
        B, b = build_system(setup, [w, translated])
        x = solve_affine_torsion(B, b, ell, p=setup.p)
        if x is not None:
            return v, EdgeWitness(w, w_prime, ell, x)
    return None


def translate_point(point: Sequence[Fraction], v: Perm) -> QZVector:
    """The translate ``v . x`` with entries ``x[v^-1(j)]``."""
    inv = v.inverse()
    return tuple(point[inv(j) - 1] for j in range(1, v.n + 1))


def verify_exact_witness(setup: TypeASetup, v: Perm, witness: EdgeWitness) -> bool:
    back = translate_point(witness.point, v.inverse())
    first = EdgeWitness(witness.w, witness.w, witness.char, witness.point)
    second = EdgeWitness(witness.w_prime, witness.w_prime, witness.char, back)
    return verify_edge_witness(setup, first) and verify_edge_witness(setup, second)


# --------------------------------------------------------------------------
# Pair obstructions (fast path for full pair matrices)
# --------------------------------------------------------------------------


def _canonical_relabel(sigma: Perm) -> tuple[tuple[int, ...], Perm]:
    """Cycle type of ``sigma`` and ``pi`` with ``pi * rep * pi^-1 == sigma``."""
    n = sigma.n
    cyc = list(sigma.cycles) + [(x,) for x in sigma.fixed_points()]
    cyc.sort(key=lambda c: (-len(c), c[0]))
    shape = tuple(len(c) for c in cyc)
    images = [0] * n
    k = 1
    for c in cyc:
        for x in c:
            images[k - 1] = x
            k += 1
    return shape, Perm(tuple(images))


@lru_cache(maxsize=None)
def _obstruction_canonical(Q: int, shape: tuple[int, ...], other: tuple[int, ...]) -> int:
    n = len(other)
    rep_cycles, start = [], 1
    for length in shape:
        rep_cycles.append(tuple(range(start, start + length)))
        start += length
    rep = Perm.from_cycles([c for c in rep_cycles if len(c) > 1], n)
    return system_obstruction([rep, Perm(other)], Q)


def system_obstruction(sigmas: Sequence[Perm], Q: int) -> int:
    """Integer ``g`` such that the joint system is solvable iff ``alpha * g = 0``.

    ``g`` is the gcd of ``u . e`` over the integer left kernel of the matrix,
    ``e`` marking the torsor rows; 0 means always solvable. Solvability over
    characteristic ``ell`` holds iff the prime-to-``ell`` part of ``n0``
    divides ``g``.
    """
    n = sigmas[0].n
    rows = []
    for s in sigmas:
        rows += _torsor_rows(s, Q)
    rows.append([1] * n)
    snf = smith_normal_form(rows)
    g = 0
    for u in snf.left_kernel():
        g = gcd(g, sum(u[:-1]))
    return g


def pair_obstruction(Q: int, sigma: Perm, sigma_prime: Perm) -> int:
    """Cached ``system_obstruction`` for a pair, keyed up to relabeling."""
    shape, pi = _canonical_relabel(sigma)
    pinv = pi.inverse()
    return _obstruction_canonical(Q, shape, (pinv * sigma_prime * pi).images)


def solvable_at(n0: int, g: int, ell: int) -> bool:
    _, rest = split_prime_power(n0, ell) if ell else (1, n0)
    return g % rest == 0


def edge_chars(setup: TypeASetup, w: Perm, w_prime: Perm, chars: Iterable[int]) -> list[int]:
    """Characteristics among ``chars`` where ``S_w`` meets ``S_w'``."""
    g = pair_obstruction(setup.Q, setup.sigma(w), setup.sigma(w_prime))
    return [ell for ell in chars if solvable_at(setup.n0, g, ell)]
