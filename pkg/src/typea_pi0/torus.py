"""Cocycles of the tame Weil group in a torus, via character lattices.

A torus is ``T = X_* (x) G_m`` with automorphisms given by integer matrices on
the cocharacter lattice. The cocycle scheme (with the unipotent part of the
tame generator removed) is the kernel of

    (Phi, Sigma) -> (Phi + F Sigma - S^q Phi - N_q Sigma,  N_b Sigma)

on ``T x T`` in additive notation, ``N_k = 1 + S + ... + S^(k-1)``. Its
character group is the cokernel of the transpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .abelian import FgAbGroup, IntMatrix, as_int_matrix, cokernel, determinant, identity, matmul, prime_factors
from .errors import ContractViolation


def _mat_pow(M: IntMatrix, k: int) -> IntMatrix:
    out = identity(len(M))
    for _ in range(k):
        out = matmul(out, M)
    return out


def _norm(S: IntMatrix, k: int) -> IntMatrix:
    r = len(S)
    total = [[0] * r for _ in range(r)]
    P = identity(r)
    for _ in range(k):
        for i in range(r):
            for j in range(r):
                total[i][j] += P[i][j]
        P = matmul(P, S)
    return as_int_matrix(total)


@dataclass(frozen=True)
class TorusAction:
    """Tame action on a rank-``r`` torus: ``s`` and ``Fr`` as lattice maps."""

    s_star: IntMatrix
    fr_star: IntMatrix
    q: int
    b: int

    def __post_init__(self):
        S = as_int_matrix(self.s_star)
        F = as_int_matrix(self.fr_star)
        object.__setattr__(self, "s_star", S)
        object.__setattr__(self, "fr_star", F)
        r = len(S)
        if r < 1 or any(len(row) != r for row in S) or len(F) != r or any(len(row) != r for row in F):
            raise ContractViolation("s_star and fr_star must be square of the same size")
        if self.q < 2 or self.b < 1:
            raise ContractViolation("need q >= 2 and b >= 1")
        for name, M in (("s_star", S), ("fr_star", F)):
            if abs(determinant(M)) != 1:
                raise ContractViolation(f"{name} is not invertible over the integers")
        if matmul(F, S) != matmul(_mat_pow(S, self.q), F):
            raise ContractViolation("Weil relation Fr s Fr^-1 = s^q fails")
        if _mat_pow(S, self.b) != identity(r):
            raise ContractViolation(f"s^{self.b} is not the identity")

    @property
    def rank(self) -> int:
        return len(self.s_star)


def cocycle_matrix(act: TorusAction) -> IntMatrix:
    """The ``2r x 2r`` endomorphism of ``T x T`` whose kernel is the cocycle group."""
    r = act.rank
    S, F = act.s_star, act.fr_star
    Sq = _mat_pow(S, act.q)
    Nq, Nb = _norm(S, act.q), _norm(S, act.b)
    top = [[int(i == j) - Sq[i][j] for j in range(r)] + [F[i][j] - Nq[i][j] for j in range(r)] for i in range(r)]
    bottom = [[0] * r + list(Nb[i]) for i in range(r)]
    return as_int_matrix(top + bottom)


def cocycle_group(act: TorusAction) -> FgAbGroup:
    """Character group of the cocycle scheme (a diagonalizable group)."""
    L = cocycle_matrix(act)
    return cokernel([list(col) for col in zip(*L)])


def is_connected_over(g: FgAbGroup, inverted_primes: Iterable[int]) -> bool:
    """A diagonalizable group is connected over R iff no torsion prime is inverted."""
    return not set(prime_factors(g.torsion_order)) & set(inverted_primes)
