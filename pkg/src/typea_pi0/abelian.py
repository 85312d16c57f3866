"""Exact integer linear algebra and affine systems over Q/Z.

Matrices are tuples of row tuples of Python ints. Elements of Q/Z are
``Fraction`` values reduced into ``[0, 1)``; an element ``num/den`` stands for
the root of unity ``exp(2*pi*i*num/den)`` and its multiplicative order is
``den``.

A residue characteristic ``ell`` is either ``0`` or a prime. Over an
algebraically closed field of characteristic ``ell > 0`` the roots of unity
are the prime-to-``ell`` torsion of Q/Z, which is how every solver below
models points over F_ell-bar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Optional, Sequence

from .errors import ContractViolation

IntMatrix = tuple[tuple[int, ...], ...]
QZVector = tuple[Fraction, ...]


def as_int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def matvec(A: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum((a * v for a, v in zip(row, x)), 0) for row in A)


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(row) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    The diagonal entries are nonnegative, each divides the next, and the zero
    entries come last.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(self.rows, self.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def left_kernel(self) -> IntMatrix:
        """Rows of ``U`` spanning the integer left kernel of ``M``."""
        return self.U[self.rank:]


def _pivot(A: list[list[int]], t: int) -> Optional[tuple[int, int]]:
    best = None
    for i in range(t, len(A)):
        row = A[i]
        for j in range(t, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return None if best is None else best[1:]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithDecomposition:
    """Smith normal form of an integer matrix.

    Pivots are the smallest nonzero absolute value in the active submatrix,
    ties broken by lowest ``(row, col)``, so the output is deterministic.
    ``ncols`` is only needed for matrices with zero rows.
    """
    A = [[int(v) for v in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if ncols is not None and m and ncols != n:
        raise ContractViolation("ncols does not match the matrix width")
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, c):
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        piv = _pivot(A, t)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            best = None
            for i in range(t + 1, m):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                    best = (abs(A[t][j]), t, j)
            if best is not None:
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]

    return SmithDecomposition(
        U=as_int_matrix(U), D=as_int_matrix(A), V=as_int_matrix(V), rows=m, cols=n
    )


# --------------------------------------------------------------------------
# Finitely generated abelian groups
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``1 < d_1 | d_2 | ...``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ContractViolation("free rank must be nonnegative")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ContractViolation(f"invariant factors {self.torsion} not a divisor chain")
        if any(d < 2 for d in self.torsion):
            raise ContractViolation("invariant factors must be at least 2")

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def hom_count(self, N: int) -> int:
        """Number of homomorphisms to Z/N, i.e. points of order dividing N
        of the diagonalizable group with this character group."""
        return N**self.free_rank * prod(gcd(d, N) for d in self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


def cokernel(M: Sequence[Sequence[int]], nrows: Optional[int] = None) -> FgAbGroup:
    """Canonical form of ``Z^rows / image(M)`` (image of the columns)."""
    if not M:
        return FgAbGroup(nrows or 0)
    snf = smith_normal_form(M)
    torsion = tuple(d for d in snf.diagonal if d > 1)
    return FgAbGroup(snf.rows - snf.rank, torsion)


# --------------------------------------------------------------------------
# Q/Z arithmetic
# --------------------------------------------------------------------------


def qz(x) -> Fraction:
    """Reduce a rational number into ``[0, 1)``."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def parse_qz(text: str) -> Fraction:
    """Parse ``"num/den"`` (or an integer) into a reduced element of Q/Z."""
    text = str(text).strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            num, den = int(num), int(den)
            if den <= 0:
                raise ValueError
            return qz(Fraction(num, den))
        return qz(Fraction(int(text)))
    except (ValueError, ZeroDivisionError):
        raise ContractViolation(f"malformed Q/Z entry {text!r}") from None


def format_qz(x: Fraction) -> str:
    x = qz(x)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime divisors of ``|n|`` in increasing order."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def split_prime_power(n: int, ell: int) -> tuple[int, int]:
    """Write ``n = ell**v * rest`` with ``ell`` not dividing ``rest``."""
    if ell == 0:
        return 1, n
    part = 1
    while n % ell == 0:
        n //= ell
        part *= ell
    return part, n


def check_char(ell: int) -> int:
    ell = int(ell)
    if ell != 0 and not is_prime(ell):
        raise ContractViolation(f"residue characteristic {ell} is neither 0 nor prime")
    return ell


def prime_to_part_entry(x: Fraction, ell: int) -> Fraction:
    x = qz(x)
    if ell == 0:
        return x
    lpart, rest = split_prime_power(x.denominator, ell)
    # unique residue mod den that is x mod rest and 0 mod lpart
    y = x.numerator * lpart * pow(lpart, -1, rest) % x.denominator
    return Fraction(y, x.denominator)


def prime_to_part(v: Sequence[Fraction], ell: int) -> QZVector:
    """Component of each entry of order prime to ``ell`` (identity for 0).

    This is the image of a root of unity under specialization to
    characteristic ``ell``: e.g. ``1/6`` becomes ``2/3`` at ``ell = 2``.
    """
    ell = check_char(ell)
    return tuple(prime_to_part_entry(x, ell) for x in v)


def order(x: Fraction) -> int:
    return qz(x).denominator


def _divide(c: Fraction, d: int, ell: int) -> Fraction:
    """Least ``y`` in ``[0, 1)`` with ``d*y = c`` and denominator prime to ``ell``.

    ``c`` must already have denominator prime to ``ell``.
    """
    r, s = c.numerator, c.denominator
    lpart, _ = split_prime_power(d, ell)
    Y0 = r * lpart * pow(lpart, -1, s) % (s * lpart)
    return Fraction(Y0, s * d)


def solve_affine_torsion(
    B: Sequence[Sequence[int]],
    b: Sequence[Fraction],
    ell: int,
    p: Optional[int] = None,
    ncols: Optional[int] = None,
) -> Optional[QZVector]:
    """Find ``x`` with ``B x = b`` in Q/Z over characteristic ``ell``.

    The target is replaced by its prime-to-``ell`` part and the unknowns are
    restricted to denominators prime to ``ell``. Returns the canonical witness
    (free coordinates 0, torsion coordinates least nonnegative) or ``None``.

    Raises ``ContractViolation`` if ``ell == p`` or the shapes disagree.
    """
    ell = check_char(ell)
    if p is not None and ell == p:
        raise ContractViolation(f"characteristic {ell} equals the excluded prime p")
    if len(B) != len(b):
        raise ContractViolation(f"{len(B)} rows but right-hand side of length {len(b)}")
    target = prime_to_part(b, ell)
    snf = smith_normal_form(B, ncols=ncols)
    m, n = snf.rows, snf.cols
    bp = [qz(sum(u * t for u, t in zip(row, target))) for row in snf.U]
    diag = snf.diagonal
    r = snf.rank
    if any(bp[i] for i in range(r, m)):
        return None
    y = [_divide(bp[i], diag[i], ell) if i < r else Fraction(0) for i in range(n)]
    return tuple(qz(v) for v in matvec(snf.V, y))
