"""Certificate checking for affine systems over Q/Z.

Deliberately independent of the solver: no Smith form and no prime-to-part
projection. A candidate ``x`` with denominators prime to ``ell`` satisfies
``B x = prime_to_part(b)`` exactly when every residue ``(B x - b)_i`` has
``ell``-power order, because the residue then differs from zero only by the
discarded ``ell``-primary part of ``b``.
"""

from fractions import Fraction


def _is_power_of(n: int, ell: int) -> bool:
    if ell == 0:
        return n == 1
    while n % ell == 0:
        n //= ell
    return n == 1


def verify_solution(B, b, ell, x) -> bool:
    """True iff ``x`` is a point of ``B x = b`` over characteristic ``ell``."""
    if len(B) != len(b) or any(len(row) != len(x) for row in B):
        return False
    ell = int(ell)
    xs = [Fraction(v) for v in x]
    if ell:
        if any(v.denominator % ell == 0 for v in xs):
            return False
    for row, rhs in zip(B, b):
        residue = sum((c * v for c, v in zip(row, xs)), Fraction(0)) - Fraction(rhs)
        if not _is_power_of(residue.denominator, ell):
            return False
    return True
