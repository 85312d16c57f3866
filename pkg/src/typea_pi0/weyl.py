"""Permutations, the twisted Weyl group W0 inside S_n, and s-cycles.

Permutations act on ``{1, ..., n}``. Composition ``(s * t)(i) = s(t(i))``.
An outer class is the integer ``+1`` or ``-1``; for ``-1`` the induced
involution of the coordinates is the flip ``i -> n + 1 - i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

from .errors import CapacityError, ContractViolation

ENUMERATION_BOUND = 8


@dataclass(frozen=True)
class Perm:
    """A permutation of ``{1..n}`` stored by its one-indexed images."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ContractViolation(f"{imgs} is not a permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def flip(cls, n: int) -> Perm:
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> Perm:
        imgs = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            for i, x in enumerate(cyc):
                if not 1 <= x <= n or x in seen:
                    raise ContractViolation(f"bad cycle entry {x} for n = {n}")
                seen.add(x)
                imgs[x - 1] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(imgs))

    @classmethod
    def parse(cls, text: str, n: int) -> Perm:
        """Parse disjoint-cycle notation such as ``"(1 2 3)(4 5 6)"``.

        Entries are separated by spaces or commas; ``"()"`` and ``""`` are
        the identity.
        """
        s = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\)\s*)*", s):
            raise ContractViolation(f"malformed cycle notation {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", s):
            entries = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
            if entries:
                cycles.append(entries)
        return cls.from_cycles(cycles, n)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Perm) -> Perm:
        return Perm(tuple(self.images[j - 1] for j in other.images))

    def __pow__(self, k: int) -> Perm:
        result = Perm.identity(self.n)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def inverse(self) -> Perm:
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.images, start=1))

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each starting at its least element, sorted."""
        seen, out = set(), []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self(x)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def orbit_sizes(self) -> tuple[int, ...]:
        """Sizes of all orbits, fixed points included."""
        moved = sum(len(c) for c in self.cycles)
        return tuple(len(c) for c in self.cycles) + (1,) * (self.n - moved)

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if self(i) == i)

    def __str__(self) -> str:
        if not self.cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)

    def __repr__(self) -> str:
        return f"Perm({self})"

    def __lt__(self, other: Perm) -> bool:
        return self.images < other.images


def check_outer(eps: int) -> int:
    if eps not in (1, -1):
        raise ContractViolation(f"outer class must be +1 or -1, got {eps!r}")
    return eps


def involution(n: int, eps: int) -> Perm:
    """Coordinate involution induced by an outer class."""
    return Perm.flip(n) if check_outer(eps) == -1 else Perm.identity(n)


def is_compatible(sigma: Perm, eps_s: int) -> bool:
    if eps_s == 1:
        return True
    f = Perm.flip(sigma.n)
    return f * sigma == sigma * f


def enumerate_W0(n: int, eps_s: int, bound: int = ENUMERATION_BOUND) -> list[Perm]:
    """Elements of W0 in lexicographic order of their image tuples.

    For ``eps_s = +1`` this is all of S_n; for ``-1`` the centralizer of the
    flip. Raises ``CapacityError`` above ``bound``.
    """
    check_outer(eps_s)
    if n < 1:
        raise ContractViolation("rank must be at least 1")
    if n > bound:
        raise CapacityError(f"n = {n} exceeds the enumeration bound {bound}")
    if eps_s == 1:
        return [Perm(p) for p in permutations(range(1, n + 1))]
    out = []
    for p in permutations(range(1, n + 1)):
        if all(p[n - i] == n + 1 - p[i - 1] for i in range(1, n + 1)):
            out.append(Perm(p))
    return out


def W0_order(n: int, eps_s: int) -> int:
    from math import factorial

    if eps_s == 1:
        return factorial(n)
    return 2 ** (n // 2) * factorial(n // 2)


@dataclass(frozen=True)
class SCycle:
    """A cycle, or a cycle times its disjoint flip-conjugate.

    ``cycles`` holds one cycle (``kind == "plain"``) or two
    (``kind == "paired"``), each starting at its least element.
    """

    cycles: tuple[tuple[int, ...], ...]
    kind: str

    @property
    def length(self) -> int:
        return sum(len(c) for c in self.cycles)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(x for c in self.cycles for x in c)

    def as_perm(self, n: int) -> Perm:
        return Perm.from_cycles(self.cycles, n)

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)


def s_cycle_decomposition(sigma: Perm, eps_s: int) -> list[SCycle]:
    """Unique decomposition of ``sigma`` into disjoint s-cycles.

    Fixed points are omitted; the factors are sorted by least element.
    """
    check_outer(eps_s)
    if not is_compatible(sigma, eps_s):
        raise ContractViolation(f"{sigma} does not commute with the flip")
    n = sigma.n
    out, used = [], set()
    for cyc in sigma.cycles:
        if cyc in used:
            continue
        if eps_s == 1:
            out.append(SCycle((cyc,), "plain"))
            continue
        image = {n + 1 - x for x in cyc}
        if image == set(cyc):
            out.append(SCycle((cyc,), "plain"))
            continue
        partner = next(c for c in sigma.cycles if set(c) == image)
        used.add(partner)
        out.append(SCycle(tuple(sorted((cyc, partner))), "paired"))
    return out


def sigma_of(w: Perm, eps_Fr: int) -> Perm:
    """The twisted element ``Fr * w``."""
    return involution(w.n, eps_Fr) * w


def is_single_scycle_full_length(sigma: Perm, eps_s: int, n: int | None = None) -> bool:
    n = sigma.n if n is None else n
    decomp = s_cycle_decomposition(sigma, eps_s)
    return len(decomp) == 1 and decomp[0].length == n
