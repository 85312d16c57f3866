"""Component partition of W0 under the intersection relation, with certificates."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .chains import Chain, chain_to_base
from .errors import CapacityError, ContractViolation, UnsupportedModeError, VerificationError
from .lparam import (
    AllowedChars,
    EdgeWitness,
    TypeASetup,
    _canonical_relabel,
    _obstruction_canonical,
    candidate_chars,
    direct_edge,
    edge_chars,
    exact_images_edge,
    solvable_at,
    verify_edge_witness,
    verify_exact_witness,
)
from .weyl import Perm

PAIR_MATRIX_BOUND = 6
MODES = ("direct", "exact")


class UnionFind:
    """Disjoint sets over ``0..n-1``; the root of a set is its least index."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        if b < a:
            a, b = b, a
        self.parent[b] = a
        return True


@dataclass
class ComponentReport:
    setup: TypeASetup
    mode: str
    vertices: list[Perm]
    components: list[list[Perm]]
    edges: list[EdgeWitness]
    translates: list[Optional[Perm]]
    stats: dict
    pair_chars: dict = field(default_factory=dict, repr=False)
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        if len(self.components) == 1:
            return "connected"
        return f"{self.mode}-disconnected"

    def component_of(self, w: Perm) -> int:
        for k, comp in enumerate(self.components):
            if w in comp:
                return k
        raise KeyError(str(w))

    def verify(self) -> bool:
        """Second pass over every certificate with the checker alone."""
        for edge, v in zip(self.edges, self.translates):
            ok = verify_edge_witness(self.setup, edge) if v is None else verify_exact_witness(self.setup, v, edge)
            if not ok:
                return False
        uf = UnionFind(len(self.vertices))
        index = {w: i for i, w in enumerate(self.vertices)}
        for edge in self.edges:
            uf.union(index[edge.w], index[edge.w_prime])
        roots = {uf.find(i) for i in range(len(self.vertices))}
        return len(roots) == len(self.components)

    def to_json(self, timing: bool = False) -> dict:
        edges = []
        for edge, v in zip(self.edges, self.translates):
            item = edge.to_json()
            if v is not None:
                item["translate"] = str(v)
            edges.append(item)
        stats = dict(self.stats)
        if timing:
            stats["elapsed_s"] = round(self.elapsed, 3)
        return {
            "setup": self.setup.to_json(),
            "mode": self.mode,
            "components": [[str(w) for w in comp] for comp in self.components],
            "edges": edges,
            "verdict": self.verdict,
            "stats": stats,
        }


def _obstruction_batch(args):
    Q, keys = args
    return [_obstruction_canonical(Q, shape, other) for shape, other in keys]


def _pair_keys(setup: TypeASetup, sigmas: list[Perm]):
    """Canonical obstruction key of every pair ``i < j``."""
    relabels = [_canonical_relabel(s) for s in sigmas]
    keys = {}
    for i, (shape, pi) in enumerate(relabels):
        pinv = pi.inverse()
        for j in range(i + 1, len(sigmas)):
            keys[i, j] = (shape, (pinv * sigmas[j] * pi).images)
    return keys


def _warm_cache(Q: int, keys, jobs: int):
    """Fill the obstruction cache, in worker processes when ``jobs > 1``."""
    distinct = sorted(set(keys))
    if jobs <= 1 or len(distinct) < 64:
        for shape, other in distinct:
            _obstruction_canonical(Q, shape, other)
        return
    chunks = [distinct[k::jobs] for k in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_obstruction_batch, [(Q, c) for c in chunks]))
    # worker results cannot land in this process's lru_cache
    for chunk, values in zip(chunks, results):
        for key, g in zip(chunk, values):
            _SEEDED[(Q,) + key] = g


_SEEDED: dict = {}


def _lookup(Q: int, key) -> int:
    g = _SEEDED.get((Q,) + key)
    return _obstruction_canonical(Q, *key) if g is None else g


def _exact_class_chars(setup: TypeASetup, sigmas: list[Perm], chars: list[int]):
    """Characteristics joining conjugacy classes in exact mode.

    ``v . S_sigma = S_(v sigma v^-1)``, so whether some translate of ``S_w'``
    meets ``S_w`` depends only on the classes of ``sigma_w`` and ``sigma_w'``.
    """
    by_shape: dict = {}
    for s in sigmas:
        by_shape.setdefault(_canonical_relabel(s)[0], []).append(s)
    table = {}
    for shape_a, members_a in by_shape.items():
        rep = members_a[0]
        for shape_b, members_b in by_shape.items():
            found = set()
            for tau in members_b:
                g = edge_obstruction(setup, rep, tau)
                found.update(ell for ell in chars if solvable_at(setup.n0, g, ell))
                if len(found) == len(chars):
                    break
            table[shape_a, shape_b] = [ell for ell in chars if ell in found]
    return table


def edge_obstruction(setup: TypeASetup, sigma: Perm, sigma_prime: Perm) -> int:
    shape, pi = _canonical_relabel(sigma)
    return _lookup(setup.Q, (shape, (pi.inverse() * sigma_prime * pi).images))


def components(setup: TypeASetup, mode: str = "direct", jobs: int = 1) -> ComponentReport:
    """Partition W0 by the equivalence generated by intersecting torsors.

    Edges are decided over ``candidate_chars``; one verified witness is kept
    per union, so ``edges`` is a spanning forest of the partition.
    """
    if mode not in MODES:
        raise ContractViolation(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "exact" and setup.eps_s != 1:
        raise UnsupportedModeError("exact mode is only modeled for eps_s = +1")
    if setup.n > PAIR_MATRIX_BOUND:
        raise CapacityError(f"pair matrix for n = {setup.n} exceeds the bound n <= {PAIR_MATRIX_BOUND}")
    start = time.perf_counter()
    vertices = setup.vertices()
    sigmas = [setup.sigma(w) for w in vertices]
    chars = candidate_chars(setup)
    N = len(vertices)

    keys = _pair_keys(setup, sigmas)
    _warm_cache(setup.Q, keys.values(), jobs)
    if mode == "direct":
        pair_chars = {
            ij: [ell for ell in chars if solvable_at(setup.n0, _lookup(setup.Q, key), ell)] for ij, key in keys.items()
        }
    else:
        table = _exact_class_chars(setup, sigmas, chars)
        shapes = [_canonical_relabel(s)[0] for s in sigmas]
        pair_chars = {(i, j): table[shapes[i], shapes[j]] for (i, j) in keys}

    uf = UnionFind(N)
    edges, translates = [], []
    for (i, j), found in sorted(pair_chars.items()):
        if not found or uf.find(i) == uf.find(j):
            continue
        ell = found[0]
        if mode == "direct":
            wit = direct_edge(setup, vertices[i], vertices[j], ell)
            if wit is None or not verify_edge_witness(setup, wit):
                raise VerificationError(f"edge ({vertices[i]}, {vertices[j]}) at {ell} failed to certify")
            v = None
        else:
            got = exact_images_edge(setup, vertices[i], vertices[j], ell)
            if got is None or not verify_exact_witness(setup, *got):
                raise VerificationError(f"exact edge ({vertices[i]}, {vertices[j]}) at {ell} failed to certify")
            v, wit = got
        uf.union(i, j)
        edges.append(wit)
        translates.append(v)

    groups: dict[int, list[Perm]] = {}
    for i, w in enumerate(vertices):
        groups.setdefault(uf.find(i), []).append(w)
    comps = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])

    by_char = {str(ell): sum(1 for f in pair_chars.values() if ell in f) for ell in chars}
    stats = {
        "vertices": N,
        "pairs": N * (N - 1) // 2,
        "candidate_chars": chars,
        "solvable_pairs_by_char": by_char,
        "components": len(comps),
        "spanning_edges": len(edges),
    }
    return ComponentReport(
        setup, mode, vertices, comps, edges, translates, stats, pair_chars, time.perf_counter() - start
    )


@dataclass
class TheoremCheck:
    passed: bool
    reason: str
    offending: Optional[tuple[Perm, Perm]]
    report: ComponentReport
    chains: dict[Perm, Chain]

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def theorem_check(setup: TypeASetup, jobs: int = 1) -> TheoremCheck:
    """Single component with a verified spanning tree, and consistent chains.

    Every chain step must be an edge the pairwise solver also finds, in an
    allowed characteristic.
    """
    expected = AllowedChars.zbar_inverting(setup.inverted_primes, setup.p)
    if setup.allowed != expected:
        raise ContractViolation("theorem_check needs the characteristics {0} and all primes outside D")
    report = components(setup, "direct", jobs)
    if len(report.components) > 1:
        a, b = report.components[0][0], report.components[1][0]
        return TheoremCheck(False, "more than one component", (a, b), report, {})
    if not report.verify():
        return TheoremCheck(False, "spanning tree failed re-verification", None, report, {})
    chains = {}
    for w in report.vertices:
        try:
            chain = chain_to_base(setup, w)
        except VerificationError as exc:
            return TheoremCheck(False, f"chain from {w}: {exc}", (w, setup.base), report, chains)
        for step in chain.steps:
            ell = step.witness.char
            if ell not in setup.allowed or not edge_chars(setup, step.source, step.target, [ell]):
                return TheoremCheck(
                    False, f"chain step {step.rule} at {ell} not confirmed", (step.source, step.target), report, chains
                )
        chains[w] = chain
    return TheoremCheck(True, "single component; chains confirmed", None, report, chains)
