"""Exact automorphism search, 2-cycle automorphisms and subgraphs of symmetry.

The search is individualization-refinement: the vertex coloring is refined
to a stable (equitable) partition by neighbor-color multisets, then a vertex
of the smallest non-singleton cell is individualized on the left while every
candidate image in the matching cell is individualized on the right. Both
sides use the same canonical relabelling, so a branch survives only while the
refinement traces agree. Every discrete leaf is verified exactly before it is
reported, so the search is complete and never returns a false automorphism.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, _neighbor_lists, adjacency_matrix
from .permutation import Permutation, count_even_cycles, cycle_decomposition, permutation_matrix

BRUTE_FORCE_MAX_N = 10


@dataclass(frozen=True)
class AutomorphismCertificate:
    permutation: Permutation
    verified: bool
    even_cycle_count: int

    def cycle_notation(self, labels: Sequence[str] | None = None) -> str:
        return self.permutation.cycle_notation(labels)

    @property
    def two_cycles(self) -> list[tuple[int, int]]:
        return [c for c in cycle_decomposition(self.permutation) if len(c) == 2]


@dataclass
class SymmetrySubgraphs:
    blocks: list[tuple[int, ...]]
    block_pairs: list[tuple[int, int]]  # indices into ``blocks``; (k, k) marks a self-paired block
    correspondence: list[tuple[int, int]]
    anchor_set: tuple[int, ...]
    other_moved: tuple[int, ...] = field(default=())


def certify(g: Graph, p: Permutation) -> AutomorphismCertificate:
    return AutomorphismCertificate(p, is_automorphism(g, p), count_even_cycles(cycle_decomposition(p)))


def is_automorphism(g: Graph, p: Permutation) -> bool:
    if len(p) != g.n:
        raise ValueError(f"permutation size {len(p)} does not match graph order {g.n}")
    a = adjacency_matrix(g)
    pm = permutation_matrix(p)
    return bool(np.array_equal(pm @ a, a @ pm))


# --- refinement -----------------------------------------------------------

def _canonical(values: Sequence) -> list[int]:
    ranks = {v: k for k, v in enumerate(sorted(set(values)))}
    return [ranks[v] for v in values]


def _refine(nbrs: list[list[int]], colors: list[int]) -> tuple[list[int], tuple]:
    trace = []
    ncolors = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted(colors[w] for w in nbrs[v]))) for v in range(len(colors))]
        distinct = sorted(set(sig))
        trace.append(tuple(distinct))
        ranks = {s: k for k, s in enumerate(distinct)}
        colors = [ranks[s] for s in sig]
        if len(distinct) == ncolors:
            return colors, tuple(trace)
        ncolors = len(distinct)


def _individualize(nbrs, colors: list[int], v: int) -> tuple[list[int], tuple]:
    c = list(colors)
    c[v] = len(set(colors))
    return _refine(nbrs, c)


def _initial_colors(g: Graph, vertex_colors: Sequence | None) -> list[int]:
    deg = [0] * g.n
    for i, j in g.edges:
        deg[i] += 1
        deg[j] += 1
    if vertex_colors is None:
        return _canonical(deg)
    return _canonical(list(zip(vertex_colors, deg)))


class _Search:
    def __init__(self, g: Graph, vertex_colors: Sequence | None = None):
        self.g = g
        self.nbrs = _neighbor_lists(g)
        self.edges = g.edges
        self.base = list(vertex_colors) if vertex_colors is not None else [0] * g.n
        self.root, self.root_trace = _refine(self.nbrs, _initial_colors(g, vertex_colors))

    def _leaf(self, left: list[int], right: list[int]) -> Permutation | None:
        where = {c: w for w, c in enumerate(right)}
        m = [where[c] for c in left]
        for v, w in enumerate(m):
            if self.base[v] != self.base[w]:
                return None
        for i, j in self.edges:
            a, b = m[i], m[j]
            if (min(a, b), max(a, b)) not in self.edges:
                return None
        return Permutation(m)

    def run(self, fixed: Sequence[tuple[int, int]] = ()) -> Iterator[Permutation]:
        left, right = self.root, self.root
        for v, w in fixed:
            if left[v] != right[w]:
                return
            left, tl = _individualize(self.nbrs, left, v)
            right, tr = _individualize(self.nbrs, right, w)
            if tl != tr:
                return
        yield from self._rec(left, right)

    def _rec(self, left: list[int], right: list[int]) -> Iterator[Permutation]:
        n = len(left)
        sizes: dict[int, int] = {}
        for c in left:
            sizes[c] = sizes.get(c, 0) + 1
        if len(sizes) == n:
            p = self._leaf(left, right)
            if p is not None:
                yield p
            return
        target = min((s, c) for c, s in sizes.items() if s > 1)[1]
        v = left.index(target)
        left2, tl = _individualize(self.nbrs, left, v)
        for w in range(n):
            if right[w] != target:
                continue
            right2, tr = _individualize(self.nbrs, right, w)
            if tl == tr:
                yield from self._rec(left2, right2)


# --- public operations ------------------------------------------------------

def iter_automorphisms(g: Graph, vertex_colors: Sequence | None = None) -> Iterator[Permutation]:
    """Every automorphism (preserving ``vertex_colors`` if given) exactly once."""
    return _Search(g, vertex_colors).run()


def find_automorphisms(g: Graph, limit: int | None = None,
                       vertex_colors: Sequence | None = None) -> list[AutomorphismCertificate]:
    """Identity plus up to ``limit`` nontrivial automorphisms (all when ``limit`` is None).

    Certificates are sorted lexicographically by mapping.
    """
    found = [Permutation.identity(g.n)]
    for p in iter_automorphisms(g, vertex_colors):
        if p.is_identity():
            continue
        found.append(p)
        if limit is not None and len(found) > limit:
            break
    return [certify(g, p) for p in sorted(found)]


def brute_force_automorphisms(g: Graph, vertex_colors: Sequence | None = None,
                              chunk: int = 40320) -> list[Permutation]:
    """Reference enumeration over all n! permutations (n <= 10)."""
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is capped at n <= {BRUTE_FORCE_MAX_N}")
    a = adjacency_matrix(g)
    col = np.asarray(vertex_colors) if vertex_colors is not None else None
    out = []
    perms = itertools.permutations(range(g.n))
    while True:
        block = np.array(list(itertools.islice(perms, chunk)), dtype=np.intp).reshape(-1, g.n)
        if block.size == 0:
            break
        ok = (a[block[:, :, None], block[:, None, :]] == a).all(axis=(1, 2))
        if col is not None:
            ok &= (col[block] == col).all(axis=1)
        out.extend(Permutation(row) for row in block[ok].tolist())
    return sorted(out)


def find_two_cycle_automorphism(g: Graph,
                                vertex_colors: Sequence | None = None) -> AutomorphismCertificate | None:
    """An involutive automorphism, hence one whose cycles include a 2-cycle.

    Searches, for each same-colored pair ``(v, w)``, for an automorphism
    swapping them, and returns its power of order two. The pair scan is
    exhaustive, so None means no automorphism of the graph has a 2-cycle
    (the automorphism group has odd order; trivial groups included).
    """
    s = _Search(g, vertex_colors)
    for v in range(g.n):
        for w in range(v + 1, g.n):
            p = _swap(s, v, w)
            if p is not None:
                return certify(g, p.power(p.order() // 2))
    return None


def _swap(s: _Search, v: int, w: int) -> Permutation | None:
    if s.root[v] != s.root[w]:
        return None
    return next(s.run([(v, w), (w, v)]), None)


def find_swap(g: Graph, v: int, w: int, vertex_colors: Sequence | None = None) -> Permutation | None:
    """Some automorphism exchanging ``v`` and ``w``, if one exists."""
    return _swap(_Search(g, vertex_colors), v, w)


def is_symmetric_graph(g: Graph) -> tuple[bool, AutomorphismCertificate | None]:
    cert = find_two_cycle_automorphism(g)
    if cert is None:
        nontrivial = find_automorphisms(g, limit=1)[1:]
        cert = nontrivial[0] if nontrivial else None
    return cert is not None, cert


def subgraphs_of_symmetry(g: Graph, cert: AutomorphismCertificate) -> SymmetrySubgraphs:
    """Blocks swapped by the 2-cycles of ``cert``.

    Vertices on 2-cycles are grouped into connected components of their
    induced subgraph after dropping the edges joining corresponding vertices
    ``(i, p(i))``; the permutation then maps each component onto a partner
    component (or onto itself, reported as a self-paired block).
    """
    if not cert.verified:
        raise ValueError("certificate is not a verified automorphism")
    p = cert.permutation
    pairs = cert.two_cycles
    if not pairs:
        raise ValueError("certificate has no 2-cycles")
    support = {v for c in pairs for v in c}
    adj: dict[int, list[int]] = {v: [] for v in support}
    for i, j in g.edges:
        if i in support and j in support and p[i] != j:
            adj[i].append(j)
            adj[j].append(i)
    comp_of: dict[int, int] = {}
    comps: list[tuple[int, ...]] = []
    for start in sorted(support):
        if start in comp_of:
            continue
        stack, members = [start], {start}
        while stack:
            for w in adj[stack.pop()]:
                if w not in members:
                    members.add(w)
                    stack.append(w)
        for w in members:
            comp_of[w] = len(comps)
        comps.append(tuple(sorted(members)))
    block_pairs = []
    for k, comp in enumerate(comps):
        partner = comp_of[p[comp[0]]]
        if partner >= k:
            block_pairs.append((k, partner))
    fixed = tuple(i for i in range(g.n) if p[i] == i)
    other = tuple(sorted(set(range(g.n)) - support - set(fixed)))
    return SymmetrySubgraphs(comps, block_pairs, [tuple(c) for c in pairs], fixed, other)


def distortion(a, b, p: Permutation) -> float:
    """Frobenius norm of ``P A - B P``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.shape != (len(p), len(p)):
        raise ValueError(f"dimension mismatch: {a.shape}, {b.shape}, permutation of size {len(p)}")
    pm = permutation_matrix(p)
    return float(np.linalg.norm(pm @ a - b @ pm, "fro"))


def max_minus_one_multiplicity(g: Graph, budget: int = 200_000) -> int | None:
    """Largest even-cycle count over the automorphism group; None if not enumerable.

    The group is enumerated by search up to ``budget`` elements; beyond that
    graphs with n <= 10 fall back to brute force, larger ones are not computed.
    """
    best = 0
    for k, p in enumerate(iter_automorphisms(g)):
        if k >= budget:
            break
        best = max(best, count_even_cycles(cycle_decomposition(p)))
    else:
        return best
    if g.n <= BRUTE_FORCE_MAX_N:
        return max(count_even_cycles(cycle_decomposition(p)) for p in brute_force_automorphisms(g))
    return None
