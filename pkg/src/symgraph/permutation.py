"""Vertex permutations, permutation matrices and cycle structure.

Matrix convention: ``P[i, p(i)] = 1``. For ``p = (2 1 4 5 3)`` (1-based two-line
form) row 1 is e2, row 3 is e4 and row 5 is e3.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .graph import Graph


class Permutation:
    """Bijection on ``{0, ..., n-1}`` stored as its image array."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Iterable[int]):
        m = tuple(int(x) for x in mapping)
        if sorted(m) != list(range(len(m))):
            raise ValueError(f"{m} is not a permutation of 0..{len(m) - 1}")
        self.mapping = m

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(n))

    @classmethod
    def from_one_based(cls, images: Iterable[int]) -> Permutation:
        return cls(i - 1 for i in images)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        m = list(range(n))
        for c in cycles:
            for a, b in zip(c, list(c[1:]) + [c[0]]):
                m[a] = b
        return cls(m)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Space-separated images of 1..n on a single line."""
        return cls.from_one_based(int(tok) for tok in text.split())

    def __len__(self) -> int:
        return len(self.mapping)

    def __getitem__(self, i: int) -> int:
        return self.mapping[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __lt__(self, other: Permutation) -> bool:
        return self.mapping < other.mapping

    def __repr__(self) -> str:
        return f"Permutation({list(self.mapping)})"

    def compose(self, other: Permutation) -> Permutation:
        """``(self . other)(i) = self(other(i))``."""
        return Permutation(self.mapping[j] for j in other.mapping)

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(inv)

    def power(self, k: int) -> Permutation:
        out = Permutation.identity(len(self))
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.mapping))

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in cycle_decomposition(self)))

    def cycle_notation(self, labels: Sequence[str] | None = None) -> str:
        cyc = [c for c in cycle_decomposition(self) if len(c) > 1]
        if not cyc:
            return "()"
        name = (lambda i: labels[i]) if labels is not None else (lambda i: str(i + 1))
        return "".join("(" + " ".join(name(i) for i in c) + ")" for c in cyc)


def permutation_matrix(p: Permutation) -> np.ndarray:
    n = len(p)
    m = np.zeros((n, n), dtype=np.int64)
    m[np.arange(n), list(p.mapping)] = 1
    return m


def cycle_decomposition(p: Permutation) -> list[tuple[int, ...]]:
    """Disjoint cycles, fixed points included as 1-cycles.

    Each cycle starts at its smallest element and follows ``i -> p(i)``;
    scanning indices in increasing order yields the cycles already sorted.
    """
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p[i]
        out.append(tuple(cyc))
    return out


def count_even_cycles(cycles: Sequence[Sequence[int]]) -> int:
    # fixed points have length 1, so they never count
    return sum(1 for c in cycles if len(c) % 2 == 0)


def minus_one_eigenvector(p: Permutation, cycle: Sequence[int]) -> np.ndarray:
    """Integer vector alternating +1/-1 along ``cycle``; satisfies ``P v = -v``."""
    if len(cycle) % 2:
        raise ValueError(f"cycle {tuple(cycle)} has odd length {len(cycle)}")
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        if p[a] != b:
            raise ValueError(f"{tuple(cycle)} is not a cycle of {p!r}")
    v = np.zeros(len(p), dtype=np.int64)
    for k, i in enumerate(cycle):
        v[i] = 1 if k % 2 == 0 else -1
    return v


def apply_to_graph(p: Permutation, g: Graph) -> Graph:
    if len(p) != g.n:
        raise ValueError(f"permutation size {len(p)} does not match graph order {g.n}")
    return Graph(g.n, frozenset((p[i], p[j]) for i, j in g.edges), g.labels)
