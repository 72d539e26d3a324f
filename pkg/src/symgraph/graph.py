"""Undirected simple graphs, their integer matrices, edge-list I/O and G(n, p) sampling."""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class EdgeListError(ValueError):
    """Raised when an edge-list document cannot be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Undirected, unweighted graph without self-loops on vertices ``0..n-1``.

    Edges are stored as sorted index pairs ``(i, j)`` with ``i < j``. Every
    vertex carries a display label; by default the 1-based numeral.
    """

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        normalized = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {e} has an endpoint outside [0, {self.n})")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(self.n)))
        elif len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise ValueError("labels must be n distinct strings")
        else:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None, one_based: bool = False) -> Graph:
        off = 1 if one_based else 0
        return cls(n, frozenset((i - off, j - off) for i, j in edges), tuple(labels or ()))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown vertex label {label!r}") from None

    def degrees(self) -> np.ndarray:
        return adjacency_matrix(self).sum(axis=1)

    def with_edge(self, u: str, v: str) -> Graph:
        i, j = self.index(u), self.index(v)
        return Graph(self.n, self.edges | {(min(i, j), max(i, j))}, self.labels)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        nbrs = _neighbor_lists(self)
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def _neighbor_lists(g: Graph) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(g.n)]
    for i, j in g.edges:
        out[i].append(j)
        out[j].append(i)
    return out


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Symmetric 0/1 integer matrix with zero diagonal."""
    a = np.zeros((g.n, g.n), dtype=np.int64)
    if g.edges:
        idx = np.array(sorted(g.edges))
        a[idx[:, 0], idx[:, 1]] = 1
        a[idx[:, 1], idx[:, 0]] = 1
    return a


def laplacian(g: Graph) -> np.ndarray:
    a = adjacency_matrix(g)
    return np.diag(a.sum(axis=1)) - a


def neighbors(g: Graph, i: int) -> set[int]:
    if not 0 <= i < g.n:
        raise IndexError(f"vertex {i} out of range for n={g.n}")
    return {b if a == i else a for a, b in g.edges if i in (a, b)}


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``<label> <label>`` lines; labels get indices in first-appearance order.

    ``#`` starts a comment and blank lines are skipped. When ``n`` is given and
    the text names fewer vertices, isolated vertices labelled by the next free
    numerals are appended.
    """
    labels: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected two labels, got {len(parts)}")
        u, v = parts
        if u == v:
            raise EdgeListError(lineno, f"self-loop on {u!r}")
        i = labels.setdefault(u, len(labels))
        j = labels.setdefault(v, len(labels))
        edges.add((min(i, j), max(i, j)))
    if n is not None:
        k = 1
        while len(labels) < n:
            labels.setdefault(str(k), len(labels))
            k += 1
    if not labels:
        raise EdgeListError(0, "no vertices")
    return Graph(len(labels), frozenset(edges), tuple(labels))


def serialize_edge_list(g: Graph) -> str:
    pairs = sorted(tuple(sorted((g.labels[i], g.labels[j]))) for i, j in g.edges)
    return "".join(f"{a} {b}\n" for a, b in pairs)


def trial_rng(master_seed: int, *keys: int | float) -> np.random.Generator:
    """Philox4x64 generator keyed by hashing ``(master_seed, *keys)``.

    Floats enter through their IEEE-754 bit pattern so the stream depends on
    the exact value, never on its decimal formatting.
    """
    words = [int(master_seed) & (2**64 - 1)]
    for k in keys:
        if isinstance(k, float):
            k = struct.unpack("<Q", struct.pack("<d", k))[0]
        words.append(int(k) & (2**64 - 1))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


def erdos_renyi_adjacency(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    iu = np.triu_indices(n, 1)
    a = np.zeros((n, n), dtype=np.int64)
    a[iu] = rng.random(iu[0].size) < p
    return a + a.T


def erdos_renyi_sample(n: int, p: float, seed: int) -> Graph:
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed)
    a = erdos_renyi_adjacency(n, p, rng)
    return from_adjacency(a)


def from_adjacency(a: np.ndarray, labels=None) -> Graph:
    a = np.asarray(a)
    iu, ju = np.nonzero(np.triu(a, 1))
    return Graph(a.shape[0], frozenset(zip(iu.tolist(), ju.tolist())), tuple(labels or ()))
