"""Bundled example graphs and a generator of graphs with a known mirror symmetry."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

from .graph import Graph, parse_edge_list, trial_rng

USA_SHA256 = "927b68d124df120575367edc3473480a3a08817e1e5de67918bec86968e9d817"

FIG5_EDGES = [(1, 2), (2, 3), (3, 4), (4, 5), (2, 5), (5, 6)]
FIG4_EDGES = [(1, 2), (1, 3), (2, 3), (2, 5), (3, 4), (4, 5), (4, 6), (5, 6),
              (3, 7), (4, 7), (7, 8), (8, 9)]


class DatasetError(RuntimeError):
    pass


@dataclass(frozen=True)
class NamedDataset:
    name: str
    graph: Graph
    provenance: str
    expected_vertices: int
    expected_edges: int

    def validate(self) -> NamedDataset:
        if (self.graph.n, self.graph.edge_count) != (self.expected_vertices, self.expected_edges):
            raise DatasetError(
                f"{self.name}: expected {self.expected_vertices} vertices / {self.expected_edges} edges, "
                f"found {self.graph.n} / {self.graph.edge_count}"
            )
        return self


def fig5_graph() -> NamedDataset:
    g = Graph.from_edges(6, FIG5_EDGES, one_based=True)
    return NamedDataset("fig5", g, "six-vertex symmetric follower graph, edges transcribed from the figure", 6, 6).validate()


def fig4_graph() -> NamedDataset:
    g = Graph.from_edges(9, FIG4_EDGES, one_based=True)
    return NamedDataset("fig4", g, "nine-vertex graph with two triangle subgraphs of symmetry", 9, 12).validate()


def _usa_text() -> str:
    raw = resources.files("symgraph").joinpath("data/contiguous_usa.txt").read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != USA_SHA256:
        raise DatasetError(f"contiguous_usa.txt checksum mismatch: {digest}")
    return raw.decode("utf-8")


def contiguous_usa_graph(with_me_ri_edge: bool = False) -> NamedDataset:
    base = NamedDataset("usa", parse_edge_list(_usa_text()),
                        "contiguous USA graph (48 states + DC, drivable-road adjacency)", 49, 107).validate()
    if not with_me_ri_edge:
        return base
    g = base.graph.with_edge("ME", "RI")
    return NamedDataset("usa-me-ri", g, "contiguous USA graph plus an ME-RI edge", 49, 108).validate()


def random_symmetric_graph(n_half: int, anchor_count: int, p: float, seed: int,
                           pair_p: float | None = None) -> NamedDataset:
    """Two mirrored random blocks hanging identically off a random anchor graph.

    Vertex ``i`` of the first block (0-based ``0..n_half-1``) mirrors
    ``i + n_half``; anchors follow. Each block edge, block-to-anchor edge and
    anchor edge is drawn with probability ``p`` and copied to the mirror side;
    each mirror pair ``(i, i + n_half)`` is joined with probability ``pair_p``
    (defaults to ``p``). Swapping the blocks is always an automorphism.
    """
    if n_half < 1 or anchor_count < 0:
        raise ValueError("need n_half >= 1 and anchor_count >= 0")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    pair_p = p if pair_p is None else pair_p
    rng = trial_rng(seed, n_half, anchor_count, float(p))
    h, n = n_half, 2 * n_half + anchor_count
    edges = set()
    for i in range(h):
        for j in range(i + 1, h):
            if rng.random() < p:
                edges |= {(i, j), (i + h, j + h)}
        for a in range(2 * h, n):
            if rng.random() < p:
                edges |= {(i, a), (i + h, a)}
        if rng.random() < pair_p:
            edges.add((i, i + h))
    for a in range(2 * h, n):
        for b in range(a + 1, n):
            if rng.random() < p:
                edges.add((a, b))
    g = Graph(n, frozenset(edges))
    name = f"mirror(h={n_half},anchors={anchor_count},p={p},seed={seed})"
    return NamedDataset(name, g, "generated: block swap is an automorphism by construction", n, len(g.edges))


def mirror_permutation(n_half: int, anchor_count: int):
    from .permutation import Permutation

    h = n_half
    return Permutation([i + h for i in range(h)] + list(range(h)) + list(range(2 * h, 2 * h + anchor_count)))


DATASETS = {
    "fig4": fig4_graph,
    "fig5": fig5_graph,
    "usa": lambda: contiguous_usa_graph(False),
    "usa-me-ri": lambda: contiguous_usa_graph(True),
}


def load(name: str) -> NamedDataset:
    try:
        return DATASETS[name]()
    except KeyError:
        raise KeyError(f"unknown dataset {name!r}; choose from {', '.join(sorted(DATASETS))}") from None
