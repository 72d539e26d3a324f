from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symgraph.automorphism import (
    brute_force_automorphisms,
    certify,
    distortion,
    find_automorphisms,
    find_swap,
    find_two_cycle_automorphism,
    is_automorphism,
    is_symmetric_graph,
    max_minus_one_multiplicity,
    subgraphs_of_symmetry,
)
from symgraph.datasets import contiguous_usa_graph, fig4_graph, fig5_graph, mirror_permutation, random_symmetric_graph
from symgraph.graph import Graph, adjacency_matrix, laplacian
from symgraph.permutation import Permutation, permutation_matrix


def graphs(max_n=7):
    def build(n):
        pairs = list(itertools.combinations(range(n), 2))
        return st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)).map(
            lambda bits: Graph(n, frozenset(e for e, b in zip(pairs, bits) if b)))
    return st.integers(1, max_n).flatmap(build)


def path(n):
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def test_path_examples():
    g = path(3)
    assert not is_automorphism(g, Permutation([1, 0, 2]))
    assert is_automorphism(g, Permutation([2, 1, 0]))
    a = adjacency_matrix(g)
    assert distortion(a, a, Permutation([1, 0, 2])) == pytest.approx(2.0)
    assert distortion(a, a, Permutation([2, 1, 0])) == 0.0


def test_size_mismatch():
    with pytest.raises(ValueError):
        is_automorphism(path(3), Permutation([1, 0]))
    with pytest.raises(ValueError):
        distortion(np.zeros((3, 3)), np.zeros((3, 3)), Permutation([1, 0]))


def test_triangle_has_transposition():
    k3 = Graph(3, frozenset({(0, 1), (0, 2), (1, 2)}))
    cert = find_two_cycle_automorphism(k3)
    assert cert.verified and cert.even_cycle_count == 1
    assert len(find_automorphisms(k3)) == 6


def test_fig5_group():
    g = fig5_graph().graph
    certs = find_automorphisms(g)
    assert [c.cycle_notation(g.labels) for c in certs] == ["()", "(1 6)(2 5)(3 4)"]
    ok, cert = is_symmetric_graph(g)
    assert ok and cert.even_cycle_count == 3 and max_minus_one_multiplicity(g) == 3


def test_fig4_subgraphs():
    g = fig4_graph().graph
    ok, cert = is_symmetric_graph(g)
    assert ok and cert.cycle_notation(g.labels) == "(1 6)(2 5)(3 4)"
    sub = subgraphs_of_symmetry(g, cert)
    assert [[g.labels[v] for v in b] for b in sub.blocks] == [["1", "2", "3"], ["4", "5", "6"]]
    assert sub.block_pairs == [(0, 1)]
    assert [g.labels[v] for v in sub.anchor_set] == ["7", "8", "9"]
    assert sub.other_moved == ()


def test_k2_blocks():
    g = Graph(2, frozenset({(0, 1)}))
    sub = subgraphs_of_symmetry(g, find_two_cycle_automorphism(g))
    assert sub.blocks == [(0,), (1,)] and sub.block_pairs == [(0, 1)] and sub.anchor_set == ()


def test_usa_symmetry():
    assert not is_symmetric_graph(contiguous_usa_graph().graph)[0]
    g = contiguous_usa_graph(with_me_ri_edge=True).graph
    certs = find_automorphisms(g)
    assert len(certs) == 2
    cert = certs[1]
    assert sorted(tuple(sorted(g.labels[v] for v in c)) for c in cert.two_cycles) == [("CT", "VT"), ("NH", "RI")]
    sub = subgraphs_of_symmetry(g, cert)
    named = sorted(tuple(g.labels[v] for v in b) for b in sub.blocks)
    assert sorted(map(sorted, named)) == [["CT", "RI"], ["NH", "VT"]]
    touching = {g.labels[w] for b in sub.blocks for v in b for w in range(g.n)
                if (min(v, w), max(v, w)) in g.edges and w in sub.anchor_set}
    assert touching == {"NY", "MA", "ME"}


def test_unverified_certificate_rejected():
    g = path(3)
    with pytest.raises(ValueError):
        subgraphs_of_symmetry(g, certify(g, Permutation([1, 0, 2])))


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_search_matches_brute_force(g):
    assert [c.permutation for c in find_automorphisms(g)] == brute_force_automorphisms(g)


@settings(max_examples=200, deadline=None)
@given(graphs(), st.data())
def test_colored_search_matches_brute_force(g, data):
    colors = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    got = [c.permutation for c in find_automorphisms(g, vertex_colors=colors)]
    assert got == brute_force_automorphisms(g, vertex_colors=colors)


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_two_cycle_exists_iff_group_order_even(g):
    group = brute_force_automorphisms(g)
    cert = find_two_cycle_automorphism(g)
    assert (cert is not None) == (len(group) % 2 == 0)
    if cert is not None:
        assert cert.verified and cert.two_cycles and cert.permutation.power(2).is_identity()
    # no graph on at most 7 vertices has a nontrivial odd-order group
    assert (cert is not None) == (len(group) > 1)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_automorphism_properties(g):
    a, lap = adjacency_matrix(g), laplacian(g)
    deg = g.degrees()
    for p in brute_force_automorphisms(g):
        pm = permutation_matrix(p)
        assert all(deg[i] == deg[p[i]] for i in range(g.n))
        assert np.array_equal(pm @ lap, lap @ pm)
        assert distortion(a, a, p) == 0.0


@settings(max_examples=200, deadline=None)
@given(graphs(6), st.data())
def test_distortion_zero_iff_automorphism(g, data):
    p = Permutation(data.draw(st.permutations(range(g.n))))
    d = distortion(adjacency_matrix(g), adjacency_matrix(g), p)
    assert (d == 0.0) == is_automorphism(g, p)
    assert d == pytest.approx(math.sqrt(round(d * d)))


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_subgraph_invariants(g):
    cert = find_two_cycle_automorphism(g)
    if cert is None:
        return
    sub = subgraphs_of_symmetry(g, cert)
    p = cert.permutation
    moved = {v for b in sub.blocks for v in b}
    assert moved.isdisjoint(sub.anchor_set)
    assert moved | set(sub.anchor_set) | set(sub.other_moved) == set(range(g.n))
    for k, m in sub.block_pairs:
        assert sorted(p[v] for v in sub.blocks[k]) == list(sub.blocks[m])
    assert sorted(v for km in sub.block_pairs for k in set(km) for v in sub.blocks[k]) == sorted(moved)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.floats(0.05, 0.95), st.integers(0, 2**31))
def test_mirror_swap_found(h, anchors, p, seed):
    ds = random_symmetric_graph(h, anchors, p, seed)
    assert is_automorphism(ds.graph, mirror_permutation(h, anchors))
    assert find_swap(ds.graph, 0, h) is not None
    assert is_symmetric_graph(ds.graph)[0]


def test_brute_force_cap():
    with pytest.raises(ValueError):
        brute_force_automorphisms(path(11))
