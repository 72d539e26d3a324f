from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symgraph.controllability import (
    KALMAN_MAX_N,
    LeaderFollowerSystem,
    build_lf,
    is_controllable_kalman,
    is_controllable_spectral,
    is_leader_symmetric,
    kalman_matrix,
    lemma4_check,
    parse_system,
    simulate,
    trajectory_csv,
)
from symgraph.datasets import fig4_graph, fig5_graph, random_symmetric_graph
from symgraph.graph import EdgeListError, Graph
from symgraph.spectral import eigendecompose, ones_orthogonal_eigenvectors

FIG5_LF_LEADER_1 = np.array([
    [2, -1, 0, 0, 0, 0],
    [-1, 3, -1, 0, -1, 0],
    [0, -1, 2, -1, 0, 0],
    [0, 0, -1, 2, -1, 0],
    [0, -1, 0, -1, 3, -1],
    [0, 0, 0, 0, -1, 1],
])


def fig5(*leaders):
    return LeaderFollowerSystem.with_leader(fig5_graph().graph, [str(x) for x in leaders])


def systems(max_n=7):
    def build(n):
        pairs = list(itertools.combinations(range(n), 2))
        return st.tuples(
            st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)),
            st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(any),
        ).map(lambda t: LeaderFollowerSystem(Graph(n, frozenset(e for e, b in zip(pairs, t[0]) if b)), tuple(t[1])))
    return st.integers(1, max_n).flatmap(build)


def test_fig5_lf():
    assert np.array_equal(build_lf(fig5(1)), FIG5_LF_LEADER_1)
    lf = build_lf(fig5(1, 6))
    assert lf[5, 5] == 2 and lf[0, 0] == 2


def test_single_follower():
    s = LeaderFollowerSystem(Graph(1), (1,))
    assert np.array_equal(build_lf(s), [[1]])
    assert is_controllable_spectral(s).controllable and is_controllable_kalman(s).controllable


def test_leader_needs_a_neighbor():
    with pytest.raises(ValueError, match="leader connected to nothing"):
        LeaderFollowerSystem(Graph(2, frozenset({(0, 1)})), (0, 0))


def test_fig5_controllability():
    sym = fig5(1, 6)
    assert not is_controllable_spectral(sym).controllable
    assert is_controllable_kalman(sym).rank == 3
    one = fig5(1)
    assert is_controllable_spectral(one).controllable
    assert is_controllable_kalman(one).rank == 6


def test_disconnected_followers_uncontrollable():
    # two isolated followers each tied to the leader: identical rows, rank 1
    s = LeaderFollowerSystem(Graph(2), (1, 1))
    assert not is_controllable_kalman(s).controllable
    assert not is_controllable_spectral(s).controllable
    # a follower component out of the leader's reach
    s = LeaderFollowerSystem(Graph(3, frozenset({(1, 2)})), (1, 0, 0))
    v = is_controllable_spectral(s)
    assert not v.controllable and v.leader_disconnected
    assert not is_controllable_kalman(s).controllable


def test_leader_symmetry():
    ok, cert = is_leader_symmetric(fig5(1, 6))
    assert ok and cert.cycle_notation(fig5_graph().graph.labels) == "(1 6)(2 5)(3 4)"
    assert is_leader_symmetric(fig5(1)) == (False, None)


def test_pair_swap_check():
    g = fig4_graph().graph
    r = lemma4_check(LeaderFollowerSystem.with_leader(g, ["2", "5"]))
    assert r.applicable and r.predicts_uncontrollable
    assert [(g.labels[a], g.labels[b]) for a, b in r.pairs] == [("2", "5")]
    r = lemma4_check(LeaderFollowerSystem.with_leader(g, ["2"]))
    assert r.applicable and not r.predicts_uncontrollable
    asym = Graph.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (3, 6)], one_based=True)
    assert not lemma4_check(LeaderFollowerSystem(asym, (1, 0, 0, 0, 0, 0))).applicable


@settings(max_examples=400, deadline=None)
@given(systems())
def test_spectral_matches_kalman(s):
    assert is_controllable_spectral(s).controllable == is_controllable_kalman(s).controllable


@settings(max_examples=200, deadline=None)
@given(systems())
def test_leader_symmetry_and_pair_swap_imply_uncontrollable(s):
    if lemma4_check(s).predicts_uncontrollable:
        assert not is_controllable_kalman(s).controllable
    ok, cert = is_leader_symmetric(s)
    if ok and cert.two_cycles:
        assert not is_controllable_spectral(s).controllable


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(0, 5), st.floats(0.1, 0.9), st.integers(0, 2**31), st.data())
def test_mirror_systems(h, anchors, p, seed, data):
    g = random_symmetric_graph(h, anchors, p, seed).graph
    # leader on both mirrored halves symmetrically, plus any anchors
    half = data.draw(st.lists(st.integers(0, 1), min_size=h, max_size=h).filter(any))
    tail = data.draw(st.lists(st.integers(0, 1), min_size=anchors, max_size=anchors))
    s = LeaderFollowerSystem(g, tuple(half + half + tail))
    assert lemma4_check(s).predicts_uncontrollable
    assert not is_controllable_spectral(s).controllable
    assert not is_controllable_kalman(s).controllable


@settings(max_examples=100, deadline=None)
@given(systems())
def test_row_sums_equal_delta(s):
    assert np.array_equal(build_lf(s).sum(axis=1), s.delta)
    assert np.array_equal(np.array(kalman_matrix(s))[:, 0], s.delta)


def test_parse_system():
    s = parse_system("1 2\n2 3\nleader: 1 3\n")
    assert s.leader_labels() == ["1", "3"]
    with pytest.raises(EdgeListError) as exc:
        parse_system("1 2\nleader:\n")
    assert exc.value.line == 2
    with pytest.raises(EdgeListError):
        parse_system("1 2\n")
    with pytest.raises(EdgeListError):
        parse_system("1 2\nleader: 9\n")


def test_kalman_size_limit():
    n = KALMAN_MAX_N + 1
    g = Graph(n, frozenset((i, i + 1) for i in range(n - 1)))
    with pytest.raises(ValueError):
        is_controllable_kalman(LeaderFollowerSystem(g, (1,) + (0,) * (n - 1)))


def test_leaderless_mean_conserved():
    s = fig5(1)
    x0 = np.arange(6, dtype=float)
    _, xs = simulate(s, 0.0, x0, 0.05, 400, leaderless=True)
    assert np.allclose(xs.mean(axis=1), x0.mean(), atol=1e-6)
    assert np.ptp(xs[-1]) < 1e-3


def test_followers_track_leader():
    s = fig5(1)
    _, xs = simulate(s, 1.0, np.zeros(6), 0.05, 4000)
    assert np.allclose(xs[-1], 1.0, atol=1e-3)


def test_orthogonal_mode_invisible_to_leader():
    # along an eigenvector orthogonal to delta the state decays without input influence
    s = fig5(1, 6)
    e = eigendecompose(build_lf(s))
    w = ones_orthogonal_eigenvectors(eigendecompose(np.array(build_lf(s), dtype=float)), 1e-6)
    assert w
    v = e.eigenvectors[:, w[0].index]
    assert abs(v @ s.delta) < 1e-9
    dt, steps = 0.01, 300
    t, xs = simulate(s, 1.0, np.zeros(6), dt, steps)
    proj = xs @ v
    assert np.allclose(proj, 0.0, atol=1e-4)
    _, xs = simulate(s, 0.0, v, dt, steps)
    assert np.allclose(xs[-1] @ v, np.exp(-w[0].eigenvalue * t[-1]), atol=1e-4)


def test_simulate_rejects_bad_step():
    with pytest.raises(ValueError):
        simulate(fig5(1), 1.0, np.zeros(6), 1.0, 10)


def test_trajectory_csv():
    s = fig5(1)
    t, xs = simulate(s, 1.0, np.zeros(6), 0.1, 2)
    lines = trajectory_csv(s, t, xs).splitlines()
    assert lines[0] == "t,1,2,3,4,5,6" and len(lines) == 4
    assert lines[1].split(",")[0] == "0.0"
