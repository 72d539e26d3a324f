"""Single-leader consensus networks: follower matrix, controllability tests, simulation.

The followers obey ``x_f' = -L_f x_f + delta * u`` with ``L_f = L(G_f) + diag(delta)``
and ``delta[i] = 1`` iff follower ``i`` is adjacent to the leader.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .automorphism import (
    AutomorphismCertificate,
    certify,
    find_automorphisms,
    find_swap,
    find_two_cycle_automorphism,
    iter_automorphisms,
)
from .graph import Graph, EdgeListError, laplacian, parse_edge_list
from .permutation import Permutation, permutation_matrix
from .spectral import eigendecompose, has_simple_spectrum, ones_orthogonal_eigenvectors

DEFAULT_TOL = 1e-6
KALMAN_MAX_N = 30


@dataclass(frozen=True)
class LeaderFollowerSystem:
    follower_graph: Graph
    leader_adjacency: tuple[int, ...]

    def __post_init__(self) -> None:
        delta = tuple(int(x) for x in self.leader_adjacency)
        if len(delta) != self.follower_graph.n or any(x not in (0, 1) for x in delta):
            raise ValueError("leader adjacency must be a 0/1 vector with one entry per follower")
        if not any(delta):
            raise ValueError("leader connected to nothing")
        object.__setattr__(self, "leader_adjacency", delta)

    @classmethod
    def with_leader(cls, g: Graph, labels: Sequence[str]) -> LeaderFollowerSystem:
        idx = {g.index(lab) for lab in labels}
        return cls(g, tuple(int(i in idx) for i in range(g.n)))

    @property
    def n(self) -> int:
        return self.follower_graph.n

    @property
    def delta(self) -> np.ndarray:
        return np.array(self.leader_adjacency, dtype=np.int64)

    @property
    def followers_connected(self) -> bool:
        return self.follower_graph.is_connected()

    def leader_labels(self) -> list[str]:
        return [self.follower_graph.labels[i] for i, d in enumerate(self.leader_adjacency) if d]


def parse_system(text: str) -> LeaderFollowerSystem:
    """Follower edge list plus one ``leader: a b ...`` line."""
    edges, leader, leader_line = [], None, 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body.lower().startswith("leader:"):
            if leader is not None:
                raise EdgeListError(lineno, "duplicate leader line")
            leader, leader_line = body.split(":", 1)[1].split(), lineno
            edges.append("")
        else:
            edges.append(raw)
    if leader is None:
        raise EdgeListError(0, "missing 'leader:' line")
    g = parse_edge_list("\n".join(edges))
    try:
        return LeaderFollowerSystem.with_leader(g, leader)
    except KeyError as exc:
        raise EdgeListError(leader_line, str(exc.args[0])) from None
    except ValueError as exc:
        raise EdgeListError(leader_line, str(exc)) from None


def build_lf(sys: LeaderFollowerSystem) -> np.ndarray:
    return laplacian(sys.follower_graph) + np.diag(sys.delta)


@dataclass
class ControllabilityVerdict:
    controllable: bool
    method: str
    witnesses: list = field(default_factory=list)
    repeated_spectrum: bool = False
    rank: int | None = None
    leader_disconnected: bool = False

    def to_dict(self) -> dict:
        d = {"controllable": self.controllable, "method": self.method,
             "repeated_spectrum": self.repeated_spectrum}
        if self.method == "spectral":
            d["witnesses"] = [{"index": w.index, "eigenvalue": w.eigenvalue, "abs_dot_ones": w.dot}
                              for w in self.witnesses]
            d["leader_disconnected"] = self.leader_disconnected
        else:
            d["rank"] = self.rank
        return d


def is_controllable_spectral(sys: LeaderFollowerSystem, tol: float = DEFAULT_TOL) -> ControllabilityVerdict:
    """Controllable iff L_f has a simple spectrum and no eigenvector orthogonal to 1.

    A follower component that does not reach the leader makes L_f singular;
    its null vector is orthogonal to delta but not to 1, so a zero eigenvalue
    is reported as uncontrollable on its own.
    """
    s = eigendecompose(build_lf(sys))
    simple, _ = has_simple_spectrum(s, tol)
    witnesses = ones_orthogonal_eigenvectors(s, tol)
    cut_off = bool(s.eigenvalues[0] <= tol)
    ok = simple and not witnesses and not cut_off
    return ControllabilityVerdict(ok, "spectral", witnesses, not simple, leader_disconnected=cut_off)


def kalman_matrix(sys: LeaderFollowerSystem) -> list[list[int]]:
    """Integer columns ``delta, L_f delta, ..., L_f^(n-1) delta`` as row lists."""
    lf = [[int(x) for x in row] for row in build_lf(sys)]
    col = [int(x) for x in sys.leader_adjacency]
    cols = []
    for _ in range(sys.n):
        cols.append(col)
        col = [sum(a * b for a, b in zip(row, col)) for row in lf]
    return [list(r) for r in zip(*cols)]


def is_controllable_kalman(sys: LeaderFollowerSystem) -> ControllabilityVerdict:
    """Kalman rank test, rank taken exactly over the integers."""
    if sys.n > KALMAN_MAX_N:
        raise ValueError(f"Kalman test limited to n_f <= {KALMAN_MAX_N}, got {sys.n}")
    r = int(DomainMatrix.from_list(kalman_matrix(sys), ZZ).rank())
    return ControllabilityVerdict(r == sys.n, "kalman", rank=r)


def _commutes(sys: LeaderFollowerSystem, p: Permutation) -> bool:
    lf = build_lf(sys)
    pm = permutation_matrix(p)
    return bool(np.array_equal(pm @ lf, lf @ pm))


def is_leader_symmetric(sys: LeaderFollowerSystem) -> tuple[bool, AutomorphismCertificate | None]:
    """A nontrivial follower automorphism that keeps the leader's neighbor set."""
    g = sys.follower_graph
    cert = find_two_cycle_automorphism(g, vertex_colors=sys.leader_adjacency)
    if cert is None:
        rest = find_automorphisms(g, limit=1, vertex_colors=sys.leader_adjacency)[1:]
        cert = rest[0] if rest else None
    if cert is None:
        return False, None
    if not _commutes(sys, cert.permutation):
        raise AssertionError("leader-preserving automorphism does not commute with L_f")
    return True, cert


@dataclass
class Lemma4Result:
    applicable: bool
    predicts_uncontrollable: bool
    pairs: list[tuple[int, int]]
    certificate: AutomorphismCertificate | None
    explanation: str


def lemma4_check(sys: LeaderFollowerSystem) -> Lemma4Result:
    """Leader adjacent to both ends of corresponding pairs under a 2-cycle automorphism.

    Requires full invariance of delta under the automorphism; partial
    invariance is left to the spectral and Kalman tests.
    """
    g = sys.follower_graph
    labels = g.labels
    if find_two_cycle_automorphism(g) is None:
        return Lemma4Result(False, False, [], None,
                            "follower graph has no automorphism with a 2-cycle; not applicable")
    delta = sys.leader_adjacency
    for p in _lemma4_candidates(g, delta):
        cert = certify(g, p)
        pairs = [c for c in cert.two_cycles if delta[c[0]] and delta[c[1]]]
        named = ", ".join("{" + f"{labels[a]}, {labels[b]}" + "}" for a, b in pairs)
        return Lemma4Result(True, True, pairs, cert,
                            f"leader adjacent to both vertices of {named} under "
                            f"{cert.cycle_notation(labels)}; system is uncontrollable")
    return Lemma4Result(True, False, [], None,
                        "no 2-cycle automorphism keeps the leader's neighbors and moves one of them")


def _lemma4_candidates(g: Graph, delta: Sequence[int], budget: int = 10_000):
    led = [i for i in range(g.n) if delta[i]]
    for a, v in enumerate(led):
        for w in led[a + 1:]:
            p = find_swap(g, v, w, vertex_colors=delta)
            if p is not None:
                yield p
                return
    # a leader neighbor may sit on a longer cycle while the 2-cycles lie elsewhere
    for k, p in enumerate(iter_automorphisms(g, vertex_colors=delta)):
        if k >= budget:
            return
        if certify(g, p).two_cycles and any(p[i] != i for i in led):
            yield p
            return


def simulate(sys: LeaderFollowerSystem, u, x0, dt: float, steps: int,
             leaderless: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 trajectory of the follower states.

    ``u`` is a scalar or one sample per step, held constant over the step.
    With ``leaderless=True`` the leader link is dropped and the followers run
    plain agreement dynamics ``x' = -L x``. Returns ``(times, states)`` with
    ``steps + 1`` rows.
    """
    if leaderless:
        m = laplacian(sys.follower_graph).astype(float)
        b = np.zeros(sys.n)
    else:
        m = build_lf(sys).astype(float)
        b = sys.delta.astype(float)
    limit = 1.0 / (2.0 * max(float(np.max(np.diag(m))), 1.0))
    if not 0 < dt < limit:
        raise ValueError(f"dt must lie in (0, {limit:g}) for this system, got {dt}")
    us = np.broadcast_to(np.asarray(u, dtype=float), (steps,))
    x = np.array(x0, dtype=float)
    if x.shape != (sys.n,):
        raise ValueError(f"x0 must have {sys.n} entries")
    out = np.empty((steps + 1, sys.n))
    out[0] = x
    for k in range(steps):
        f = lambda y: -m @ y + b * us[k]  # noqa: E731
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = x
    return dt * np.arange(steps + 1), out


def trajectory_csv(sys: LeaderFollowerSystem, times: np.ndarray, states: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(",".join(["t", *sys.follower_graph.labels]) + "\n")
    for t, row in zip(times, states):
        buf.write(",".join(repr(float(v)) for v in (t, *row)) + "\n")
    return buf.getvalue()
