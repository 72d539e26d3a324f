"""Symmetric eigendecomposition and friendliness classification of adjacency matrices.

A graph is friendly when its adjacency matrix has a simple spectrum and none
of its unit eigenvectors is orthogonal to the all-ones vector. Both tests use
an absolute tolerance, applied to eigenvalue gaps and to ``|v.T @ 1|`` of
unit-norm eigenvectors.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .graph import Graph, adjacency_matrix

DEFAULT_TOL = 1e-4


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def ones_projections(self) -> np.ndarray:
        """``U.T @ 1``, one entry per eigenvector column."""
        return self.eigenvectors.sum(axis=0)


class Witness(NamedTuple):
    index: int
    eigenvalue: float
    dot: float  # |v.T @ 1| of the (possibly rotated) unit eigenvector


class Verdict(str, enum.Enum):
    FRIENDLY = "Friendly"
    REPEATED = "UnfriendlyRepeatedEigenvalues"
    ORTHOGONAL = "UnfriendlyOrthogonalEigenvector"


@dataclass
class FriendlinessReport:
    verdict: Verdict
    min_eigengap: float
    orthogonal_witnesses: list[Witness]
    tolerance_used: float
    eigenvalues: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "min_eigengap": self.min_eigengap if np.isfinite(self.min_eigengap) else None,
            "tolerance": self.tolerance_used,
            "eigenvalues": [round(float(x), 6) for x in self.eigenvalues],
            "witnesses": [
                {"index": w.index, "eigenvalue": round(w.eigenvalue, 6), "abs_dot_ones": w.dot}
                for w in self.orthogonal_witnesses
            ],
        }


def _fix_signs(u: np.ndarray) -> np.ndarray:
    # largest-magnitude entry positive; near-ties go to the lowest index
    mags = np.abs(u)
    top = mags.max(axis=0)
    pivot = np.argmax(mags >= top - 1e-12 * np.maximum(top, 1.0), axis=0)
    signs = np.sign(u[pivot, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs


def eigendecompose(m) -> SpectralDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.T)) > 1e-12:
        raise ValueError("matrix is not symmetric")
    w, u = np.linalg.eigh(a)
    u = _fix_signs(u)
    residual = float(np.max(np.linalg.norm(a @ u - u * w, axis=0))) if w.size else 0.0
    return SpectralDecomposition(w, u, residual)


def min_gap(s: SpectralDecomposition) -> float:
    return float(np.min(np.diff(s.eigenvalues))) if s.n > 1 else float("inf")


def has_simple_spectrum(s: SpectralDecomposition, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    gap = min_gap(s)
    return gap > tol, gap


def eigenvalue_clusters(s: SpectralDecomposition, tol: float = DEFAULT_TOL) -> list[list[int]]:
    """Group indices whose consecutive sorted eigenvalues differ by at most ``tol``."""
    clusters: list[list[int]] = []
    for i, lam in enumerate(s.eigenvalues):
        if clusters and lam - s.eigenvalues[clusters[-1][-1]] <= tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def ones_orthogonal_eigenvectors(s: SpectralDecomposition, tol: float = DEFAULT_TOL) -> list[Witness]:
    """Eigenvectors orthogonal to the all-ones vector, within ``tol``.

    For a repeated eigenvalue of multiplicity k the individual eigenvectors are
    basis dependent, so the eigenspace is rotated: one basis vector is aligned
    with the projection of 1 onto it (if that projection exceeds ``tol``) and
    the remaining ``k - 1`` (or all ``k``) are reported as witnesses.
    """
    ones = np.ones(s.n)
    out = []
    for cl in eigenvalue_clusters(s, tol):
        basis = s.eigenvectors[:, cl]
        coeffs = basis.T @ ones
        lam = float(np.mean(s.eigenvalues[cl]))
        if len(cl) == 1:
            if abs(coeffs[0]) <= tol:
                out.append(Witness(cl[0], float(s.eigenvalues[cl[0]]), float(abs(coeffs[0]))))
            continue
        proj = float(np.linalg.norm(coeffs))
        skip = 1 if proj > tol else 0
        for i in cl[skip:]:
            out.append(Witness(i, lam, 0.0 if skip else proj))
    return out


def rotated_witness_vectors(s: SpectralDecomposition, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unit eigenvectors orthogonal to 1, one column per witness."""
    ones = np.ones(s.n)
    cols = []
    for cl in eigenvalue_clusters(s, tol):
        basis = s.eigenvectors[:, cl]
        coeffs = basis.T @ ones
        if len(cl) == 1:
            if abs(coeffs[0]) <= tol:
                cols.append(basis[:, 0])
            continue
        if np.linalg.norm(coeffs) > tol:
            # orthonormal complement of the projection direction inside the eigenspace
            q, _ = np.linalg.qr(np.column_stack([coeffs, np.eye(len(cl))]))
            cols.extend((basis @ q[:, 1:len(cl)]).T)
        else:
            cols.extend(basis.T)
    return np.array(cols).T if cols else np.zeros((s.n, 0))


def classify_matrix(a, tol: float = DEFAULT_TOL) -> FriendlinessReport:
    s = eigendecompose(a)
    simple, gap = has_simple_spectrum(s, tol)
    witnesses = ones_orthogonal_eigenvectors(s, tol)
    if not simple:
        verdict = Verdict.REPEATED
    elif witnesses:
        verdict = Verdict.ORTHOGONAL
    else:
        verdict = Verdict.FRIENDLY
    return FriendlinessReport(verdict, gap, witnesses, tol, s.eigenvalues)


def classify_friendliness(g: Graph, tol: float = DEFAULT_TOL) -> FriendlinessReport:
    return classify_matrix(adjacency_matrix(g), tol)
