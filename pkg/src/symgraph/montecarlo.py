"""Erdős–Rényi sweeps: how often G(n, p) has repeated eigenvalues or an eigenvector orthogonal to 1.

Every trial draws its graph from a Philox4x64 stream keyed by
``(master_seed, n, p, trial)``, so results do not depend on the order or
the process in which trials run. The same keyed graph feeds both statistics.
"""
from __future__ import annotations

import html
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import erdos_renyi_adjacency, trial_rng
from .spectral import eigendecompose, has_simple_spectrum, ones_orthogonal_eigenvectors

REPEATED = "repeated"
ORTHOGONAL = "orthogonal"


def _default_p() -> list[float]:
    return [round(0.05 * k, 2) for k in range(21)]


@dataclass
class ExperimentConfig:
    n_values: list[int] = field(default_factory=lambda: list(range(2, 61)))
    p_values: list[float] = field(default_factory=_default_p)
    trials: int = 500
    tolerance: float = 1e-4
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(not 0.0 <= p <= 1.0 for p in self.p_values):
            raise ValueError("p values must lie in [0, 1]")
        if any(n < 1 for n in self.n_values):
            raise ValueError("n values must be positive")

    @classmethod
    def full_scale(cls, **kw) -> ExperimentConfig:
        return cls(n_values=list(range(2, 101)), trials=5000, **kw)


@dataclass
class ProbabilityGrid:
    kind: str
    n_values: list[int]
    p_values: list[float]
    counts: np.ndarray  # shape (len(n_values), len(p_values)), integer
    trials: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.trials

    def probability(self, n: int, p: float) -> float:
        return float(self.probabilities[self.n_values.index(n), self.p_values.index(p)])


def _cell(args) -> tuple[int, int]:
    n, p, trials, tol, seed = args
    rep = orth = 0
    for t in range(trials):
        a = erdos_renyi_adjacency(n, p, trial_rng(seed, n, float(p), t))
        s = eigendecompose(a)
        simple, _ = has_simple_spectrum(s, tol)
        rep += not simple
        orth += bool(ones_orthogonal_eigenvectors(s, tol))
    return rep, orth


def run_experiments(cfg: ExperimentConfig) -> dict[str, ProbabilityGrid]:
    """Both statistics over the whole grid from one pass of sampled graphs."""
    jobs = [(n, p, cfg.trials, cfg.tolerance, cfg.master_seed) for n in cfg.n_values for p in cfg.p_values]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_cell, jobs, chunksize=4))
    else:
        results = [_cell(j) for j in jobs]
    shape = (len(cfg.n_values), len(cfg.p_values))
    counts = np.array(results, dtype=np.int64).reshape(*shape, 2)
    return {
        kind: ProbabilityGrid(kind, list(cfg.n_values), list(cfg.p_values), counts[..., k].copy(), cfg.trials)
        for k, kind in enumerate((REPEATED, ORTHOGONAL))
    }


def run_repeated_eigenvalue_experiment(cfg: ExperimentConfig) -> ProbabilityGrid:
    return run_experiments(cfg)[REPEATED]


def run_orthogonal_eigenvector_experiment(cfg: ExperimentConfig) -> ProbabilityGrid:
    return run_experiments(cfg)[ORTHOGONAL]


def _num(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def grid_csv(grid: ProbabilityGrid) -> str:
    if not grid.n_values or not grid.p_values:
        raise ValueError("empty grid")
    buf = io.StringIO()
    buf.write("n,p,probability,trials\n")
    probs = grid.probabilities
    for i, n in enumerate(grid.n_values):
        for j, p in enumerate(grid.p_values):
            buf.write(f"{n},{_num(p)},{_num(probs[i, j])},{grid.trials}\n")
    return buf.getvalue()


def _color(v: float) -> str:
    # white -> dark red
    r = 255 - int(round(103 * v))
    gb = 255 - int(round(255 * v))
    return f"#{r:02x}{gb:02x}{gb:02x}"


def grid_svg(grid: ProbabilityGrid, title: str | None = None) -> str:
    """Heatmap with n on the x axis, p on the y axis (p increasing upward)."""
    if not grid.n_values or not grid.p_values:
        raise ValueError("empty grid")
    cw, ch = max(4, min(24, 600 // len(grid.n_values))), max(4, min(24, 400 // len(grid.p_values)))
    left, top = 60, 40
    w, h = cw * len(grid.n_values), ch * len(grid.p_values)
    width, height = left + w + 90, top + h + 50
    title = title or f"P({grid.kind}) over G(n, p), {grid.trials} trials"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<text x="{left}" y="20" font-size="13">{html.escape(title)}</text>',
    ]
    probs = grid.probabilities
    for i, n in enumerate(grid.n_values):
        for j, p in enumerate(grid.p_values):
            v = float(probs[i, j])
            x, y = left + i * cw, top + h - (j + 1) * ch
            out.append(
                f'<rect x="{x}" y="{y}" width="{cw}" height="{ch}" fill="{_color(v)}">'
                f"<title>n={n}, p={_num(p)}, probability={_num(v)}</title></rect>"
            )
    out.append(f'<text x="{left + w / 2}" y="{top + h + 35}" text-anchor="middle">n</text>')
    out.append(f'<text x="18" y="{top + h / 2}" text-anchor="middle">p</text>')
    for i in (0, len(grid.n_values) - 1):
        out.append(f'<text x="{left + i * cw + cw / 2}" y="{top + h + 15}" text-anchor="middle">'
                   f"{grid.n_values[i]}</text>")
    for j in (0, len(grid.p_values) - 1):
        out.append(f'<text x="{left - 6}" y="{top + h - j * ch - ch / 2 + 4}" text-anchor="end">'
                   f"{_num(grid.p_values[j])}</text>")
    sx = left + w + 30
    out.append('<g class="scale">')
    for k in range(11):
        v = 1 - k / 10
        out.append(f'<rect x="{sx}" y="{top + k * h / 11:.1f}" width="14" height="{h / 11:.1f}" fill="{_color(v)}"/>')
    out.append(f'<text x="{sx + 18}" y="{top + 9}">1</text>')
    out.append(f'<text x="{sx + 18}" y="{top + h}">0</text>')
    out.append("</g></svg>\n")
    return "\n".join(out)


def emit_grid(grid: ProbabilityGrid, fmt: str) -> str:
    if fmt == "csv":
        return grid_csv(grid)
    if fmt in ("svg", "svg-heatmap"):
        return grid_svg(grid)
    raise ValueError(f"unknown format {fmt!r}")


def metadata(cfg: ExperimentConfig) -> str:
    meta = {
        "config": {k: v for k, v in asdict(cfg).items() if k != "workers"},
        "generator": "numpy Philox4x64, SeedSequence(master_seed, n, bits(p), trial)",
        "tolerance_semantics": "absolute: eigenvalue gap <= tol counts as repeated; "
                               "|v.T 1| <= tol on unit eigenvectors counts as orthogonal",
        "repeated_eigenvalue_handling": "a repeated eigenvalue of multiplicity k contributes k-1 "
                                        "orthogonal eigenvectors (k if 1 is orthogonal to the whole "
                                        "eigenspace), so graphs with repeated eigenvalues always count "
                                        "toward the orthogonal statistic",
        "p_grid_note": "p resolution is an input; the default grid uses steps of 0.05",
    }
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"
