"""Command-line front end.

Exit codes: 0 analysis complete, 1 input error, 2 internal inconsistency
(spectral and Kalman verdicts disagree).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import datasets
from .automorphism import (
    find_automorphisms,
    find_two_cycle_automorphism,
    is_symmetric_graph,
    max_minus_one_multiplicity,
    subgraphs_of_symmetry,
)
from .controllability import (
    LeaderFollowerSystem,
    build_lf,
    is_controllable_kalman,
    is_controllable_spectral,
    is_leader_symmetric,
    lemma4_check,
    parse_system,
    simulate,
    trajectory_csv,
)
from .graph import EdgeListError, Graph, parse_edge_list, serialize_edge_list
from .montecarlo import ORTHOGONAL, REPEATED, ExperimentConfig, emit_grid, metadata, run_experiments
from .permutation import Permutation, count_even_cycles, cycle_decomposition, minus_one_eigenvector, permutation_matrix
from .spectral import classify_friendliness


class InputError(Exception):
    pass


class Inconsistency(Exception):
    pass


def _load_graph(args) -> tuple[str, Graph]:
    if args.dataset:
        try:
            return args.dataset, datasets.load(args.dataset).graph
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    if not args.path:
        raise InputError("give an edge-list path or --dataset NAME")
    try:
        text = Path(args.path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{args.path}: {exc.strerror}") from None
    try:
        return args.path, parse_edge_list(text, n=args.n)
    except EdgeListError as exc:
        raise InputError(f"{args.path}: {exc}") from None


def _emit(args, lines: list[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _matrix_lines(m: np.ndarray) -> list[str]:
    width = max(len(str(int(x))) for x in m.flat)
    return ["  [" + " ".join(f"{int(x):>{width}}" for x in row) + "]" for row in m]


def analyze_report(name: str, g: Graph, tol: float) -> tuple[list[str], dict]:
    rep = classify_friendliness(g, tol)
    sym, cert = is_symmetric_graph(g)
    k = len(rep.orthogonal_witnesses)
    summary = rep.verdict.value + (f", {k} witnesses" if k else "") + f", symmetric: {'yes' if sym else 'no'}"
    if sym:
        summary += f", automorphism {cert.cycle_notation(g.labels)}"
    lines = [
        summary,
        f"graph: {name} ({g.n} vertices, {g.edge_count} edges)",
        f"verdict: {rep.verdict.value}",
        "eigenvalues: " + " ".join(f"{x:.6f}" for x in rep.eigenvalues),
        f"min eigengap: {rep.min_eigengap:.6g} (tol {tol:g})",
        f"orthogonal witnesses: {k}",
    ]
    lines += [f"  index {w.index}: eigenvalue {w.eigenvalue:.6f}, |v.1| = {w.dot:.3g}" for w in rep.orthogonal_witnesses]
    lines.append(f"symmetric: {'yes' if sym else 'no'}")
    if sym:
        lines.append(f"automorphism: {cert.cycle_notation(g.labels)}")
    payload = rep.to_dict()
    payload.update(graph=name, symmetric=sym, automorphism=cert.cycle_notation(g.labels) if sym else None,
                   summary=summary)
    return lines, payload


def cmd_analyze(args) -> int:
    name, g = _load_graph(args)
    lines, payload = analyze_report(name, g, args.tol)
    _emit(args, lines, payload)
    return 0


def cmd_automorphisms(args) -> int:
    name, g = _load_graph(args)
    certs = find_automorphisms(g, limit=args.limit)
    nontrivial = [c for c in certs if not c.permutation.is_identity()]
    lines = [f"graph: {name} ({g.n} vertices, {g.edge_count} edges)",
             f"nontrivial automorphisms{'' if args.limit is None else f' (limit {args.limit})'}: {len(nontrivial)}"]
    lines += ["  " + c.cycle_notation(g.labels) for c in nontrivial]
    payload = {"graph": name, "automorphisms": [c.cycle_notation(g.labels) for c in nontrivial]}
    two = find_two_cycle_automorphism(g)
    if two is not None:
        sub = subgraphs_of_symmetry(g, two)
        blocks = [[g.labels[i] for i in b] for b in sub.blocks]
        anchors = [g.labels[i] for i in sub.anchor_set]
        lines.append(f"2-cycle automorphism: {two.cycle_notation(g.labels)}")
        for a, b in sub.block_pairs:
            lines.append(f"  blocks {{{', '.join(blocks[a])}}} <-> {{{', '.join(blocks[b])}}}")
        lines.append(f"  anchor set: {{{', '.join(anchors)}}}")
        payload["two_cycle_automorphism"] = two.cycle_notation(g.labels)
        payload["blocks"] = blocks
        payload["block_pairs"] = sub.block_pairs
        payload["anchor_set"] = anchors
    if args.limit is None:
        mult = max_minus_one_multiplicity(g)
        lines.append(f"max eigenvalue -1 multiplicity over the group: {'not computed' if mult is None else mult}")
        payload["max_minus_one_multiplicity"] = mult
    _emit(args, lines, payload)
    return 0


def _load_system(args) -> tuple[str, LeaderFollowerSystem]:
    try:
        if args.dataset:
            if not args.leader:
                raise InputError("--dataset needs --leader LABEL [LABEL ...]")
            g = datasets.load(args.dataset).graph
            return args.dataset, LeaderFollowerSystem.with_leader(g, args.leader)
        if not args.path:
            raise InputError("give a system file or --dataset NAME --leader ...")
        text = Path(args.path).read_text(encoding="utf-8")
        return args.path, parse_system(text)
    except EdgeListError as exc:
        raise InputError(f"{args.path}: {exc}") from None
    except OSError as exc:
        raise InputError(f"{args.path}: {exc.strerror}") from None
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc.args[0])) from None


def cmd_controllability(args) -> int:
    name, sys_ = _load_system(args)
    g = sys_.follower_graph
    lf = build_lf(sys_)
    lines = [f"system: {name} ({sys_.n} followers, leader adjacent to {' '.join(sys_.leader_labels())})",
             "L_f ="] + _matrix_lines(lf)
    payload = {"system": name, "L_f": lf.tolist(), "leader": sys_.leader_labels()}
    verdicts = {}
    if args.method in ("spectral", "both"):
        verdicts["spectral"] = is_controllable_spectral(sys_, args.tol)
    if args.method in ("kalman", "both"):
        verdicts["kalman"] = is_controllable_kalman(sys_)
    for m, v in verdicts.items():
        detail = ""
        if m == "spectral":
            detail = f" ({len(v.witnesses)} eigenvectors orthogonal to 1" + (", repeated spectrum" if v.repeated_spectrum else "")
            detail += (", leader does not reach every follower" if v.leader_disconnected else "") + ")"
        else:
            detail = f" (rank {v.rank} of {sys_.n})"
        lines.append(f"{m}: {'controllable' if v.controllable else 'uncontrollable'}{detail}")
    payload["verdicts"] = {m: v.to_dict() for m, v in verdicts.items()}
    sym, cert = is_leader_symmetric(sys_)
    lines.append(f"leader symmetric: {'yes, ' + cert.cycle_notation(g.labels) if sym else 'no'}")
    payload["leader_symmetric"] = cert.cycle_notation(g.labels) if sym else None
    l4 = lemma4_check(sys_)
    if l4.applicable:
        lines.append(f"pair-swap check: {l4.explanation}")
    payload["pair_swap_check"] = {"applicable": l4.applicable, "predicts_uncontrollable": l4.predicts_uncontrollable,
                         "pairs": [[g.labels[a], g.labels[b]] for a, b in l4.pairs], "explanation": l4.explanation}
    if args.trajectory:
        x0 = args.x0 if args.x0 is not None else [0.0] * sys_.n
        t, x = simulate(sys_, args.u, x0, args.dt, args.steps)
        Path(args.trajectory).write_text(trajectory_csv(sys_, t, x), encoding="utf-8")
        lines.append(f"trajectory written to {args.trajectory}")
    _emit(args, lines, payload)
    if len({v.controllable for v in verdicts.values()}) > 1:
        raise Inconsistency("spectral and Kalman verdicts disagree")
    return 0


def cmd_montecarlo(args) -> int:
    kw = dict(trials=args.trials, tolerance=args.tol, master_seed=args.seed, workers=args.workers)
    if args.full:
        cfg = ExperimentConfig.full_scale(**kw)
    else:
        if args.n:
            kw["n_values"] = args.n
        if args.p:
            kw["p_values"] = args.p
        cfg = ExperimentConfig(**kw)
    grids = run_experiments(cfg)
    prefix = args.out
    files = {}
    for kind in (REPEATED, ORTHOGONAL):
        files[f"{prefix}_{kind}.csv"] = emit_grid(grids[kind], "csv")
        files[f"{prefix}_{kind}.svg"] = emit_grid(grids[kind], "svg")
    files[f"{prefix}_metadata.json"] = metadata(cfg)
    try:
        for path, content in files.items():
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write output: {exc}") from None
    lines = [f"wrote {p}" for p in files]
    _emit(args, lines, {"files": list(files)})
    return 0


def cmd_dataset(args) -> int:
    if args.action == "list":
        rows = []
        for name in sorted(datasets.DATASETS):
            d = datasets.load(name)
            rows.append({"name": name, "vertices": d.graph.n, "edges": d.graph.edge_count,
                         "provenance": d.provenance})
        _emit(args, [f"{r['name']:<10} {r['vertices']:>3} vertices {r['edges']:>4} edges  {r['provenance']}"
                     for r in rows], {"datasets": rows})
        return 0
    if not args.name:
        raise InputError("dataset show needs a NAME")
    try:
        d = datasets.load(args.name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    sys.stdout.write(serialize_edge_list(d.graph))
    return 0


def cmd_permutation(args) -> int:
    try:
        p = Permutation.parse(" ".join(args.images))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cycles = cycle_decomposition(p)
    pm = permutation_matrix(p)
    ev = np.linalg.eigvals(pm.astype(float))
    mult = int(np.sum(np.abs(ev + 1) < 1e-6))
    even = [c for c in cycles if len(c) % 2 == 0]
    vectors = [minus_one_eigenvector(p, c).tolist() for c in even]
    lines = ["matrix:"] + _matrix_lines(pm) + [
        f"cycles: {''.join('(' + ' '.join(str(i + 1) for i in c) + ')' for c in cycles)}",
        f"even-length cycles: {count_even_cycles(cycles)}",
        f"eigenvalue -1 multiplicity: {mult}",
    ]
    lines += [f"  -1 eigenvector for ({' '.join(str(i + 1) for i in c)}): {v}" for c, v in zip(even, vectors)]
    payload = {"matrix": pm.tolist(), "cycles": [[i + 1 for i in c] for c in cycles],
               "even_cycles": count_even_cycles(cycles), "minus_one_multiplicity": mult,
               "minus_one_eigenvectors": vectors}
    _emit(args, lines, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_source(sp, with_n=True):
        sp.add_argument("path", nargs="?", help="edge-list file")
        sp.add_argument("--dataset", help="bundled dataset name (see `dataset list`)")
        if with_n:
            sp.add_argument("--n", type=int, help="pad with isolated vertices up to this count")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("analyze", help="friendliness and symmetry report")
    graph_source(sp)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("automorphisms", help="automorphisms, subgraphs of symmetry")
    graph_source(sp)
    sp.add_argument("--limit", type=int, help="stop after this many nontrivial automorphisms")
    sp.set_defaults(func=cmd_automorphisms)

    sp = sub.add_parser("controllability", help="leader-follower controllability")
    graph_source(sp, with_n=False)
    sp.add_argument("--leader", nargs="+", help="follower labels adjacent to the leader (with --dataset)")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--method", choices=["spectral", "kalman", "both"], default="both")
    sp.add_argument("--trajectory", help="write an RK4 trajectory CSV here")
    sp.add_argument("--dt", type=float, default=0.05)
    sp.add_argument("--steps", type=int, default=2000)
    sp.add_argument("--u", type=float, default=1.0, help="constant leader state")
    sp.add_argument("--x0", type=float, nargs="+")
    sp.set_defaults(func=cmd_controllability)

    sp = sub.add_parser("montecarlo", help="G(n, p) unfriendliness probability grids")
    sp.add_argument("--n", type=int, nargs="+")
    sp.add_argument("--p", type=float, nargs="+")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--full", action="store_true", help="n = 2..100 with 5000 trials")
    sp.add_argument("--out", default="montecarlo", help="output file prefix")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("dataset", help="list or print bundled graphs")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_dataset)

    sp = sub.add_parser("permutation", help="matrix and cycle structure of a permutation")
    sp.add_argument("images", nargs="+", help="images of 1..n, e.g. 2 1 4 5 3")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_permutation)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Inconsistency as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
