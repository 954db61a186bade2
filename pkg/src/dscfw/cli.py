"""Command-line interface: cluster, synth, similarity, eval, multistart,
and trace-check subcommands.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric/solver
error. Every run writes a JSON manifest next to its outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import data, diagnostics, metrics
from .errors import DscfwError
from .matrix import (
    load_features_csv,
    load_matrix_csv,
    new_similarity_matrix,
    offdiag_extremes,
    save_matrix_csv,
)
from .multistart import SamplePlan, SamplerKind, multistart_cluster
from .peel import DEFAULT_CUTOFF, PeelConfig, peel
from .solvers import (
    DEFAULT_EPSILON,
    InitKind,
    SolverConfig,
    SolverKind,
    load_trace_csv,
    save_trace_csv,
)

SOLVER_FLAGS = {
    "fw": (SolverKind.FW, InitKind.VERTEX),
    "pfw-b": (SolverKind.PFW, InitKind.BARYCENTER),
    "pfw-v": (SolverKind.PFW, InitKind.VERTEX),
    "afw-b": (SolverKind.AFW, InitKind.BARYCENTER),
    "afw-v": (SolverKind.AFW, InitKind.VERTEX),
    "rd": (SolverKind.RD, InitKind.BARYCENTER),
}


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(out_prefix: str, subcommand: str, args: dict,
                    inputs: list[str], phases: dict[str, float]) -> None:
    manifest = {
        "subcommand": subcommand,
        "flags": {k: v for k, v in args.items() if not k.startswith("_")},
        "input_digests": {p: _digest(p) for p in inputs},
        "wall_clock_s": phases,
    }
    Path(f"{out_prefix}.manifest.json").write_text(
        json.dumps(manifest, indent=2, default=str) + "\n")


def _load_similarity(args) -> tuple[object, list[str]]:
    if args.input:
        return load_matrix_csv(args.input), [args.input]
    F = load_features_csv(args.features)
    method = args.similarity
    if method == "cosine":
        A = data.cosine_similarity(F, shift=args.shift)
    elif method == "euclidean-max":
        A = data.max_transform(data.pairwise_euclidean(F))
    elif method == "minimax":
        D = data.minimax_distances(data.pairwise_euclidean(F))
        A = data.max_transform(D)
    else:
        raise DscfwError(f"unknown similarity method {method!r}")
    return A, [args.features]


def _solver_config(args) -> SolverConfig:
    kind, init = SOLVER_FLAGS[args.solver]
    return SolverConfig(
        solver_kind=kind, init_kind=init,
        epsilon=args.epsilon, max_iters=args.max_iters,
    )


def _emit_labels(out_prefix: str, result) -> None:
    payload = {
        "labels": [int(v) for v in result.labels],
        "k_found": len(result.clusters),
        "assignment_rate": result.assignment_rate,
    }
    Path(f"{out_prefix}.labels.json").write_text(
        json.dumps(payload, indent=2) + "\n")
    with open(f"{out_prefix}.labels.csv", "w") as fh:
        fh.write("object_id,label\n")
        for i, v in enumerate(result.labels):
            fh.write(f"{i},{int(v)}\n")


def cmd_cluster(args) -> int:
    t0 = time.perf_counter()
    A, inputs = _load_similarity(args)
    t_load = time.perf_counter() - t0
    config = PeelConfig(
        max_clusters=args.max_clusters,
        solver=_solver_config(args),
        cutoff=args.cutoff,
        shift=args.peel_shift,
        post_assign=args.post_assign,
    )
    t0 = time.perf_counter()
    result = peel(A, config)
    t_solve = time.perf_counter() - t0
    _emit_labels(args.out, result)
    if args.trace:
        # Re-run the first round's solver to emit its trace.
        from .solvers import run
        _, trace, _ = run(A, config.solver)
        save_trace_csv(args.trace, trace)
    _write_manifest(args.out, "cluster", vars(args), inputs,
                    {"load": t_load, "solve": t_solve})
    print(json.dumps({"k_found": len(result.clusters),
                      "assignment_rate": result.assignment_rate}))
    return 0


def cmd_synth(args) -> int:
    if args.kind == "block":
        A, truth = data.block_noise_matrix(args.n, args.k, args.noise,
                                           seed=args.seed)
        save_matrix_csv(f"{args.out}.matrix.csv", A)
    else:
        F, truth = data.gauss_dataset(args.n, args.noise, seed=args.seed)
        np.savetxt(f"{args.out}.features.csv", F, delimiter=",")
    np.savetxt(f"{args.out}.truth.csv", truth, fmt="%d", delimiter=",")
    _write_manifest(args.out, "synth", vars(args), [], {})
    return 0


def cmd_similarity(args) -> int:
    A, inputs = _load_similarity(args)
    save_matrix_csv(args.out, A)
    _write_manifest(args.out, "similarity", vars(args), inputs, {})
    return 0


def cmd_eval(args) -> int:
    pred = np.loadtxt(args.pred, delimiter=",", dtype=int, ndmin=1)
    truth = np.loadtxt(args.truth, delimiter=",", dtype=int, ndmin=1)
    out = {
        "ar": metrics.assignment_rate(pred),
        "ari": metrics.ari(pred, truth,
                           include_unassigned=args.include_unassigned),
        "v_measure": metrics.v_measure(
            pred, truth, include_unassigned=args.include_unassigned),
    }
    print(json.dumps(out))
    return 0


def cmd_multistart(args) -> int:
    A, inputs = _load_similarity(args)
    plan = SamplePlan(
        ell=args.samples,
        sampler=SamplerKind(args.sampler),
        overlap_threshold=args.overlap_threshold,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    result, passes = multistart_cluster(
        A, plan, _solver_config(args), args.max_clusters, cutoff=args.cutoff)
    elapsed = time.perf_counter() - t0
    _emit_labels(args.out, result)
    Path(f"{args.out}.passes.json").write_text(
        json.dumps({"passes": passes}) + "\n")
    _write_manifest(args.out, "multistart", vars(args), inputs,
                    {"solve": elapsed})
    print(json.dumps({"passes": passes,
                      "k_found": len(result.clusters)}))
    return 0


def cmd_trace_check(args) -> int:
    trace = load_trace_csv(args.trace)
    A = load_matrix_csv(args.matrix)
    m_lo, m_hi = offdiag_extremes(A)
    kind = SolverKind(args.solver_kind)
    report = diagnostics.theorem_bound(
        trace, kind, m_lo, m_hi,
        support0=args.support0, n=A.n, f0=args.f0,
    )
    print(json.dumps({
        "t": report.t,
        "min_gap": report.min_gap,
        "bound_value": report.bound_value,
        "satisfied": report.satisfied,
        "beta": report.beta,
        "good_steps": report.good_steps,
        "drop_steps": report.drop_steps,
        "swap_steps": report.swap_steps,
        "support0": report.support0,
    }))
    return 0


def _add_similarity_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="similarity matrix CSV")
    p.add_argument("--features", help="feature matrix CSV")
    p.add_argument("--similarity", default="cosine",
                   choices=["cosine", "euclidean-max", "minimax"])
    p.add_argument("--shift", type=float, default=0.0,
                   help="off-diagonal shift for the cosine pipeline")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", default="fw", choices=sorted(SOLVER_FLAGS))
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--cutoff", type=float, default=DEFAULT_CUTOFF)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dscfw")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="peel-off dominant set clustering")
    _add_similarity_flags(p)
    _add_solver_flags(p)
    p.add_argument("--max-clusters", type=int, required=True)
    p.add_argument("--peel-shift", type=float, default=0.0,
                   help="off-diagonal shift applied each peel round")
    p.add_argument("--post-assign", action="store_true")
    p.add_argument("--trace", help="write the first round's trace CSV here")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="run")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--kind", choices=["block", "gauss"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="synth")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("similarity", help="feature CSV -> matrix CSV")
    _add_similarity_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("eval", help="score predicted labels")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--include-unassigned", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("multistart", help="multi-start clustering")
    _add_similarity_flags(p)
    _add_solver_flags(p)
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--sampler", choices=["uni", "dpp"], default="uni")
    p.add_argument("--overlap-threshold", type=float, default=0.10)
    p.add_argument("--max-clusters", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="run")
    p.set_defaults(func=cmd_multistart)

    p = sub.add_parser("trace-check", help="evaluate gap bounds on a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--solver-kind", choices=["fw", "pfw", "afw"],
                   required=True)
    p.add_argument("--support0", type=int, default=1)
    p.add_argument("--f0", type=float, default=0.0,
                   help="objective at the starting point (0 for a vertex)")
    p.set_defaults(func=cmd_trace_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except DscfwError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
