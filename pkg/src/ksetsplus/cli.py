"""Command-line surface.

Subcommands: cluster, verify, bench, sbm, sweep, geo. All randomness
flows from --seed, so identical invocations produce identical primary
outputs (bench timings excepted). Exit codes: 0 success, 1 verification
failure, 2 input error, 3 invalid parameter.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io
from .engine import (
    RunConfig,
    init_state,
    random_balanced_partition,
    run,
    run_pass,
)
from .errors import (
    ArityMismatch,
    InvalidProbability,
    KOutOfRange,
    KsetsError,
)
from .experiments import (
    SbmParams,
    accuracy_sweep,
    edge_accuracy,
    haversine_matrix,
    random_sparse_similarity,
    sbm_generate,
    similarity_from_signed,
)
from .measure import DataSet, Partition
from .transforms import (
    SemiCohesionMeasure,
    induced_cohesion,
    lift_similarity,
    sigma_min,
)
from .verify import pairwise_isolation_check

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_PARAM = 3

SLACK_TOL = 1e-9


def _load_measure(args):
    if args.format == "edges":
        return io.load_edge_list(args.input, kind=args.kind, n=args.n)
    return io.load_dense_csv(
        args.input,
        kind=args.kind,
        header=args.header,
        average_asymmetric=getattr(args, "symmetrize", False),
    )


def _write_cluster_output(args, dataset: DataSet, result, extra=None):
    partition = result.partition.relabel_by_first_occurrence()
    io.write_partition_tsv(args.output, dataset, partition.assign)
    sidecar = {
        "schema": 1,
        "objective": result.objective,
        "passes": result.passes,
        "restarts": args.restarts,
        "converged": result.converged,
        "k": partition.k,
        "seed": args.seed,
        "n": dataset.n,
    }
    if extra:
        sidecar.update(extra)
    Path(str(args.output) + ".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def cmd_cluster(args) -> int:
    measure, dataset = _load_measure(args)
    if args.kind == "distance":
        working = induced_cohesion(measure).underlying
    else:
        working = measure
    config = RunConfig(
        k=args.k, seed=args.seed, restarts=args.restarts, max_passes=args.max_passes
    )
    result = run(working, config)
    _write_cluster_output(args, dataset, result, extra={"m": measure.m})
    print(
        f"clustered {dataset.n} points into {args.k} sets: "
        f"objective={result.objective:.6g} passes={result.passes} "
        f"converged={result.converged}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    measure, dataset = _load_measure(args)
    sigma_used = None
    if args.kind == "distance":
        cohesion = induced_cohesion(measure)
    elif args.kind == "similarity":
        sigma_used = sigma_min(measure)
        cohesion = lift_similarity(measure, sigma_used)
    else:
        cohesion = SemiCohesionMeasure(measure)
    labels, raw_assign = io.read_partition_tsv(args.partition)
    if len(raw_assign) != dataset.n:
        raise ArityMismatch(
            f"partition has {len(raw_assign)} rows, measure has {dataset.n} points"
        )
    partition = Partition.from_assign(raw_assign).relabel_by_first_occurrence()
    report = pairwise_isolation_check(cohesion, partition)
    if sigma_used is not None:
        print(f"sigma_used\t{sigma_used!r}")
    print("pairwise isolation slack matrix:")
    for row in report.slack:
        print("\t".join(f"{v:.6g}" for v in row))
    print(f"min_slack\t{report.min_slack!r}")
    if report.ok(SLACK_TOL):
        print("verification passed")
        return EXIT_OK
    print("verification FAILED", file=sys.stderr)
    return EXIT_VERIFY_FAIL


def cmd_bench(args) -> int:
    print("n\tm\tpasses\twall_time\ttime_per_pass_per_kn_plus_m")
    for n in args.n_list:
        g = random_sparse_similarity(n, args.avg_degree, seed=args.seed)
        state = init_state(g, random_balanced_partition(n, args.k, args.seed))
        start = time.perf_counter()
        passes = 0
        for _ in range(args.max_passes):
            passes += 1
            if run_pass(state) == 0:
                break
        elapsed = time.perf_counter() - start
        unit = args.k * n + g.m
        per_pass = elapsed / passes
        print(f"{n}\t{g.m}\t{passes}\t{elapsed:.4f}\t{per_pass / unit:.3e}")
    return EXIT_OK


def cmd_sbm(args) -> int:
    params = SbmParams(n=args.n, c=args.c, diff=args.diff, p=args.p, seed=args.seed)
    graph = sbm_generate(params)
    if args.out_graph:
        io.write_signed_edges(args.out_graph, graph)
    similarity = similarity_from_signed(graph)
    result = run(
        similarity,
        RunConfig(
            k=args.k,
            seed=args.seed,
            restarts=args.restarts,
            max_passes=args.max_passes,
        ),
    )
    accuracy = edge_accuracy(graph, result.partition, reference=args.reference)
    print(
        json.dumps(
            {
                "n_surviving": graph.n,
                "edges": graph.n_edges,
                "objective": result.objective,
                "passes": result.passes,
                "converged": result.converged,
                "edge_accuracy": accuracy,
                "reference": args.reference,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    p_grid = _parse_grid(args.p_grid)
    rows = accuracy_sweep(
        n=args.n,
        c_list=args.c_list,
        p_grid=p_grid,
        graphs_per_point=args.graphs,
        seed=args.seed,
        diff=args.diff,
        restarts=args.restarts,
        reference=args.reference,
    )
    if args.output == "-":
        io.write_sweep_tsv(sys.stdout, rows)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            io.write_sweep_tsv(fh, rows)
    return EXIT_OK


def cmd_geo(args) -> int:
    points, dataset = io.load_geo_csv(args.points)
    distances = haversine_matrix(points)
    working = induced_cohesion(distances).underlying
    config = RunConfig(
        k=args.k, seed=args.seed, restarts=args.restarts, max_passes=args.max_passes
    )
    result = run(working, config)
    _write_cluster_output(args, dataset, result)
    print(
        f"clustered {dataset.n} locations into {args.k} sets: "
        f"objective={result.objective:.6g}"
    )
    return EXIT_OK


def _parse_grid(spec: str) -> list[float]:
    """Either a comma list `0.1,0.2` or a range `start:stop:step` (inclusive)."""
    if ":" in spec:
        start, stop, step = (float(s) for s in spec.split(":"))
        out = []
        value = start
        while value <= stop + 1e-12:
            out.append(round(value, 10))
            value += step
        return out
    return [float(s) for s in spec.split(",")]


def _int_list(spec: str) -> list[int]:
    return [int(s) for s in spec.split(",")]


def _float_list(spec: str) -> list[float]:
    return [float(s) for s in spec.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksetsplus",
        description="K-sets+ clustering for sparse symmetric measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_measure_args(p, kinds):
        p.add_argument("--input", required=True, help="input measure file")
        p.add_argument("--format", choices=["edges", "dense"], default="edges")
        p.add_argument("--kind", choices=kinds, default=kinds[0])
        p.add_argument("--header", action="store_true", help="dense CSV has a label header row")
        p.add_argument("--n", type=int, default=None, help="point count override for edge lists")

    def add_run_args(p):
        p.add_argument("--k", type=int, required=True, help="number of sets")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=1)
        p.add_argument("--max-passes", type=int, default=100, dest="max_passes")

    p = sub.add_parser("cluster", help="partition a measure file")
    add_measure_args(p, ["similarity", "distance"])
    p.add_argument("--symmetrize", action="store_true", help="average a dense asymmetric matrix with its transpose")
    add_run_args(p)
    p.add_argument("--output", required=True, help="partition TSV; a .json sidecar is written next to it")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("verify", help="check pairwise isolation of a partition")
    add_measure_args(p, ["similarity", "distance", "cohesion"])
    p.add_argument("--symmetrize", action="store_true", help="average a dense asymmetric matrix with its transpose")
    p.add_argument("--partition", required=True, help="partition TSV to verify")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="linear-scaling timing table")
    p.add_argument("--n-list", type=_int_list, default=[10000, 20000], dest="n_list")
    p.add_argument("--avg-degree", type=float, default=10.0, dest="avg_degree")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-passes", type=int, default=100, dest="max_passes")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sbm", help="one signed two-block benchmark run")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--c", type=float, default=10.0)
    p.add_argument("--diff", type=float, default=5.0)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--max-passes", type=int, default=100, dest="max_passes")
    p.add_argument("--reference", choices=["truth", "observed"], default="truth")
    p.add_argument("--out-graph", default=None, dest="out_graph")
    p.set_defaults(func=cmd_sbm)

    p = sub.add_parser("sweep", help="edge-accuracy table over (c, p) cells")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--diff", type=float, default=5.0)
    p.add_argument("--c-list", type=_float_list, default=[6.0, 8.0, 10.0], dest="c_list")
    p.add_argument("--p-grid", default="0.01:0.2:0.01", dest="p_grid", help="comma list or start:stop:step")
    p.add_argument("--graphs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--reference", choices=["truth", "observed"], default="truth")
    p.add_argument("--output", default="-", help="TSV path or - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("geo", help="cluster labeled lat/lon points")
    p.add_argument("--points", required=True, help="CSV of label,lat,lon")
    add_run_args(p)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_geo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (KOutOfRange, InvalidProbability) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (KsetsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
