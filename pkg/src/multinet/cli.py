"""Command-line entry point: reproducible experiment runs with manifests.

Every output file is written atomically and accompanied by a
<out>.manifest.json recording the command line, resolved configuration,
seed, module versions, and output digests. All randomness flows from
--seed through named substreams, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from datetime import date

import numpy as np
import scipy

from . import __version__
from . import blockmodel, clustering, fusion, ingest, metrics, pareto, synth
from .netcore import (
    AdjacencyMatrix, DynamicNetwork, MultiLayerGraph, Partition,
    atomic_write_text, load_dynamic_network, load_graph, save_dynamic_network,
    save_graph,
)


def _parse_value_list(text: str) -> list:
    """Parse '0:0.1:1' ranges (inclusive endpoints) or '0,0.5,1' lists."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be lo:step:hi, got {text!r}")
        lo, step, hi = (float(x) for x in parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"bad range {text!r}")
        count = int(math.floor((hi - lo) / step + 0.5)) + 1
        values = [lo + i * step for i in range(count)]
        return [v for v in values if v <= hi + step * 1e-9]
    return [float(x) for x in text.split(",") if x.strip()]


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path: str, header: list, rows: list) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def _write_manifest(out_paths: list, argv: list, config: dict, seed) -> None:
    digests = {}
    for path in out_paths:
        with open(path, "rb") as fh:
            digests[os.path.basename(path)] = hashlib.sha256(fh.read()).hexdigest()
    manifest = {
        "command": ["multinet"] + list(argv),
        "config": config,
        "master_seed": seed,
        "versions": {
            "multinet": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "outputs": digests,
    }
    atomic_write_text(out_paths[0] + ".manifest.json",
                      json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def _load_single_layer(path: str, format: str) -> AdjacencyMatrix:
    graph = load_graph(path, format=format)
    if graph.num_layers != 1:
        raise ValueError(f"{path}: expected a single-layer graph")
    return graph.layers[0]


# ---------------------------------------------------------------- subcommands

def _cmd_fuse(args, argv) -> int:
    w1 = _load_single_layer(args.layer1, args.format)
    w2 = _load_single_layer(args.layer2, args.format)
    modes = (args.beta is not None) + args.binary + args.map
    if modes != 1:
        raise ValueError("choose exactly one of --beta, --binary, --map")
    sidecar = None
    if args.beta is not None:
        fused = fusion.fuse_linear(w1, w2, args.beta)
        config = {"mode": "linear", "beta": args.beta}
    elif args.binary:
        if args.alpha is None:
            raise ValueError("--binary needs --alpha")
        fused = fusion.fuse_binary(w1, w2, args.alpha, args.seed)
        config = {"mode": "binary", "alpha": args.alpha}
    else:
        model = fusion.GaussianLayerModel(sigma1=args.sigma1, sigma2=args.sigma2)
        params = fusion.MixtureParams(gamma1=args.gamma1, gamma2=args.gamma2)
        fused, beta_hat = fusion.map_estimate_gaussian(w1, w2, model, params,
                                                       tol=args.tol)
        objective = fusion.mixture_objective(fused, w1, w2, model, params)
        log_objective = fusion.log_mixture_objective(fused, w1, w2, model, params)
        sidecar = {"beta_hat": beta_hat, "objective": objective,
                   "log_objective": log_objective}
        config = {"mode": "map", "sigma1": args.sigma1, "sigma2": args.sigma2,
                  "gamma1": args.gamma1, "gamma2": args.gamma2, "tol": args.tol}
    save_graph(MultiLayerGraph((fused,), vertex_labels=None), args.out,
               format=args.format)
    outputs = [args.out]
    if sidecar is not None:
        side_path = args.out + ".meta.json"
        atomic_write_text(side_path, json.dumps(sidecar, indent=1) + "\n")
        outputs.append(side_path)
    _write_manifest(outputs, argv, config, args.seed)
    return 0


def _cmd_pareto(args, argv) -> int:
    if args.demo != "two-gaussian":
        raise ValueError(f"unknown demo {args.demo!r}")
    points = pareto.two_gaussian_candidates(num=args.grid, lo=args.lo, hi=args.hi)
    front = pareto.pareto_front(points)
    on_front = {id(pt) for pt in front}
    rows = [
        [_fmt(pt.candidate[0]), _fmt(pt.candidate[1]),
         _fmt(pt.objectives.values[0]), _fmt(pt.objectives.values[1]),
         1 if id(pt) in on_front else 0]
        for pt in points
    ]
    _write_csv(args.out, ["x1", "x2", "f1", "f2", "on_front"], rows)
    _write_manifest([args.out], argv,
                    {"demo": args.demo, "grid": args.grid,
                     "lo": args.lo, "hi": args.hi}, None)
    return 0


def _cmd_dsbm(args, argv) -> int:
    net = load_dynamic_network(args.network)
    roster = ingest.load_roster(args.classes)
    cfg_corpus = ingest.CorpusConfig(roster=roster, week_origin=date(2000, 1, 1))
    partition, class_names = cfg_corpus.partition()
    if len(partition) != net.snapshots[0].num_vertices:
        raise ValueError("class roster does not cover the network's vertex set")
    cfg = blockmodel.EKFConfig(
        process_noise_var=args.q,
        observation_noise_var=args.r,
        clamp_epsilon=args.clamp,
        linearized_innovation=args.linearized_innovation,
    )
    tracked = blockmodel.dsbm_track(net, args.layer, partition, cfg)
    rows = []
    for stamp, theta in zip(net.timestamps, tracked):
        k = theta.num_classes
        for i in range(k):
            for j in range(i, k):
                rows.append([stamp, class_names[i], class_names[j],
                             _fmt(theta.theta[i, j])])
    _write_csv(args.out, ["t", "class_i", "class_j", "theta"], rows)
    _write_manifest([args.out], argv,
                    {"layer": args.layer, "q": args.q, "r": args.r,
                     "clamp": args.clamp,
                     "linearized_innovation": args.linearized_innovation}, None)
    return 0


def _cmd_cluster(args, argv) -> int:
    graph = load_graph(args.graph, format=args.format)
    if graph.num_layers != 1:
        raise ValueError(f"{args.graph}: expected a single-layer graph")
    cfg = clustering.SpectralConfig(num_clusters=args.k, seed=args.seed,
                                    kmeans_restarts=args.restarts)
    labels = clustering.spectral_cluster(graph.layers[0], cfg)
    names = graph.vertex_labels or tuple(str(i) for i in range(len(labels)))
    rows = [[name, lab] for name, lab in zip(names, labels.assignment)]
    _write_csv(args.out, ["vertex", "label"], rows)
    _write_manifest([args.out], argv, {"k": args.k, "restarts": args.restarts},
                    args.seed)
    return 0


def _read_labels_csv(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows or [c.strip() for c in rows[0]] != ["vertex", "label"]:
        raise ValueError(f"{path}: expected header 'vertex,label'")
    out = {}
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"{path}: malformed row {row}")
        out[row[0]] = row[1]
    return out


def _cmd_ari(args, argv) -> int:
    a = _read_labels_csv(args.a)
    b = _read_labels_csv(args.b)
    if set(a) != set(b):
        raise ValueError("label files cover different vertex sets")
    keys = sorted(a)
    def to_partition(mapping):
        classes = sorted(set(mapping.values()))
        index = {c: i for i, c in enumerate(classes)}
        return Partition(tuple(index[mapping[k]] for k in keys),
                         num_classes=len(classes))
    value = clustering.adjusted_rand_index(to_partition(a), to_partition(b))
    print(_fmt(value))
    return 0


def _cmd_simulate_clustering(args, argv) -> int:
    sigma2_list = _parse_value_list(args.sigma2)
    betas = _parse_value_list(args.betas)
    sigma1 = args.sigma1
    intra_std, inter_std = args.intra_std, args.inter_std
    if args.variance_reading:
        sigma1 = math.sqrt(sigma1)
        sigma2_list = [math.sqrt(s) for s in sigma2_list]
        intra_std, inter_std = math.sqrt(intra_std), math.sqrt(inter_std)
    spec = synth.PlantedClusterSpec(
        num_vertices=args.p, num_clusters=args.k,
        intra_mean=args.intra_mean, intra_std=intra_std,
        inter_mean=args.inter_mean, inter_std=inter_std, seed=args.seed,
    )
    rows = []
    for sigma2 in sigma2_list:
        noise = synth.NoiseSpec(sigma1=sigma1, sigma2=sigma2, seed=args.seed)
        table = synth.run_clustering_experiment(
            spec, noise, betas, args.trials,
            independent_bases=args.independent_bases,
        )
        rows.extend([_fmt(s2), _fmt(b), _fmt(m), _fmt(se)]
                    for s2, b, m, se in table)
    _write_csv(args.out, ["sigma2", "beta", "mean_ari", "se_ari"], rows)
    _write_manifest([args.out], argv, {
        "trials": args.trials, "sigma1": args.sigma1, "sigma2": sigma2_list,
        "betas": {"count": len(betas), "first": betas[0], "last": betas[-1]},
        "p": args.p, "k": args.k, "variance_reading": args.variance_reading,
        "independent_bases": args.independent_bases,
    }, args.seed)
    return 0


def _cmd_ingest(args, argv) -> int:
    roster = ingest.load_roster(args.roster)
    stopwords = (ingest.default_stopwords() if args.stopwords is None
                 else frozenset(open(args.stopwords, encoding="utf-8").read().split()))
    cfg = ingest.CorpusConfig(
        roster=roster,
        week_origin=date.fromisoformat(args.origin),
        threshold_quantile=args.quantile,
        min_token_length=args.min_token_length,
        stopwords=stopwords,
        idf_active_only=not args.idf_full_roster,
    )
    messages = ingest.load_messages(args.corpus)
    net = ingest.build_two_layer_network(messages, cfg, num_weeks=args.weeks)
    save_dynamic_network(net, args.out)
    _write_manifest([args.out], argv, {
        "origin": args.origin, "weeks": args.weeks, "quantile": args.quantile,
        "min_token_length": args.min_token_length,
        "idf_full_roster": args.idf_full_roster,
        "num_messages": len(messages), "roster_size": len(roster),
    }, None)
    return 0


def _cmd_centrality(args, argv) -> int:
    net = load_dynamic_network(args.network)
    roster = ingest.load_roster(args.classes)
    cfg_corpus = ingest.CorpusConfig(roster=roster, week_origin=date(2000, 1, 1))
    partition, class_names = cfg_corpus.partition()
    if len(partition) != net.snapshots[0].num_vertices:
        raise ValueError("class roster does not cover the network's vertex set")
    alphas = _parse_value_list(args.alphas)
    reports = metrics.centrality_alpha_sweep(
        net, partition, alphas, measure=args.measure, seed=args.seed,
        draws=args.draws,
    )
    rows = []
    for rep in reports:
        for ci, name in enumerate(class_names):
            rows.append([rep.time, _fmt(rep.alpha), name,
                         _fmt(rep.per_class[ci]), _fmt(rep.per_class_se[ci])])
    _write_csv(args.out, ["week", "alpha", "class", "mean", "se"], rows)
    _write_manifest([args.out], argv,
                    {"measure": args.measure, "alphas": alphas,
                     "draws": args.draws}, args.seed)
    return 0


# ------------------------------------------------------------------- report

_ARI_HEADER = ["sigma2", "beta", "mean_ari", "se_ari"]
_FRONT_HEADER = ["x1", "x2", "f1", "f2", "on_front"]
_THETA_HEADER = ["t", "class_i", "class_j", "theta"]


def _read_csv_rows(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    return [c.strip() for c in rows[0]], rows[1:]


def _report_ari(path: str, rows: list, md: list, combined: list) -> None:
    by_sigma: dict = {}
    for row in rows:
        s2, beta, mean, se = (float(x) for x in row)
        by_sigma.setdefault(s2, []).append((beta, mean, se))
    md.append(f"## ARI surface: {os.path.basename(path)}\n")
    md.append("| sigma2 | max mean ARI | argmax beta | se at argmax |")
    md.append("|---|---|---|---|")
    for s2 in sorted(by_sigma):
        cells = by_sigma[s2]
        beta, mean, se = max(cells, key=lambda c: (c[1], -c[0]))
        md.append(f"| {s2:g} | {mean:.4f} | {beta:g} | {se:.4f} |")
        combined.append(["ari_max", os.path.basename(path), "", _fmt(s2),
                         _fmt(beta), _fmt(mean), _fmt(se), ""])
    md.append("")


def _report_front(path: str, rows: list, md: list, combined: list) -> None:
    front = [tuple(float(x) for x in row[:4]) for row in rows if row[4] == "1"]
    front.sort(key=lambda r: (r[2], -r[3]))
    md.append(f"## Pareto front: {os.path.basename(path)}\n")
    md.append(f"- grid points: {len(rows)}; on front: {len(front)}")
    if front:
        md.append(f"- extreme at min f1: spatial ({front[0][0]:g}, {front[0][1]:g})")
        md.append(f"- extreme at min f2: spatial ({front[-1][0]:g}, {front[-1][1]:g})")
    md.append("")
    for x1, x2, f1, f2 in front:
        combined.append(["front_point", os.path.basename(path), "", "",
                         _fmt(x1), _fmt(x2), _fmt(f1), _fmt(f2)])


def _report_theta(path: str, rows: list, events: dict, md: list, combined: list) -> None:
    series: dict = {}
    order = []
    for row in rows:
        t, ci, cj, theta = row[0], row[1], row[2], float(row[3])
        key = (ci, cj)
        if key not in series:
            series[key] = []
            order.append(key)
        series[key].append((t, theta))
    md.append(f"## DSBM theta series: {os.path.basename(path)}\n")
    md.append("| class pair | first | last | min | max |")
    md.append("|---|---|---|---|---|")
    for key in order:
        values = [v for _, v in series[key]]
        md.append(f"| {key[0]}-{key[1]} | {values[0]:.4f} | {values[-1]:.4f} "
                  f"| {min(values):.4f} | {max(values):.4f} |")
    if events:
        md.append("")
        md.append("Event markers:")
        weeks = {t for key in order for t, _ in series[key]}
        for week in sorted(events):
            marker = "in range" if week in weeks else "outside range"
            md.append(f"- {week}: {events[week]} ({marker})")
            combined.append(["event", "", week, events[week], "", "", "", ""])
    md.append("")
    for key in order:
        for t, theta in series[key]:
            combined.append(["theta_point", os.path.basename(path), t,
                             f"{key[0]}-{key[1]}", _fmt(theta), "", "", ""])


def _cmd_report(args, argv) -> int:
    events = {}
    if args.events:
        header, rows = _read_csv_rows(args.events)
        if header != ["week", "label"]:
            raise ValueError(f"{args.events}: expected header 'week,label'")
        events = {row[0]: row[1] for row in rows}
    md = ["# Run report", ""]
    combined = []
    for path in args.inputs:
        header, rows = _read_csv_rows(path)
        if header == _ARI_HEADER:
            _report_ari(path, rows, md, combined)
        elif header == _FRONT_HEADER:
            _report_front(path, rows, md, combined)
        elif header == _THETA_HEADER:
            _report_theta(path, rows, events, md, combined)
        else:
            raise ValueError(f"{path}: unrecognized schema {header}")
    atomic_write_text(args.out_md, "\n".join(md) + "\n")
    outputs = [args.out_md]
    if args.out_csv:
        _write_csv(args.out_csv,
                   ["kind", "source", "t", "group", "a", "b", "c", "d"], combined)
        outputs.append(args.out_csv)
    _write_manifest(outputs, argv, {"inputs": [os.path.basename(p) for p in args.inputs]},
                    None)
    return 0


# -------------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multinet",
        description="Multi-layer network fusion, tracking, and clustering experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_kwargs = dict(choices=["dense-csv", "edge-list-csv", "json"],
                      default="dense-csv")

    p = sub.add_parser("fuse", help="fuse two layers (linear, binary, or MAP)")
    p.add_argument("--layer1", required=True)
    p.add_argument("--layer2", required=True)
    p.add_argument("--format", **fmt_kwargs)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--map", action="store_true")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--gamma1", type=float, default=1.0)
    p.add_argument("--gamma2", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("pareto", help="Pareto front demos")
    p.add_argument("--demo", default="two-gaussian")
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--lo", type=float, default=6.0)
    p.add_argument("--hi", type=float, default=12.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_pareto)

    p = sub.add_parser("dsbm", help="track block-model parameters over time")
    p.add_argument("--network", required=True)
    p.add_argument("--classes", required=True)
    p.add_argument("--layer", type=int, default=0)
    p.add_argument("--q", type=float, default=0.01)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--clamp", type=float, default=1e-4)
    p.add_argument("--linearized-innovation", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dsbm)

    p = sub.add_parser("cluster", help="spectral clustering of one layer")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", **fmt_kwargs)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("ari", help="adjusted Rand index of two labelings")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=_cmd_ari)

    p = sub.add_parser("simulate", help="synthetic experiments")
    sim_sub = p.add_subparsers(dest="experiment", required=True)
    ps = sim_sub.add_parser("clustering", help="fusion-clustering ARI surface")
    ps.add_argument("--trials", type=int, default=50)
    ps.add_argument("--sigma1", type=float, default=1.0)
    ps.add_argument("--sigma2", default="1")
    ps.add_argument("--betas", default="0:0.01:1")
    ps.add_argument("--p", type=int, default=500)
    ps.add_argument("--k", type=int, default=10)
    ps.add_argument("--intra-mean", type=float, default=5.0)
    ps.add_argument("--intra-std", type=float, default=0.5)
    ps.add_argument("--inter-mean", type=float, default=4.7)
    ps.add_argument("--inter-std", type=float, default=0.5)
    ps.add_argument("--variance-reading", action="store_true",
                    help="treat std parameters as variances")
    ps.add_argument("--independent-bases", action="store_true")
    ps.add_argument("--jobs", type=int, default=1,
                    help="reserved; results are identical for any value")
    ps.add_argument("--seed", type=int, default=42)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=_cmd_simulate_clustering)

    p = sub.add_parser("ingest", help="build a two-layer network from a mail corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--roster", required=True)
    p.add_argument("--origin", required=True)
    p.add_argument("--weeks", type=int, default=None)
    p.add_argument("--quantile", type=float, default=0.85)
    p.add_argument("--min-token-length", type=int, default=3)
    p.add_argument("--stopwords", default=None)
    p.add_argument("--idf-full-roster", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("centrality", help="centrality across the alpha sweep")
    p.add_argument("--network", required=True)
    p.add_argument("--classes", required=True)
    p.add_argument("--measure", choices=list(metrics.MEASURES),
                   default="betweenness")
    p.add_argument("--alphas", default="0:0.1:1")
    p.add_argument("--draws", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_centrality)

    p = sub.add_parser("report", help="summarize result CSVs")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--events", default=None)
    p.add_argument("--out-md", required=True)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"multinet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
