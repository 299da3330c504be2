"""Command-line surface: community detection on edge lists, simulation
sweeps, labeling evaluation, and statistic dumps.

Exit codes: 0 success, 2 usage/parameter error, 3 input-format error,
4 everything-degenerate (no statistic carried any signal).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .edgestats import (Partition, modularity_q, perm_null_moments, q_d, r_d,
                        r_w, within_counts, z_d, z_w)
from .evaluation import EvalRecord, misclassification_rate
from .genmodels import (ConnectivityMatrix, ThetaSpec, replicate_rngs,
                        sample_dcsbm, sample_sbm)
from .graph import GraphFormatError, graph_constants, load_edge_list
from .optimizer import FitConfig, Objective, fit_all_candidates, greedy_fit
from .selection import (DEFAULT_LAMBDA, DegenerateError, gamma_tau_select,
                        penalized_select)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_DEGENERATE = 4

_MODULARITY_NOTE = ("Q sums A_ij minus the degree-product rate over ordered "
                    "same-community pairs including the diagonal term of the "
                    "product; directed graphs use out/in degree products "
                    "over |G|.")


def _read_label_tokens(path):
    with open(path, "r", encoding="utf-8") as fh:
        tokens = [ln.strip() for ln in fh
                  if ln.strip() and not ln.strip().startswith("#")]
    if not tokens:
        raise GraphFormatError(f"{path}: empty label file")
    return tokens


def _tokens_to_labels(tokens, path):
    distinct = sorted(set(tokens))
    if set(distinct) <= {"0", "1"}:
        if len(distinct) != 2:
            raise GraphFormatError(f"{path}: need both labels present")
        return np.array([int(t) for t in tokens], dtype=np.int8)
    if len(distinct) != 2:
        raise GraphFormatError(
            f"{path}: expected exactly two distinct label tokens, "
            f"got {len(distinct)}")
    # lexicographically smaller token becomes community 0
    return np.array([int(t == distinct[1]) for t in tokens], dtype=np.int8)


def _read_labels(path, n_expected=None):
    lab = _tokens_to_labels(_read_label_tokens(path), path)
    if n_expected is not None and lab.size != n_expected:
        raise GraphFormatError(
            f"{path}: {lab.size} labels for a graph with {n_expected} nodes")
    return lab


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _candidate_payload(g, c, fit):
    lab = fit.labels.labels
    m_x = int(lab.sum())
    entry = {
        "labels": [int(v) for v in lab],
        "objective_value": fit.value,
        "degenerate": fit.degenerate,
        "group_sizes": [m_x, int(lab.size) - m_x],
        "iterations": fit.iterations,
        "restart_values": [float(v) for v in fit.restart_values],
    }
    if min(m_x, lab.size - m_x) >= 2:
        entry["z_w"] = z_w(g, fit.labels, c)
        entry["z_d"] = z_d(g, fit.labels, c)
    return entry


def cmd_detect(args):
    t0 = time.perf_counter()
    g = load_edge_list(args.edges, args.directed)
    warm = None
    if args.warm_start:
        warm = Partition(_read_labels(args.warm_start, g.n_nodes))
    cfg = FitConfig(restarts=args.restarts, seed=args.seed, warm_start=warm)
    c = graph_constants(g)

    report = {
        "command": "detect",
        "directed": g.directed,
        "n_nodes": g.n_nodes,
        "n_edges": g.n_edges,
        "nodes": list(g.node_names),
        "duplicate_edges_dropped": g.duplicate_edges,
        "graph_constants": {"g_size": c.g_size, "q1": c.q1, "q2": c.q2},
        "method": args.method,
        "seed": args.seed,
        "restarts": args.restarts,
        "criterion": None,
        "lambda": None,
        "scores": None,
        "tie": False,
    }

    exit_code = EXIT_OK
    if args.method == "auto":
        candidates = fit_all_candidates(g, cfg)
        if args.criterion == "penalized":
            outcome = penalized_select(g, candidates, lam=args.lam)
            report["lambda"] = args.lam
            report["scores"] = {
                "pen_loglik": outcome.scores.pen_loglik,
                "clamp_events": outcome.clamp_events,
            }
        else:
            outcome = gamma_tau_select(g, candidates)
            report["scores"] = {
                "n_gamma_sq": outcome.scores.n_gamma_sq,
                "n_tau_sq_max": outcome.scores.n_tau_sq_max,
                "n_tau_sq_min": outcome.scores.n_tau_sq_min,
            }
        report["criterion"] = outcome.criterion
        report["tie"] = outcome.tied
        report["excluded"] = list(outcome.excluded)
        selected = outcome.selected
    else:
        obj = Objective(args.method)
        fit = greedy_fit(g, obj, cfg)
        candidates = {args.method: fit}
        selected = args.method
        if fit.degenerate:
            exit_code = EXIT_DEGENERATE
        if args.method in ("modularity", "qd"):
            report["notes"] = {"modularity_convention": _MODULARITY_NOTE}

    report["candidates"] = {k: _candidate_payload(g, c, f)
                            for k, f in candidates.items()}
    report["selected"] = selected
    sel_lab = candidates[selected].labels.labels
    m_x = int(sel_lab.sum())
    report["labels"] = [int(v) for v in sel_lab]
    report["group_sizes"] = [m_x, int(sel_lab.size) - m_x]
    report["runtime_ms"] = (time.perf_counter() - t0) * 1000.0

    _emit(_json_dump(report), args.out)
    return exit_code


def cmd_moments(args):
    g = load_edge_list(args.edges, args.directed)
    lab = _read_labels(args.labels, g.n_nodes)
    part = Partition(lab)
    c = graph_constants(g)
    m_x, n_x = part.m_x, part.n_x
    if min(m_x, n_x) < 2:
        raise GraphFormatError("labels must put at least 2 nodes in each group")
    mom = perm_null_moments(c, m_x, n_x)
    r1, r2 = within_counts(g, part)
    payload = {
        "command": "moments",
        "directed": g.directed,
        "n_nodes": g.n_nodes,
        "n_edges": g.n_edges,
        "nodes": list(g.node_names),
        "labels": [int(v) for v in lab],
        "group_sizes": [m_x, n_x],
        "graph_constants": {"g_size": c.g_size, "q1": c.q1, "q2": c.q2},
        "r1": r1,
        "r2": r2,
        "r_w": r_w(g, part),
        "r_d": r_d(g, part),
        "mu_w": mom.mu_w,
        "sigma_w": mom.sigma_w,
        "mu_d": mom.mu_d,
        "sigma_d": mom.sigma_d,
        "degenerate_w": mom.degenerate_w,
        "degenerate_d": mom.degenerate_d,
        "z_w": z_w(g, part, c),
        "z_d": z_d(g, part, c),
        "q": modularity_q(g, part) if g.n_edges else None,
        "q_d": q_d(g, part) if g.n_edges else None,
        "notes": {"modularity_convention": _MODULARITY_NOTE},
    }
    _emit(_json_dump(payload), args.out)
    return EXIT_OK


def cmd_eval(args):
    truth = _read_labels(args.truth)
    est = _read_labels(args.est)
    if truth.size != est.size:
        raise GraphFormatError("truth and estimate files differ in length")
    rate = misclassification_rate(truth, est)
    sys.stdout.write(f"{rate:.6f}\n")
    return EXIT_OK


def _simulate_one(params):
    (rep, model, p11, p12, p21, p22, m, n, theta_text, directed,
     seed, criterion, lam, restarts) = params
    p = ConnectivityMatrix(p11, p12, p21, p22)
    rng, fit_seed = replicate_rngs(seed, rep)
    if model == "dcsbm":
        pg = sample_dcsbm(p, m, n, ThetaSpec.parse(theta_text), directed, rng)
    else:
        pg = sample_sbm(p, m, n, directed, rng)
    cfg = FitConfig(restarts=restarts, seed=fit_seed)
    candidates = fit_all_candidates(pg.graph, cfg)
    eps = {kind: misclassification_rate(pg.truth, fit.labels)
           for kind, fit in candidates.items()}
    try:
        if criterion == "penalized":
            outcome = penalized_select(pg.graph, candidates, lam=lam)
        else:
            outcome = gamma_tau_select(pg.graph, candidates)
        selected = outcome.selected
        eps_sel = eps[selected]
        record = EvalRecord(eps_criterion=eps_sel, eps_d=eps["zd"],
                            eps_w_min=eps["zw-min"], eps_w_max=eps["zw-max"])
        success = int(record.success)
    except DegenerateError:
        selected = "none"
        eps_sel = float("nan")
        success = 0
    return {
        "rep": rep,
        "eps_zw_max": eps["zw-max"],
        "eps_zw_min": eps["zw-min"],
        "eps_zd": eps["zd"],
        "selected": selected,
        "eps_selected": eps_sel,
        "success": success,
    }


_CSV_COLUMNS = ("rep", "eps_zw_max", "eps_zw_min", "eps_zd",
                "selected", "eps_selected", "success")


def cmd_simulate(args):
    ConnectivityMatrix(args.p11, args.p12, args.p21, args.p22)  # domain check
    if args.model == "dcsbm":
        ThetaSpec.parse(args.theta)
    if args.m < 2 or args.n < 2:
        raise ValueError("need m, n >= 2")
    if args.reps < 1:
        raise ValueError("need reps >= 1")
    if args.jobs < 1:
        raise ValueError("need jobs >= 1")
    if args.seed < 0:
        raise ValueError("seed must be non-negative")

    params = [(rep, args.model, args.p11, args.p12, args.p21, args.p22,
               args.m, args.n, args.theta, args.directed, args.seed,
               args.criterion, args.lam, args.restarts)
              for rep in range(args.reps)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_simulate_one, params))
    else:
        rows = [_simulate_one(t) for t in params]
    rows.sort(key=lambda row: row["rep"])

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for row in rows:
        writer.writerow([
            row["rep"],
            f"{row['eps_zw_max']:.6f}",
            f"{row['eps_zw_min']:.6f}",
            f"{row['eps_zd']:.6f}",
            row["selected"],
            f"{row['eps_selected']:.6f}",
            row["success"],
        ])
    writer.writerow([
        "mean",
        f"{np.mean([r['eps_zw_max'] for r in rows]):.6f}",
        f"{np.mean([r['eps_zw_min'] for r in rows]):.6f}",
        f"{np.mean([r['eps_zd'] for r in rows]):.6f}",
        "",
        f"{np.mean([r['eps_selected'] for r in rows]):.6f}",
        f"{np.mean([r['success'] for r in rows]):.6f}",
    ])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _add_directedness(cmd):
    grp = cmd.add_mutually_exclusive_group(required=True)
    grp.add_argument("--directed", dest="directed", action="store_true",
                     help="treat edges as ordered pairs")
    grp.add_argument("--undirected", dest="directed", action="store_false",
                     help="treat edges as unordered pairs")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bicomm",
        description="Two-community detection via standardized edge-count "
                    "statistics on directed and undirected graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="detect two communities in an edge list")
    d.add_argument("--edges", required=True, help="edge-list file")
    _add_directedness(d)
    d.add_argument("--method", default="auto",
                   choices=["auto", "zw-max", "zw-min", "zd",
                            "modularity", "qd"])
    d.add_argument("--criterion", default="penalized",
                   choices=["penalized", "gamma-tau"],
                   help="mixing-type criterion used when --method auto")
    d.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA,
                   help="penalized-likelihood tuning parameter")
    d.add_argument("--restarts", type=int, default=20)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--warm-start", help="label file seeding restart 0")
    d.add_argument("--out", help="write the JSON report here (default stdout)")
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("simulate", help="run planted-model replicates to CSV")
    s.add_argument("--model", required=True, choices=["sbm", "dcsbm"])
    for name in ("p11", "p12", "p21", "p22"):
        s.add_argument(f"--{name}", type=float, required=True)
    s.add_argument("--m", type=int, required=True, help="community-1 size")
    s.add_argument("--n", type=int, required=True, help="community-0 size")
    s.add_argument("--theta", default="const",
                   help="const | pareto:SHAPE | uniform:LOW | exp:RATE")
    _add_directedness(s)
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--criterion", default="penalized",
                   choices=["penalized", "gamma-tau"])
    s.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA)
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--jobs", type=int, default=1,
                   help="replicates run concurrently; rows stay ordered")
    s.add_argument("--out", help="write the CSV here (default stdout)")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("eval", help="misclassification rate of two label files")
    e.add_argument("--truth", required=True)
    e.add_argument("--est", required=True)
    e.set_defaults(func=cmd_eval)

    mo = sub.add_parser("moments",
                        help="dump the statistics of one labeled graph")
    mo.add_argument("--edges", required=True)
    mo.add_argument("--labels", required=True)
    _add_directedness(mo)
    mo.add_argument("--out")
    mo.set_defaults(func=cmd_moments)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
