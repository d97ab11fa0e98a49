"""Command-line experiment orchestration.

Subcommands: generate | solve | sweep | spectrum | theory.  Flat files only:
text instances with a JSON sidecar for simulator metadata, CSV for sweep and
spectrum output (schema_version comment on the first line).

Exit codes: 0 success, 2 usage or I/O error, 3 solver non-convergence when
`--strict` is set.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import baselines, eig, generators, spectra, theory
from .core import (
    AngsyncError,
    GroundTruth,
    evaluate,
    read_instance,
    write_instance,
)

SCHEMA_VERSION = 1

ROW_COLUMNS = ["model", "n", "m", "p", "seed", "method", "rho1", "rho2",
               "lambda1", "objective", "iterations", "wall_ms", "np2",
               "pred_rho2", "pred_lambda1_mu", "pred_p_threshold"]
AGG_COLUMNS = ["model", "n", "p", "method", "trials", "rho1_mean", "rho1_std",
               "rho2_mean", "rho2_std", "lambda1_mean", "lambda1_std"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _sidecar_path(instance_path) -> Path:
    return Path(str(instance_path) + ".meta.json")


def derive_seed(master_seed: int, p_index: int, trial_index: int) -> int:
    """Sweep seeds as a pure function of (master_seed, p_index, trial_index)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(p_index, trial_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _generate(model: str, n: int, p: float, epsilon: float, seed: int,
              clock_args: dict | None = None):
    if model == "complete":
        params = generators.CompleteModelParams(n=n, p=p, seed=seed)
        graph, truth = generators.gen_complete(params)
        extra = {}
    elif model == "small-world":
        params = generators.SmallWorldParams(n=n, epsilon=epsilon, p=p, seed=seed)
        graph, truth = generators.gen_small_world(params)
        extra = {}
    elif model == "clock":
        ca = clock_args or {}
        params = generators.ClockModelParams(
            n=n, edge_probability=ca.get("edge_probability", 1.0),
            sigma_good=ca.get("sigma_good", 0.0),
            outlier_fraction=ca.get("outlier_fraction", 1.0 - p),
            outlier_scale=ca.get("outlier_scale", 0.0),
            omega=ca.get("omega", 1.0), seed=seed)
        graph, truth, times = generators.gen_clock(params)
        extra = {"times": times.tolist()}
    else:
        raise AngsyncError(f"unknown model {model!r}")
    return params, graph, truth, extra


def cmd_generate(args) -> int:
    clock_args = {
        "edge_probability": args.edge_probability,
        "sigma_good": args.sigma_good,
        "outlier_fraction": args.outlier_fraction,
        "outlier_scale": args.outlier_scale,
        "omega": args.omega,
    }
    params, graph, truth, extra = _generate(args.model, args.n, args.p,
                                            args.epsilon, args.seed, clock_args)
    out = Path(args.out)
    write_instance(out, graph, good_mask=truth.good_mask)
    meta = generators.instance_metadata(args.model, params, graph, truth)
    meta.update(extra)
    _sidecar_path(out).write_text(json.dumps(meta) + "\n")
    print(f"wrote {out} (n={graph.n}, m={graph.m}, m_good={meta['m_good']}, "
          f"connected={meta['connected']})")
    return 0


def _load_truth(instance_path, fallback_mask):
    meta_path = _sidecar_path(instance_path)
    if not meta_path.exists():
        return None
    meta = json.loads(meta_path.read_text())
    theta = meta.get("theta")
    if theta is None:
        return None
    mask = meta.get("good_mask")
    if mask is None:
        mask = fallback_mask if fallback_mask is not None else [False] * 0
    return GroundTruth(theta=np.asarray(theta, dtype=float),
                       good_mask=np.asarray(mask, dtype=bool))


def _solve_one(graph, method: str, tol: float, max_iters, shift: float, seed: int):
    if method == "eig":
        opts = eig.EigOptions(tol=tol, max_iters=max_iters,
                              diagonal_shift=shift, seed=seed)
        return eig.estimate_eig(graph, opts)
    if method == "lsqr":
        opts = baselines.LsqrOptions(tol=tol, max_iters=max_iters)
        return baselines.estimate_lsqr(graph, opts)
    if method == "sdp":
        opts = baselines.SdpOptions(seed=seed)
        est, _rank = baselines.estimate_sdp(graph, opts)
        return est
    raise AngsyncError(f"unknown method {method!r}")


def cmd_solve(args) -> int:
    path = Path(args.instance)
    if not path.exists():
        raise AngsyncError(f"no such instance file: {path}")
    graph, mask = read_instance(path)
    truth = _load_truth(path, mask)

    t0 = time.perf_counter()
    est = _solve_one(graph, args.method, args.tol, args.max_iters,
                     args.shift, args.seed)
    wall_ms = 1e3 * (time.perf_counter() - t0)
    objective = baselines.sdp_objective(graph, est.theta_hat)

    print(f"method={est.method_tag} n={graph.n} m={graph.m}")
    print(f"lambda1={est.top_eigval:.6f} objective={objective:.6f} "
          f"iterations={est.iterations} wall_ms={wall_ms:.1f} "
          f"converged={est.diagnostics.get('converged')}")
    if truth is not None:
        report = evaluate(graph, truth, est)
        print(f"rho1={report.rho1:.4f} rho2={report.rho2:.4f} "
              f"sce={report.sce} sce_f={report.sce_f:.3f}")
    if args.strict and not est.diagnostics.get("converged", True):
        print("solver did not converge (--strict)", file=sys.stderr)
        return 3
    return 0


def _sweep_task(task):
    """One (p, trial) cell of a sweep; returns an output row dict."""
    (model, n, p, epsilon, seed, methods, tol, max_iters, deterministic) = task
    params, graph, truth, _extra = _generate(model, n, p, epsilon, seed)
    rows = []
    for method in methods:
        t0 = time.perf_counter()
        est = _solve_one(graph, method, tol, max_iters, 0.0, seed)
        wall_ms = 0.0 if deterministic else 1e3 * (time.perf_counter() - t0)
        report = evaluate(graph, truth, est)
        np2 = n * p * p if model == "complete" else 2.0 * graph.m * p * p / n
        if model == "complete":
            pred_rho2 = theory.correlation_prediction(n, p)
            pred_mu = theory.lambda1_law(n, p).value
            pred_pc = theory.p_threshold_complete(n)
        else:
            pred_rho2 = None
            pred_mu = None
            pred_pc = float(np.sqrt(n / (2.0 * graph.m)))
        rows.append({
            "model": model, "n": n, "m": graph.m, "p": p, "seed": seed,
            "method": method, "rho1": report.rho1, "rho2": report.rho2,
            "lambda1": est.top_eigval,
            "objective": baselines.sdp_objective(graph, est.theta_hat),
            "iterations": est.iterations, "wall_ms": wall_ms, "np2": np2,
            "pred_rho2": pred_rho2, "pred_lambda1_mu": pred_mu,
            "pred_p_threshold": pred_pc,
        })
    return rows


def cmd_sweep(args) -> int:
    try:
        p_grid = [float(tok) for tok in args.p.split(",") if tok.strip()]
    except ValueError as exc:
        raise AngsyncError(f"bad --p grid: {args.p!r}") from exc
    if not p_grid:
        raise AngsyncError("empty p grid")
    methods = [tok.strip() for tok in args.method.split(",") if tok.strip()]
    if not methods:
        raise AngsyncError("no methods given")
    if args.trials < 1:
        raise AngsyncError("need trials >= 1")

    tasks = []
    for p_index, p in enumerate(p_grid):
        for trial in range(args.trials):
            seed = derive_seed(args.seed, p_index, trial)
            tasks.append((args.model, args.n, p, args.epsilon, seed, methods,
                          args.tol, args.max_iters, args.deterministic))

    if args.workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]
    # results are already in deterministic (p_index, trial_index) order
    rows = [row for batch in results for row in batch]

    out = Path(args.out)
    with out.open("w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        writer = csv.writer(fh)
        writer.writerow(ROW_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in ROW_COLUMNS])

    agg_path = out.with_name(out.stem + ".agg" + (out.suffix or ".csv"))
    with agg_path.open("w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        writer = csv.writer(fh)
        writer.writerow(AGG_COLUMNS)
        for p in p_grid:
            for method in methods:
                sel = [r for r in rows if r["p"] == p and r["method"] == method]
                r1 = np.array([r["rho1"] for r in sel])
                r2 = np.array([r["rho2"] for r in sel])
                l1 = np.array([r["lambda1"] for r in sel])
                writer.writerow([_fmt(v) for v in [
                    args.model, args.n, p, method, len(sel),
                    r1.mean(), r1.std(), r2.mean(), r2.std(),
                    l1.mean(), l1.std()]])
    print(f"wrote {out} ({len(rows)} rows) and {agg_path}")
    return 0


def cmd_spectrum(args) -> int:
    if args.instance:
        path = Path(args.instance)
        if not path.exists():
            raise AngsyncError(f"no such instance file: {path}")
        graph, _mask = read_instance(path)
    else:
        _params, graph, _truth, _extra = _generate(args.model, args.n, args.p,
                                                   args.epsilon, args.seed)
    H = eig.build_sync_matrix(graph, args.shift)
    values = spectra.full_spectrum(H, dense_limit=args.dense_limit)

    lines = [f"# schema_version={SCHEMA_VERSION}"]
    if args.hist:
        lines.append("bin_center,count")
        for center, count in spectra.histogram(values, args.hist):
            lines.append(f"{_fmt(center)},{count}")
    else:
        lines.append("eigenvalue")
        lines.extend(_fmt(float(v)) for v in values)
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out} ({values.size} eigenvalues)")
    else:
        sys.stdout.write(text)
    return 0


def cmd_theory(args) -> int:
    m = args.m if args.m is not None else args.n * (args.n - 1) // 2
    rows = theory.predictions_table(args.n, m, args.L, args.p)
    if args.out:
        with Path(args.out).open("w", newline="") as fh:
            fh.write(f"# schema_version={SCHEMA_VERSION}\n")
            writer = csv.writer(fh)
            writer.writerow(["name", "value", "aux"])
            for r in rows:
                writer.writerow([r.name, _fmt(r.value), _fmt(r.aux)])
        print(f"wrote {args.out}")
    else:
        width = max(len(r.name) for r in rows)
        for r in rows:
            aux = f" aux={_fmt(r.aux)}" if r.aux is not None else ""
            flag = f" [{r.flag}]" if r.flag else ""
            print(f"{r.name:<{width}}  {r.value:.6g}{aux}{flag}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="angsync",
                                     description="Angular synchronization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(sp, with_p=True):
        sp.add_argument("--model", choices=["complete", "small-world", "clock"],
                        default="complete")
        sp.add_argument("--n", type=int, default=100)
        if with_p:
            sp.add_argument("--p", type=float, default=1.0,
                            help="good-edge probability")
        sp.add_argument("--epsilon", type=float, default=0.3,
                        help="sphere cap parameter (small-world)")
        sp.add_argument("--seed", type=int, default=0)

    gen = sub.add_parser("generate", help="write a synthetic instance + sidecar")
    add_model_flags(gen)
    gen.add_argument("--edge-probability", type=float, default=1.0)
    gen.add_argument("--sigma-good", type=float, default=0.0)
    gen.add_argument("--outlier-fraction", type=float, default=0.0)
    gen.add_argument("--outlier-scale", type=float, default=0.0)
    gen.add_argument("--omega", type=float, default=1.0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    slv = sub.add_parser("solve", help="run one solver on an instance file")
    slv.add_argument("instance")
    slv.add_argument("--method", choices=["eig", "sdp", "lsqr"], default="eig")
    slv.add_argument("--tol", type=float, default=1e-10)
    slv.add_argument("--max-iters", type=int, default=None)
    slv.add_argument("--shift", type=float, default=0.0,
                     help="diagonal shift for the sync matrix (eig only)")
    slv.add_argument("--seed", type=int, default=0)
    slv.add_argument("--strict", action="store_true")
    slv.set_defaults(func=cmd_solve)

    swp = sub.add_parser("sweep", help="grid of (p, trial) runs, CSV output")
    swp.add_argument("--model", choices=["complete", "small-world"],
                     default="complete")
    swp.add_argument("--n", type=int, default=100)
    swp.add_argument("--p", required=True, help="comma-separated p grid")
    swp.add_argument("--epsilon", type=float, default=0.3)
    swp.add_argument("--seed", type=int, default=0, help="master seed")
    swp.add_argument("--trials", type=int, default=20)
    swp.add_argument("--method", default="eig", help="comma-separated methods")
    swp.add_argument("--tol", type=float, default=1e-8)
    swp.add_argument("--max-iters", type=int, default=2000)
    swp.add_argument("--workers", type=int, default=1)
    swp.add_argument("--deterministic", action="store_true",
                     help="zero wall_ms so reruns are byte-identical")
    swp.add_argument("--out", required=True)
    swp.set_defaults(func=cmd_sweep)

    spc = sub.add_parser("spectrum", help="full eigenvalue list (or histogram) CSV")
    spc.add_argument("--in", dest="instance", default=None,
                     help="instance file (otherwise generate from model flags)")
    add_model_flags(spc)
    spc.add_argument("--shift", type=float, default=0.0)
    spc.add_argument("--hist", type=int, default=0, help="histogram bin count")
    spc.add_argument("--dense-limit", type=int, default=spectra.DENSE_LIMIT)
    spc.add_argument("--out", default=None)
    spc.set_defaults(func=cmd_spectrum)

    thr = sub.add_parser("theory", help="closed-form predictions table")
    thr.add_argument("--n", type=int, required=True)
    thr.add_argument("--m", type=int, default=None,
                     help="edge count (default: all pairs)")
    thr.add_argument("--L", type=int, required=True)
    thr.add_argument("--p", type=float, required=True)
    thr.add_argument("--out", default=None)
    thr.set_defaults(func=cmd_theory)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (AngsyncError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
