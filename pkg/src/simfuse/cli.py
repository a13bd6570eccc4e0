"""Command-line interface: ``simfuse {gen,validate,fuse,eval,split,bench}``.

Exit codes: 0 success, 1 configuration or input error, 2 runtime error.
Diagnostics go to stderr; data goes to files or stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .core import SimfuseError, validate_dataset
from .cv import CvSetting, make_cluster_cv_plan, make_cv_plan
from .experiment import run_experiment
from .fgs import FgsParams, fgs_fuse, fgs_weights
from .integrate import METHODS, integrate, parse_method
from .io import IdMismatch, ParseError, load_dataset, save_dataset, write_matrix_tsv
from .snf import SnfParams, snf_fuse
from .synthetic import generate_synthetic

log = logging.getLogger("simfuse")


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_method_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", required=True, help=f"one of: {', '.join(METHODS)}")
    p.add_argument("--k", type=int, help="neighbour count for LIC/FGS (default 5)")
    p.add_argument("--rho", type=float, help="FGS filter ratio (default 0.5)")
    p.add_argument("--lambda1", type=float, help="HSIC Laplacian weight (default 0.25)")
    p.add_argument("--lambda2", type=float, help="HSIC norm weight (default 0.25)")
    p.add_argument("--snf-k", type=int, help="SNF neighbour count (default 5)")
    p.add_argument("--snf-iters", type=int, help="SNF diffusion rounds (default 2)")
    p.add_argument("--c1", type=float, help="SNF-H entropy quantile (default 0.7)")
    p.add_argument("--c2", type=float, help="SNF-H redundancy quantile (default 0.6)")


def _method_params(args, config: dict | None = None) -> dict:
    params = dict(config or {})
    for key in ("k", "rho", "lambda1", "lambda2", "snf_k", "snf_iters", "c1", "c2"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if getattr(args, "seed", None) is not None:
        params.setdefault("cv_seed", args.seed)
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simfuse", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("gen", help="write a planted-signal synthetic dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--name", default="synthetic")
    p.add_argument("--n-drugs", type=int, default=60)
    p.add_argument("--n-targets", type=int, default=60)
    p.add_argument("--m-drugs", type=int, default=4)
    p.add_argument("--m-targets", type=int, default=4)
    p.add_argument("--signal-views", type=int, default=1)
    p.add_argument("--noise", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate", help="lint a dataset manifest")
    p.add_argument("manifest")

    p = sub.add_parser("fuse", help="fuse the drug or target views of a dataset")
    p.add_argument("manifest")
    p.add_argument("--side", choices=("drug", "target"), default="drug")
    p.add_argument("--out", required=True, help="output prefix; writes <out>_fused.tsv and <out>_weights.tsv")
    p.add_argument("--seed", type=int, default=0)
    _add_method_params(p)

    p = sub.add_parser("eval", help="cross-validate one integrator with the neighbourhood predictor")
    p.add_argument("manifest")
    p.add_argument("--config", help="JSON file with method parameters (flags override it)")
    p.add_argument("--setting", default="CVS_d", help="CVS_d, CVS_t, CVS_dt, CVS_p or cluCVS_d")
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-k", type=int, default=5)
    p.add_argument("--eta", type=float, default=0.7)
    p.add_argument("--cluster-view", help="drug view label for cluCVS_d")
    p.add_argument("--cluster-threshold", type=float, default=0.6)
    p.add_argument("--threads", type=int)
    p.add_argument("--out", required=True, help="output directory for report.json / report.tsv")
    _add_method_params(p)

    p = sub.add_parser("split", help="print a CV plan as TSV")
    p.add_argument("manifest")
    p.add_argument("--setting", default="CVS_d")
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cluster-view")
    p.add_argument("--cluster-threshold", type=float, default=0.6)
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("bench", help="time an integrator over growing entity counts")
    p.add_argument("--method", default="fgs")
    p.add_argument("--sizes", default="100,200,400")
    p.add_argument("--views", type=int, default=6)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")
    return parser


def _plan(ds, args):
    setting = CvSetting.parse(args.setting)
    if setting is CvSetting.CLU_CVS_D:
        if not args.cluster_view:
            raise ConfigError("cluCVS_d needs --cluster-view")
        return make_cluster_cv_plan(ds, args.cluster_view, args.cluster_threshold, args.folds or 10, args.seed)
    return make_cv_plan(ds, setting, args.folds, args.seed)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    ds = generate_synthetic(args.n_drugs, args.n_targets, args.m_drugs, args.m_targets,
                            args.signal_views, args.noise, args.seed)
    print(save_dataset(ds, args.out, args.name))
    return 0


def cmd_validate(args) -> int:
    ds = load_dataset(args.manifest)
    problems = list(ds.notes) + list(validate_dataset(ds))
    for line in problems:
        print(line)
    return 0 if not problems else 1


def cmd_fuse(args) -> int:
    method = parse_method(args.method)
    ds = load_dataset(args.manifest)
    views = ds.drug_views if args.side == "drug" else ds.target_views
    y = ds.interactions.matrix if args.side == "drug" else ds.interactions.matrix.T
    ids = ds.interactions.drug_ids if args.side == "drug" else ds.interactions.target_ids
    labels = [v.label for v in views]
    res = integrate(method, views, y, _method_params(args))
    write_matrix_tsv(f"{args.out}_fused.tsv", ids, ids, res.fused.matrix)
    w = res.weights
    if w is None:
        return 0
    if hasattr(w, "entity_kind"):
        write_matrix_tsv(f"{args.out}_weights.tsv", ids, labels, w.matrix)
    elif hasattr(w, "weights"):
        write_matrix_tsv(f"{args.out}_weights.tsv", ["global"], labels, w.weights[None, :])
    else:
        sel = np.isin(np.arange(len(views)), w).astype(float)
        write_matrix_tsv(f"{args.out}_weights.tsv", ["selected"], labels, sel[None, :])
    return 0


def cmd_eval(args) -> int:
    method = parse_method(args.method)
    config = {}
    if args.config:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        config.pop("method", None)
    ds = load_dataset(args.manifest)
    plan = _plan(ds, args)
    report = run_experiment(ds, {"method": method.value, **_method_params(args, config)},
                            {"k": args.model_k, "eta": args.eta}, plan, threads=args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    (out / "report.tsv").write_text(report.to_tsv(), encoding="utf-8")
    print(f"{report.integrator}\t{report.setting}\tAUPR={report.mean_aupr:.4f}\tAUC={report.mean_auc:.4f}",
          file=sys.stderr)
    return 0


def cmd_split(args) -> int:
    ds = load_dataset(args.manifest)
    plan = _plan(ds, args)
    lines = ["kind\tid\tfold"] + [f"{k}\t{i}\t{f}" for k, i, f in plan.to_rows()]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def bench_rows(method: str, sizes, views: int = 6, k: int = 5, rho: float = 0.5,
               repeats: int = 3, seed: int = 0) -> list[tuple[int, float, float]]:
    """(n, total seconds, weight-calculation seconds) per size, best of ``repeats``."""
    method = parse_method(method)
    rows = []
    for n in sizes:
        ds = generate_synthetic(n, n, views, views, 1, 0.2, seed)
        dv, y = ds.drug_views, ds.interactions.matrix
        total, weights = np.inf, np.nan
        for _ in range(repeats):
            t0 = time.perf_counter()
            if method.value == "fgs":
                fgs_weights(dv, y, FgsParams(k, rho))
                t1 = time.perf_counter()
                fgs_fuse(dv, y, FgsParams(k, rho))
                t2 = time.perf_counter()
                weights = t1 - t0 if np.isnan(weights) else min(weights, t1 - t0)
                total = min(total, t2 - t1)
            elif method.value == "snf":
                snf_fuse(dv, SnfParams(k=k, iters=2))
                total = min(total, time.perf_counter() - t0)
            else:
                integrate(method, dv, y, {"k": k, "rho": rho})
                total = min(total, time.perf_counter() - t0)
        rows.append((n, total, weights))
    return rows


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"bad --sizes {args.sizes!r}") from None
    rows = bench_rows(args.method, sizes, args.views, args.k, args.rho, args.repeats, args.seed)
    lines = ["n\tseconds\tweight_seconds"] + [f"{n}\t{t!r}\t{w!r}" for n, t, w in rows]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


COMMANDS = {"gen": cmd_gen, "validate": cmd_validate, "fuse": cmd_fuse, "eval": cmd_eval,
            "split": cmd_split, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"simfuse: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        if getattr(args, "method", None) is not None:
            parse_method(args.method)
        return COMMANDS[args.command](args)
    except (ConfigError, ParseError, IdMismatch, FileNotFoundError, KeyError) as exc:
        print(f"simfuse: {exc}", file=sys.stderr)
        return 1
    except (SimfuseError, ArithmeticError, RuntimeError) as exc:
        print(f"simfuse: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"simfuse: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
