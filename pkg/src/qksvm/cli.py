"""Command-line front end: dataset generation, training, grids, benchmarks.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 trend-check
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .datasets import (
    GENERATOR_VERSION,
    Dataset,
    apply_angle_scale,
    apply_pca,
    fit_angle_scaler,
    fit_pca_2d,
    gen_adhoc_complex,
    gen_xor,
    load_csv,
    save_csv,
    split_indices,
)
from .errors import ConfigError, DataError, GenerationError, QksvmError, ResourceError, TrainingError
from .feature_map import FeatureMapSpec
from .kernels import QuantumKernelSpec, RbfKernelSpec, kernel_spec_from_dict
from .svm import (
    RegularizationParams,
    accuracy,
    decision_function_batch,
    fit,
    load_model,
    save_model,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_TREND = 3

GRID_CSV_HEADER = ["x1", "x2", "score", "label"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _require_new_file(path: Path, force: bool) -> None:
    if path.exists() and not force:
        raise ConfigError(f"{path} exists; pass --force to overwrite")


# ---------------------------------------------------------------- gen

def cmd_gen(args) -> int:
    out = Path(args.out)
    _require_new_file(out, args.force)
    if args.type == "xor":
        ds = gen_xor(m=args.m, noise_sd=args.noise_sd, seed=args.seed)
        params = {"m": args.m, "noise_sd": args.noise_sd, "seed": args.seed}
    elif args.type == "adhoc":
        ds = gen_adhoc_complex(m=args.m, gap=args.gap, seed=args.seed)
        params = {"m": args.m, "gap": args.gap, "seed": args.seed}
    else:
        raise ConfigError(f"unknown generator type {args.type!r}")
    save_csv(ds, out)
    meta = {
        "format_version": "1.0",
        "generator_version": GENERATOR_VERSION,
        "type": args.type,
        "params": params,
    }
    meta_path = out.with_suffix(out.suffix + ".meta.json")
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out} ({ds.m} rows) and {meta_path}")
    return EXIT_OK


# ---------------------------------------------------------------- train

def _kernel_from_args(args) -> QuantumKernelSpec | RbfKernelSpec:
    if args.kernel == "quantum":
        if not args.paulis:
            raise ConfigError("--paulis is required for the quantum kernel")
        fm = FeatureMapSpec(
            paulis=tuple(p.strip() for p in args.paulis.split(",") if p.strip()),
            alpha=args.alpha,
            depth=args.depth,
            data_map=args.data_map,
        )
        return QuantumKernelSpec(fm)
    if args.kernel == "rbf":
        if args.h is None:
            raise ConfigError("--h is required for the rbf kernel")
        return RbfKernelSpec(h=args.h, squared=args.rbf_squared)
    raise ConfigError(f"unknown kernel {args.kernel!r}")


def _train_config_from_args(args) -> dict:
    kernel = _kernel_from_args(args)
    reg = RegularizationParams(C=args.C, lambda1=args.l1, lambda2=args.l2)
    return {
        "dataset": {
            "path": args.data,
            "classes": args.classes.split(",") if args.classes else None,
            "scale": args.scale,
        },
        "kernel": kernel.to_dict(),
        "reg": reg.to_dict(),
        "split": {"test_frac": args.test_frac, "seed": args.seed},
        "solver": {"tol": args.tol, "max_iter": args.max_iter},
    }


def _prepare_from_config(config: dict) -> tuple[Dataset, Dataset, dict]:
    ds_cfg = config["dataset"]
    classes = ds_cfg.get("classes")
    ds = load_csv(ds_cfg["path"], classes=tuple(classes) if classes else None)
    X = ds.X
    prep_info: dict = {}
    mode = ds_cfg.get("scale", "auto")
    needs_pca = ds.d > 2
    if needs_pca:
        pca = fit_pca_2d(X)
        X = apply_pca(pca, X)
        prep_info["pca_components"] = pca.components.tolist()
        prep_info["pca_mean"] = pca.mean.tolist()
    if mode == "always":
        scale = True
    elif mode == "never":
        scale = False
    elif mode == "auto":
        scale = needs_pca or X.min() < -1e-9 or X.max() > 2 * np.pi + 1e-9
    else:
        raise ConfigError(f"scale must be auto, always, or never, got {mode!r}")

    split_cfg = config["split"]
    train_idx, test_idx = split_indices(
        ds.y, float(split_cfg["test_frac"]), int(split_cfg["seed"])
    )
    if scale:
        record = fit_angle_scaler(X[train_idx])
        X = apply_angle_scale(record, X)
        prep_info["scale_mins"] = record.mins.tolist()
        prep_info["scale_maxs"] = record.maxs.tolist()
    prep_info["train_indices"] = train_idx.tolist()
    prep_info["test_indices"] = test_idx.tolist()
    train = Dataset(X=X[train_idx], y=ds.y[train_idx], name=ds.name)
    test = Dataset(X=X[test_idx], y=ds.y[test_idx], name=ds.name)
    return train, test, prep_info


def cmd_train(args) -> int:
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        config = doc.get("config", doc)
    else:
        if not args.data:
            raise ConfigError("either --data or --config is required")
        config = _train_config_from_args(args)

    train, test, prep_info = _prepare_from_config(config)
    kernel = kernel_spec_from_dict(config["kernel"])
    reg = RegularizationParams.from_dict(config["reg"])
    solver = config.get("solver", {})
    model, report = fit(
        train.X,
        train.y,
        kernel,
        reg,
        tol=float(solver.get("tol", 1e-6)),
        max_iter=int(solver.get("max_iter", 100_000)),
    )
    train_acc = accuracy(model, train.X, train.y)
    test_acc = accuracy(model, test.X, test.y)

    if args.out:
        out = Path(args.out)
        _require_new_file(out, args.force)
        save_model(model, out, extra={"config": config, "split": prep_info})
        print(f"model written to {out}")

    print(f"iterations: {report.iterations}")
    print(f"converged: {report.converged}")
    print(f"final_objective: {report.final_objective:.6f}")
    print(f"kkt_violation: {report.kkt_violation:.3e}")
    print(f"train_accuracy: {train_acc:.4f}")
    print(f"test_accuracy: {test_acc:.4f}")
    if not report.converged and args.strict:
        sys.stderr.write("error: solver did not converge (--strict)\n")
        return EXIT_DATA
    return EXIT_OK


# ---------------------------------------------------------------- grid

def cmd_grid(args) -> int:
    model = load_model(args.model)
    if model.train_X.shape[1] != 2:
        raise ConfigError("grid evaluation requires a 2-feature model")
    if args.resolution < 2:
        raise ConfigError(f"resolution must be >= 2, got {args.resolution}")
    if args.bounds:
        parts = [float(v) for v in args.bounds.split(",")]
        if len(parts) != 4:
            raise ConfigError("--bounds must be x1min,x1max,x2min,x2max")
        x1_min, x1_max, x2_min, x2_max = parts
    else:
        if args.data:
            pts = load_csv(args.data).X
            if pts.shape[1] != 2:
                raise ConfigError("--data must hold 2-feature points")
        else:
            pts = model.train_X
        mins = pts.min(axis=0)
        maxs = pts.max(axis=0)
        pad = 0.1 * (maxs - mins)
        x1_min, x1_max = mins[0] - pad[0], maxs[0] + pad[0]
        x2_min, x2_max = mins[1] - pad[1], maxs[1] + pad[1]

    xs = np.linspace(x1_min, x1_max, args.resolution)
    ys = np.linspace(x2_min, x2_max, args.resolution)
    grid = np.array([(x1, x2) for x2 in ys for x1 in xs])
    scores = decision_function_batch(model, grid)
    labels = np.where(scores >= 0.0, 1, -1)

    out = Path(args.out)
    _require_new_file(out, args.force)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GRID_CSV_HEADER)
        for (x1, x2), score, label in zip(grid, scores, labels):
            writer.writerow([repr(float(x1)), repr(float(x2)), repr(float(score)), str(int(label))])
    print(f"wrote {out} ({len(grid)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------- bench

def cmd_bench(args) -> int:
    suite = bench_mod.load_suite(args.suite)
    base_dir = Path(args.suite).resolve().parent
    details = bench_mod.run_suite(suite, base_dir=base_dir)
    out = Path(args.out)
    _require_new_file(out, args.force)
    bench_mod.write_bench_csv(details, out)
    print(f"wrote {out} ({len(details)} rows)")

    failures = [d.row for d in details if d.row.error is not None]
    for row in failures:
        print(f"cell error: {row.dataset}/{row.model}: {row.error}")

    if suite.get("trend_checks", True):
        checks = bench_mod.trend_checks(details)
        all_ok = True
        for check in checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"trend {status}: {check.name} ({check.detail})")
            all_ok = all_ok and check.passed
        if not all_ok:
            return EXIT_TREND
    return EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qksvm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic dataset CSV")
    p_gen.add_argument("--type", required=True, help="xor or adhoc")
    p_gen.add_argument("--m", type=int, default=200)
    p_gen.add_argument("--noise-sd", type=float, default=0.3, dest="noise_sd")
    p_gen.add_argument("--gap", type=float, default=0.3)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--force", action="store_true")
    p_gen.set_defaults(func=cmd_gen)

    p_train = sub.add_parser("train", help="train a model on a dataset CSV")
    p_train.add_argument("--data", help="dataset CSV path")
    p_train.add_argument("--classes", help="negative,positive raw labels to keep")
    p_train.add_argument("--config", help="config or model JSON to reproduce a run")
    p_train.add_argument("--kernel", choices=["quantum", "rbf"], default="quantum")
    p_train.add_argument("--paulis", help="comma-separated patterns, e.g. Z,ZZ")
    p_train.add_argument("--alpha", type=float, default=1.0)
    p_train.add_argument("--depth", type=int, default=2)
    p_train.add_argument(
        "--data-map", choices=["product_shifted", "plain_product"],
        default="product_shifted", dest="data_map",
    )
    p_train.add_argument("--h", type=float, help="rbf width")
    p_train.add_argument("--rbf-squared", action="store_true", dest="rbf_squared")
    p_train.add_argument("--C", type=float, default=10.0)
    p_train.add_argument("--l1", type=float, default=0.0)
    p_train.add_argument("--l2", type=float, default=0.0)
    p_train.add_argument("--test-frac", type=float, default=0.3, dest="test_frac")
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--tol", type=float, default=1e-6)
    p_train.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")
    p_train.add_argument(
        "--scale", choices=["auto", "always", "never"], default="auto"
    )
    p_train.add_argument("--out", help="model JSON output path")
    p_train.add_argument("--force", action="store_true")
    p_train.add_argument("--strict", action="store_true")
    p_train.set_defaults(func=cmd_train)

    p_grid = sub.add_parser("grid", help="evaluate a model on a 2-d lattice")
    p_grid.add_argument("--model", required=True)
    p_grid.add_argument("--out", required=True)
    p_grid.add_argument("--resolution", type=int, default=100)
    p_grid.add_argument("--bounds", help="x1min,x1max,x2min,x2max")
    p_grid.add_argument("--data", help="dataset CSV for bounding box")
    p_grid.add_argument("--force", action="store_true")
    p_grid.set_defaults(func=cmd_grid)

    p_bench = sub.add_parser("bench", help="run a benchmark suite config")
    p_bench.add_argument("--suite", required=True)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--force", action="store_true")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ResourceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (DataError, TrainingError, GenerationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
