"""Benchmark harness: datasets x models grid with validation tuning.

A suite config (JSON) declares the datasets, the seven model rows, the
hyper-parameter grids, and all seeds; running the suite yields one result
row per (dataset, model) cell plus a set of named trend checks over the
accuracy table. Reruns with the same config are byte-identical because all
randomness is seeded and, in "zero" runtime mode, no wall-clock values are
written.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .datasets import (
    Dataset,
    balanced_subsample,
    gen_adhoc_complex,
    gen_xor,
    load_csv,
    prepare_dataset,
    train_test_split,
)
from .errors import ConfigError
from .feature_map import FeatureMapSpec
from .kernels import (
    KernelSpec,
    QuantumKernelSpec,
    RbfKernelSpec,
    cross_matrix,
    gram_matrix,
)
from .svm import (
    RegularizationParams,
    SvmModel,
    TrainReport,
    accuracy,
    compute_bias,
    fit,
    kkt_max_violation,
    solve_dual,
)

SUITE_FORMAT_VERSION = "1.0"

BENCH_CSV_HEADER = [
    "dataset",
    "model",
    "params",
    "alpha",
    "test_accuracy",
    "train_accuracy",
    "runtime_s",
    "seed",
]


@dataclass
class BenchRow:
    dataset: str
    model: str
    params: str
    alpha: Optional[float]
    test_accuracy: float
    train_accuracy: float
    runtime_s: float
    seed: int
    error: Optional[str] = None

    def csv_cells(self) -> list[str]:
        return [
            self.dataset,
            self.model,
            self.params if self.error is None else f"error: {self.error}",
            "" if self.alpha is None else repr(float(self.alpha)),
            repr(float(self.test_accuracy)),
            repr(float(self.train_accuracy)),
            repr(float(self.runtime_s)),
            str(self.seed),
        ]


@dataclass
class BenchCellDetail:
    """Trained model and training context kept for audits."""

    row: BenchRow
    model: Optional[SvmModel]
    report: Optional[TrainReport]
    train: Optional[Dataset]
    test: Optional[Dataset]
    wall_runtime_s: float = 0.0


@dataclass
class TrendCheck:
    name: str
    passed: bool
    detail: str


def load_suite(path) -> dict:
    try:
        with open(path) as fh:
            suite = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read suite config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"suite config {path} is not valid JSON: {exc}") from exc
    version = str(suite.get("format_version", ""))
    if version.split(".")[0] != SUITE_FORMAT_VERSION.split(".")[0]:
        raise ConfigError(
            f"unsupported suite format version {version!r}"
        )
    for key in ("datasets", "models", "tuning"):
        if key not in suite:
            raise ConfigError(f"suite config missing section {key!r}")
    return suite


def materialize_dataset(spec: dict, base_dir: Path) -> tuple[Dataset, Dataset]:
    """Build one dataset entry and return its (train, test) splits."""
    name = spec.get("name", "unnamed")
    test_frac = float(spec.get("test_frac", 0.3))
    split_seed = int(spec["split_seed"])
    if "generator" in spec:
        gen = spec["generator"]
        kind = gen.get("type")
        if kind == "xor":
            ds = gen_xor(
                m=int(gen.get("m", 200)),
                noise_sd=float(gen.get("noise_sd", 0.3)),
                seed=int(gen.get("seed", 0)),
            )
        elif kind == "adhoc":
            ds = gen_adhoc_complex(
                m=int(gen.get("m", 200)),
                gap=float(gen.get("gap", 0.3)),
                seed=int(gen.get("seed", 0)),
            )
        else:
            raise ConfigError(f"unknown generator type {kind!r} for dataset {name}")
        ds.name = name
        train, test = train_test_split(ds, test_frac, split_seed)
        return train, test
    if "csv" in spec:
        path = Path(spec["csv"])
        if not path.is_absolute():
            path = base_dir / path
        classes = spec.get("classes")
        ds = load_csv(path, classes=tuple(classes) if classes else None, name=name)
        per_class = spec.get("max_per_class")
        if per_class:
            if "subsample_seed" not in spec:
                raise ConfigError(
                    f"dataset {name} sets max_per_class but no subsample_seed"
                )
            ds = balanced_subsample(ds, int(per_class), int(spec["subsample_seed"]))
        prep = prepare_dataset(ds, test_frac, split_seed, scale=True)
        return prep.train, prep.test
    raise ConfigError(f"dataset {name} needs either a generator or a csv entry")


def _tuning_grid(model_spec: dict, tuning: dict) -> list[tuple[KernelSpec, RegularizationParams, str, Optional[float]]]:
    """Expand the declared hyper-parameter grid in deterministic order."""
    Cs = [float(c) for c in tuning.get("C", [1.0])]
    l2s = [float(v) for v in tuning.get("lambda2", [0.0])]
    l1s = [float(v) for v in tuning.get("lambda1", [0.0])]
    out = []
    if model_spec.get("kind") == "rbf":
        hs = [float(h) for h in model_spec.get("h_grid", tuning.get("h", [1.0]))]
        for h in hs:
            for C in Cs:
                for l1 in l1s:
                    for l2 in l2s:
                        out.append(
                            (
                                RbfKernelSpec(h=h),
                                RegularizationParams(C=C, lambda1=l1, lambda2=l2),
                                f"h={h:g} C={C:g} l1={l1:g} l2={l2:g}",
                                None,
                            )
                        )
        return out
    if model_spec.get("kind") == "quantum":
        paulis = tuple(model_spec["paulis"])
        alphas = [float(a) for a in tuning.get("alpha", [1.0])]
        depths = [int(d) for d in tuning.get("depth", [2])]
        data_map = model_spec.get("data_map", "product_shifted")
        for depth in depths:
            for alpha in alphas:
                fm = FeatureMapSpec(
                    paulis=paulis, alpha=alpha, depth=depth, data_map=data_map
                )
                for C in Cs:
                    for l1 in l1s:
                        for l2 in l2s:
                            out.append(
                                (
                                    QuantumKernelSpec(fm),
                                    RegularizationParams(C=C, lambda1=l1, lambda2=l2),
                                    f"{'+'.join(paulis)} depth={depth} "
                                    f"C={C:g} l1={l1:g} l2={l2:g}",
                                    alpha,
                                )
                            )
        return out
    raise ConfigError(f"model kind must be rbf or quantum, got {model_spec.get('kind')!r}")


def run_cell(
    dataset_name: str,
    train: Dataset,
    test: Dataset,
    model_spec: dict,
    tuning: dict,
    val_frac: float,
    val_seed: int,
    split_seed: int,
    solver: dict,
) -> BenchCellDetail:
    """Tune on a validation fold, refit on the full train split, evaluate.

    Gram and validation cross matrices are shared across the reg-parameter
    part of the grid since they depend only on the kernel; selection order
    still follows the declared grid, ties keeping the earliest entry.
    """
    started = time.perf_counter()
    tol = float(solver.get("tol", 1e-6))
    max_iter = int(solver.get("max_iter", 100_000))
    fit_ds, val_ds = train_test_split(train, val_frac, val_seed)

    by_kernel: dict[KernelSpec, list[tuple[RegularizationParams, str, Optional[float]]]] = {}
    for kern, reg, label, alpha in _tuning_grid(model_spec, tuning):
        by_kernel.setdefault(kern, []).append((reg, label, alpha))

    best = None
    for kern, entries in by_kernel.items():
        K = gram_matrix(fit_ds.X, kern)
        cross = cross_matrix(fit_ds.X, val_ds.X, kern)
        y_fit = fit_ds.y.astype(float)
        for reg, label, alpha in entries:
            betas, _ = solve_dual(K, fit_ds.y, reg, tol=tol, max_iter=max_iter)
            bias = compute_bias(betas, K, fit_ds.y, reg)
            scores = cross @ (betas * y_fit) + bias
            predictions = (scores >= 0.0).astype(int) * 2 - 1
            val_acc = float((predictions == val_ds.y).mean())
            if best is None or val_acc > best[0]:
                best = (val_acc, kern, reg, label, alpha)

    _, kern, reg, label, alpha = best
    model, report = fit(train.X, train.y, kern, reg, tol=tol, max_iter=max_iter)
    runtime = time.perf_counter() - started
    row = BenchRow(
        dataset=dataset_name,
        model=model_spec["name"],
        params=label,
        alpha=alpha,
        test_accuracy=accuracy(model, test.X, test.y),
        train_accuracy=accuracy(model, train.X, train.y),
        runtime_s=runtime,
        seed=split_seed,
    )
    return BenchCellDetail(
        row=row, model=model, report=report, train=train, test=test,
        wall_runtime_s=runtime,
    )


def run_suite(suite: dict, base_dir: Path | str = ".") -> list[BenchCellDetail]:
    """Run every (dataset, model) cell in declared order."""
    base_dir = Path(base_dir)
    val_frac = float(suite.get("validation_frac", 0.25))
    solver = suite.get("solver", {})
    runtime_mode = suite.get("runtime_mode", "wall")
    if runtime_mode not in ("wall", "zero"):
        raise ConfigError(f"runtime_mode must be wall or zero, got {runtime_mode!r}")

    details: list[BenchCellDetail] = []
    for ds_spec in suite["datasets"]:
        train, test = materialize_dataset(ds_spec, base_dir)
        val_seed = int(ds_spec.get("val_seed", ds_spec["split_seed"] + 1))
        for model_spec in suite["models"]:
            try:
                detail = run_cell(
                    dataset_name=ds_spec["name"],
                    train=train,
                    test=test,
                    model_spec=model_spec,
                    tuning=suite["tuning"],
                    val_frac=val_frac,
                    val_seed=val_seed,
                    split_seed=int(ds_spec["split_seed"]),
                    solver=solver,
                )
            except Exception as exc:  # record the failure, keep the run going
                detail = BenchCellDetail(
                    row=BenchRow(
                        dataset=ds_spec["name"],
                        model=model_spec.get("name", "unnamed"),
                        params="",
                        alpha=None,
                        test_accuracy=float("nan"),
                        train_accuracy=float("nan"),
                        runtime_s=0.0,
                        seed=int(ds_spec["split_seed"]),
                        error=str(exc),
                    ),
                    model=None,
                    report=None,
                    train=None,
                    test=None,
                )
            if runtime_mode == "zero":
                detail.row.runtime_s = 0.0
            details.append(detail)
    return details


def write_bench_csv(details: list[BenchCellDetail], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_CSV_HEADER)
        for detail in details:
            writer.writerow(detail.row.csv_cells())


def _acc(rows: dict, dataset: str, model: str) -> Optional[float]:
    row = rows.get((dataset, model))
    if row is None or row.error is not None:
        return None
    return row.test_accuracy


def trend_checks(details: list[BenchCellDetail]) -> list[TrendCheck]:
    """The held-out accuracy orderings the suite is expected to reproduce."""
    rows = {(d.row.dataset, d.row.model): d.row for d in details}

    def check(name, datasets_models, predicate, describe):
        values = [_acc(rows, ds, mdl) for ds, mdl in datasets_models]
        if any(v is None for v in values):
            return TrendCheck(name, False, "missing or failed cell")
        return TrendCheck(name, predicate(*values), describe(*values))

    checks = [
        check(
            "xor_rbf_strong",
            [("xor", "rbf")],
            lambda a: a >= 0.9,
            lambda a: f"rbf xor accuracy {a:.3f} >= 0.9",
        ),
        check(
            "xor_quantum_y_strong",
            [("xor", "pauli_y")],
            lambda a: a >= 0.9,
            lambda a: f"pauli_y xor accuracy {a:.3f} >= 0.9",
        ),
        check(
            "complex_quantum_z_zz_strong",
            [("complex", "pauli_z_zz")],
            lambda a: a >= 0.9,
            lambda a: f"pauli_z_zz complex accuracy {a:.3f} >= 0.9",
        ),
        check(
            "complex_rbf_weak",
            [("complex", "rbf")],
            lambda a: a <= 0.65,
            lambda a: f"rbf complex accuracy {a:.3f} <= 0.65",
        ),
        check(
            "complex_quantum_beats_rbf",
            [("complex", "pauli_z_zz"), ("complex", "rbf")],
            lambda q, c: q > c,
            lambda q, c: f"pauli_z_zz {q:.3f} > rbf {c:.3f}",
        ),
        check(
            "breast_cancer_quantum_rbf_parity",
            [("breast_cancer", "pauli_y"), ("breast_cancer", "rbf")],
            lambda q, c: abs(q - c) <= 0.1,
            lambda q, c: f"|pauli_y {q:.3f} - rbf {c:.3f}| <= 0.1",
        ),
        check(
            "complex_interactions_help_y",
            [("complex", "pauli_y_yy"), ("complex", "pauli_y")],
            lambda a, b: a > b,
            lambda a, b: f"pauli_y_yy {a:.3f} > pauli_y {b:.3f}",
        ),
        check(
            "complex_interactions_help_z",
            [("complex", "pauli_z_zz"), ("complex", "pauli_z")],
            lambda a, b: a > b,
            lambda a, b: f"pauli_z_zz {a:.3f} > pauli_z {b:.3f}",
        ),
    ]
    return checks


def audit_converged_models(details: list[BenchCellDetail], tol: float = 1e-6) -> list[tuple[str, str, float]]:
    """Max KKT violation for every converged cell model; used by acceptance."""
    out = []
    for detail in details:
        if detail.model is None or detail.report is None or not detail.report.converged:
            continue
        model = detail.model
        K = gram_matrix(model.train_X, model.kernel)
        margin = 1.0 - model.reg.lambda1
        worst = kkt_max_violation(
            model.betas, K, model.labels, model.reg, model.bias, margin=margin
        )
        out.append((detail.row.dataset, detail.row.model, worst))
    return out


def smoothing_experiment(suite: dict, base_dir: Path | str = ".") -> dict:
    """Train/test gap with and without the tuned l2 penalty on one dataset.

    The config's smoothing section pins the dataset, feature map, C, and the
    positive lambda2 grid; the tuned value is the grid entry with the best
    validation accuracy (ties go to the stronger penalty).
    """
    cfg = suite.get("smoothing")
    if not cfg:
        raise ConfigError("suite config has no smoothing section")
    base_dir = Path(base_dir)
    ds_by_name = {d["name"]: d for d in suite["datasets"]}
    ds_spec = ds_by_name[cfg["dataset"]]
    train, test = materialize_dataset(ds_spec, base_dir)
    val_seed = int(ds_spec.get("val_seed", ds_spec["split_seed"] + 1))
    fit_ds, val_ds = train_test_split(train, float(suite.get("validation_frac", 0.25)), val_seed)

    fm = FeatureMapSpec(
        paulis=tuple(cfg["paulis"]),
        alpha=float(cfg["alpha"]),
        depth=int(cfg.get("depth", 2)),
    )
    kern = QuantumKernelSpec(fm)
    C = float(cfg["C"])
    solver = suite.get("solver", {})
    tol = float(solver.get("tol", 1e-6))
    max_iter = int(solver.get("max_iter", 100_000))

    def gap_for(l2: float) -> tuple[float, float, float]:
        model, _ = fit(
            train.X, train.y, kern, RegularizationParams(C=C, lambda2=l2),
            tol=tol, max_iter=max_iter,
        )
        tr_acc = accuracy(model, train.X, train.y)
        te_acc = accuracy(model, test.X, test.y)
        return tr_acc, te_acc, tr_acc - te_acc

    tuned_l2 = None
    tuned_val = -1.0
    for l2 in [float(v) for v in cfg["lambda2_grid"]]:
        if l2 <= 0:
            raise ConfigError("smoothing lambda2_grid must be positive values")
        model, _ = fit(
            fit_ds.X, fit_ds.y, kern, RegularizationParams(C=C, lambda2=l2),
            tol=tol, max_iter=max_iter,
        )
        val_acc = accuracy(model, val_ds.X, val_ds.y)
        if val_acc >= tuned_val:  # ties prefer the stronger penalty
            tuned_val = val_acc
            tuned_l2 = l2

    tr0, te0, gap0 = gap_for(0.0)
    tr1, te1, gap1 = gap_for(tuned_l2)
    return {
        "tuned_lambda2": tuned_l2,
        "baseline": {"train_accuracy": tr0, "test_accuracy": te0, "gap": gap0},
        "tuned": {"train_accuracy": tr1, "test_accuracy": te1, "gap": gap1},
        "gap_reduced": gap1 <= gap0,
    }
