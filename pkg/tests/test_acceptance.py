"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s to see them).

The benchmark-backed criteria share one run of the repo suite config
(configs/bench_suite.json); the reproducibility criterion performs a full
second run and compares bytes.
"""

import time
from pathlib import Path

import numpy as np
import pytest

import qksvm
from qksvm import bench
from qksvm.feature_map import FeatureMapSpec
from qksvm.kernels import QuantumKernelSpec, RbfKernelSpec, gram_matrix
from qksvm.simulator import StateVector, apply_pauli_exponential
from qksvm.svm import RegularizationParams, compute_bias, solve_dual

from oracles import (
    pauli_exponential_matrix,
    projected_gradient_best_objective,
    feature_state_oracle,
    random_pauli_string,
    random_state,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
SUITE_PATH = REPO_ROOT / "configs" / "bench_suite.json"

KKT_TOL = 1e-6
FLOAT_SLACK = 1e-10


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {status}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


@pytest.fixture(scope="session")
def suite_config():
    return bench.load_suite(SUITE_PATH)


@pytest.fixture(scope="session")
def bench_details(suite_config):
    return bench.run_suite(suite_config, base_dir=SUITE_PATH.parent)


@pytest.fixture(scope="session")
def bench_rows(bench_details):
    return {(d.row.dataset, d.row.model): d.row for d in bench_details}


def test_simulator_oracle_equivalence():
    started = time.perf_counter()
    rng = np.random.default_rng(777)
    worst = 0.0
    worst_norm = 0.0
    for case in range(100):
        n = 2 if case % 2 == 0 else 3
        p = random_pauli_string(rng, n)
        theta = float(rng.uniform(-2 * np.pi, 2 * np.pi))
        state = StateVector(n, random_state(rng, n))
        fast = apply_pauli_exponential(state, p, theta)
        dense = pauli_exponential_matrix(p, theta, n) @ state.amplitudes
        worst = max(worst, float(np.max(np.abs(fast.amplitudes - dense))))
        worst_norm = max(worst_norm, abs(fast.norm() - 1.0))
    elapsed = time.perf_counter() - started
    ok = worst < 1e-10 and worst_norm < 1e-10 and elapsed < 5.0
    report(
        "simulator oracle equivalence",
        ok,
        f"max amp err {worst:.2e}, max norm err {worst_norm:.2e}, {elapsed:.2f}s",
    )


def test_feature_map_circuit_oracle():
    started = time.perf_counter()
    rng = np.random.default_rng(778)
    worst = 0.0
    for _ in range(20):
        alpha = float(rng.uniform(0.25, 2.5))
        spec = FeatureMapSpec(paulis=("Z", "ZZ"), alpha=alpha, depth=2)
        x = rng.uniform(0, 2 * np.pi, size=2)
        state = qksvm.build_feature_state(x, spec)
        dense = feature_state_oracle(x, spec)
        worst = max(worst, float(np.max(np.abs(state.amplitudes - dense))))
    elapsed = time.perf_counter() - started
    ok = worst < 1e-10 and elapsed < 5.0
    report(
        "feature-map circuit oracle", ok, f"max amp err {worst:.2e}, {elapsed:.2f}s"
    )


def test_kernel_properties():
    started = time.perf_counter()
    rng = np.random.default_rng(779)
    X = rng.uniform(0, 2 * np.pi, size=(50, 2))
    specs = [
        QuantumKernelSpec(FeatureMapSpec(paulis=("Z", "ZZ"), alpha=2.0, depth=2)),
        RbfKernelSpec(h=0.8),
    ]
    ok = True
    details = []
    for spec in specs:
        G = gram_matrix(X, spec)
        asym = float(np.max(np.abs(G - G.T)))
        diag = float(np.max(np.abs(np.diag(G) - 1.0)))
        min_eig = float(np.linalg.eigvalsh(G).min())
        ok = ok and asym <= 1e-12 and diag <= 1e-10 and min_eig >= -1e-8
        details.append(f"{type(spec).__name__}: asym {asym:.1e} diag {diag:.1e} mineig {min_eig:.1e}")
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < 30.0
    report("kernel properties", ok, "; ".join(details) + f", {elapsed:.2f}s")


def test_solver_two_point_analytic():
    X = np.array([[2.0, 0.0], [0.0, 0.0]])
    y = np.array([1, -1])
    reg = RegularizationParams(C=1e6)
    K = X @ X.T
    betas, rep = solve_dual(K, y, reg)
    expected = 2.0 / np.linalg.norm(X[0] - X[1]) ** 2
    b = compute_bias(betas, K, y, reg)
    mid_model, _ = qksvm.fit(X, y, RbfKernelSpec(h=1.0), reg)
    mid_score = qksvm.decision_function(mid_model, np.array([1.0, 0.0]))
    ok = (
        rep.converged
        and np.allclose(betas, expected, atol=1e-6)
        and abs(b - (-1.0)) < 1e-6
        and abs(mid_score) < 1e-6
    )
    report(
        "solver two-point analytic case",
        ok,
        f"beta err {np.max(np.abs(betas - expected)):.1e}, b {b:.6f}, midpoint {mid_score:.1e}",
    )


def test_solver_brute_force_equivalence():
    rng = np.random.default_rng(780)
    worst = 0.0
    for m in (4, 5, 6):
        for _ in range(3):
            A = rng.normal(size=(m, m + 2))
            K = A @ A.T
            d = np.sqrt(np.diag(K))
            K = K / np.outer(d, d)
            y = np.ones(m)
            y[: m // 2] = -1.0
            rng.shuffle(y)
            C = 5.0
            _, rep = solve_dual(K, y, RegularizationParams(C=C))
            oracle = projected_gradient_best_objective(K, y, C=C, seed=m)
            worst = max(worst, abs(rep.final_objective - oracle))
    ok = worst < 1e-4
    report("solver brute-force objective equivalence", ok, f"max gap {worst:.2e}")


def test_solver_l2_diagonal_shift_equivalence():
    rng = np.random.default_rng(781)
    A = rng.normal(size=(8, 10))
    K = A @ A.T
    d = np.sqrt(np.diag(K))
    K = K / np.outer(d, d)
    y = np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0])
    betas_a, _ = solve_dual(K, y, RegularizationParams(C=10.0, lambda2=0.1))
    betas_b, _ = solve_dual(K + 0.2 * np.eye(8), y, RegularizationParams(C=10.0))
    gap = float(np.max(np.abs(betas_a - betas_b)))
    report("solver l2 diagonal-shift equivalence", gap < 1e-6, f"max gap {gap:.2e}")


def test_solver_kkt_audit_on_benchmark_models(bench_details):
    audits = bench.audit_converged_models(bench_details, tol=KKT_TOL)
    assert audits, "no converged benchmark models to audit"
    worst = max(v for _, _, v in audits)
    ok = worst <= KKT_TOL + FLOAT_SLACK
    report(
        "KKT audit on converged benchmark models",
        ok,
        f"{len(audits)} models, worst violation {worst:.2e}",
    )


def test_regularization_smoothing(suite_config):
    result = bench.smoothing_experiment(suite_config, base_dir=SUITE_PATH.parent)
    ok = result["gap_reduced"]
    report(
        "regularization narrows the train/test gap",
        ok,
        f"gap {result['baseline']['gap']:.3f} -> {result['tuned']['gap']:.3f} "
        f"at lambda2={result['tuned_lambda2']}",
    )


def _acc(rows, dataset, model):
    row = rows.get((dataset, model))
    assert row is not None and row.error is None, f"missing cell {dataset}/{model}"
    return row.test_accuracy


def test_trend_xor(bench_rows):
    rbf = _acc(bench_rows, "xor", "rbf")
    qy = _acc(bench_rows, "xor", "pauli_y")
    ok = rbf >= 0.9 and qy >= 0.9
    report("trend: XOR strong for rbf and pauli Y", ok, f"rbf {rbf:.3f}, Y {qy:.3f}")


def test_trend_complex(bench_rows):
    zzz = _acc(bench_rows, "complex", "pauli_z_zz")
    rbf = _acc(bench_rows, "complex", "rbf")
    ok = zzz >= 0.9 and rbf <= 0.65 and zzz > rbf
    report(
        "trend: complex favors the entangling quantum kernel",
        ok,
        f"Z+ZZ {zzz:.3f}, rbf {rbf:.3f}",
    )


def test_trend_breast_cancer_parity(bench_rows):
    qy = _acc(bench_rows, "breast_cancer", "pauli_y")
    rbf = _acc(bench_rows, "breast_cancer", "rbf")
    ok = abs(qy - rbf) <= 0.1
    report(
        "trend: breast-cancer parity between pauli Y and rbf",
        ok,
        f"|{qy:.3f} - {rbf:.3f}| = {abs(qy - rbf):.3f}",
    )


def test_trend_interaction_terms_help_on_complex(bench_rows):
    y_yy = _acc(bench_rows, "complex", "pauli_y_yy")
    y = _acc(bench_rows, "complex", "pauli_y")
    z_zz = _acc(bench_rows, "complex", "pauli_z_zz")
    z = _acc(bench_rows, "complex", "pauli_z")
    ok = y_yy > y and z_zz > z
    report(
        "trend: interaction maps beat non-interacting maps on complex",
        ok,
        f"Y+YY {y_yy:.3f} > Y {y:.3f}; Z+ZZ {z_zz:.3f} > Z {z:.3f}",
    )


def test_bench_cell_runtime_budget(bench_details):
    slowest = max(d.wall_runtime_s for d in bench_details)
    ok = slowest < 60.0
    report("benchmark cell runtime budget", ok, f"slowest cell {slowest:.1f}s < 60s")


def test_bench_rerun_byte_identical(bench_details, suite_config, tmp_path):
    first = tmp_path / "bench_run1.csv"
    second = tmp_path / "bench_run2.csv"
    bench.write_bench_csv(bench_details, first)
    rerun = bench.run_suite(suite_config, base_dir=SUITE_PATH.parent)
    bench.write_bench_csv(rerun, second)
    ok = first.read_bytes() == second.read_bytes()
    report("benchmark rerun reproducibility", ok, "result CSVs byte-identical")
