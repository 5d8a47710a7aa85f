"""Regularized dual SVM: SMO-style solver, bias, decision function, model I/O.

The solved problem is

    max  sum_i (1 - lambda1) beta_i
         - 1/2 sum_ij beta_i beta_j y_i y_j (K_ij + 2 lambda2 delta_ij)
    s.t. 0 <= beta_i <= C,  sum_i beta_i y_i = 0

which is the classical dual with the l1 penalty folded into the linear term
(valid because beta >= 0) and the squared l2 penalty folded into a diagonal
shift of the label-weighted quadratic form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, DataError, TrainingError
from .kernels import KernelSpec, cross_matrix, gram_matrix, kernel_spec_from_dict

MODEL_FORMAT_VERSION = "1.0"

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class RegularizationParams:
    """Box bound C plus l1/l2 penalty weights on the dual coefficients."""

    C: float
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.C) and self.C > 0):
            raise ConfigError(f"C must be positive and finite, got {self.C}")
        if not (0.0 <= self.lambda1 < 1.0):
            raise ConfigError(f"lambda1 must satisfy 0 <= lambda1 < 1, got {self.lambda1}")
        if not (math.isfinite(self.lambda2) and self.lambda2 >= 0.0):
            raise ConfigError(f"lambda2 must be >= 0, got {self.lambda2}")

    def to_dict(self) -> dict:
        return {"C": self.C, "lambda1": self.lambda1, "lambda2": self.lambda2}

    @classmethod
    def from_dict(cls, doc: dict) -> "RegularizationParams":
        return cls(
            C=float(doc["C"]),
            lambda1=float(doc.get("lambda1", 0.0)),
            lambda2=float(doc.get("lambda2", 0.0)),
        )


@dataclass
class TrainReport:
    iterations: int
    final_objective: float
    kkt_violation: float
    converged: bool
    objective_history: Optional[list[float]] = None


def _check_training_inputs(K: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"K must be square, got shape {K.shape}")
    if y.shape != (K.shape[0],):
        raise ValueError(f"y must have {K.shape[0]} entries, got shape {y.shape}")
    if not np.all(np.isfinite(K)):
        raise DataError("kernel matrix contains non-finite entries")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1 or -1")
    if np.all(y > 0) or np.all(y < 0):
        raise TrainingError("training requires both classes to be present")
    return K, y


def solve_dual(
    K,
    y,
    reg: RegularizationParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    track_objective: bool = False,
) -> tuple[np.ndarray, TrainReport]:
    """Maximize the regularized dual by pairwise coordinate ascent.

    Each step picks the maximal-violating pair (largest KKT violation, lowest
    index on ties), solves the two-variable subproblem in closed form, and
    clips to the box while keeping sum_i beta_i y_i = 0 exact. Returns the
    coefficients and a TrainReport; if max_iter is exhausted the report has
    converged=False and the (feasible) coefficients are still returned.
    """
    K, y = _check_training_inputs(K, y)
    m = K.shape[0]
    C = reg.C
    p = 1.0 - reg.lambda1
    K_shift = K + (2.0 * reg.lambda2) * np.eye(m)

    beta = np.zeros(m)
    F = np.zeros(m)  # F_i = sum_j beta_j y_j K_shift[i, j], updated incrementally
    pos = y > 0

    history: Optional[list[float]] = [] if track_objective else None

    def objective() -> float:
        u = beta * y
        return float(p * beta.sum() - 0.5 * np.dot(u, F))

    def gap_and_pair(Fv: np.ndarray) -> tuple[float, int, int]:
        v = p * y - Fv
        up = (pos & (beta < C)) | (~pos & (beta > 0.0))
        low = (~pos & (beta < C)) | (pos & (beta > 0.0))
        if not up.any() or not low.any():
            return 0.0, -1, -1
        i = int(np.argmax(np.where(up, v, -np.inf)))
        j = int(np.argmin(np.where(low, v, np.inf)))
        return float(v[i] - v[j]), i, j

    iterations = 0
    converged = False
    violation = np.inf
    while iterations < max_iter:
        violation, i, j = gap_and_pair(F)
        if violation <= tol:
            # Re-check against a freshly computed gradient before declaring
            # convergence; incremental F updates can drift over many steps.
            F_fresh = K_shift @ (beta * y)
            fresh_violation, i, j = gap_and_pair(F_fresh)
            if fresh_violation <= tol:
                violation = fresh_violation
                converged = True
                F = F_fresh
                break
            F = F_fresh
            violation = fresh_violation

        eta = K_shift[i, i] + K_shift[j, j] - 2.0 * K_shift[i, j]
        if eta < 1e-12:
            eta = 1e-12
        t = violation / eta

        room_i = C - beta[i] if pos[i] else beta[i]
        room_j = beta[j] if pos[j] else C - beta[j]
        if room_i <= t and room_i <= room_j:
            # beta_i hits its bound exactly; derive beta_j from the equality.
            new_i = C if pos[i] else 0.0
            du = y[i] * (new_i - beta[i])
            new_j = beta[j] - y[j] * du
        elif room_j <= t:
            new_j = 0.0 if pos[j] else C
            du = -y[j] * (new_j - beta[j])
            new_i = beta[i] + y[i] * du
        else:
            du = t
            new_i = beta[i] + y[i] * t
            new_j = beta[j] - y[j] * t
        beta[i] = new_i
        beta[j] = new_j
        F += du * (K_shift[i] - K_shift[j])
        iterations += 1
        if history is not None:
            history.append(objective())

    np.clip(beta, 0.0, C, out=beta)
    F = K_shift @ (beta * y)
    if not converged:
        violation = gap_and_pair(F)[0]
    report = TrainReport(
        iterations=iterations,
        final_objective=objective(),
        kkt_violation=float(violation),
        converged=converged,
        objective_history=history,
    )
    return beta, report


def support_threshold(reg: RegularizationParams) -> float:
    return 1e-8 * reg.C


def compute_bias(betas, K, y, reg: RegularizationParams) -> float:
    """Offset b from KKT stationarity.

    Averages y_i - F_i over free support vectors (F uses the lambda2-shifted
    kernel); with no free support vector, b is the midpoint of the interval
    that keeps every bound-constrained point KKT-feasible.
    """
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    eps_sv = support_threshold(reg)
    if not (betas > eps_sv).any():
        raise TrainingError("model has no support vectors")
    # Same float path as the solver's fresh-gradient pass.
    K_shift = K + (2.0 * reg.lambda2) * np.eye(K.shape[0])
    F = K_shift @ (betas * y)

    free = (betas > eps_sv) & (betas < reg.C - eps_sv)
    if free.any():
        return float(np.mean(y[free] - F[free]))

    at_zero = betas <= eps_sv
    at_cap = ~at_zero
    lower = []
    upper = []
    for idx in np.nonzero(at_zero)[0]:  # y_i (F_i + b) >= 1
        if y[idx] > 0:
            lower.append(1.0 - F[idx])
        else:
            upper.append(-1.0 - F[idx])
    for idx in np.nonzero(at_cap)[0]:  # y_i (F_i + b) <= 1
        if y[idx] > 0:
            upper.append(1.0 - F[idx])
        else:
            lower.append(-1.0 - F[idx])
    if lower and upper:
        return float((max(lower) + min(upper)) / 2.0)
    if lower:
        return float(max(lower))
    return float(min(upper))


@dataclass
class SvmModel:
    """Trained dual SVM: coefficients over the training points plus the bias."""

    kernel: KernelSpec
    reg: RegularizationParams
    train_X: np.ndarray
    labels: np.ndarray
    betas: np.ndarray
    bias: float

    @property
    def support_mask(self) -> np.ndarray:
        return self.betas > support_threshold(self.reg)

    @property
    def support_points(self) -> np.ndarray:
        return self.train_X[self.support_mask]

    @property
    def n_support(self) -> int:
        return int(self.support_mask.sum())

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kernel": self.kernel.to_dict(),
            "reg": self.reg.to_dict(),
            "train_X": [[float(v) for v in row] for row in self.train_X],
            "labels": [int(v) for v in self.labels],
            "betas": [float(v) for v in self.betas],
            "bias": float(self.bias),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SvmModel":
        version = str(doc.get("format_version", ""))
        if version.split(".")[0] != MODEL_FORMAT_VERSION.split(".")[0]:
            raise ConfigError(
                f"unsupported model format version {version!r}; "
                f"expected major version {MODEL_FORMAT_VERSION.split('.')[0]}"
            )
        return cls(
            kernel=kernel_spec_from_dict(doc["kernel"]),
            reg=RegularizationParams.from_dict(doc["reg"]),
            train_X=np.asarray(doc["train_X"], dtype=np.float64),
            labels=np.asarray(doc["labels"], dtype=np.int64),
            betas=np.asarray(doc["betas"], dtype=np.float64),
            bias=float(doc["bias"]),
        )


def save_model(model: SvmModel, path, extra: Optional[dict] = None) -> None:
    doc = model.to_dict()
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_model(path) -> SvmModel:
    with open(path) as fh:
        return SvmModel.from_dict(json.load(fh))


def fit(
    X,
    y,
    kernel: KernelSpec,
    reg: RegularizationParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[SvmModel, TrainReport]:
    """Train a model: Gram matrix, dual solve, bias."""
    X = np.asarray(X, dtype=np.float64)
    y_arr = np.asarray(y)
    K = gram_matrix(X, kernel)
    betas, report = solve_dual(K, y_arr, reg, tol=tol, max_iter=max_iter)
    bias = compute_bias(betas, K, y_arr, reg)
    model = SvmModel(
        kernel=kernel,
        reg=reg,
        train_X=X,
        labels=np.asarray(y_arr, dtype=np.int64),
        betas=betas,
        bias=bias,
    )
    return model, report


def decision_function_batch(model: SvmModel, X) -> np.ndarray:
    """Signed scores f(x) = sum_i beta_i y_i K(x_i, x) + b for the rows of X."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-d, got shape {X.shape}")
    if X.shape[1] != model.train_X.shape[1]:
        raise ValueError(
            f"feature dimension mismatch: model has {model.train_X.shape[1]}, "
            f"got {X.shape[1]}"
        )
    cross = cross_matrix(model.train_X, X, model.kernel)
    weights = model.betas * model.labels.astype(np.float64)
    return cross @ weights + model.bias


def decision_function(model: SvmModel, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"x must be a 1-d vector, got shape {x.shape}")
    return float(decision_function_batch(model, x[None, :])[0])


def predict(model: SvmModel, X) -> np.ndarray:
    """Class labels from score signs; sign(0) counts as +1."""
    scores = decision_function_batch(model, X)
    return np.where(scores >= 0.0, 1, -1)


def accuracy(model: SvmModel, X_eval, y_eval) -> float:
    y_eval = np.asarray(y_eval)
    if y_eval.size == 0:
        raise ValueError("evaluation set must be non-empty")
    return float(np.mean(predict(model, X_eval) == y_eval))


def kkt_max_violation(
    betas, K, y, reg: RegularizationParams, bias: float, margin: float = 1.0
) -> float:
    """Largest violation of the stationarity conditions at the given solution.

    Uses the lambda2-shifted kernel: beta_i = 0 demands y_i f(x_i) >= margin,
    beta_i = C demands y_i f(x_i) <= margin, interior points demand equality.
    """
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    eps_sv = support_threshold(reg)
    K_shift = K + (2.0 * reg.lambda2) * np.eye(K.shape[0])
    F = K_shift @ (betas * y)
    yf = y * (F + bias)

    at_zero = betas <= eps_sv
    at_cap = betas >= reg.C - eps_sv
    interior = ~(at_zero | at_cap)
    worst = 0.0
    if at_zero.any():
        worst = max(worst, float(np.max(margin - yf[at_zero], initial=0.0)))
    if at_cap.any():
        worst = max(worst, float(np.max(yf[at_cap] - margin, initial=0.0)))
    if interior.any():
        worst = max(worst, float(np.max(np.abs(yf[interior] - margin))))
    return worst
