"""Fidelity kernel from feature-map states and the classical RBF baseline.

Gram matrices are plain float64 numpy arrays; they are exactly symmetric by
construction (the upper triangle is computed and mirrored) with unit
diagonal up to floating error.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError
from .feature_map import FeatureMapSpec, build_feature_state, feature_states


@dataclass(frozen=True)
class QuantumKernelSpec:
    """Fidelity kernel |<phi(x)|phi(z)>|**2 induced by a feature map."""

    feature_map: FeatureMapSpec

    def to_dict(self) -> dict:
        return {"kind": "quantum", "feature_map": self.feature_map.to_dict()}


@dataclass(frozen=True)
class RbfKernelSpec:
    """Radial basis kernel with width h.

    The default form is exp(-||u - v|| / h) with the unsquared euclidean
    norm; squared=True selects the common squared-exponential variant
    exp(-||u - v||**2 / (2 h**2)).
    """

    h: float
    squared: bool = False

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise ConfigError(f"rbf width h must be > 0, got {self.h}")

    def to_dict(self) -> dict:
        return {"kind": "rbf", "h": self.h, "squared": self.squared}


KernelSpec = Union[QuantumKernelSpec, RbfKernelSpec]


def kernel_spec_from_dict(doc: dict) -> KernelSpec:
    kind = doc.get("kind")
    if kind == "quantum":
        return QuantumKernelSpec(FeatureMapSpec.from_dict(doc["feature_map"]))
    if kind == "rbf":
        return RbfKernelSpec(h=float(doc["h"]), squared=bool(doc.get("squared", False)))
    raise ConfigError(f"unknown kernel kind {kind!r}")


def quantum_kernel(x, z, fm: FeatureMapSpec) -> float:
    """Squared overlap of the feature states of x and z; symmetric, in [0, 1]."""
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    a = build_feature_state(x, fm).amplitudes
    b = build_feature_state(z, fm).amplitudes
    return float(abs(np.vdot(a, b)) ** 2)


def rbf_kernel(x, z, h: float, squared: bool = False) -> float:
    """exp(-||x - z|| / h), or exp(-||x - z||**2 / (2 h**2)) if squared."""
    if not h > 0:
        raise ValueError(f"rbf width h must be > 0, got {h}")
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    d = float(np.linalg.norm(x - z))
    if squared:
        return float(np.exp(-(d * d) / (2.0 * h * h)))
    return float(np.exp(-d / h))


def _mirror_upper(values: np.ndarray) -> np.ndarray:
    upper = np.triu(values)
    return upper + np.triu(values, 1).T


def _quantum_values(states_a: np.ndarray, states_b: np.ndarray) -> np.ndarray:
    overlaps = states_a @ states_b.conj().T
    return np.abs(overlaps) ** 2


def _rbf_values(A: np.ndarray, B: np.ndarray, spec: RbfKernelSpec) -> np.ndarray:
    diff = A[:, None, :] - B[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    if spec.squared:
        return np.exp(-(dist * dist) / (2.0 * spec.h * spec.h))
    return np.exp(-dist / spec.h)


def gram_matrix(X, spec: KernelSpec) -> np.ndarray:
    """Kernel matrix K[i, j] = K(x_i, x_j) for the rows of X.

    Quantum feature states are built once per point and reused for all pairs.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError(f"X must be a non-empty 2-d array, got shape {X.shape}")
    if isinstance(spec, QuantumKernelSpec):
        states = feature_states(X, spec.feature_map)
        values = _quantum_values(states, states)
    else:
        values = _rbf_values(X, X, spec)
    return _mirror_upper(values)


def cross_matrix(X_train, X_eval, spec: KernelSpec) -> np.ndarray:
    """Rectangular kernel block M[i, j] = K(x_eval_i, x_train_j)."""
    X_train = np.asarray(X_train, dtype=np.float64)
    X_eval = np.asarray(X_eval, dtype=np.float64)
    if X_train.ndim != 2 or X_eval.ndim != 2:
        raise ValueError("X_train and X_eval must be 2-d arrays")
    if X_train.shape[1] != X_eval.shape[1]:
        raise ValueError(
            f"feature dimension mismatch: {X_train.shape[1]} vs {X_eval.shape[1]}"
        )
    if isinstance(spec, QuantumKernelSpec):
        train_states = feature_states(X_train, spec.feature_map)
        eval_states = feature_states(X_eval, spec.feature_map)
        return _quantum_values(eval_states, train_states)
    return _rbf_values(X_eval, X_train, spec)


def save_gram_csv(values: np.ndarray, path) -> None:
    """Write a Gram matrix row-major as CSV; the header records the size m."""
    values = np.asarray(values)
    m = values.shape[0]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"k{j}" for j in range(m)])
        for row in values:
            writer.writerow([repr(float(v)) for v in row])
