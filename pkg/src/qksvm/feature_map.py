"""Data-dependent circuits that embed a feature vector into a quantum state.

A feature map is described declaratively by axis patterns over {X, Y, Z}:
a one-character pattern such as "Y" contributes one single-qubit rotation
per feature, a two-character pattern such as "ZZ" contributes one entangling
rotation per feature pair. One qubit is used per feature. Each repetition of
the circuit is a Hadamard layer followed by the expanded rotation terms in
declared order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .simulator import (
    PAULI_AXES,
    PauliString,
    StateVector,
    apply_hadamard_all,
    apply_pauli_exponential,
    new_zero_state,
)

DATA_MAPS = ("product_shifted", "plain_product")


@dataclass(frozen=True)
class FeatureMapSpec:
    """Declarative description of a feature-map circuit.

    paulis: axis patterns, e.g. ("Y",) or ("Z", "ZZ").
    alpha: scalar rotation factor multiplying every term's angle.
    depth: number of repetitions of (Hadamard layer + rotation terms).
    data_map: how a feature subset is turned into an angle; "product_shifted"
      uses (pi - x_i)(pi - x_j) for pairs, "plain_product" uses x_i * x_j.
      Singletons map to x_i under both.
    """

    paulis: tuple[str, ...]
    alpha: float
    depth: int = 2
    data_map: str = "product_shifted"

    def __post_init__(self) -> None:
        if not self.paulis:
            raise ConfigError("at least one Pauli pattern is required")
        object.__setattr__(self, "paulis", tuple(p.upper() for p in self.paulis))
        for pattern in self.paulis:
            if not pattern or any(axis not in PAULI_AXES for axis in pattern):
                raise ConfigError(
                    f"pattern {pattern!r} must be a non-empty string over X/Y/Z"
                )
        if not math.isfinite(self.alpha):
            raise ConfigError(f"alpha must be finite, got {self.alpha}")
        if self.depth < 1:
            raise ConfigError(f"depth must be >= 1, got {self.depth}")
        if self.data_map not in DATA_MAPS:
            raise ConfigError(
                f"data_map must be one of {DATA_MAPS}, got {self.data_map!r}"
            )

    def to_dict(self) -> dict:
        return {
            "paulis": list(self.paulis),
            "alpha": self.alpha,
            "depth": self.depth,
            "data_map": self.data_map,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FeatureMapSpec":
        try:
            return cls(
                paulis=tuple(doc["paulis"]),
                alpha=float(doc["alpha"]),
                depth=int(doc.get("depth", 2)),
                data_map=str(doc.get("data_map", "product_shifted")),
            )
        except KeyError as exc:
            raise ConfigError(f"feature map document missing key {exc}") from exc


def expand_terms(
    spec: FeatureMapSpec, n_features: int
) -> list[tuple[PauliString, tuple[int, ...]]]:
    """Enumerate the rotation terms of the circuit as (PauliString, subset) pairs.

    Patterns expand in declared order; within a pattern, qubit subsets are in
    lexicographic index order ("YY" on 3 features gives Y0Y1, Y0Y2, Y1Y2).
    """
    terms: list[tuple[PauliString, tuple[int, ...]]] = []
    for pattern in spec.paulis:
        k = len(pattern)
        if k > n_features:
            raise ConfigError(
                f"pattern {pattern!r} needs {k} features, got {n_features}"
            )
        for subset in itertools.combinations(range(n_features), k):
            pauli = PauliString(tuple(zip(subset, pattern)))
            terms.append((pauli, subset))
    return terms


def data_map_phi(subset: Sequence[int], x: np.ndarray, data_map: str) -> float:
    """Rotation angle contributed by a feature subset before the alpha factor."""
    if len(subset) == 1:
        return float(x[subset[0]])
    if len(subset) == 2:
        i, j = subset
        if data_map == "plain_product":
            return float(x[i] * x[j])
        return float((np.pi - x[i]) * (np.pi - x[j]))
    raise ConfigError(
        f"data map supports subsets of size 1 or 2, got {len(subset)}"
    )


def build_feature_state(x: Sequence[float], spec: FeatureMapSpec) -> StateVector:
    """Run the feature-map circuit on |0...0> for the data point x.

    One qubit per feature; each of spec.depth repetitions applies a Hadamard
    layer and then every expanded term exp(i * alpha * phi_S(x) * P_S) in
    order.
    """
    values = np.asarray(x, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError(f"x must be a non-empty 1-d vector, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("x contains non-finite values")
    n = values.size
    terms = expand_terms(spec, n)
    angles = [spec.alpha * data_map_phi(subset, values, spec.data_map) for _, subset in terms]

    state = new_zero_state(n)
    for _ in range(spec.depth):
        state = apply_hadamard_all(state)
        for (pauli, _), angle in zip(terms, angles):
            state = apply_pauli_exponential(state, pauli, angle)
    return state


def feature_states(X: np.ndarray, spec: FeatureMapSpec) -> np.ndarray:
    """Stack the feature states of the rows of X into an (m, 2**d) array."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-d, got shape {X.shape}")
    return np.stack([build_feature_state(row, spec).amplitudes for row in X])
