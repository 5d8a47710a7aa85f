"""Dense statevector simulation of Hadamard layers and Pauli-string exponentials.

Qubit 0 is the least-significant bit of the amplitude index, so for two
qubits the basis order is |00>, |01>, |10>, |11> with the right bit being
qubit 0. Global phase is preserved by every operation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceError

MAX_QUBITS = 24

_SQRT2_INV = 1.0 / np.sqrt(2.0)
# i**k for k = 0..3, kept exact (complex pow of 1j is not).
_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)

PAULI_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, e.g. Z on qubit 0 times Z on qubit 1.

    terms: ordered (qubit_index, axis) pairs with distinct qubit indices and
    axis one of "X", "Y", "Z". Squares to the identity, which is what makes
    the closed-form exponential in apply_pauli_exponential valid.
    """

    terms: tuple[tuple[int, str], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("PauliString requires at least one term")
        seen = set()
        for qubit, axis in self.terms:
            if qubit < 0:
                raise ValueError(f"negative qubit index {qubit}")
            if qubit in seen:
                raise ValueError(f"duplicate qubit index {qubit}")
            if axis not in PAULI_AXES:
                raise ValueError(f"axis must be one of {PAULI_AXES}, got {axis!r}")
            seen.add(qubit)

    @classmethod
    def of(cls, *terms: tuple[int, str]) -> "PauliString":
        return cls(tuple(terms))

    @property
    def max_qubit(self) -> int:
        return max(q for q, _ in self.terms)

    def __str__(self) -> str:
        return " ".join(f"{axis}{q}" for q, axis in self.terms)


@dataclass(frozen=True)
class StateVector:
    """Pure n-qubit state as 2**n complex amplitudes.

    Treated as immutable: operations return new StateVector values.
    """

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} "
                f"qubits, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def new_zero_state(n_qubits: int) -> StateVector:
    """Return |0...0> on n_qubits qubits.

    n_qubits is capped at MAX_QUBITS to keep the dense representation within
    memory bounds.
    """
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ResourceError(
            f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
        )
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def apply_hadamard_all(state: StateVector) -> StateVector:
    """Apply a Hadamard to every qubit."""
    amps = state.amplitudes
    for q in range(state.n_qubits):
        amps = amps.reshape(-1, 2, 1 << q)
        new = np.empty_like(amps)
        new[:, 0, :] = (amps[:, 0, :] + amps[:, 1, :]) * _SQRT2_INV
        new[:, 1, :] = (amps[:, 0, :] - amps[:, 1, :]) * _SQRT2_INV
        amps = new
    return StateVector(state.n_qubits, amps.reshape(state.dim))


def _bit_parity(values: np.ndarray) -> np.ndarray:
    """Parity of the set bits of each entry (entries < 2**24)."""
    v = values.copy()
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


def pauli_apply(state: StateVector, p: PauliString) -> StateVector:
    """Return P|state> for a Pauli string P."""
    if p.max_qubit >= state.n_qubits:
        raise ValueError(
            f"PauliString acts on qubit {p.max_qubit} but state has "
            f"{state.n_qubits} qubits"
        )
    flip_mask = 0  # X and Y flip the bit they act on
    sign_mask = 0  # Y and Z contribute (-1)**bit
    n_y = 0
    for qubit, axis in p.terms:
        bit = 1 << qubit
        if axis in ("X", "Y"):
            flip_mask |= bit
        if axis in ("Y", "Z"):
            sign_mask |= bit
        if axis == "Y":
            n_y += 1

    idx = np.arange(state.dim)
    signs = 1.0 - 2.0 * _bit_parity(idx & sign_mask)
    out = np.empty_like(state.amplitudes)
    out[idx ^ flip_mask] = _I_POW[n_y % 4] * signs * state.amplitudes
    return StateVector(state.n_qubits, out)


def apply_pauli_exponential(
    state: StateVector, p: PauliString, theta: float
) -> StateVector:
    """Apply exp(i * theta * P) = cos(theta)*I + i*sin(theta)*P.

    The closed form holds because any Pauli string squares to the identity.
    """
    p_state = pauli_apply(state, p)
    amps = np.cos(theta) * state.amplitudes + (1j * np.sin(theta)) * p_state.amplitudes
    return StateVector(state.n_qubits, amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return <a|b> = sum_k conj(a_k) * b_k."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))
