"""Independent dense-matrix oracles used to cross-check the fast paths.

Everything here goes through explicit 2**n x 2**n matrices and
scipy.linalg.expm, never through the closed forms under test.
"""

import numpy as np
from scipy.linalg import expm

from qksvm.feature_map import FeatureMapSpec, data_map_phi, expand_terms
from qksvm.simulator import PauliString

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def pauli_string_matrix(p: PauliString, n_qubits: int) -> np.ndarray:
    """Dense matrix of a Pauli string; qubit 0 is the least significant bit."""
    axes = {q: axis for q, axis in p.terms}
    out = np.array([[1.0 + 0j]])
    for q in range(n_qubits - 1, -1, -1):  # kron builds from the high qubit down
        out = np.kron(out, PAULI_MATRICES[axes.get(q, "I")])
    return out


def pauli_exponential_matrix(p: PauliString, theta: float, n_qubits: int) -> np.ndarray:
    """exp(i * theta * P) by scaling-and-squaring on the dense generator."""
    return expm(1j * theta * pauli_string_matrix(p, n_qubits))


def hadamard_all_matrix(n_qubits: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for _ in range(n_qubits):
        out = np.kron(out, HADAMARD)
    return out


def circuit_unitary(x, spec: FeatureMapSpec) -> np.ndarray:
    """Full feature-map circuit unitary, multiplied out densely."""
    x = np.asarray(x, dtype=float)
    n = x.size
    dim = 1 << n
    h_layer = hadamard_all_matrix(n)
    per_rep = h_layer
    for pauli, subset in expand_terms(spec, n):
        angle = spec.alpha * data_map_phi(subset, x, spec.data_map)
        per_rep = pauli_exponential_matrix(pauli, angle, n) @ per_rep
    total = np.eye(dim, dtype=complex)
    for _ in range(spec.depth):
        total = per_rep @ total
    return total


def feature_state_oracle(x, spec: FeatureMapSpec) -> np.ndarray:
    """Amplitudes of the feature state via the dense circuit unitary."""
    x = np.asarray(x, dtype=float)
    dim = 1 << x.size
    zero = np.zeros(dim, dtype=complex)
    zero[0] = 1.0
    return circuit_unitary(x, spec) @ zero


def quantum_kernel_oracle(x, z, spec: FeatureMapSpec) -> float:
    a = feature_state_oracle(x, spec)
    b = feature_state_oracle(z, spec)
    return float(abs(np.vdot(a, b)) ** 2)


def random_pauli_string(rng: np.random.Generator, n_qubits: int) -> PauliString:
    k = int(rng.integers(1, n_qubits + 1))
    qubits = sorted(rng.choice(n_qubits, size=k, replace=False).tolist())
    axes = rng.choice(["X", "Y", "Z"], size=k)
    return PauliString(tuple((int(q), str(a)) for q, a in zip(qubits, axes)))


def random_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    dim = 1 << n_qubits
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _project_box_hyperplane(v, y, C, iters: int = 80) -> np.ndarray:
    """Euclidean projection onto {0 <= b <= C, y.b = 0} by bisection on the
    hyperplane multiplier."""
    lo, hi = -1e6, 1e6
    for _ in range(iters):
        nu = 0.5 * (lo + hi)
        candidate = np.clip(v - nu * y, 0.0, C)
        s = float(y @ candidate)
        if s > 0:
            lo = nu
        else:
            hi = nu
    return np.clip(v - 0.5 * (lo + hi) * y, 0.0, C)


def projected_gradient_best_objective(
    K, y, C, lambda1=0.0, lambda2=0.0, n_starts=4, n_steps=1500, seed=0
) -> float:
    """Best dual objective found by projected gradient ascent from several
    starts; global optimum for this concave QP up to step-size accuracy."""
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    m = K.shape[0]
    p = 1.0 - lambda1
    K_shift = K + 2.0 * lambda2 * np.eye(m)
    Q = (y[:, None] * K_shift) * y[None, :]
    lip = float(np.linalg.eigvalsh(Q).max())
    step = 1.0 / max(lip, 1e-12)

    def objective(b):
        return float(p * b.sum() - 0.5 * b @ Q @ b)

    rng = np.random.default_rng(seed)
    best = -np.inf
    starts = [np.zeros(m)] + [
        _project_box_hyperplane(rng.uniform(0, C, size=m), y, C)
        for _ in range(n_starts - 1)
    ]
    for b in starts:
        b = b.copy()
        for _ in range(n_steps):
            grad = p - Q @ b
            new = _project_box_hyperplane(b + step * grad, y, C)
            if np.max(np.abs(new - b)) < 1e-13 * max(C, 1.0):
                b = new
                break
            b = new
        best = max(best, objective(b))
    return best
