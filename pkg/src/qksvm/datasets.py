"""Benchmark datasets: generators, CSV ingestion, PCA, scaling, and splits.

Two synthetic generators (an XOR blob pattern and a quantum-labeled
"complex" set) plus CSV loading for real data. The preprocessing pipeline
is fixed: subset classes, PCA to 2 dimensions when wider, scale features to
[0, 2*pi] using training-split statistics only, then emit the split.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, GenerationError
from .feature_map import FeatureMapSpec, build_feature_state

TWO_PI = 2.0 * np.pi

XOR_CENTER = np.pi / 2.0  # blob offset from the pattern center, pre-shift
ADHOC_GRID_RESOLUTION = 100

GENERATOR_VERSION = "1.0"


@dataclass
class Dataset:
    """Feature matrix with +/-1 labels and provenance metadata."""

    X: np.ndarray
    y: np.ndarray
    name: str
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2:
            raise DataError(f"X must be 2-d, got shape {self.X.shape}")
        if self.y.shape != (self.X.shape[0],):
            raise DataError(
                f"label count {self.y.shape} does not match {self.X.shape[0]} rows"
            )
        if not np.all(np.isin(self.y, (-1, 1))):
            raise DataError("labels must be +1 or -1")

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def subset(self, indices: np.ndarray, name: Optional[str] = None) -> "Dataset":
        return Dataset(
            X=self.X[indices], y=self.y[indices], name=name or self.name, seed=self.seed
        )


def gen_xor(m: int, noise_sd: float = 0.3, seed: int = 0) -> Dataset:
    """XOR-patterned blobs in [0, 2*pi]**2.

    Class +1 sits on the (+,+) and (-,-) quadrant centers, class -1 on the
    mixed-sign centers, with isotropic gaussian noise, shifted by pi so the
    pattern fills [0, 2*pi]**2 (and clipped to that square on the rare noise
    excursion). Deterministic per seed; classes are exactly balanced.
    """
    if m < 4:
        raise ValueError(f"m must be >= 4, got {m}")
    if m % 2 != 0:
        raise ValueError(f"m must be even for balanced classes, got {m}")
    if noise_sd < 0:
        raise ValueError(f"noise_sd must be >= 0, got {noise_sd}")
    rng = np.random.default_rng(seed)
    q = XOR_CENTER
    centers = {
        1: [(q, q), (-q, -q)],
        -1: [(q, -q), (-q, q)],
    }
    rows = []
    labels = []
    per_class = m // 2
    for label in (1, -1):
        for k in range(per_class):
            cx, cy = centers[label][k % 2]
            point = np.array([cx, cy]) + rng.normal(0.0, noise_sd, size=2)
            rows.append(point + np.pi)
            labels.append(label)
    X = np.clip(np.array(rows), 0.0, TWO_PI)
    return Dataset(X=X, y=np.array(labels), name="xor", seed=seed)


def _haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def adhoc_expectation(x: np.ndarray, observable: np.ndarray, fm: FeatureMapSpec) -> float:
    """<phi(x)| O |phi(x)> for a hermitian observable O; real up to float noise."""
    amps = build_feature_state(x, fm).amplitudes
    return float(np.real(np.vdot(amps, observable @ amps)))


def adhoc_feature_map() -> FeatureMapSpec:
    """The entangling map whose state expectations label the complex dataset.

    alpha=2 reproduces the rotation scale of the construction this dataset
    is modeled on; smaller factors leave label regions smooth enough for a
    tuned RBF kernel to fit, defeating the dataset's purpose.
    """
    return FeatureMapSpec(paulis=("Z", "ZZ"), alpha=2.0, depth=2)


def gen_adhoc_complex(m: int, gap: float = 0.3, seed: int = 0) -> Dataset:
    """Dataset labeled by a quantum observable, engineered to favor the
    entangling feature map.

    Candidates come from a uniform grid over [0, 2*pi]**2; each is labeled by
    the sign of <phi(x)| V' (Z@Z) V |phi(x)> for a seed-fixed Haar-random V,
    and kept only when the expectation clears the gap. Returns m points,
    balanced and deterministic per seed.
    """
    if m < 4:
        raise ValueError(f"m must be >= 4, got {m}")
    if m % 2 != 0:
        raise ValueError(f"m must be even for balanced classes, got {m}")
    if not gap > 0:
        raise ValueError(f"gap must be > 0, got {gap}")
    rng = np.random.default_rng(seed)
    V = _haar_unitary(4, rng)
    zz = np.diag([1.0, -1.0, -1.0, 1.0]).astype(np.complex128)
    observable = V.conj().T @ zz @ V
    fm = adhoc_feature_map()

    axis = np.linspace(0.0, TWO_PI, ADHOC_GRID_RESOLUTION, endpoint=False)
    pos_pool = []
    neg_pool = []
    for x1 in axis:
        for x2 in axis:
            point = np.array([x1, x2])
            e = adhoc_expectation(point, observable, fm)
            if e >= gap:
                pos_pool.append(point)
            elif e <= -gap:
                neg_pool.append(point)
    per_class = m // 2
    if len(pos_pool) < per_class or len(neg_pool) < per_class:
        raise GenerationError(
            f"grid yielded {len(pos_pool)}/{len(neg_pool)} candidates past "
            f"gap {gap}; need {per_class} per class - try a smaller gap"
        )
    pos_take = rng.choice(len(pos_pool), size=per_class, replace=False)
    neg_take = rng.choice(len(neg_pool), size=per_class, replace=False)
    X = np.vstack(
        [np.array(pos_pool)[pos_take], np.array(neg_pool)[neg_take]]
    )
    y = np.array([1] * per_class + [-1] * per_class)
    return Dataset(X=X, y=y, name="adhoc", seed=seed)


def save_csv(ds: Dataset, path) -> None:
    """Write the documented dataset format: header f1,...,fd,label."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i + 1}" for i in range(ds.d)] + ["label"])
        for row, label in zip(ds.X, ds.y):
            writer.writerow([repr(float(v)) for v in row] + [str(int(label))])


def load_csv(
    path,
    classes: Optional[tuple] = None,
    name: Optional[str] = None,
) -> Dataset:
    """Read the dataset CSV format and map the two classes to -1/+1.

    classes, when given, is (negative_label, positive_label) against the raw
    label column; other rows are dropped. Without it the file must contain
    exactly two distinct labels, mapped to -1/+1 in sorted order.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read dataset file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if len(header) < 2 or header[-1] != "label":
            raise DataError(
                f"{path}: header must be f1,...,fd,label, got {header!r}"
            )
        d = len(header) - 1
        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for line_no, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != d + 1:
                raise DataError(
                    f"{path}: row {line_no} has {len(cells)} cells, expected {d + 1}"
                )
            try:
                values = [float(c) for c in cells[:d]]
            except ValueError:
                raise DataError(
                    f"{path}: row {line_no} has a non-numeric feature cell"
                ) from None
            if not all(np.isfinite(values)):
                raise DataError(f"{path}: row {line_no} has a non-finite feature")
            rows.append(values)
            raw_labels.append(cells[d].strip())
    if not rows:
        raise DataError(f"{path}: no data rows")

    labels = np.array(raw_labels)
    if classes is not None:
        neg, pos = str(classes[0]), str(classes[1])
        keep = (labels == neg) | (labels == pos)
        if not keep.any():
            raise DataError(f"{path}: no rows with labels {neg!r} or {pos!r}")
        labels = labels[keep]
        X = np.array(rows)[keep]
        y = np.where(labels == pos, 1, -1)
    else:
        distinct = sorted(set(labels))
        if len(distinct) != 2:
            raise DataError(
                f"{path}: expected exactly 2 classes, found {len(distinct)} "
                f"({distinct[:6]}...); pass an explicit class pair"
            )
        X = np.array(rows)
        y = np.where(labels == distinct[1], 1, -1)
    return Dataset(X=X, y=y, name=name or str(path))


@dataclass(frozen=True)
class PcaTransform:
    """Top-2 principal axes: mean, orthonormal component rows, variances."""

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray


def fit_pca_2d(X) -> PcaTransform:
    """Top-2 eigenpairs of the sample covariance of X.

    Sign convention: each component's largest-magnitude entry is positive,
    which makes the transform deterministic.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 3 or X.shape[1] < 2:
        raise DataError(
            f"PCA needs at least 3 samples and 2 features, got shape {X.shape}"
        )
    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / (X.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:2]
    top_vals = eigvals[order]
    if top_vals[0] <= 0 or top_vals[1] <= 1e-12 * top_vals[0]:
        raise DataError("data is rank-deficient; fewer than 2 nonzero eigenvalues")
    components = eigvecs[:, order].T.copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PcaTransform(
        mean=mean, components=components, explained_variance=top_vals
    )


def apply_pca(t: PcaTransform, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != t.mean.shape[0]:
        raise ValueError(
            f"expected shape (m, {t.mean.shape[0]}), got {X.shape}"
        )
    return (X - t.mean) @ t.components.T


@dataclass(frozen=True)
class ScaleRecord:
    """Per-feature min/max of the fitting data, reused on held-out points."""

    mins: np.ndarray
    maxs: np.ndarray


def fit_angle_scaler(X) -> ScaleRecord:
    X = np.asarray(X, dtype=np.float64)
    mins = X.min(axis=0)
    maxs = X.max(axis=0)
    if np.any(maxs <= mins):
        bad = int(np.argmax(maxs <= mins))
        raise DataError(f"feature {bad} is constant; cannot scale to an angle range")
    return ScaleRecord(mins=mins, maxs=maxs)


def apply_angle_scale(record: ScaleRecord, X) -> np.ndarray:
    """Affine map taking the recorded min/max to [0, 2*pi]; no clamping, so
    held-out values outside the fitted range land outside the interval."""
    X = np.asarray(X, dtype=np.float64)
    return (X - record.mins) / (record.maxs - record.mins) * TWO_PI


def scale_to_angle_range(X) -> tuple[np.ndarray, ScaleRecord]:
    record = fit_angle_scaler(X)
    return apply_angle_scale(record, X), record


def split_indices(
    y, test_frac: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stratified train/test index split, deterministic per seed."""
    if not 0.0 < test_frac < 1.0:
        raise ValueError(f"test_frac must be in (0, 1), got {test_frac}")
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    train_parts = []
    test_parts = []
    for label in sorted(set(y.tolist())):
        idx = np.nonzero(y == label)[0]
        if idx.size < 2:
            raise DataError(
                f"class {label} has {idx.size} point(s); need at least 2 to split"
            )
        perm = rng.permutation(idx)
        n_test = int(round(test_frac * idx.size))
        n_test = min(max(n_test, 1), idx.size - 1)
        test_parts.append(perm[:n_test])
        train_parts.append(perm[n_test:])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return train, test


def train_test_split(
    ds: Dataset, test_frac: float, seed: int
) -> tuple[Dataset, Dataset]:
    train_idx, test_idx = split_indices(ds.y, test_frac, seed)
    return ds.subset(train_idx), ds.subset(test_idx)


def balanced_subsample(ds: Dataset, per_class: int, seed: int) -> Dataset:
    """Pick per_class points from each class, deterministic per seed."""
    rng = np.random.default_rng(seed)
    parts = []
    for label in (-1, 1):
        idx = np.nonzero(ds.y == label)[0]
        if idx.size < per_class:
            raise DataError(
                f"class {label} has {idx.size} points, need {per_class}"
            )
        parts.append(rng.permutation(idx)[:per_class])
    keep = np.sort(np.concatenate(parts))
    return ds.subset(keep)


@dataclass
class PreparedData:
    """Outcome of the preprocessing pipeline for one dataset."""

    train: Dataset
    test: Dataset
    train_indices: np.ndarray
    test_indices: np.ndarray
    pca: Optional[PcaTransform]
    scale: Optional[ScaleRecord]


def prepare_dataset(
    ds: Dataset,
    test_frac: float,
    seed: int,
    scale: bool = True,
) -> PreparedData:
    """PCA to 2-d when wider, split, then scale with train-split statistics.

    Generated datasets already live in [0, 2*pi]**2 and skip scaling via
    scale=False.
    """
    X = ds.X
    pca = None
    if ds.d > 2:
        pca = fit_pca_2d(X)
        X = apply_pca(pca, X)
    train_idx, test_idx = split_indices(ds.y, test_frac, seed)
    record = None
    if scale:
        record = fit_angle_scaler(X[train_idx])
        X = apply_angle_scale(record, X)
    train = Dataset(X=X[train_idx], y=ds.y[train_idx], name=ds.name, seed=ds.seed)
    test = Dataset(X=X[test_idx], y=ds.y[test_idx], name=ds.name, seed=ds.seed)
    return PreparedData(
        train=train,
        test=test,
        train_indices=train_idx,
        test_indices=test_idx,
        pca=pca,
        scale=record,
    )
