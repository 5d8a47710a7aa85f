#!/usr/bin/env python3
"""Regenerate the CSV snapshots in data/ from scikit-learn's bundled datasets.

Development-time script only: the library itself never imports scikit-learn.
Run from the repository root:

    python scripts/make_dataset_snapshots.py
"""

import csv
from pathlib import Path

from sklearn.datasets import load_breast_cancer, load_digits, load_wine

OUT = Path(__file__).resolve().parent.parent / "data"


def write_snapshot(name, X, y):
    OUT.mkdir(exist_ok=True)
    path = OUT / f"{name}.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i + 1}" for i in range(X.shape[1])] + ["label"])
        for row, label in zip(X, y):
            writer.writerow([repr(float(v)) for v in row] + [str(int(label))])
    print(f"wrote {path} ({X.shape[0]} rows, {X.shape[1]} features)")


def main():
    wine = load_wine()
    write_snapshot("wine", wine.data, wine.target)
    bc = load_breast_cancer()
    write_snapshot("breast_cancer", bc.data, bc.target)
    digits = load_digits()
    write_snapshot("digits", digits.data, digits.target)


if __name__ == "__main__":
    main()
