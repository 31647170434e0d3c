"""Tabular CSV loading, cleaning, label encoding and train/test splitting."""

from __future__ import annotations

import csv
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._prng import XorShift64Star
from .errors import DataError

__all__ = [
    "Dataset",
    "PreprocessConfig",
    "SplitSpec",
    "MISSING_TOKENS",
    "load_csv",
    "train_test_split",
]

MISSING_TOKENS = frozenset({"", "NA", "?"})


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix with integer-encoded labels.

    ``features`` is ``(N, d)`` float64 and ``labels`` is ``(N,)`` int64 with
    values in ``[0, K)`` where ``K = len(class_names)``. Both arrays are made
    read-only on construction.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]

    def __post_init__(self) -> None:
        X = np.array(self.features, dtype=np.float64)
        y = np.array(self.labels, dtype=np.int64)
        if X.ndim != 2:
            raise DataError(f"features must be 2-d, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise DataError(f"labels shape {y.shape} does not match {X.shape[0]} rows")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError(f"need at least one row and one feature, got {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain NaN or infinite values")
        names = tuple(str(c) for c in self.class_names)
        if len(names) < 2:
            raise DataError(f"need at least 2 classes, got {len(names)}")
        if len(set(names)) != len(names):
            raise DataError("class names must be unique")
        if y.min() < 0 or y.max() >= len(names):
            raise DataError("labels must lie in [0, K)")
        fnames = tuple(str(f) for f in self.feature_names)
        if len(fnames) != X.shape[1]:
            raise DataError("feature_names length does not match feature count")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", fnames)
        object.__setattr__(self, "class_names", names)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def subset(self, indices: Sequence[int] | np.ndarray) -> Dataset:
        """Rows at ``indices``; class and feature names are kept as-is."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.feature_names, self.class_names)


@dataclass(frozen=True)
class PreprocessConfig:
    """Options for :func:`load_csv`.

    ``label_column`` is a header name or a 0-based column index.
    ``drop_columns`` lists header names excluded from the features.
    """

    label_column: str | int = -1
    impute_numeric: str = "mean"
    impute_categorical: str = "mode"
    drop_duplicates: bool = True
    drop_columns: tuple[str, ...] = ()
    delimiter: str = ","

    def __post_init__(self) -> None:
        if self.impute_numeric not in ("mean", "median"):
            raise DataError(f"impute_numeric must be 'mean' or 'median', got {self.impute_numeric!r}")
        if self.impute_categorical != "mode":
            raise DataError(f"impute_categorical must be 'mode', got {self.impute_categorical!r}")
        object.__setattr__(self, "drop_columns", tuple(self.drop_columns))


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.3
    seed: int = 42
    stratified: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.test_fraction < 1.0:
            raise DataError(f"test_fraction must lie in (0, 1), got {self.test_fraction}")
        if not 0 <= int(self.seed) < 2**64:
            raise DataError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def _resolve_label_column(header: list[str], label_column: str | int) -> int:
    if isinstance(label_column, int):
        n = len(header)
        if not -n <= label_column < n:
            raise DataError(f"label column index {label_column} out of range for {n} columns")
        return label_column % n
    matches = [i for i, name in enumerate(header) if name == label_column]
    if len(matches) != 1:
        raise DataError(f"label column {label_column!r} must match exactly one header, found {len(matches)}")
    return matches[0]


def _parse_float(cell: str) -> float | None:
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _encode_feature(name: str, cells: list[str], impute_numeric: str) -> np.ndarray:
    present = [c for c in cells if c not in MISSING_TOKENS]
    if not present:
        raise DataError(f"feature column {name!r} has no values")
    parsed = [_parse_float(c) for c in present]
    if all(v is not None for v in parsed):
        values = np.array(parsed, dtype=np.float64)
        fill = float(np.mean(values)) if impute_numeric == "mean" else float(np.median(values))
        return np.array([fill if c in MISSING_TOKENS else float(c) for c in cells], dtype=np.float64)

    # categorical: codes by first appearance, missing cells take the modal category
    codes: dict[str, int] = {}
    for c in present:
        codes.setdefault(c, len(codes))
    counts = Counter(present)
    mode = max(codes, key=lambda c: (counts[c], -codes[c]))
    return np.array([codes[mode if c in MISSING_TOKENS else c] for c in cells], dtype=np.float64)


def load_csv(path: str | Path, config: PreprocessConfig | None = None) -> Dataset:
    """Read a headed CSV file into a :class:`Dataset`.

    Cells that are empty, ``NA`` or ``?`` count as missing. Rows whose label
    is missing are dropped; other missing cells are imputed (mean or median
    for numeric columns, the most frequent value for categorical ones).
    Exact duplicate rows are removed before imputation when
    ``config.drop_duplicates`` is set. Labels are encoded by the sorted order
    of their distinct strings.
    """
    config = config or PreprocessConfig()
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")

    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        rows: list[list[str]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            rows.append([c.strip() for c in row])
    if not rows:
        raise DataError(f"{path} has no data rows")

    label_idx = _resolve_label_column(header, config.label_column)
    unknown = set(config.drop_columns) - set(header)
    if unknown:
        raise DataError(f"drop_columns not in header: {sorted(unknown)}")

    if config.drop_duplicates:
        seen: set[tuple[str, ...]] = set()
        unique = []
        for row in rows:
            key = tuple(row)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        rows = unique

    rows = [row for row in rows if row[label_idx] not in MISSING_TOKENS]
    if not rows:
        raise DataError(f"label column {header[label_idx]!r} is entirely missing")

    class_names = sorted({row[label_idx] for row in rows})
    if len(class_names) < 2:
        raise DataError(f"need at least 2 classes, found {class_names}")
    class_index = {name: k for k, name in enumerate(class_names)}
    labels = np.array([class_index[row[label_idx]] for row in rows], dtype=np.int64)

    feature_cols = [
        j for j, name in enumerate(header) if j != label_idx and name not in config.drop_columns
    ]
    if not feature_cols:
        raise DataError("no feature columns left")
    columns = [
        _encode_feature(header[j], [row[j] for row in rows], config.impute_numeric)
        for j in feature_cols
    ]
    return Dataset(
        features=np.column_stack(columns),
        labels=labels,
        feature_names=tuple(header[j] for j in feature_cols),
        class_names=tuple(class_names),
    )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _stratified_test_counts(class_sizes: dict[int, int], n_test: int, fraction: float) -> dict[int, int]:
    # largest-remainder apportionment; ties go to the lower class index
    quotas = {k: n * fraction for k, n in class_sizes.items()}
    counts = {k: int(math.floor(q)) for k, q in quotas.items()}
    remaining = n_test - sum(counts.values())
    order = sorted(class_sizes, key=lambda k: (-(quotas[k] - counts[k]), k))
    for k in order[:remaining]:
        counts[k] += 1
    return counts


def train_test_split(data: Dataset, spec: SplitSpec | None = None) -> tuple[Dataset, Dataset]:
    """Seeded train/test partition.

    The test part holds ``round(N * test_fraction)`` rows (halves round up).
    Rows are drawn through an xorshift64* permutation of ``range(N)``, so the
    split is reproducible bit for bit across platforms. In stratified mode
    the per-class test counts are apportioned by largest remainder, keeping
    every class within one instance of its exact share. Both parts keep the
    original row order.
    """
    spec = spec or SplitSpec()
    n = data.n_samples
    if n < 2:
        raise DataError("need at least 2 rows to split")
    n_test = _round_half_up(n * spec.test_fraction)
    if n_test == 0 or n_test == n:
        raise DataError(f"test_fraction {spec.test_fraction} leaves an empty part for N={n}")

    perm = XorShift64Star(int(spec.seed)).permutation(n)
    if spec.stratified:
        by_class: dict[int, list[int]] = {}
        for i in perm:
            by_class.setdefault(int(data.labels[i]), []).append(i)
        small = sorted(k for k, members in by_class.items() if len(members) < 2)
        if small:
            raise DataError(f"stratified split needs >= 2 members per class; classes {small} have fewer")
        counts = _stratified_test_counts(
            {k: len(v) for k, v in by_class.items()}, n_test, spec.test_fraction
        )
        test_idx = [i for k in sorted(by_class) for i in by_class[k][: counts[k]]]
    else:
        test_idx = perm[:n_test]

    in_test = np.zeros(n, dtype=bool)
    in_test[test_idx] = True
    return data.subset(np.flatnonzero(~in_test)), data.subset(np.flatnonzero(in_test))
