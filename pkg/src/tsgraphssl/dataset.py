"""Loading UCR-format files and drawing stratified labeled splits.

A UCR record is one line: the class token first, then the sequence values,
separated by tabs or commas. Binary problems only; the two raw tokens are
mapped to -1/+1 in lexicographic order.
"""

import hashlib
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from tsgraphssl.errors import (
    DataError,
    ParseError,
    SplitError,
    UnsupportedDatasetError,
)

_SEPARATOR = re.compile(r"\s*[\t,]\s*|\s+")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """One real-valued sequence with an optional label in {-1, +1}."""

    values: np.ndarray
    label: Optional[int] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size < 1:
            raise DataError("time series must have length >= 1")
        if not np.all(np.isfinite(values)):
            raise DataError("time series contains NaN or Inf")
        if self.label not in (None, -1, 1):
            raise DataError(f"label must be -1, +1 or None, got {self.label!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class Dataset:
    """A pool of binary-labeled time series.

    ``archive_train`` holds the indices that came from an archive TRAIN file
    when the dataset was built by :func:`load_ucr_archive`; it is empty otherwise.
    """

    series: tuple
    name: str = ""
    class_values: tuple = ()
    archive_train: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "archive_train", tuple(int(i) for i in self.archive_train))
        if len(self.series) < 2:
            raise UnsupportedDatasetError("a dataset needs at least two series")
        labels = {s.label for s in self.series}
        if labels != {-1, 1}:
            raise UnsupportedDatasetError(
                f"expected exactly the two labels -1 and +1, found {sorted(labels, key=str)}"
            )

    def __len__(self):
        return len(self.series)

    @property
    def n(self):
        return len(self.series)

    @property
    def labels(self):
        return np.array([s.label for s in self.series], dtype=np.int64)

    @property
    def lengths(self):
        return np.array([len(s) for s in self.series], dtype=np.int64)

    @property
    def uniform_length(self):
        return len(set(self.lengths.tolist())) == 1

    def values_matrix(self):
        """Stack the series into an (n, m) array; requires uniform lengths."""
        if not self.uniform_length:
            raise DataError("series have differing lengths")
        return np.vstack([s.values for s in self.series])

    def fingerprint(self):
        """Content hash of the parsed values and labels (hex string)."""
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        for s in self.series:
            h.update(np.int64(len(s)).tobytes())
            h.update(np.int8(s.label).tobytes())
            h.update(np.ascontiguousarray(s.values, dtype="<f8").tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class LabeledSplit:
    labeled_indices: tuple
    seed: int
    fraction: float

    def mask(self, n):
        m = np.zeros(n, dtype=bool)
        m[list(self.labeled_indices)] = True
        return m


def _parse_records(path):
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = [f.strip() for f in _SEPARATOR.split(line)]
            if len(fields) < 2:
                raise ParseError("expected a label followed by at least one value", lineno)
            token, raw = fields[0], fields[1:]
            if not token:
                raise ParseError("empty class token", lineno)
            try:
                values = np.array([float(v) for v in raw], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"non-numeric value ({exc})", lineno) from None
            if not np.all(np.isfinite(values)):
                raise DataError(f"line {lineno}: NaN or Inf value in {path}")
            records.append((token, values))
    return records


def _build(records, name, znormalize, archive_train=()):
    tokens = sorted({tok for tok, _ in records})
    if len(tokens) != 2:
        raise UnsupportedDatasetError(
            f"{name}: expected exactly two distinct class labels, found {len(tokens)}"
        )
    mapping = {tokens[0]: -1, tokens[1]: 1}
    series = []
    for tok, values in records:
        if znormalize:
            values = znormalize_values(values)
        series.append(TimeSeries(values, mapping[tok]))
    return Dataset(tuple(series), name=name, class_values=tuple(tokens),
                   archive_train=archive_train)


def znormalize_values(values):
    values = np.asarray(values, dtype=np.float64)
    std = values.std()
    if std == 0:
        return values - values.mean()
    return (values - values.mean()) / std


def load_ucr_tsv(path, name=None, znormalize=False):
    """Parse one UCR TSV/CSV file into a :class:`Dataset`.

    Parameters
    ----------
    path : str or Path
        File with one record per line.
    name : str, optional
        Dataset name; defaults to the file stem.
    znormalize : bool
        Z-normalize each series after parsing. UCR 2018 files are already
        normalized, so this is off by default.
    """
    path = Path(path)
    records = _parse_records(path)
    return _build(records, name or path.stem, znormalize)


def load_ucr_archive(train_path, test_path, name=None, znormalize=False):
    """Concatenate an archive TRAIN and TEST file into one pool.

    The TRAIN records come first; their indices are kept in
    ``Dataset.archive_train`` so the fixed archive split can be reproduced.
    """
    train = _parse_records(Path(train_path))
    test = _parse_records(Path(test_path))
    if name is None:
        stem = Path(train_path).stem
        name = stem[:-6] if stem.upper().endswith("_TRAIN") else stem
    return _build(train + test, name, znormalize, archive_train=range(len(train)))


def load_dataset(path, znormalize=False):
    """Load a single file, or a directory holding ``<NAME>_TRAIN`` and ``<NAME>_TEST`` files."""
    path = Path(path)
    if path.is_dir():
        name = path.name
        for ext in (".tsv", ".txt", ".csv"):
            train, test = path / f"{name}_TRAIN{ext}", path / f"{name}_TEST{ext}"
            if train.exists() and test.exists():
                return load_ucr_archive(train, test, name=name, znormalize=znormalize)
        raise FileNotFoundError(f"no {name}_TRAIN/{name}_TEST pair in {path}")
    return load_ucr_tsv(path, znormalize=znormalize)


def write_ucr_tsv(dataset, path):
    """Write a dataset back in UCR TSV form using its raw class tokens."""
    tokens = dataset.class_values or ("-1", "1")
    with open(path, "w", encoding="utf-8") as fh:
        for s in dataset.series:
            tok = tokens[0] if s.label == -1 else tokens[1]
            fh.write("\t".join([tok] + [repr(float(v)) for v in s.values]) + "\n")


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def split_size(n, fraction):
    if not 0 < fraction <= 1:
        raise SplitError(f"fraction must lie in (0, 1], got {fraction}")
    size = _round_half_up(n * fraction)
    if size < 1:
        raise SplitError(
            f"fraction {fraction} of {n} series rounds to zero labeled points"
        )
    return min(max(size, 2), n)


def _class_counts(class_sizes, size):
    """Per-class sample counts proportional to class frequency, each >= 1."""
    n = sum(class_sizes)
    counts = [_round_half_up(size * c / n) for c in class_sizes]
    counts = [min(max(c, 1), cs) for c, cs in zip(counts, class_sizes)]
    # fix the total by adjusting the majority class (ties: first class)
    while sum(counts) != size:
        order = sorted(range(len(counts)), key=lambda k: (-class_sizes[k], k))
        if sum(counts) > size:
            k = next((k for k in order if counts[k] > 1), None)
            if k is None:
                raise SplitError("cannot shrink split while keeping every class")
            counts[k] -= 1
        else:
            k = next((k for k in order if counts[k] < class_sizes[k]), None)
            if k is None:
                raise SplitError("split larger than the dataset")
            counts[k] += 1
    return counts


def random_split(dataset, fraction, seed):
    """Draw a stratified random set of labeled indices.

    The split size is ``round(n * fraction)`` (half up) clamped to ``[2, n]``;
    every class contributes at least one index. Deterministic for a fixed
    ``(dataset, fraction, seed)``.
    """
    n = dataset.n
    size = split_size(n, fraction)
    labels = dataset.labels
    classes = [np.flatnonzero(labels == c) for c in (-1, 1)]
    counts = _class_counts([len(c) for c in classes], size)
    rng = np.random.default_rng(seed)
    chosen = []
    for idx, k in zip(classes, counts):
        chosen.extend(rng.choice(idx, size=k, replace=False).tolist())
    return LabeledSplit(tuple(sorted(int(i) for i in chosen)), int(seed), float(fraction))


def archive_split(dataset):
    """The fixed split given by the archive TRAIN file."""
    if not dataset.archive_train:
        raise SplitError(f"{dataset.name}: no archive TRAIN partition recorded")
    idx = tuple(sorted(dataset.archive_train))
    return LabeledSplit(idx, -1, len(idx) / dataset.n)


def full_split(dataset: Dataset) -> LabeledSplit:
    return LabeledSplit(tuple(range(dataset.n)), 0, 1.0)


def subset_labels(dataset: Dataset, indices: Sequence[int]) -> np.ndarray:
    return dataset.labels[np.asarray(indices, dtype=np.int64)]
