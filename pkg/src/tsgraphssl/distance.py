"""Distances between time series and full pairwise distance matrices.

Four measures are available: Euclidean, DTW, soft-DTW divergence and MPdist.
Each is described by a small frozen dataclass (a "distance kind") that
carries its parameters and is used as the key for cached matrices.
"""

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from tsgraphssl import _kernels
from tsgraphssl.dataset import Dataset, TimeSeries
from tsgraphssl.errors import (
    CacheFormatError,
    EmptySeriesError,
    IncompatibleLengthsError,
    ParameterError,
    PairwiseDistanceError,
    WindowTooLargeError,
)


@dataclass(frozen=True)
class Euclidean:
    tag = "euclidean"
    code = _kernels.EUCLIDEAN

    def params(self):
        return ()


@dataclass(frozen=True)
class DTW:
    tag = "dtw"
    code = _kernels.DTW

    def params(self):
        return ()


@dataclass(frozen=True)
class SoftDTWDivergence:
    gamma: float = 1.0
    tag = "sdtw"
    code = _kernels.SDTW_DIV

    def __post_init__(self):
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")

    def params(self):
        return (float(self.gamma),)


@dataclass(frozen=True)
class MPDist:
    window_fraction: float = 0.5
    k_fraction: float = 0.05
    znorm: bool = False
    tag = "mpdist"
    code = _kernels.MPDIST

    def __post_init__(self):
        if not 0 < self.window_fraction <= 1:
            raise ParameterError("window_fraction must lie in (0, 1]")
        if not 0 < self.k_fraction <= 1:
            raise ParameterError("k_fraction must lie in (0, 1]")

    def params(self):
        return (float(self.window_fraction), float(self.k_fraction), float(bool(self.znorm)))


KINDS = {"euclidean": Euclidean, "dtw": DTW, "sdtw": SoftDTWDivergence, "mpdist": MPDist}
_KIND_BY_CODE = {cls.code: cls for cls in KINDS.values()}


def kind_from_name(name, **params):
    """Build a distance kind from its short name (euclidean, dtw, sdtw, mpdist)."""
    try:
        cls = KINDS[name.lower()]
    except KeyError:
        raise ParameterError(f"unknown distance {name!r}; choose from {sorted(KINDS)}") from None
    return cls(**params)


def _as_array(x):
    if isinstance(x, TimeSeries):
        return x.values
    arr = np.ascontiguousarray(x, dtype=np.float64).ravel()
    return arr


def _nonempty(x, y):
    x, y = _as_array(x), _as_array(y)
    if x.size == 0 or y.size == 0:
        raise EmptySeriesError("time series must be nonempty")
    return x, y


def euclidean_distance(x, y):
    x, y = _as_array(x), _as_array(y)
    if x.size != y.size:
        raise IncompatibleLengthsError(
            f"Euclidean distance needs equal lengths, got {x.size} and {y.size}"
        )
    return float(np.sqrt(np.sum((x - y) ** 2)))


def dtw_distance(x, y):
    """Unconstrained DTW with absolute-difference local cost."""
    x, y = _nonempty(x, y)
    return float(_kernels.dtw_cost(x, y))


def soft_min(values, gamma):
    """Smoothed minimum ``-gamma * log(sum(exp(-v / gamma)))``.

    Evaluated with a shift by the minimum so that large spreads do not
    overflow. The result never exceeds ``min(values)``.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("soft_min of an empty sequence")
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    m = v.min()
    if np.isinf(m):
        return float(m)
    return float(m - gamma * np.log(np.sum(np.exp(-(v - m) / gamma))))


def soft_dtw(x, y, gamma):
    x, y = _nonempty(x, y)
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return float(_kernels.soft_dtw_value(x, y, float(gamma)))


def soft_dtw_divergence(x, y, gamma):
    """Soft-DTW debiased by the two self-similarities; zero for identical inputs."""
    x, y = _nonempty(x, y)
    return soft_dtw(x, y, gamma) - 0.5 * (soft_dtw(x, x, gamma) + soft_dtw(y, y, gamma))


def matrix_profile(x, y, L, znorm=False):
    """Joined profile P_ABBA for window length ``L``.

    Returns the ``len(x) - L + 1`` nearest-window distances from x into y,
    followed by the ``len(y) - L + 1`` distances from y into x.
    """
    x, y = _nonempty(x, y)
    L = int(L)
    if L < 1:
        raise WindowTooLargeError(f"window length must be >= 1, got {L}")
    if L > min(x.size, y.size):
        raise WindowTooLargeError(
            f"window length {L} exceeds series lengths {x.size}, {y.size}"
        )
    return _kernels.profile_abba(x, y, L, bool(znorm))


def mpdist_window(len_x, len_y, window_fraction):
    return max(2, int(math.floor(window_fraction * min(len_x, len_y))))


def mpdist_k(len_x, len_y, k_fraction):
    return max(1, int(math.floor(k_fraction * (len_x + len_y))))


def mpdist(x, y, window_fraction=0.5, k_fraction=0.05, znorm=False):
    """k-th smallest entry of the joined matrix profile.

    The window is ``L = max(2, floor(window_fraction * min length))`` and
    ``k = max(1, floor(k_fraction * (len(x) + len(y))))``, capped at the
    profile size.
    """
    x, y = _nonempty(x, y)
    L = mpdist_window(x.size, y.size, window_fraction)
    p = np.sort(matrix_profile(x, y, L, znorm))
    k = min(mpdist_k(x.size, y.size, k_fraction), p.size)
    return float(p[k - 1])


def distance(x, y, kind):
    """Evaluate a single pair under ``kind``."""
    if isinstance(kind, Euclidean):
        return euclidean_distance(x, y)
    if isinstance(kind, DTW):
        return dtw_distance(x, y)
    if isinstance(kind, SoftDTWDivergence):
        return soft_dtw_divergence(x, y, kind.gamma)
    if isinstance(kind, MPDist):
        return mpdist(x, y, kind.window_fraction, kind.k_fraction, kind.znorm)
    raise ParameterError(f"unknown distance kind {kind!r}")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    entries: np.ndarray
    kind: object
    dataset_fingerprint: str = ""

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("distance matrix must be square")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _pack(series):
    arrays = [_as_array(s) for s in series]
    lengths = np.array([a.size for a in arrays], dtype=np.int64)
    offsets = np.zeros(len(arrays) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    flat = np.concatenate(arrays) if arrays else np.zeros(0)
    return flat, offsets, lengths


def _check_pairs(lengths, kind):
    n = lengths.size
    if np.any(lengths == 0):
        i = int(np.flatnonzero(lengths == 0)[0])
        raise PairwiseDistanceError(i, i, EmptySeriesError("empty series"))
    if isinstance(kind, Euclidean) and n > 1 and np.any(lengths != lengths[0]):
        j = int(np.flatnonzero(lengths != lengths[0])[0])
        raise PairwiseDistanceError(
            0, j, IncompatibleLengthsError(f"lengths {lengths[0]} and {lengths[j]}")
        )
    if isinstance(kind, MPDist):
        # the window only fails when the shorter series is shorter than 2 samples
        short = np.flatnonzero(lengths < 2)
        if short.size and n > 1:
            i = int(short[0])
            j = 1 if i == 0 else 0
            raise PairwiseDistanceError(
                min(i, j), max(i, j),
                WindowTooLargeError(f"series {i} has length {lengths[i]} < window 2"),
            )


def pairwise_distance_matrix(dataset, kind):
    """Full symmetric distance matrix of a dataset (or a sequence of series).

    Only the strict upper triangle is evaluated and then mirrored. For the
    soft-DTW divergence the self terms are computed once per series.
    Negative round-off in the divergence is clipped to zero.
    """
    series = dataset.series if isinstance(dataset, Dataset) else list(dataset)
    fingerprint = dataset.fingerprint() if isinstance(dataset, Dataset) else ""
    flat, offsets, lengths = _pack(series)
    _check_pairs(lengths, kind)
    n = lengths.size
    params = kind.params() + (0.0, 0.0, 0.0)
    if isinstance(kind, SoftDTWDivergence) and n > 1:
        self_terms = _kernels.soft_dtw_self_terms(flat, offsets, float(kind.gamma))
    else:
        self_terms = np.zeros(n)
    if n > 1:
        rows, cols = np.triu_indices(n, k=1)
        entries = _kernels.pairwise_upper(
            flat, offsets, rows.astype(np.int64), cols.astype(np.int64), kind.code, params[0], params[1], params[2], self_terms
        )
    else:
        entries = np.zeros((n, n))
    if isinstance(kind, SoftDTWDivergence):
        np.maximum(entries, 0.0, out=entries)
    np.fill_diagonal(entries, 0.0)
    return DistanceMatrix(entries, kind, fingerprint)


# --- on-disk cache format -------------------------------------------------
#
# little endian:  magic(4s) version(u16) kind(u8) reserved(u8) n(u64) nparams(u32)
#                 params(nparams * f64)  upper triangle i<j row-major (f64)

MAGIC = b"TSGD"
VERSION = 1
_HEADER = struct.Struct("<4sHBBQI")


def cache_filename(fingerprint, kind):
    parts = [fingerprint[:20], kind.tag] + [repr(p) for p in kind.params()]
    return "_".join(parts).replace(".", "p").replace("-", "m") + ".tsgd"


def save_distance_matrix(dm, path):
    entries = dm.entries
    n = entries.shape[0]
    params = dm.kind.params()
    iu = np.triu_indices(n, k=1)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, dm.kind.code, 0, n, len(params)))
        fh.write(np.asarray(params, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(entries[iu], dtype="<f8").tobytes())


def load_distance_matrix(path, fingerprint=""):
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, code, _, n, nparams = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if code not in _KIND_BY_CODE:
        raise CacheFormatError(f"{path}: unknown kind tag {code}")
    off = _HEADER.size
    params = np.frombuffer(data, dtype="<f8", count=nparams, offset=off)
    off += 8 * nparams
    m = n * (n - 1) // 2
    if len(data) != off + 8 * m:
        raise CacheFormatError(f"{path}: expected {m} entries")
    upper = np.frombuffer(data, dtype="<f8", count=m, offset=off)
    entries = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    entries[iu] = upper
    entries[(iu[1], iu[0])] = upper
    cls = _KIND_BY_CODE[code]
    if cls is SoftDTWDivergence:
        kind = cls(gamma=float(params[0]))
    elif cls is MPDist:
        kind = cls(float(params[0]), float(params[1]), bool(params[2]))
    else:
        kind = cls()
    return DistanceMatrix(entries, kind, fingerprint)
