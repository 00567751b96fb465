"""Experiment grid: datasets x distances x methods x labeled splits.

Distance matrices are computed at most once per (dataset, distance) and may
be cached on disk. The similarity graph, Laplacian, eigenbasis and kNN graph
derived from a matrix are shared across all methods and splits of that
(dataset, distance) pair. Cells run on a bounded thread pool; a failing cell
is recorded with empty accuracies instead of aborting the grid.
"""

import csv
import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from tsgraphssl import distance as dist
from tsgraphssl.dataset import archive_split, load_dataset, random_split
from tsgraphssl.errors import MetricError, ParameterError
from tsgraphssl.graph import (
    gaussian_adjacency,
    knn_sparsify,
    self_tuning_scales,
    sym_normalized_laplacian,
)
from tsgraphssl.solvers import (
    AllenCahnParams,
    GCNParams,
    allen_cahn,
    label_vector,
    linear_system_solve,
    one_nn_classify,
    predict_labels,
)
from tsgraphssl.solvers.gcn import default_features, gcn_train_and_classify
from tsgraphssl.spectral import smallest_eigenpairs

log = logging.getLogger(__name__)

METHODS = ("allen_cahn", "linear_system", "gcn", "one_nn")
METHOD_ALIASES = {
    "ac": "allen_cahn", "allen_cahn": "allen_cahn", "allen-cahn": "allen_cahn",
    "ls": "linear_system", "linear_system": "linear_system", "linear": "linear_system",
    "gcn": "gcn",
    "1nn": "one_nn", "one_nn": "one_nn", "nn": "one_nn",
}
DISTANCES = ("euclidean", "dtw", "sdtw", "mpdist")
CSV_HEADER = ["dataset", "distance", "method", "fraction", "seed",
              "accuracy_unlabeled", "accuracy_all", "wall_time_s", "converged"]


def accuracy(predicted, truth, eval_indices):
    """Fraction of ``eval_indices`` where ``predicted`` equals ``truth``."""
    idx = np.asarray(list(eval_indices), dtype=np.int64)
    if idx.size == 0:
        raise MetricError("accuracy over an empty index set")
    predicted, truth = np.asarray(predicted), np.asarray(truth)
    return float(np.mean(predicted[idx] == truth[idx]))


def canonical_method(name):
    try:
        return METHOD_ALIASES[name.strip().lower()]
    except KeyError:
        raise ParameterError(f"unknown method {name!r}") from None


@dataclass
class ExperimentSpec:
    datasets: list
    distances: list = field(default_factory=lambda: list(DISTANCES))
    methods: list = field(default_factory=lambda: list(METHODS))
    self_tuning_k: int = 7
    split_mode: str = "random"  # or "fixed_archive_train"
    fractions: list = field(default_factory=lambda: [0.01, 0.05, 0.1, 0.2])
    repeats: int = 100
    base_seed: int = 0
    cache_dir: Optional[str] = None
    out: Optional[str] = None
    workers: int = 1
    znormalize: bool = False
    # "allen_cahn.m_e" -> 30, "sdtw.gamma" -> 0.1, ...
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        self.methods = [canonical_method(m) for m in self.methods]
        self.distances = [d.strip().lower() for d in self.distances]
        for d in self.distances:
            if d not in DISTANCES:
                raise ParameterError(f"unknown distance {d!r}")
        if self.split_mode in ("archive", "fixed"):
            self.split_mode = "fixed_archive_train"
        if self.split_mode not in ("random", "fixed_archive_train"):
            raise ParameterError(f"unknown split mode {self.split_mode!r}")
        if any(not 0 < fr <= 1 for fr in self.fractions):
            raise ParameterError("fractions must lie in (0, 1]")
        if self.repeats < 1:
            raise ParameterError("repeats must be >= 1")

    def section(self, prefix):
        """Override values whose key starts with ``prefix.``."""
        out = {}
        for k, v in self.overrides.items():
            head, _, tail = k.partition(".")
            if tail and canonical_section(head) == prefix:
                out[tail] = v
        return out


def canonical_section(head):
    head = head.lower()
    if head in DISTANCES:
        return head
    if head in METHOD_ALIASES:
        return METHOD_ALIASES[head]
    return head


@dataclass
class ExperimentResult:
    dataset: str
    distance: str
    method: str
    fraction: float
    seed: object
    accuracy_unlabeled: Optional[float]
    accuracy_all: Optional[float]
    wall_time: float
    converged: bool
    error: Optional[str] = None

    def sort_key(self):
        seed = self.seed if isinstance(self.seed, int) else -1
        return (self.dataset, self.distance, self.method, self.fraction, seed)


# --- distance cache ---------------------------------------------------------

class DistanceCache:
    """In-memory plus optional on-disk store of distance matrices.

    Counters: ``memory_hits``, ``disk_hits`` and ``computed``.
    """

    def __init__(self, cache_dir=None):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self._store = {}
        self._locks = {}
        self._guard = threading.Lock()
        self.memory_hits = 0
        self.disk_hits = 0
        self.computed = 0

    @property
    def hits(self):
        return self.memory_hits + self.disk_hits

    def _lock_for(self, key):
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def get(self, dataset, kind):
        fp = dataset.fingerprint()
        key = (fp, kind)
        with self._lock_for(key):
            if key in self._store:
                self.memory_hits += 1
                return self._store[key]
            path = self.cache_dir / dist.cache_filename(fp, kind) if self.cache_dir else None
            if path is not None and path.exists():
                dm = dist.load_distance_matrix(path, fp)
                if dm.n == dataset.n:
                    self.disk_hits += 1
                    self._store[key] = dm
                    return dm
                log.warning("ignoring cache file %s with wrong size", path)
            dm = dist.pairwise_distance_matrix(dataset, kind)
            self.computed += 1
            if path is not None:
                tmp = path.with_suffix(".tmp")
                dist.save_distance_matrix(dm, tmp)
                tmp.replace(path)
            self._store[key] = dm
            return dm


# --- per (dataset, distance) context ----------------------------------------

class GraphContext:
    """Lazily built graph objects shared by all cells of one (dataset, distance)."""

    def __init__(self, dataset, dm, K):
        self.dataset = dataset
        self.distances = dm
        self.K = K
        self._lock = threading.Lock()
        self._graph = None
        self._laplacian = None
        self._bases = {}
        self._knn = {}

    @property
    def graph(self):
        with self._lock:
            if self._graph is None:
                scales = self_tuning_scales(self.distances, self.K)
                self._graph = gaussian_adjacency(self.distances, scales)
            return self._graph

    @property
    def laplacian(self):
        g = self.graph
        with self._lock:
            if self._laplacian is None:
                self._laplacian = sym_normalized_laplacian(g)
            return self._laplacian

    def basis(self, m_e):
        lap = self.laplacian
        with self._lock:
            if m_e not in self._bases:
                self._bases[m_e] = smallest_eigenpairs(lap, m_e)
            return self._bases[m_e]

    def knn_graph(self, k):
        g = self.graph
        with self._lock:
            if k not in self._knn:
                self._knn[k] = knn_sparsify(g, k)
            return self._knn[k]


def _coerce(value, target):
    if isinstance(value, str):
        if target is bool:
            return value.strip().lower() in ("1", "true", "yes", "on")
        if target is int:
            return int(value)
        if target is float:
            return float(value)
    return value


def _with_overrides(params, overrides):
    types = {f.name: f.type for f in fields(params)}
    kw = {}
    for k, v in overrides.items():
        if k not in types:
            raise ParameterError(f"unknown parameter {k!r} for {type(params).__name__}")
        default = getattr(params, k)
        target = type(default) if default is not None else float
        kw[k] = _coerce(v, target)
    return replace(params, **kw)


def make_kind(name, spec):
    over = spec.section(name)
    params = {}
    for k, v in over.items():
        params[k] = (v.strip().lower() in ("1", "true", "yes")) if k == "znorm" and isinstance(v, str) \
            else float(v)
    return dist.kind_from_name(name, **params)


def run_cell(ctx, method, split, spec, seed):
    """Run one method on one split and return its ExperimentResult."""
    ds = ctx.dataset
    truth = ds.labels
    labeled = set(split.labeled_indices)
    unlabeled = [i for i in range(ds.n) if i not in labeled]
    t0 = time.perf_counter()
    converged = True
    try:
        f = label_vector(truth, split.labeled_indices)
        if method == "allen_cahn":
            params = _with_overrides(AllenCahnParams(), spec.section("allen_cahn"))
            res = allen_cahn(ctx.basis(params.m_e), f, params)
            pred, converged = res.labels, res.converged
        elif method == "linear_system":
            over = spec.section("linear_system")
            beta = float(over.get("beta", 1.0))
            tol = float(over.get("tol", 1e-5))
            pred = predict_labels(linear_system_solve(ctx.laplacian, f, beta, tol))
        elif method == "gcn":
            params = _with_overrides(GCNParams(seed=seed), spec.section("gcn"))
            feats = default_features(ctx.graph, params.features)
            pred = gcn_train_and_classify(ctx.knn_graph(params.knn), feats, f, params)
        elif method == "one_nn":
            pred = one_nn_classify(ctx.distances, f)
        else:
            raise ParameterError(f"unknown method {method!r}")
    except Exception as exc:  # recorded per cell, the grid continues
        log.warning("%s/%s/%s failed: %s", ds.name, ctx.distances.kind.tag, method, exc)
        return ExperimentResult(ds.name, ctx.distances.kind.tag, method, split.fraction,
                                seed, None, None, time.perf_counter() - t0, False,
                                f"{type(exc).__name__}: {exc}")
    wall = time.perf_counter() - t0
    acc_u = accuracy(pred, truth, unlabeled) if unlabeled else None
    acc_all = accuracy(pred, truth, range(ds.n))
    return ExperimentResult(ds.name, ctx.distances.kind.tag, method, split.fraction,
                            seed, acc_u, acc_all, wall, bool(converged))


def _splits(dataset, spec):
    if spec.split_mode == "fixed_archive_train":
        return [(archive_split(dataset), spec.base_seed)]
    out = []
    for fr in spec.fractions:
        for r in range(spec.repeats):
            seed = spec.base_seed + r
            out.append((random_split(dataset, fr, seed), seed))
    return out


def run_experiment(spec, cache=None):
    """Run every cell of the grid and return the results sorted by cell key."""
    cache = cache or DistanceCache(spec.cache_dir)
    results = []
    jobs = []
    for path in spec.datasets:
        dataset = load_dataset(path, znormalize=spec.znormalize)
        try:
            splits = _splits(dataset, spec)
        except Exception as exc:
            log.error("%s: cannot build splits: %s", dataset.name, exc)
            continue
        for dname in spec.distances:
            kind = make_kind(dname, spec)
            try:
                dm = cache.get(dataset, kind)
                ctx = GraphContext(dataset, dm, spec.self_tuning_k)
            except Exception as exc:
                log.warning("%s/%s: distance matrix failed: %s", dataset.name, dname, exc)
                for method in spec.methods:
                    for split, seed in splits:
                        results.append(ExperimentResult(
                            dataset.name, dname, method, split.fraction, seed, None, None,
                            0.0, False, f"{type(exc).__name__}: {exc}"))
                continue
            for method in spec.methods:
                for split, seed in splits:
                    jobs.append((ctx, method, split, seed))

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            results.extend(pool.map(lambda j: run_cell(j[0], j[1], j[2], spec, j[3]), jobs))
    else:
        results.extend(run_cell(ctx, m, s, spec, seed) for ctx, m, s, seed in jobs)
    results.sort(key=ExperimentResult.sort_key)
    return results


# --- result files -----------------------------------------------------------

def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def summarize(results):
    """Mean and (population) standard deviation per (dataset, distance, method, fraction)."""
    groups = {}
    for r in results:
        groups.setdefault((r.dataset, r.distance, r.method, r.fraction), []).append(r)
    out = []
    for key in sorted(groups):
        rows = groups[key]
        stats = {}
        for col in ("accuracy_unlabeled", "accuracy_all"):
            vals = [getattr(r, col) for r in rows if getattr(r, col) is not None]
            stats[col] = (float(np.mean(vals)), float(np.std(vals))) if vals else None
        stats["wall_time"] = float(np.mean([r.wall_time for r in rows]))
        stats["converged"] = all(r.converged for r in rows)
        stats["count"] = len(rows)
        out.append((key, stats))
    return out


def write_results(results, path, include_timing=True):
    """Write per-cell rows followed by one ``summary`` row per group.

    Summary accuracy fields read ``mean±std``.
    """
    results = sorted(results, key=ExperimentResult.sort_key)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in results:
            w.writerow([r.dataset, r.distance, r.method, _fmt(r.fraction), _fmt(r.seed),
                        _fmt(r.accuracy_unlabeled), _fmt(r.accuracy_all),
                        _fmt(r.wall_time) if include_timing else "", _fmt(r.converged)])
        if len(results) < 2:
            return
        for (ds, dn, m, fr), st in summarize(results):
            accs = ["" if st[c] is None else f"{st[c][0]!r}±{st[c][1]!r}"
                    for c in ("accuracy_unlabeled", "accuracy_all")]
            w.writerow([ds, dn, m, _fmt(fr), "summary", *accs,
                        _fmt(st["wall_time"]) if include_timing else "",
                        _fmt(st["converged"])])


def read_results(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# --- timing -----------------------------------------------------------------

def bench_distances(lengths=(10, 100, 1000), repeats=5, seed=0):
    """Median wall time of one pairwise evaluation per measure and length."""
    rng = np.random.default_rng(seed)
    measures = {
        "euclidean": dist.euclidean_distance,
        "dtw": dist.dtw_distance,
        "sdtw": lambda x, y: dist.soft_dtw_divergence(x, y, 1.0),
        "mpdist": dist.mpdist,
    }
    # compile kernels once
    warm = rng.standard_normal(8)
    for fn in measures.values():
        fn(warm, warm)
    rows = []
    for m in lengths:
        if m < 2:
            raise ParameterError("bench lengths must be >= 2")
        x, y = rng.standard_normal(m), rng.standard_normal(m)
        for name, fn in measures.items():
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                fn(x, y)
                times.append(time.perf_counter() - t0)
            rows.append({"measure": name, "length": int(m), "median_s": float(np.median(times))})
    return rows


# --- config files -----------------------------------------------------------

_LIST_KEYS = {"dataset": "datasets", "datasets": "datasets",
              "distance": "distances", "distances": "distances",
              "method": "methods", "methods": "methods",
              "fractions": "fractions"}
_SCALAR_KEYS = {"repeats": int, "seed": int, "base_seed": int, "self_tuning_k": int,
                "cache_dir": str, "out": str, "split": str, "split_mode": str,
                "workers": int, "znormalize": bool}


def parse_config(text):
    """Parse ``key = value`` lines ('#' starts a comment) into a dict.

    List keys accumulate across repeated lines and accept comma-separated
    values. Dotted keys (``gcn.epochs``) are method/distance overrides.
    """
    conf = {"overrides": {}}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key in _LIST_KEYS:
            items = [v.strip() for v in value.split(",") if v.strip()]
            if key == "fractions":
                items = [float(v) for v in items]
            conf.setdefault(_LIST_KEYS[key], []).extend(items)
        elif key in _SCALAR_KEYS:
            conf[key] = _coerce(value, _SCALAR_KEYS[key])
        elif "." in key:
            conf["overrides"][key] = value
        else:
            raise ParameterError(f"config line {lineno}: unknown key {key!r}")
    return conf


def spec_from_mapping(conf):
    conf = dict(conf)
    if "seed" in conf:
        conf["base_seed"] = conf.pop("seed")
    if "split" in conf:
        conf["split_mode"] = conf.pop("split")
    if not conf.get("datasets"):
        raise ParameterError("no dataset given")
    return ExperimentSpec(**conf)


def mean_accuracy(results, column="accuracy_unlabeled"):
    vals = [getattr(r, column) for r in results if getattr(r, column) is not None]
    return float(np.mean(vals)) if vals else math.nan
