"""Self-tuned Gaussian similarity graphs and the normalized Laplacian."""

from dataclasses import dataclass

import numpy as np

from tsgraphssl.errors import (
    DegenerateDatasetError,
    IsolatedNodeError,
    ParameterError,
)


def _matrix(distances):
    d = np.asarray(getattr(distances, "entries", distances), dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ParameterError("distance matrix must be square")
    return d


@dataclass(frozen=True, eq=False)
class SelfTuningScales:
    sigma: np.ndarray
    K: int


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    weights: np.ndarray

    @property
    def n(self):
        return self.weights.shape[0]

    @property
    def degrees(self):
        return self.weights.sum(axis=1)


@dataclass(frozen=True, eq=False)
class NormalizedLaplacian:
    matrix: np.ndarray

    @property
    def n(self):
        return self.matrix.shape[0]


def _off_diagonal_rows(d):
    n = d.shape[0]
    mask = ~np.eye(n, dtype=bool)
    return d[mask].reshape(n, n - 1)


def self_tuning_scales(distances, K=7):
    """Per-node bandwidth: distance to the K-th nearest other node.

    A zero K-th distance (duplicates) falls back to the smallest positive
    distance in the row.
    """
    d = _matrix(distances)
    n = d.shape[0]
    K = int(K)
    if not 1 <= K <= n - 1:
        raise ParameterError(f"K must lie in [1, n-1] = [1, {n - 1}], got {K}")
    rows = np.sort(_off_diagonal_rows(d), axis=1, kind="stable")
    sigma = rows[:, K - 1].copy()
    for i in np.flatnonzero(sigma <= 0):
        positive = rows[i][rows[i] > 0]
        if positive.size == 0:
            raise DegenerateDatasetError(f"all distances from node {i} are zero")
        sigma[i] = positive[0]
    return SelfTuningScales(sigma, K)


def gaussian_adjacency(distances, scales):
    """Weights ``exp(-d_ij^2 / (sigma_i sigma_j))`` with a zero diagonal."""
    d = _matrix(distances)
    sigma = np.asarray(getattr(scales, "sigma", scales), dtype=np.float64)
    if sigma.shape != (d.shape[0],):
        raise ParameterError("scales do not match the distance matrix")
    w = np.exp(-(d * d) / np.outer(sigma, sigma))
    w = 0.5 * (w + w.T)
    np.fill_diagonal(w, 0.0)
    return SimilarityGraph(w)


def sym_normalized_laplacian(graph):
    """``I - D^{-1/2} W D^{-1/2}``, symmetrized against round-off."""
    w = np.asarray(getattr(graph, "weights", graph), dtype=np.float64)
    deg = w.sum(axis=1)
    if np.any(deg <= 0):
        raise IsolatedNodeError(f"node {int(np.flatnonzero(deg <= 0)[0])} has zero degree")
    s = 1.0 / np.sqrt(deg)
    lap = np.eye(w.shape[0]) - s[:, None] * w * s[None, :]
    return NormalizedLaplacian(0.5 * (lap + lap.T))


def knn_sparsify(graph, k=10):
    """Keep edge i-j if either endpoint ranks the other among its k heaviest.

    Ties in weight are resolved toward the smaller neighbor index.
    """
    w = np.asarray(getattr(graph, "weights", graph), dtype=np.float64)
    n = w.shape[0]
    k = int(k)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must lie in [1, n-1] = [1, {n - 1}], got {k}")
    keep = np.zeros((n, n), dtype=bool)
    idx = np.arange(n)
    for i in range(n):
        others = idx[idx != i]
        order = np.lexsort((others, -w[i, others]))
        keep[i, others[order[:k]]] = True
    keep |= keep.T
    out = np.where(keep, w, 0.0)
    np.fill_diagonal(out, 0.0)
    if np.any(out.sum(axis=1) <= 0):
        bad = int(np.flatnonzero(out.sum(axis=1) <= 0)[0])
        raise IsolatedNodeError(f"node {bad} is isolated after {k}-NN sparsification")
    return SimilarityGraph(out)


def self_tuned_graph(distances, K=7):
    """Convenience: scales, adjacency and Laplacian in one call."""
    scales = self_tuning_scales(distances, K)
    graph = gaussian_adjacency(distances, scales)
    return graph, sym_normalized_laplacian(graph)
