"""Compiled dynamic-programming kernels.

Series are passed either as plain 1-d float64 arrays or, for the pairwise
drivers, packed into one flat buffer with an offsets array so that ragged
collections work under numba.
"""

import numpy as np
from numba import config, njit, prange

# the bundled TBB is often too old; prefer OpenMP / workqueue silently
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True)
def dtw_cost(x, y):
    m, k = x.size, y.size
    prev = np.empty(k)
    cur = np.empty(k)
    prev[0] = abs(x[0] - y[0])
    for j in range(1, k):
        prev[j] = prev[j - 1] + abs(x[0] - y[j])
    for i in range(1, m):
        cur[0] = prev[0] + abs(x[i] - y[0])
        for j in range(1, k):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = abs(x[i] - y[j]) + best
        prev, cur = cur, prev
    return prev[k - 1]


@njit(cache=True, inline="always")
def _softmin3(a, b, c, gamma):
    # max-shifted log-sum-exp; inf entries drop out
    m = a
    if b < m:
        m = b
    if c < m:
        m = c
    if m == np.inf:
        return np.inf
    s = np.exp(-(a - m) / gamma) + np.exp(-(b - m) / gamma) + np.exp(-(c - m) / gamma)
    return m - gamma * np.log(s)


@njit(cache=True)
def soft_dtw_value(x, y, gamma):
    m, k = x.size, y.size
    prev = np.full(k + 1, np.inf)
    cur = np.full(k + 1, np.inf)
    prev[0] = 0.0
    for i in range(m):
        cur[0] = np.inf
        for j in range(k):
            cur[j + 1] = abs(x[i] - y[j]) + _softmin3(prev[j], prev[j + 1], cur[j], gamma)
        prev, cur = cur, prev
    return prev[k]


@njit(cache=True)
def _window_dist(x, i, y, j, L):
    s = 0.0
    for t in range(L):
        d = x[i + t] - y[j + t]
        s += d * d
    return np.sqrt(s)


@njit(cache=True)
def _znorm_windows(x, L):
    n = x.size - L + 1
    out = np.empty((n, L))
    for i in range(n):
        mu = 0.0
        for t in range(L):
            mu += x[i + t]
        mu /= L
        var = 0.0
        for t in range(L):
            var += (x[i + t] - mu) ** 2
        sd = np.sqrt(var / L)
        for t in range(L):
            out[i, t] = (x[i + t] - mu) / sd if sd > 0 else 0.0
    return out


@njit(cache=True)
def profile_abba(x, y, L, znorm):
    """Nearest-window distances from x to y followed by y to x."""
    na = x.size - L + 1
    nb = y.size - L + 1
    ab = np.full(na, np.inf)
    ba = np.full(nb, np.inf)
    if znorm:
        xw = _znorm_windows(x, L)
        yw = _znorm_windows(y, L)
        for i in range(na):
            for j in range(nb):
                s = 0.0
                for t in range(L):
                    d = xw[i, t] - yw[j, t]
                    s += d * d
                d = np.sqrt(s)
                if d < ab[i]:
                    ab[i] = d
                if d < ba[j]:
                    ba[j] = d
    else:
        for i in range(na):
            for j in range(nb):
                d = _window_dist(x, i, y, j, L)
                if d < ab[i]:
                    ab[i] = d
                if d < ba[j]:
                    ba[j] = d
    out = np.empty(na + nb)
    out[:na] = ab
    out[na:] = ba
    return out


@njit(cache=True)
def mpdist_value(x, y, L, k, znorm):
    p = profile_abba(x, y, L, znorm)
    p.sort()
    if k > p.size:
        k = p.size
    return p[k - 1]


@njit(cache=True)
def _window_length(mx, my, window_fraction):
    m = min(mx, my)
    L = int(np.floor(window_fraction * m))
    return max(2, L)


@njit(cache=True)
def _k_index(mx, my, k_fraction):
    return max(1, int(np.floor(k_fraction * (mx + my))))


# kind codes shared with distance.py
EUCLIDEAN, DTW, SDTW_DIV, MPDIST = 0, 1, 2, 3


@njit(cache=True, parallel=True)
def pairwise_upper(flat, offsets, rows, cols, kind, p0, p1, p2, self_terms):
    n = offsets.size - 1
    out = np.zeros((n, n))
    for t in prange(rows.size):
        i = rows[t]
        j = cols[t]
        x = flat[offsets[i]:offsets[i + 1]]
        y = flat[offsets[j]:offsets[j + 1]]
        if kind == EUCLIDEAN:
            s = 0.0
            for q in range(x.size):
                d = x[q] - y[q]
                s += d * d
            v = np.sqrt(s)
        elif kind == DTW:
            v = dtw_cost(x, y)
        elif kind == SDTW_DIV:
            v = soft_dtw_value(x, y, p0) - 0.5 * (self_terms[i] + self_terms[j])
        else:
            L = _window_length(x.size, y.size, p0)
            k = _k_index(x.size, y.size, p1)
            v = mpdist_value(x, y, L, k, p2 != 0.0)
        out[i, j] = v
        out[j, i] = v
    return out


@njit(cache=True, parallel=True)
def soft_dtw_self_terms(flat, offsets, gamma):
    n = offsets.size - 1
    out = np.empty(n)
    for i in prange(n):
        x = flat[offsets[i]:offsets[i + 1]]
        out[i] = soft_dtw_value(x, x, gamma)
    return out
