"""Greedy one-nearest-neighbor label propagation."""

import numpy as np

from tsgraphssl.errors import ParameterError
from tsgraphssl.solvers.common import check_label_vector


def one_nn_propagate(distances, f):
    """Propagate labels along globally shortest labeled-to-unlabeled distances.

    Each step picks the pair (i labeled, j unlabeled) with the smallest
    distance, ties broken by the lexicographically smallest (i, j), and copies
    the label of i to j.

    Returns
    -------
    labels : ndarray of int, shape (n,)
    steps : list of (source, target) pairs in the order they were applied
    """
    d = np.asarray(getattr(distances, "entries", distances), dtype=np.float64)
    n = d.shape[0]
    f = check_label_vector(f, n)
    labels = f.astype(np.int64)
    labeled = labels != 0
    if not labeled.any():
        raise ParameterError("1NN propagation needs at least one labeled node")

    # best[j]: nearest labeled node to unlabeled j (smallest index on ties)
    lab_idx = np.flatnonzero(labeled)
    sub = d[lab_idx]
    best_src = lab_idx[np.argmin(sub, axis=0)]
    best_d = d[best_src, np.arange(n)]

    steps = []
    for _ in range(int((~labeled).sum())):
        cand = np.flatnonzero(~labeled)
        order = np.lexsort((cand, best_src[cand], best_d[cand]))
        j = int(cand[order[0]])
        i = int(best_src[j])
        labels[j] = labels[i]
        labeled[j] = True
        steps.append((i, j))
        dj = d[j]
        better = (~labeled) & ((dj < best_d) | ((dj == best_d) & (j < best_src)))
        best_d = np.where(better, dj, best_d)
        best_src = np.where(better, j, best_src)
    return labels, steps


def one_nn_classify(distances, f):
    return one_nn_propagate(distances, f)[0]
