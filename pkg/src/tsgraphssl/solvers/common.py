import numpy as np

from tsgraphssl.errors import ParameterError


def predict_labels(u):
    """Elementwise sign with sign(0) = +1."""
    u = np.asarray(u, dtype=np.float64)
    return np.where(u < 0, -1, 1).astype(np.int64)


def label_vector(labels, labeled_indices):
    """Build f: the true label on labeled indices, 0 elsewhere."""
    labels = np.asarray(labels)
    f = np.zeros(labels.size)
    idx = np.asarray(list(labeled_indices), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= labels.size):
        raise ParameterError("labeled index out of range")
    f[idx] = labels[idx]
    if np.any(np.abs(f[idx]) != 1):
        raise ParameterError("labels must be -1 or +1")
    return f


def check_label_vector(f, n):
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (n,):
        raise ParameterError(f"label vector has shape {f.shape}, expected ({n},)")
    if not np.all(np.isin(f, (-1.0, 0.0, 1.0))):
        raise ParameterError("label vector entries must be -1, 0 or +1")
    return f
