"""Two-layer graph convolutional network written directly in numpy.

Forward pass::

    H      = relu(A X Theta1 + b1)          (dropout on H while training)
    logits = A H Theta2 + b2

with ``A = D^-1/2 (W + I) D^-1/2``. The loss is the mean softmax
cross-entropy over labeled rows plus ``weight_decay * ||Theta1||_F^2``.
Gradients are derived by hand and the parameters trained with Adam.
"""

from dataclasses import dataclass, field

import numpy as np

from tsgraphssl.errors import IsolatedNodeError, TrainingError
from tsgraphssl.solvers.common import check_label_vector


@dataclass(frozen=True)
class GCNParams:
    knn: int = 10
    hidden: int = 32
    dropout: float = 0.5
    learning_rate: float = 0.01
    weight_decay: float = 5e-4
    epochs: int = 500
    seed: int = 0
    features: str = "weights"  # "weights" (dense W rows) or "identity"


@dataclass
class GCNModel:
    theta1: np.ndarray
    bias1: np.ndarray
    theta2: np.ndarray
    bias2: np.ndarray
    # Adam state, keyed like the parameters
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    step: int = 0

    NAMES = ("theta1", "bias1", "theta2", "bias2")

    def params(self):
        return {k: getattr(self, k) for k in self.NAMES}


def glorot(rng, fan_in, fan_out):
    r = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-r, r, size=(fan_in, fan_out))


def init_model(n_features, hidden, rng, n_classes=2):
    return GCNModel(
        theta1=glorot(rng, n_features, hidden),
        bias1=np.zeros(hidden),
        theta2=glorot(rng, hidden, n_classes),
        bias2=np.zeros(n_classes),
    )


def normalized_adjacency(weights):
    """``D^-1/2 (W + I) D^-1/2`` for a graph without self loops."""
    w = np.asarray(getattr(weights, "weights", weights), dtype=np.float64)
    w_hat = w + np.eye(w.shape[0])
    deg = w_hat.sum(axis=1)
    if np.any(deg <= 0):
        raise IsolatedNodeError("non-positive degree after adding self loops")
    s = 1.0 / np.sqrt(deg)
    return s[:, None] * w_hat * s[None, :]


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def forward(params, adj, ax, mask=None):
    """Return logits and the cached intermediates. ``ax`` is ``A @ X``."""
    z1 = ax @ params["theta1"] + params["bias1"]
    h = np.maximum(z1, 0.0)
    hd = h if mask is None else h * mask
    ah = adj @ hd
    logits = ah @ params["theta2"] + params["bias2"]
    return logits, (z1, h, hd, ah)


def gcn_loss_and_grads(params, adj, ax, targets, labeled, weight_decay, mask=None):
    """Loss and gradients for all four parameter arrays.

    Parameters
    ----------
    params : dict
        ``theta1``, ``bias1``, ``theta2``, ``bias2``.
    adj : ndarray (n, n)
        Normalized adjacency with self loops.
    ax : ndarray (n, d)
        Precomputed ``adj @ features``.
    targets : ndarray of int (n,)
        Class index 0/1 per node (ignored off ``labeled``).
    labeled : ndarray of int
        Indices contributing to the loss.
    mask : ndarray (n, h), optional
        Inverted-dropout mask already scaled by ``1 / (1 - p)``.
    """
    logits, (z1, h, hd, ah) = forward(params, adj, ax, mask)
    z = logits[labeled]
    nl = len(labeled)
    t = targets[labeled]
    zmax = z.max(axis=1, keepdims=True)
    log_norm = zmax[:, 0] + np.log(np.exp(z - zmax).sum(axis=1))
    loss = np.mean(log_norm - z[np.arange(nl), t])
    probs = _softmax(z)
    loss += weight_decay * np.sum(params["theta1"] ** 2)

    g_logits = np.zeros_like(logits)
    g = probs.copy()
    g[np.arange(nl), t] -= 1.0
    g_logits[labeled] = g / nl

    grads = {
        "theta2": ah.T @ g_logits,
        "bias2": g_logits.sum(axis=0),
    }
    g_hd = adj.T @ (g_logits @ params["theta2"].T)
    g_h = g_hd if mask is None else g_hd * mask
    g_z1 = g_h * (z1 > 0)
    grads["theta1"] = ax.T @ g_z1 + 2.0 * weight_decay * params["theta1"]
    grads["bias1"] = g_z1.sum(axis=0)
    return loss, grads


def _adam_step(model, grads, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    model.step += 1
    for k in model.NAMES:
        g = grads[k]
        m = model.m.get(k, np.zeros_like(g))
        v = model.v.get(k, np.zeros_like(g))
        m = beta1 * m + (1 - beta1) * g
        v = beta2 * v + (1 - beta2) * g * g
        model.m[k], model.v[k] = m, v
        m_hat = m / (1 - beta1 ** model.step)
        v_hat = v / (1 - beta2 ** model.step)
        setattr(model, k, getattr(model, k) - lr * m_hat / (np.sqrt(v_hat) + eps))


def gcn_train(graph, features, f, params=None, history=None):
    """Train a GCN on the labeled nodes of ``f`` and return the model and logits.

    ``history``, if given, is a list that receives the loss of every epoch.
    """
    params = params or GCNParams()
    adj = normalized_adjacency(graph)
    n = adj.shape[0]
    f = check_label_vector(f, n)
    x = np.asarray(features, dtype=np.float64)
    if x.shape[0] != n or not np.all(np.isfinite(x)):
        raise TrainingError("features must be a finite (n, d) matrix")
    labeled = np.flatnonzero(f != 0)
    if labeled.size == 0:
        raise TrainingError("GCN training needs at least one labeled node")
    targets = (f > 0).astype(np.int64)

    rng = np.random.default_rng(params.seed)
    model = init_model(x.shape[1], params.hidden, rng)
    ax = adj @ x
    keep = 1.0 - params.dropout
    for epoch in range(params.epochs):
        mask = None
        if params.dropout > 0:
            mask = (rng.random((n, params.hidden)) < keep) / keep
        loss, grads = gcn_loss_and_grads(
            model.params(), adj, ax, targets, labeled, params.weight_decay, mask
        )
        if not np.isfinite(loss):
            raise TrainingError(f"loss became non-finite at epoch {epoch}", iterations=epoch)
        if history is not None:
            history.append(float(loss))
        with np.errstate(over="ignore", invalid="ignore"):
            _adam_step(model, grads, params.learning_rate)
        if not all(np.all(np.isfinite(a)) for a in model.params().values()):
            raise TrainingError(f"parameters became non-finite at epoch {epoch}", iterations=epoch)
    logits, _ = forward(model.params(), adj, ax)
    return model, logits


def default_features(dense_weights, kind="weights"):
    w = np.asarray(getattr(dense_weights, "weights", dense_weights), dtype=np.float64)
    if kind == "weights":
        return w.copy()
    if kind == "identity":
        return np.eye(w.shape[0])
    raise ValueError(f"unknown feature kind {kind!r}")


def gcn_train_and_classify(graph, features, f, params=None):
    """Labels in {-1, +1} from the argmax of the trained logits.

    ``graph`` should already be sparsified; ``features`` is the (n, d) input.
    """
    _, logits = gcn_train(graph, features, f, params)
    return np.where(logits[:, 1] > logits[:, 0], 1, -1).astype(np.int64)
