import numpy as np
import pytest

from tsgraphssl.errors import TrainingError
from tsgraphssl.graph import SimilarityGraph, gaussian_adjacency, knn_sparsify, self_tuning_scales
from tsgraphssl.solvers import (
    GCNParams,
    gcn_loss_and_grads,
    gcn_train,
    gcn_train_and_classify,
    label_vector,
    normalized_adjacency,
)
from tsgraphssl.solvers.gcn import forward, init_model

import oracles


def small_graph(rng, n=12):
    d = oracles.random_distance_matrix(rng, n)
    return gaussian_adjacency(d, self_tuning_scales(d, 4))


def test_normalized_adjacency_is_symmetric_with_unit_spectrum(rng):
    g = small_graph(rng)
    a = normalized_adjacency(g)
    np.testing.assert_allclose(a, a.T, atol=1e-15)
    ev = np.linalg.eigvalsh(a)
    assert ev.max() == pytest.approx(1.0, abs=1e-12)
    assert ev.min() >= -1 - 1e-12


def test_shapes(rng):
    g = small_graph(rng, 15)
    model = init_model(15, 32, rng)
    adj = normalized_adjacency(g)
    logits, (z1, h, _, _) = forward(model.params(), adj, adj @ g.weights)
    assert logits.shape == (15, 2)
    assert h.shape == (15, 32) and z1.shape == (15, 32)


@pytest.mark.parametrize("seed", range(3))
def test_gradients_match_finite_differences(seed):
    rng = np.random.default_rng(seed)
    n = 12
    g = small_graph(rng, n)
    adj = normalized_adjacency(g)
    ax = adj @ g.weights
    model = init_model(n, 8, rng)
    # keep the ReLU away from its kink so central differences are valid
    model.bias1 = rng.uniform(0.05, 0.2, 8)
    p = model.params()
    targets = rng.integers(0, 2, n)
    labeled = np.array([0, 3, 5, 9])
    _, grads = gcn_loss_and_grads(p, adj, ax, targets, labeled, 5e-4)
    for name, arr in p.items():
        fun = lambda: gcn_loss_and_grads(p, adj, ax, targets, labeled, 5e-4)[0]
        num = oracles.finite_difference_grad(fun, arr, h=1e-5)
        err = np.linalg.norm(num - grads[name]) / max(np.linalg.norm(num), 1e-12)
        assert err < 1e-4, name


def test_gradients_with_dropout_mask(rng):
    n = 10
    g = small_graph(rng, n)
    adj = normalized_adjacency(g)
    ax = adj @ g.weights
    model = init_model(n, 6, rng)
    model.bias1 = np.full(6, 0.1)
    mask = (rng.random((n, 6)) < 0.5) / 0.5
    p = model.params()
    targets = rng.integers(0, 2, n)
    labeled = np.arange(0, n, 2)
    _, grads = gcn_loss_and_grads(p, adj, ax, targets, labeled, 0.0, mask)
    fun = lambda: gcn_loss_and_grads(p, adj, ax, targets, labeled, 0.0, mask)[0]
    num = oracles.finite_difference_grad(fun, p["theta1"], h=1e-5)
    np.testing.assert_allclose(num, grads["theta1"], atol=1e-7)


def test_training_is_deterministic(rng):
    g = knn_sparsify(small_graph(rng, 30), 5)
    f = label_vector(np.where(np.arange(30) % 2 == 0, 1, -1), [0, 1, 2, 3])
    p = GCNParams(epochs=40, seed=7)
    _, l1 = gcn_train(g, g.weights, f, p)
    _, l2 = gcn_train(g, g.weights, f, p)
    assert np.array_equal(l1, l2)
    _, l3 = gcn_train(g, g.weights, f, GCNParams(epochs=40, seed=8))
    assert not np.array_equal(l1, l3)


def test_loss_history_is_finite_and_decreases(rng):
    g = knn_sparsify(small_graph(rng, 30), 5)
    f = label_vector(np.where(np.arange(30) < 15, 1, -1), [0, 1, 20, 21])
    hist = []
    gcn_train(g, g.weights, f, GCNParams(epochs=100, dropout=0.0), history=hist)
    assert len(hist) == 100 and np.all(np.isfinite(hist))
    assert hist[-1] < hist[0]


def test_two_cliques_identity_features():
    w = np.zeros((10, 10))
    w[:5, :5] = 1
    w[5:, 5:] = 1
    np.fill_diagonal(w, 0)
    truth = np.array([1] * 5 + [-1] * 5)
    f = label_vector(truth, [0, 5])
    pred = gcn_train_and_classify(SimilarityGraph(w), np.eye(10), f,
                                  GCNParams(epochs=200, features="identity"))
    assert pred.tolist() == truth.tolist()


def test_training_rejects_bad_input(rng):
    g = small_graph(rng, 8)
    x = g.weights.copy()
    x[0, 0] = np.nan
    with pytest.raises(TrainingError):
        gcn_train(g, x, label_vector(np.ones(8, int), [0]), GCNParams(epochs=2))
    with pytest.raises(TrainingError):
        gcn_train(g, g.weights, np.zeros(8), GCNParams(epochs=2))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergent_training_raises(rng):
    g = small_graph(rng, 8)
    f = label_vector(np.array([1, -1] * 4), [0, 1])
    with pytest.raises(TrainingError):
        gcn_train(g, np.full((8, 8), 1e308), f, GCNParams(epochs=5))
