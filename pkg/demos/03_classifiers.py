"""
Four semi-supervised classifiers on one graph
=============================================

Only a handful of nodes carry a label; the rest are inferred.
"""

import numpy as np

from _synthetic import two_sines
from tsgraphssl import distance as D
from tsgraphssl.dataset import random_split
from tsgraphssl.graph import knn_sparsify, self_tuned_graph
from tsgraphssl.harness import accuracy
from tsgraphssl.solvers import (
    GCNParams,
    allen_cahn,
    gcn_train_and_classify,
    label_vector,
    linear_system_classify,
    one_nn_classify,
)
from tsgraphssl.spectral import smallest_eigenpairs

data = two_sines(n=150, shift=0.8, seed=3, ragged=True)
dm = D.pairwise_distance_matrix(data, D.SoftDTWDivergence(gamma=1.0))
graph, lap = self_tuned_graph(dm, K=7)

split = random_split(data, fraction=0.05, seed=0)
f = label_vector(data.labels, split.labeled_indices)
unlabeled = np.flatnonzero(f == 0)
print("%d labeled, %d unlabeled" % (len(split.labeled_indices), len(unlabeled)))

res = allen_cahn(smallest_eigenpairs(lap, 20), f)
print("allen-cahn     %.3f  (%d iterations, converged=%s)"
      % (accuracy(res.labels, data.labels, unlabeled), res.iterations, res.converged))

pred = linear_system_classify(lap, f, beta=1.0)
print("linear system  %.3f" % accuracy(pred, data.labels, unlabeled))

pred = gcn_train_and_classify(knn_sparsify(graph, 10), graph.weights, f, GCNParams(epochs=200))
print("gcn            %.3f" % accuracy(pred, data.labels, unlabeled))

pred = one_nn_classify(dm, f)
print("1nn            %.3f" % accuracy(pred, data.labels, unlabeled))
