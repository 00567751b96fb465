"""
From a distance matrix to a graph Laplacian
===========================================

"""

import numpy as np

from _synthetic import two_sines
from tsgraphssl import distance as D
from tsgraphssl.graph import gaussian_adjacency, self_tuning_scales, sym_normalized_laplacian
from tsgraphssl.spectral import smallest_eigenpairs

data = two_sines(n=100, seed=2)
dm = D.pairwise_distance_matrix(data, D.DTW())
print("distance matrix", dm.entries.shape, "max %.2f" % dm.entries.max())

# every node gets its own bandwidth: the distance to its 7th nearest neighbour
scales = self_tuning_scales(dm, K=7)
print("sigma range %.3f .. %.3f" % (scales.sigma.min(), scales.sigma.max()))

graph = gaussian_adjacency(dm, scales)
lap = sym_normalized_laplacian(graph)

basis = smallest_eigenpairs(lap, m_e=6)
print("smallest eigenvalues", np.round(basis.eigenvalues, 4))

# the second eigenvector already separates the two classes fairly well
fiedler = basis.eigenvectors[:, 1]
agree = np.mean(np.sign(fiedler) == data.labels)
print("sign of 2nd eigenvector matches the labels on %.0f%% of nodes" % (100 * max(agree, 1 - agree)))
