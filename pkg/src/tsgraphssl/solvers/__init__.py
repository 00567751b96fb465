"""Semi-supervised classifiers on similarity graphs.

Every classifier takes a label vector ``f`` with entries in {-1, 0, +1}
(0 meaning unlabeled) and returns a prediction in {-1, +1} for every node.
"""

from tsgraphssl.solvers.allen_cahn import (
    AllenCahnParams,
    AllenCahnResult,
    allen_cahn,
    allen_cahn_classify,
)
from tsgraphssl.solvers.common import label_vector, predict_labels
from tsgraphssl.solvers.gcn import (
    GCNModel,
    GCNParams,
    gcn_loss_and_grads,
    gcn_train,
    gcn_train_and_classify,
    normalized_adjacency,
)
from tsgraphssl.solvers.linear import conjugate_gradient, linear_system_classify, linear_system_solve
from tsgraphssl.solvers.nearest import one_nn_classify, one_nn_propagate

__all__ = [
    "AllenCahnParams",
    "AllenCahnResult",
    "GCNModel",
    "GCNParams",
    "allen_cahn",
    "allen_cahn_classify",
    "conjugate_gradient",
    "gcn_loss_and_grads",
    "gcn_train",
    "gcn_train_and_classify",
    "label_vector",
    "linear_system_classify",
    "linear_system_solve",
    "normalized_adjacency",
    "one_nn_classify",
    "one_nn_propagate",
    "predict_labels",
]
