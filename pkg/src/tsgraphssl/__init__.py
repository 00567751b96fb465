"""Graph-based semi-supervised classification of time series."""

from tsgraphssl.dataset import (
    Dataset,
    LabeledSplit,
    TimeSeries,
    archive_split,
    load_dataset,
    load_ucr_archive,
    load_ucr_tsv,
    random_split,
)
from tsgraphssl.distance import (
    DTW,
    DistanceMatrix,
    Euclidean,
    MPDist,
    SoftDTWDivergence,
    dtw_distance,
    euclidean_distance,
    matrix_profile,
    mpdist,
    pairwise_distance_matrix,
    soft_dtw,
    soft_dtw_divergence,
    soft_min,
)
from tsgraphssl.errors import TSGraphError
from tsgraphssl.graph import (
    NormalizedLaplacian,
    SelfTuningScales,
    SimilarityGraph,
    gaussian_adjacency,
    knn_sparsify,
    self_tuned_graph,
    self_tuning_scales,
    sym_normalized_laplacian,
)
from tsgraphssl.spectral import SpectralBasis, smallest_eigenpairs
from tsgraphssl.solvers import (
    AllenCahnParams,
    GCNParams,
    allen_cahn_classify,
    gcn_train_and_classify,
    label_vector,
    linear_system_classify,
    one_nn_classify,
    predict_labels,
)

__version__ = "0.1.0"
