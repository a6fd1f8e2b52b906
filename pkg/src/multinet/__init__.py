"""Multi-layer network inference toolkit.

Fuses noisy network layers by MAP estimation under a Gaussian mixture
model, ranks candidate estimates on Pareto fronts, tracks dynamic
stochastic block models with an extended Kalman filter, and evaluates
clustering recovery on synthetic and email-derived networks.
"""

__version__ = "0.1.0"

from .netcore import (
    AdjacencyMatrix,
    DynamicNetwork,
    MultiLayerGraph,
    Partition,
    binarize,
    load_dynamic_network,
    load_graph,
    save_dynamic_network,
    save_graph,
)
from .fusion import (
    GaussianLayerModel,
    MixtureParams,
    fuse_binary,
    fuse_linear,
    map_estimate_gaussian,
    mixture_objective,
)
from .pareto import (
    ObjectiveVector,
    ParetoPoint,
    dominates,
    pareto_front,
    scalarization_sweep,
    two_gaussian_front,
)
from .blockmodel import (
    BernoulliMatrix,
    BlockCounts,
    EKFConfig,
    LogitState,
    block_counts,
    dsbm_track,
    ekf_step,
    inverse_logit,
    logit,
    sbm_mle,
)
from .clustering import (
    SpectralConfig,
    adjusted_rand_index,
    laplacian,
    spectral_cluster,
)
from .synth import (
    NoiseSpec,
    PlantedClusterSpec,
    corrupt,
    planted_graph,
    run_clustering_experiment,
)
from .ingest import (
    CorpusConfig,
    Message,
    behavioral_layer,
    build_two_layer_network,
    relational_layer,
    tfidf_scores,
    weekly_windows,
)
from .metrics import (
    CentralityReport,
    betweenness_centrality,
    centrality_alpha_sweep,
    degree_centrality,
)
