"""Ward clustering of mixed-type data via barycentric coding and chi-square geometry."""

__version__ = "0.1.0"

from .coding import (  # noqa: E402
    BarycentricTuple,
    CodedMatrix,
    ColumnSpec,
    OrdinalScale,
    VariableSchema,
    barycentric_tuple,
    build_coded_matrix,
    decode_ordinal,
    decode_tuple,
    discretize,
    encode_nominal,
    encode_ordinal,
    escofier_pair,
    triangular_tuple,
)
from .correspondence import (  # noqa: E402
    CorrespondenceView,
    chi2_distance,
    chi2_distance_sq,
    correspondence_view,
    total_inertia,
)
from .evaluation import ari, cluster_profile  # noqa: E402
from .ward import (  # noqa: E402
    ClusterNode,
    Dendrogram,
    Partition,
    cut,
    inertia_gains,
    merge_cost,
    select_k,
    ward_cluster,
)
