"""Graph linear canonical transforms with uncertainty and sampling machinery.

The toolkit covers: operator construction through the chained
eigendecomposition pipeline (``operator``), vertex/spectral limiting
projectors (``localization``), concentration uncertainty regions
(``uncertainty``), bandlimited sampling, recovery and optimal-design
selection strategies (``sampling``), graph generators and file formats
(``graphs``), and a reproducible experiment harness (``experiments``,
``runner``) behind the ``glctkit`` CLI.
"""

__version__ = "0.1.0"

from .errors import GlctkitError, NumericalError, ParseError, ValidationError
from .graphs import (
    Graph,
    adjacency,
    cycle_graph,
    is_connected,
    knn_graph,
    laplacian,
    load_graph,
    random_geometric_graph,
    read_signal,
    swiss_roll_points,
    two_block_sbm,
    write_graph,
    write_signal,
)
from .localization import (
    Limiter,
    SpectralSet,
    VertexSet,
    is_perfectly_localized,
    joint_lambda_max,
    joint_top_eigenvector,
    spectral_limiter,
    vertex_limiter,
)
from .operator import (
    GFT_PARAMS,
    GlctMatrixParams,
    GlctOperator,
    GlctParams,
    SpectralBasis,
    build_operator,
    chirp_diag,
    decompose_adjacency,
    fractional_diag,
    glct,
    iglct,
    load_operator,
    params_from_matrix,
    save_operator,
    unitary_eig,
)
from .sampling import (
    DETERMINISTIC_STRATEGIES,
    BandlimitSpec,
    RecoveryOperator,
    SamplingOperator,
    Strategy,
    band_columns,
    bandlimit,
    exhaustive_select,
    greedy_select,
    is_qualified,
    nmse,
    recover,
    recoverability_margin,
    recovery_operator,
    sample,
    sampled_adjacency,
    selection_objective,
)
from .uncertainty import (
    ConcentrationPair,
    CornerLambdas,
    admissible,
    boundary_curve,
    concentration_pair,
    corner_lambdas,
    lemma2_upper_bound,
    write_region_csv,
)
from .experiments import (
    ExperimentResult,
    classify_semi_supervised,
    cluster_and_score,
    cross_basis_table,
    recovery_sweep,
    resolve_graph,
    silhouette_score,
)
from .runner import run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
