"""chromgh: constrained Gromov-Hausdorff distances, ambient Cech filtrations,
six-pack persistence diagrams and bottleneck distance for colored metric data.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .cech import (
    ComplexSpec,
    FilteredSpace,
    Filtration,
    Tripod,
    cech_filtration,
    chromatic_filtration,
    circumradius,
    filtered_space,
    filtration_distance,
    tripod_defect,
)
from .constraints import (
    ColorTopology,
    ConstraintSet,
    compare_strength,
    is_constrained_correspondence,
    is_constrained_map,
    sigma_family,
    topology,
)
from .errors import *  # noqa: F401,F403 - the exception vocabulary
from .examples import EXAMPLE_NAMES, gen_example
from .gh import (
    InvariantRecord,
    chromatic_invariants,
    constrained_isomorphic,
    gh_corr_oracle,
    gh_exact,
    gh_lower,
    gh_upper,
    local_set_distance,
    pair_objective,
)
from .metric import (
    ChromaticMetricPair,
    FiniteMetricSpace,
    MapSpec,
    Relation,
    chromatic_space,
    codistortion,
    constrained_hausdorff,
    distortion,
    glue_metric,
    hausdorff,
    identity_map,
    subspace,
    validate_metric,
)
from .persistence import (
    DiagramPoint,
    PersistenceDiagram,
    SixPack,
    bottleneck,
    dgm,
    rank_oracle,
    sixpack,
)
from .stability import RunConfig, splitmix64, stability_trial

__version__ = "0.1.0"
