"""Sparse bilinear least squares under joint cardinality and pivot constraints.

minimize 0.5 * ||A x y - b||^2  subject to  |x|_0 <= s, |y|_0 <= t,
and the first nonzero entry of x equal to 1.
"""

from .feasible import (
    BOULIGAND,
    CLARKE,
    ZERO_TOL,
    InfeasiblePointError,
    SupportProfile,
    is_feasible,
    nb_zero_set,
    normal_membership,
    require_feasible,
    support_profile,
    tangent_membership,
)
from .io_cli import (
    InstanceFile,
    gen_blind_deconv,
    gen_matrix_sensing,
    gen_planted,
    parse,
    plant_point,
    serialize,
)
from .likeproj import (
    MAX_MATERIALIZED,
    ProjectionResult,
    classic_project,
    like_project,
    like_project_oracle,
    psi,
)
from .oracle import OracleResult, SupportPair, enumerate_supports, global_brute, solve_restricted
from .reformulation import INTEGER, RELAXED, AuxPair, check_pair, lift, normal_E_membership
from .repro import REPRO_NAMES, load_bundled, run_repro
from .solvers import (
    IterateRecord,
    SolveConfig,
    SolveTrace,
    alternating_ht,
    liht_solve,
    liht_step,
    multistart,
    random_feasible_point,
)
from .stationarity import (
    CwWitness,
    StationarityReport,
    Tolerance,
    check_CW,
    check_Llike,
    check_M,
    check_NB,
    classify,
    default_tolerance,
    minimal_L,
    restricted_gradient_norm,
)
from .tensor3 import (
    Instance,
    Point,
    bilinear_map,
    fd_gradient,
    gradient,
    mode2_product,
    mode3_product,
    objective,
    residual,
)

__version__ = "0.1.0"
