"""Prime-logarithm ordered Fourier and Dirichlet series on the infinite torus.

Core objects: exact multi-index order by prime logarithms, sparse series
algebra with analytic projections, the Bohr correspondence to general
Dirichlet series, the Poisson smoothing semigroup with its half-plane Cauchy
realization, and Szego finite sections with outer factorization.
"""

from .errors import (
    DimensionTooLarge,
    DuplicateIndices,
    FactorizationLimit,
    NonPositiveRational,
    NotAnalytic,
    NotOuter,
    NotRealSymmetric,
    ParseError,
    SupportConditionViolated,
    TermBudgetExceeded,
    ToleranceUnachievable,
    WeightNearZero,
    ZtauError,
)
from .multiindex import (
    IndexClass,
    MultiIndex,
    TauValue,
    abs_index,
    add,
    classify,
    compare,
    from_positive_rational,
    negate,
    ordinal,
    tau_float,
)
from .series import (
    DiskPoint,
    FourierSeries,
    Region,
    cesaro_mean,
    conjugate,
    evaluate,
    herglotz_completion,
    kronecker_point,
    log_integral,
    lp_norm,
    multiply,
    project,
    translate,
)
from .bohr import (
    DirichletSeries,
    evaluate_halfplane,
    from_dirichlet,
    is_classical,
    to_dirichlet,
)
from .poisson import (
    CauchyMoment,
    ErgodicAverage,
    PoissonMatrix,
    cauchy_density,
    cauchy_moment,
    choose_truncation,
    ergodic_average,
    exp_commutes_check,
    homomorphism_check,
    poisson_matrix,
    poisson_matrix_det,
    smooth,
)
from .szego import (
    GapRow,
    OuterCheck,
    SupportCondition,
    SzegoResult,
    Weight,
    geometric_mean,
    outer_check,
    outer_factor,
    support_condition_check,
    szego_gap_table,
    szego_infimum,
    weight_from_polynomial,
)
from .config import RunConfig, load_config

__version__ = "0.1.0"
