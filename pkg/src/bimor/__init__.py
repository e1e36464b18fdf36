"""Time- and frequency-limited model order reduction for bilinear control
systems."""

from .bands import FreqBand, TimeBand
from .exceptions import (
    BimorError,
    BranchCutError,
    ConsistencyError,
    ConvergenceError,
    DegenerateSubspaceError,
    DivergenceError,
    NumericalError,
    ObliqueProjectionError,
    SolverError,
    StabilityGuardError,
    ValidationError,
)
from .examples import heat_transfer, illustrative_7
from .gramians import (
    cross_gramians_for,
    cross_gramians_freq,
    cross_gramians_infinite,
    cross_gramians_time,
    gramians_for,
    gramians_freq_limited,
    gramians_infinite,
    gramians_time_limited,
    rs_matrices_freq,
    rs_matrices_time,
)
from .io import RunManifest, load_system, save_system, write_report
from .matfun import freq_indicator, logm_frechet, mat_exp, mat_log
from .norms import (
    error_norm,
    h2_freq_limited,
    h2_norm,
    h2_time_limited,
    volterra_quadrature_oracle,
)
from .optimality import (
    gradient_h2tau,
    lemma1_check,
    residuals_freq,
    residuals_time,
)
from .reduce import (
    IterationConfig,
    ReductionOutcome,
    approx_products,
    balanced_truncation,
    flhmora,
    flphmora,
    homora,
    tlhmora,
    tlphmora,
)
from .solvers import (
    Direct,
    FixedPoint,
    GeneralizedLyapunovProblem,
    solve_generalized,
    solve_sylvester,
)
from .system import (
    BilinearSystem,
    Trajectory,
    biorthonormalize,
    error_system,
    project,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearSystem",
    "BimorError",
    "BranchCutError",
    "ConsistencyError",
    "ConvergenceError",
    "DegenerateSubspaceError",
    "Direct",
    "DivergenceError",
    "FixedPoint",
    "FreqBand",
    "GeneralizedLyapunovProblem",
    "IterationConfig",
    "NumericalError",
    "ObliqueProjectionError",
    "ReductionOutcome",
    "RunManifest",
    "SolverError",
    "StabilityGuardError",
    "TimeBand",
    "Trajectory",
    "ValidationError",
    "approx_products",
    "balanced_truncation",
    "biorthonormalize",
    "cross_gramians_for",
    "cross_gramians_freq",
    "cross_gramians_infinite",
    "cross_gramians_time",
    "error_norm",
    "error_system",
    "flhmora",
    "flphmora",
    "freq_indicator",
    "gradient_h2tau",
    "gramians_for",
    "gramians_freq_limited",
    "gramians_infinite",
    "gramians_time_limited",
    "h2_freq_limited",
    "h2_norm",
    "h2_time_limited",
    "heat_transfer",
    "homora",
    "illustrative_7",
    "lemma1_check",
    "load_system",
    "logm_frechet",
    "mat_exp",
    "mat_log",
    "project",
    "residuals_freq",
    "residuals_time",
    "rs_matrices_freq",
    "rs_matrices_time",
    "save_system",
    "simulate",
    "solve_generalized",
    "solve_sylvester",
    "tlhmora",
    "tlphmora",
    "volterra_quadrature_oracle",
    "write_report",
]
