"""chemoflow: chemotaxis with nonlocal logistic growth on box grids.

A cell-density field advects along chemical gradients, diffuses, and grows
with a dampening term driven by a global integral of the density.  The
package provides the IMEX solver for the coupled system, exponent-regime
classification for the proved boundedness conditions, per-step energy-budget
audits, and standalone numerical checks of the interpolation inequality and
the iterative sup-norm bound that the theory rests on.
"""

__version__ = "0.1.0"

from .config import (
    ConfigError,
    RunConfig,
    SweepConfig,
    parse_config,
    parse_sweep_config,
    serialize_config,
)
from .diagnostics import (
    DiagnosticSeries,
    DiagnosticsSpec,
    MoserSchedule,
    energy_budget_residual,
    linf_certificate,
    log_moser_bound,
    moser_bound,
)
from .elliptic import (
    ScreenedPoissonProblem,
    apply_screened_operator,
    screened_poisson_solve,
    solve_chemical,
)
from .grid import (
    Field,
    Grid,
    advective_divergence,
    gradient_sq_integral,
    integrate,
    lk_norm,
    random_band_limited,
)
from .lemmas import (
    InterpolationCase,
    IterationCase,
    check_interpolation,
    check_iteration_bound,
    interpolation_batch,
    iteration_batch,
    sobolev_exponent,
)
from .reaction import (
    ReactionSpec,
    ReactionVariant,
    RegimeVerdict,
    Verdict,
    classify_regime,
    classify_sublinear,
    collapse_threshold_hint,
    eval_reaction,
)
from .snapshots import SnapshotFormatError, read_snapshot, write_snapshot
from .stepper import (
    InitialCondition,
    ModelParams,
    RunState,
    RunStatus,
    StepControls,
    run,
    step,
)
from .sweep import classify_observed, execute_run, run_sweep

__all__ = [
    "ConfigError",
    "DiagnosticSeries",
    "DiagnosticsSpec",
    "Field",
    "Grid",
    "InitialCondition",
    "InterpolationCase",
    "IterationCase",
    "ModelParams",
    "MoserSchedule",
    "ReactionSpec",
    "ReactionVariant",
    "RegimeVerdict",
    "RunConfig",
    "RunState",
    "RunStatus",
    "ScreenedPoissonProblem",
    "SnapshotFormatError",
    "StepControls",
    "SweepConfig",
    "Verdict",
    "advective_divergence",
    "apply_screened_operator",
    "check_interpolation",
    "check_iteration_bound",
    "classify_observed",
    "classify_regime",
    "classify_sublinear",
    "collapse_threshold_hint",
    "energy_budget_residual",
    "eval_reaction",
    "execute_run",
    "gradient_sq_integral",
    "integrate",
    "interpolation_batch",
    "iteration_batch",
    "linf_certificate",
    "lk_norm",
    "log_moser_bound",
    "moser_bound",
    "parse_config",
    "parse_sweep_config",
    "random_band_limited",
    "read_snapshot",
    "run",
    "run_sweep",
    "serialize_config",
    "sobolev_exponent",
    "solve_chemical",
    "screened_poisson_solve",
    "step",
    "write_snapshot",
]
