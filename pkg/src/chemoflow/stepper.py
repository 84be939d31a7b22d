"""IMEX time integration of the coupled density/chemical system.

Per step: solve the quasi-static chemical equation, apply explicit upwind
advection and explicit reaction, then implicit diffusion through the same
spectral solver (a = 1, b = dt).  Diffusion is unconditionally stable, so
the adaptive step size only tracks the advective CFL limit and the reaction
stiffness.  Negative undershoots (possible at steep gradients with
first-order upwinding) are clipped to zero and the clipped mass is
accumulated so the violation stays observable.

Blow-up is flagged when the sup norm crosses the configured ceiling or when
the adaptive step collapses below ``dt_min`` -- the numerical shadow of the
finite-time L^infinity blow-up criterion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import DiagnosticSeries, DiagnosticsSpec, diagnostic_row
from .elliptic import _solve_values, solve_chemical
from .grid import Field, Grid, advective_divergence, max_face_gradient, random_band_limited
from .reaction import ReactionSpec, ReactionVariant, eval_reaction

_T_END_REL_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Continuum parameters; the defaults reproduce the baseline system
    (chi = sigma = xi = 1).

    ``theory_n`` is the dimension used by the regime classifier and may
    differ from the simulated grid dimension (the boundedness conditions
    need n >= 3 while 2-d grids are the cheapest collapse demonstrations).
    """

    chi: float = 1.0
    sigma: float = 1.0
    xi: float = 1.0
    reaction: ReactionSpec = field(default_factory=ReactionSpec.off)
    theory_n: int = 3

    def __post_init__(self):
        if self.chi < 0:
            raise ValueError(f"chemotactic sensitivity chi must be >= 0, got {self.chi}")
        if self.sigma < 1:
            raise ValueError(f"aggregation exponent sigma must be >= 1, got {self.sigma}")
        if not 0.0 < self.xi <= 1.0:
            raise ValueError(f"production exponent xi must lie in (0, 1], got {self.xi}")
        if int(self.theory_n) != self.theory_n or self.theory_n < 3:
            raise ValueError(f"theory dimension must be an integer >= 3, got {self.theory_n}")


@dataclass(frozen=True)
class StepControls:
    """Step-size policy, stopping time and blow-up thresholds."""

    t_end: float = 1.0
    dt_init: float = 1e-3
    dt_min: float = 1e-10
    dt_max: float = 1e-2
    cfl_advect: float = 0.5
    cfl_react: float = 0.5
    u_blowup: float = 1e6

    def __post_init__(self):
        if not 0 < self.dt_min <= self.dt_init <= self.dt_max:
            raise ValueError(
                f"need 0 < dt_min <= dt_init <= dt_max, got "
                f"({self.dt_min}, {self.dt_init}, {self.dt_max})"
            )
        if not 0 < self.cfl_advect <= 1:
            raise ValueError(f"cfl_advect must lie in (0, 1], got {self.cfl_advect}")
        if self.cfl_react <= 0:
            raise ValueError(f"cfl_react must be positive, got {self.cfl_react}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.u_blowup <= 0:
            raise ValueError(f"u_blowup must be positive, got {self.u_blowup}")


class RunStatus(enum.Enum):
    RUNNING = "Running"
    FINISHED = "Finished"
    BLOWUP_DETECTED = "BlowupDetected"
    STEP_FAILURE = "StepFailure"


@dataclass(eq=False)
class RunState:
    """Mutable simulation state.  ``c`` holds the chemical field of the most
    recent solve (refreshed against ``u`` whenever diagnostics are emitted)."""

    t: float
    dt: float
    u: Field
    c: Field
    step_index: int = 0
    clipped_mass_cum: float = 0.0
    status: RunStatus = RunStatus.RUNNING


@dataclass(frozen=True)
class InitialCondition:
    """Initial density generators; all produce u0 >= 0.

    kinds:
        constant            u0 = amplitude
        gaussian            u0 = amplitude * exp(-|x - center|^2 / (2 width^2))
        constant_plus_noise u0 = max(amplitude + width * smooth_noise, 0),
                            smooth_noise a seeded band-limited cosine sample
                            with unit max-norm
        from_snapshot       u0 read from a snapshot file (``path``), grid
                            must match
    """

    kind: str = "constant"
    amplitude: float = 1.0
    center: tuple[float, ...] | None = None
    width: float = 0.1
    rng_seed: int = 0
    path: str | None = None

    _KINDS = ("constant", "gaussian", "constant_plus_noise", "from_snapshot")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown initial-condition kind {self.kind!r}, expected one of {self._KINDS}")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.kind == "gaussian" and self.width <= 0:
            raise ValueError(f"gaussian width must be positive, got {self.width}")
        if self.kind == "from_snapshot" and not self.path:
            raise ValueError("from_snapshot initial condition needs a path")
        if self.center is not None:
            object.__setattr__(self, "center", tuple(float(x) for x in self.center))

    def build(self, grid: Grid) -> Field:
        if self.kind == "constant":
            return Field.constant(grid, self.amplitude)
        if self.kind == "gaussian":
            center = self.center if self.center is not None else tuple(L / 2 for L in grid.lengths)
            if len(center) != grid.dim:
                raise ValueError(f"center has {len(center)} coordinates for a {grid.dim}-d grid")
            coords = grid.meshgrid()
            r2 = sum((x - c) ** 2 for x, c in zip(coords, center))
            return Field(grid, self.amplitude * np.exp(-r2 / (2.0 * self.width**2)))
        if self.kind == "constant_plus_noise":
            noise = random_band_limited(grid, self.rng_seed, include_constant_mode=False)
            return Field(grid, np.clip(self.amplitude + self.width * noise.values, 0.0, None))
        from .snapshots import read_snapshot

        fld, _t = read_snapshot(self.path)
        if fld.grid != grid:
            raise ValueError(
                f"snapshot grid {fld.grid.cells}x{fld.grid.lengths} does not match "
                f"configured grid {grid.cells}x{grid.lengths}"
            )
        return fld


def _reaction_stiffness(u: np.ndarray, spec: ReactionSpec, grid: Grid) -> float:
    """Max |df/du|, the explicit-reaction stability scale.  For the nonlocal
    variant the global integral is frozen within the step."""
    if spec.variant is ReactionVariant.OFF:
        return 0.0
    uv = np.clip(u, 0.0, None)
    if spec.variant is ReactionVariant.LOCAL_LOGISTIC:
        return float(np.abs(spec.mu * (1.0 - (spec.alpha + 1.0) * uv**spec.alpha)).max())
    total = float(grid.cell_volume * (uv**spec.beta).sum())
    umax = float(uv.max())
    if umax == 0.0:
        return 0.0
    return spec.alpha * umax ** (spec.alpha - 1.0) * abs(1.0 - total)


def _stable_dt(u: np.ndarray, c: Field, params: ModelParams, controls: StepControls, grid: Grid) -> float:
    """Adaptive limit min(dt_max, advective CFL, reaction stiffness).

    The advective limit uses the dimension-summed upwind CFL
    ``cfl / (chi * umax^(sigma-1) * sum_axes vmax_a/h_a)`` so that the
    per-step outflow fraction of any cell stays below ``cfl_advect``.
    """
    dt = controls.dt_max
    if params.chi > 0.0:
        speed_sum = sum(v / h for v, h in zip(max_face_gradient(c), grid.spacing))
        if params.sigma != 1.0:
            umax = float(np.clip(u, 0.0, None).max())
            speed_sum *= umax ** (params.sigma - 1.0) if umax > 0.0 else 0.0
        speed_sum *= params.chi
        if speed_sum > 0.0:
            dt = min(dt, controls.cfl_advect / speed_sum)
    stiffness = _reaction_stiffness(u, params.reaction, grid)
    if stiffness > 0.0:
        dt = min(dt, controls.cfl_react / stiffness)
    return dt


def step(state: RunState, params: ModelParams, controls: StepControls) -> RunState:
    """Advance one accepted step (or mark blow-up / failure without advancing).

    Order: chemical solve, step-size selection, explicit advection+reaction,
    implicit diffusion, clip-and-account, blow-up check.
    """
    if state.status is not RunStatus.RUNNING:
        raise ValueError(f"cannot step a run in status {state.status.value}")
    grid = state.u.grid
    u = state.u.values
    if not np.isfinite(u).all():
        return replace(state, status=RunStatus.STEP_FAILURE)

    c = solve_chemical(state.u, params.xi)

    dt_limit = _stable_dt(u, c, params, controls, grid)
    if dt_limit < controls.dt_min:
        # Step collapse: the adaptive limit dropped below the floor.
        return replace(state, c=c, dt=dt_limit, status=RunStatus.BLOWUP_DETECTED)
    dt = min(dt_limit, controls.t_end - state.t)

    rate = eval_reaction(state.u, params.reaction).values
    if params.chi != 0.0:
        rate = rate - params.chi * advective_divergence(state.u, c, sigma=params.sigma).values
    u_star = u + dt * rate

    u_new = _solve_values(1.0, dt, u_star, grid)
    if not np.isfinite(u_new).all():
        return replace(
            state,
            c=c,
            dt=dt,
            u=Field(grid, u_new),
            step_index=state.step_index + 1,
            status=RunStatus.STEP_FAILURE,
        )

    negative = u_new < 0.0
    clipped = -float(u_new[negative].sum()) * grid.cell_volume if negative.any() else 0.0
    np.clip(u_new, 0.0, None, out=u_new)

    status = RunStatus.BLOWUP_DETECTED if float(u_new.max()) > controls.u_blowup else RunStatus.RUNNING
    return RunState(
        t=state.t + dt,
        dt=dt,
        u=Field(grid, u_new),
        c=c,
        step_index=state.step_index + 1,
        clipped_mass_cum=state.clipped_mass_cum + clipped,
        status=status,
    )


def run(
    u0: Field,
    params: ModelParams,
    controls: StepControls,
    diag: DiagnosticsSpec | None = None,
    snapshot_callback=None,
) -> tuple[RunState, DiagnosticSeries]:
    """Iterate `step` until ``t_end`` or a terminal status.

    Diagnostics rows are emitted every ``cadence_steps`` accepted steps and
    at the final step; the chemical field is refreshed against the current
    density at every emission.  ``snapshot_callback(state)`` fires every
    ``snapshot_every`` steps when provided.  The result is deterministic for
    a fixed configuration and seed; on failure the partial series is still
    returned.
    """
    diag = diag if diag is not None else DiagnosticsSpec()
    if not u0.is_finite() or float(u0.values.min()) < 0.0:
        raise ValueError("initial density must be finite and nonnegative")
    k_list = diag.resolved_k_list(params.reaction)

    state = RunState(
        t=0.0,
        dt=controls.dt_init,
        u=u0.copy(),
        c=solve_chemical(u0, params.xi),
        step_index=0,
        clipped_mass_cum=0.0,
        status=RunStatus.RUNNING,
    )
    series = DiagnosticSeries(k_list)
    series.append(diagnostic_row(0.0, 0.0, state.u, k_list, params.reaction, 0.0))

    t_stop = controls.t_end * (1.0 - _T_END_REL_TOL)
    while state.status is RunStatus.RUNNING and state.t < t_stop:
        prev = state
        state = step(prev, params, controls)
        if state.status is RunStatus.STEP_FAILURE:
            break
        advanced = state.step_index > prev.step_index
        emit = (
            advanced
            and (
                state.step_index % diag.cadence_steps == 0
                or state.status is not RunStatus.RUNNING
                or state.t >= t_stop
            )
        )
        if emit:
            c_step = state.c
            state.c = solve_chemical(state.u, params.xi)
            series.append(
                diagnostic_row(
                    state.t,
                    state.dt,
                    state.u,
                    k_list,
                    params.reaction,
                    state.clipped_mass_cum,
                    u_prev=prev.u,
                    c_step=c_step,
                    chi=params.chi,
                    sigma=params.sigma,
                )
            )
        if (
            snapshot_callback is not None
            and advanced
            and diag.snapshot_every > 0
            and state.step_index % diag.snapshot_every == 0
        ):
            snapshot_callback(state)
        if not advanced:
            break
    if state.status is RunStatus.RUNNING:
        state.status = RunStatus.FINISHED
    return state, series
