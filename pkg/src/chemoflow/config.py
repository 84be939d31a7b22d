"""Strict JSON run/sweep configuration with documented defaults.

Unknown keys are rejected with their full path (typo safety), every error
message carries the key path, and `serialize_config` emits JSON that parses
back to an identical configuration.

Required keys: ``dimension``, ``grid.cells`` and ``model.reaction.variant``;
everything else has a default (see DEFAULTS in the README).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .diagnostics import DiagnosticsSpec
from .grid import Grid
from .reaction import ReactionSpec, ReactionVariant
from .stepper import InitialCondition, ModelParams, StepControls


class ConfigError(ValueError):
    """Configuration problem, message prefixed by the offending key path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _expect_object(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected an object, got {type(node).__name__}")
    return node


def _reject_unknown(node: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(node) - allowed)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown key")


def _get_number(node: dict, key: str, path: str, default=None, required=False) -> float:
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required key")
        return default
    val = node[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}" if path else key, f"expected a number, got {type(val).__name__}")
    if not math.isfinite(val):
        raise ConfigError(f"{path}.{key}" if path else key, "must be finite")
    return float(val)


def _get_int(node: dict, key: str, path: str, default=None, required=False) -> int:
    val = _get_number(node, key, path, default=default, required=required)
    if val is None:
        return None
    if val != int(val):
        raise ConfigError(f"{path}.{key}" if path else key, f"expected an integer, got {val}")
    return int(val)


def _get_str(node: dict, key: str, path: str, default=None, required=False) -> str:
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required key")
        return default
    val = node[key]
    if not isinstance(val, str):
        raise ConfigError(f"{path}.{key}" if path else key, f"expected a string, got {type(val).__name__}")
    return val


@dataclass(frozen=True)
class RunConfig:
    """Everything one simulation needs: grid, model, initial data, stepping
    controls and diagnostics cadence.  Mirrors the JSON schema one-to-one."""

    dimension: int
    grid_cells: tuple[int, ...]
    grid_lengths: tuple[float, ...]
    model: ModelParams
    initial: InitialCondition
    controls: StepControls
    output: DiagnosticsSpec

    def grid(self) -> Grid:
        return Grid(self.dimension, self.grid_cells, self.grid_lengths)


def _parse_reaction(node, path: str) -> ReactionSpec:
    node = _expect_object(node, path)
    _reject_unknown(node, {"variant", "alpha", "beta", "mu"}, path)
    variant_str = _get_str(node, "variant", path, required=True)
    try:
        variant = ReactionVariant(variant_str)
    except ValueError:
        options = ", ".join(v.value for v in ReactionVariant)
        raise ConfigError(f"{path}.variant", f"unknown variant {variant_str!r}, expected one of: {options}") from None
    alpha = _get_number(node, "alpha", path, default=2.0)
    beta = _get_number(node, "beta", path, default=2.0)
    mu = _get_number(node, "mu", path, default=1.0)
    if variant is not ReactionVariant.OFF and alpha < 1:
        raise ConfigError(f"{path}.alpha", f"must be >= 1, got {alpha}")
    if variant is ReactionVariant.NONLOCAL_LOGISTIC and beta <= 1:
        raise ConfigError(f"{path}.beta", f"must be > 1 for the nonlocal variant, got {beta}")
    if variant is ReactionVariant.LOCAL_LOGISTIC and mu <= 0:
        raise ConfigError(f"{path}.mu", f"must be > 0 for the local variant, got {mu}")
    return ReactionSpec(variant, alpha=alpha, beta=beta, mu=mu)


def _parse_model(node, path: str, reaction_required: bool) -> ModelParams:
    node = _expect_object(node, path)
    _reject_unknown(node, {"chi", "sigma", "xi", "theory_n", "reaction"}, path)
    if "reaction" not in node:
        if reaction_required:
            raise ConfigError(f"{path}.reaction", "missing required key")
        reaction = ReactionSpec.off()
    else:
        reaction = _parse_reaction(node["reaction"], f"{path}.reaction")
    chi = _get_number(node, "chi", path, default=1.0)
    sigma = _get_number(node, "sigma", path, default=1.0)
    xi = _get_number(node, "xi", path, default=1.0)
    theory_n = _get_int(node, "theory_n", path, default=3)
    if chi < 0:
        raise ConfigError(f"{path}.chi", f"must be >= 0, got {chi}")
    if sigma < 1:
        raise ConfigError(f"{path}.sigma", f"must be >= 1, got {sigma}")
    if not 0 < xi <= 1:
        raise ConfigError(f"{path}.xi", f"must lie in (0, 1], got {xi}")
    if theory_n < 3:
        raise ConfigError(f"{path}.theory_n", f"must be >= 3, got {theory_n}")
    return ModelParams(chi=chi, sigma=sigma, xi=xi, reaction=reaction, theory_n=theory_n)


def _parse_initial(node, path: str) -> InitialCondition:
    node = _expect_object(node, path)
    _reject_unknown(node, {"kind", "amplitude", "center", "width", "seed", "path"}, path)
    kind = _get_str(node, "kind", path, default="constant")
    if kind not in InitialCondition._KINDS:
        options = ", ".join(InitialCondition._KINDS)
        raise ConfigError(f"{path}.kind", f"unknown kind {kind!r}, expected one of: {options}")
    center = node.get("center")
    if center is not None:
        if not isinstance(center, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in center):
            raise ConfigError(f"{path}.center", "expected a list of numbers")
        center = tuple(float(x) for x in center)
    amplitude = _get_number(node, "amplitude", path, default=1.0)
    width = _get_number(node, "width", path, default=0.1)
    seed = _get_int(node, "seed", path, default=0)
    snap_path = _get_str(node, "path", path, default=None)
    if amplitude < 0:
        raise ConfigError(f"{path}.amplitude", f"must be >= 0, got {amplitude}")
    if kind == "gaussian" and width <= 0:
        raise ConfigError(f"{path}.width", f"must be > 0 for gaussian, got {width}")
    if kind == "from_snapshot" and not snap_path:
        raise ConfigError(f"{path}.path", "required when kind is from_snapshot")
    return InitialCondition(kind=kind, amplitude=amplitude, center=center, width=width, rng_seed=seed, path=snap_path)


def _parse_time(node, path: str) -> StepControls:
    node = _expect_object(node, path)
    allowed = {"t_end", "dt_init", "dt_min", "dt_max", "cfl_advect", "cfl_react", "u_blowup"}
    _reject_unknown(node, allowed, path)
    kwargs = dict(
        t_end=_get_number(node, "t_end", path, default=1.0),
        dt_init=_get_number(node, "dt_init", path, default=1e-3),
        dt_min=_get_number(node, "dt_min", path, default=1e-10),
        dt_max=_get_number(node, "dt_max", path, default=1e-2),
        cfl_advect=_get_number(node, "cfl_advect", path, default=0.5),
        cfl_react=_get_number(node, "cfl_react", path, default=0.5),
        u_blowup=_get_number(node, "u_blowup", path, default=1e6),
    )
    try:
        return StepControls(**kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def _parse_output(node, path: str) -> DiagnosticsSpec:
    node = _expect_object(node, path)
    _reject_unknown(node, {"cadence_steps", "norm_k_list", "snapshot_every"}, path)
    cadence = _get_int(node, "cadence_steps", path, default=10)
    snap_every = _get_int(node, "snapshot_every", path, default=0)
    k_list = node.get("norm_k_list")
    if k_list is not None:
        if not isinstance(k_list, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in k_list):
            raise ConfigError(f"{path}.norm_k_list", "expected a list of numbers")
        if any(k < 1 for k in k_list):
            raise ConfigError(f"{path}.norm_k_list", f"norm exponents must be >= 1, got {k_list}")
        k_list = tuple(float(k) for k in k_list)
    try:
        return DiagnosticsSpec(cadence_steps=cadence, norm_k_list=k_list, snapshot_every=snap_every)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def parse_config_dict(data, path: str = "") -> RunConfig:
    data = _expect_object(data, path or "<root>")
    _reject_unknown(data, {"dimension", "grid", "model", "initial", "time", "output"}, path)

    def sub(key):
        return f"{path}.{key}" if path else key

    dimension = _get_int(data, "dimension", path, required=True)
    if dimension not in (1, 2, 3):
        raise ConfigError(sub("dimension"), f"must be 1, 2 or 3, got {dimension}")

    if "grid" not in data:
        raise ConfigError(sub("grid"), "missing required key")
    grid_node = _expect_object(data["grid"], sub("grid"))
    _reject_unknown(grid_node, {"cells", "lengths"}, sub("grid"))
    cells_raw = grid_node.get("cells")
    if cells_raw is None:
        raise ConfigError(sub("grid.cells"), "missing required key")
    if isinstance(cells_raw, (int, float)) and not isinstance(cells_raw, bool) and cells_raw == int(cells_raw):
        cells = (int(cells_raw),) * dimension
    elif isinstance(cells_raw, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in cells_raw):
        cells = tuple(cells_raw)
    else:
        raise ConfigError(sub("grid.cells"), "expected an integer or a list of integers")
    if len(cells) != dimension:
        raise ConfigError(sub("grid.cells"), f"expected {dimension} entries, got {len(cells)}")
    lengths_raw = grid_node.get("lengths")
    if lengths_raw is None:
        lengths = (1.0,) * dimension
    elif isinstance(lengths_raw, (int, float)) and not isinstance(lengths_raw, bool):
        lengths = (float(lengths_raw),) * dimension
    elif isinstance(lengths_raw, list) and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in lengths_raw):
        lengths = tuple(float(x) for x in lengths_raw)
    else:
        raise ConfigError(sub("grid.lengths"), "expected a number or a list of numbers")
    if len(lengths) != dimension:
        raise ConfigError(sub("grid.lengths"), f"expected {dimension} entries, got {len(lengths)}")
    try:
        Grid(dimension, cells, lengths)
    except ValueError as exc:
        raise ConfigError(sub("grid"), str(exc)) from None

    if "model" not in data:
        raise ConfigError(sub("model"), "missing required key")
    model = _parse_model(data["model"], sub("model"), reaction_required=True)
    initial = _parse_initial(data.get("initial", {}), sub("initial"))
    controls = _parse_time(data.get("time", {}), sub("time"))
    output = _parse_output(data.get("output", {}), sub("output"))
    return RunConfig(
        dimension=dimension,
        grid_cells=cells,
        grid_lengths=lengths,
        model=model,
        initial=initial,
        controls=controls,
        output=output,
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON: {exc}") from None
    return parse_config_dict(data)


def config_to_dict(cfg: RunConfig) -> dict:
    return {
        "dimension": cfg.dimension,
        "grid": {"cells": list(cfg.grid_cells), "lengths": list(cfg.grid_lengths)},
        "model": {
            "chi": cfg.model.chi,
            "sigma": cfg.model.sigma,
            "xi": cfg.model.xi,
            "theory_n": cfg.model.theory_n,
            "reaction": {
                "variant": cfg.model.reaction.variant.value,
                "alpha": cfg.model.reaction.alpha,
                "beta": cfg.model.reaction.beta,
                "mu": cfg.model.reaction.mu,
            },
        },
        "initial": {
            "kind": cfg.initial.kind,
            "amplitude": cfg.initial.amplitude,
            "center": list(cfg.initial.center) if cfg.initial.center is not None else None,
            "width": cfg.initial.width,
            "seed": cfg.initial.rng_seed,
            **({"path": cfg.initial.path} if cfg.initial.path is not None else {}),
        },
        "time": {
            "t_end": cfg.controls.t_end,
            "dt_init": cfg.controls.dt_init,
            "dt_min": cfg.controls.dt_min,
            "dt_max": cfg.controls.dt_max,
            "cfl_advect": cfg.controls.cfl_advect,
            "cfl_react": cfg.controls.cfl_react,
            "u_blowup": cfg.controls.u_blowup,
        },
        "output": {
            "cadence_steps": cfg.output.cadence_steps,
            "norm_k_list": list(cfg.output.norm_k_list) if cfg.output.norm_k_list is not None else None,
            "snapshot_every": cfg.output.snapshot_every,
        },
    }


def serialize_config(cfg: RunConfig) -> str:
    """JSON text that `parse_config` maps back to an equal RunConfig."""
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"


@dataclass(frozen=True)
class SweepConfig:
    """Cartesian (alpha, beta) sweep over the nonlocal reaction.

    Ranges are (min, max, count); count = 1 pins the value at min.  The
    base run configuration supplies everything else, with its reaction
    replaced per job.
    """

    alpha_range: tuple[float, float, int]
    beta_range: tuple[float, float, int]
    base: RunConfig
    worker_count: int = 1

    def __post_init__(self):
        for name, rng in (("alpha_range", self.alpha_range), ("beta_range", self.beta_range)):
            lo, hi, count = rng
            if count < 1:
                raise ValueError(f"{name}: count must be >= 1, got {count}")
            if hi < lo:
                raise ValueError(f"{name}: max {hi} is below min {lo}")
        if self.alpha_range[0] < 1:
            raise ValueError(f"alpha_range: sweep alphas must be >= 1, got min {self.alpha_range[0]}")
        if self.beta_range[0] <= 1:
            raise ValueError(f"beta_range: sweep betas must be > 1, got min {self.beta_range[0]}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")


def _parse_range(node, path: str) -> tuple[float, float, int]:
    node = _expect_object(node, path)
    _reject_unknown(node, {"min", "max", "count"}, path)
    lo = _get_number(node, "min", path, required=True)
    hi = _get_number(node, "max", path, required=True)
    count = _get_int(node, "count", path, required=True)
    return (lo, hi, count)


def parse_sweep_config(text: str) -> SweepConfig:
    """Parse and validate a JSON sweep configuration."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON: {exc}") from None
    data = _expect_object(data, "<root>")
    _reject_unknown(data, {"alpha_range", "beta_range", "base", "worker_count"}, "")
    for key in ("alpha_range", "beta_range", "base"):
        if key not in data:
            raise ConfigError(key, "missing required key")
    alpha_range = _parse_range(data["alpha_range"], "alpha_range")
    beta_range = _parse_range(data["beta_range"], "beta_range")
    base = parse_config_dict(data["base"], "base")
    worker_count = _get_int(data, "worker_count", "", default=1)
    try:
        return SweepConfig(alpha_range=alpha_range, beta_range=beta_range, base=base, worker_count=worker_count)
    except ValueError as exc:
        raise ConfigError("<root>", str(exc)) from None


def sweep_values(rng: tuple[float, float, int]) -> list[float]:
    """Evenly spaced sweep points; a single-count range collapses to [min]."""
    lo, hi, count = rng
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]
