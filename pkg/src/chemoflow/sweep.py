"""Parallel (alpha, beta) regime-map sweeps.

Each grid point runs an independent simulation with the nonlocal reaction at
that exponent pair and is classified three ways: the theorem verdict, the
beta > n/2 headline threshold, and the *observed* finite-horizon behavior.
"Observed" is an operational proxy, not a proof: a run counts as bounded
when it finishes and the sup-norm channel over the last quarter of the run
stays within 5% of its level over the middle half; collapse that the scheme
rather than the PDE produced cannot be ruled out, so non-verdict rows say
"observed", never "proved".

Jobs are independent and gathered deterministically: rows are sorted by
(alpha, beta) before emission, so the output is byte-identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .config import RunConfig, SweepConfig, sweep_values
from .diagnostics import DiagnosticSeries
from .reaction import ReactionSpec, classify_regime, collapse_threshold_hint
from .stepper import RunState, RunStatus, run

SWEEP_COLUMNS = ("alpha", "beta", "verdict", "beta_gt_n_over_2", "observed", "sup_linf", "t_stop")

OBSERVED_BOUNDED_FACTOR = 1.05


def execute_run(cfg: RunConfig, snapshot_callback=None) -> tuple[RunState, DiagnosticSeries]:
    """Build the grid and initial data from a config and run it."""
    grid = cfg.grid()
    u0 = cfg.initial.build(grid)
    return run(u0, cfg.model, cfg.controls, cfg.output, snapshot_callback=snapshot_callback)


def classify_observed(state: RunState, series: DiagnosticSeries, t_end: float) -> str:
    """Operational boundedness proxy on the finished series (see module docs)."""
    if state.status is RunStatus.BLOWUP_DETECTED:
        return "blowup"
    if state.status is not RunStatus.FINISHED:
        return "error"
    t = series.t
    linf = series.linf
    mid = linf[(t >= 0.25 * t_end) & (t < 0.75 * t_end)]
    late = linf[t >= 0.75 * t_end]
    if mid.size == 0 or late.size == 0:
        return "inconclusive"
    if float(late.max()) <= OBSERVED_BOUNDED_FACTOR * float(mid.max()):
        return "bounded"
    return "inconclusive"


def _sweep_job(payload) -> tuple:
    base, alpha, beta = payload
    reaction = ReactionSpec.nonlocal_logistic(alpha=alpha, beta=beta)
    cfg = replace(base, model=replace(base.model, reaction=reaction))
    verdict = classify_regime(cfg.model.theory_n, alpha, beta)
    hint = collapse_threshold_hint(cfg.model.theory_n, beta)
    try:
        state, series = execute_run(cfg)
        observed = classify_observed(state, series, cfg.controls.t_end)
        sup_linf = float(series.linf.max()) if len(series) else math.nan
        t_stop = state.t
    except Exception:
        observed = "error"
        sup_linf = math.nan
        t_stop = math.nan
    return (alpha, beta, verdict.verdict.value, hint, observed, sup_linf, t_stop)


def run_sweep(sweep: SweepConfig) -> list[tuple]:
    """Run the cartesian job set and return rows sorted by (alpha, beta).

    Individual job failures land in the row as observed = "error"; the
    sweep itself keeps going.
    """
    jobs = [
        (sweep.base, alpha, beta)
        for alpha in sweep_values(sweep.alpha_range)
        for beta in sweep_values(sweep.beta_range)
    ]
    if sweep.worker_count == 1:
        rows = [_sweep_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=sweep.worker_count) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def sweep_rows_to_csv_text(rows: list[tuple]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for alpha, beta, verdict, hint, observed, sup_linf, t_stop in rows:
        lines.append(
            ",".join(
                (
                    repr(float(alpha)),
                    repr(float(beta)),
                    verdict,
                    "true" if hint else "false",
                    observed,
                    repr(float(sup_linf)),
                    repr(float(t_stop)),
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(rows: list[tuple], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(sweep_rows_to_csv_text(rows))
