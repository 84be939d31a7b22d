import json

import pytest

from chemoflow import parse_config, parse_sweep_config, run_sweep
from chemoflow.sweep import SWEEP_COLUMNS, classify_observed, execute_run, sweep_rows_to_csv_text

BASE = {
    "dimension": 2,
    "grid": {"cells": 16},
    "model": {"reaction": {"variant": "nonlocal_logistic", "alpha": 2.0, "beta": 2.0}},
    "initial": {"kind": "constant_plus_noise", "amplitude": 1.0, "width": 0.3, "seed": 1},
    "time": {"t_end": 0.3, "dt_max": 5e-3},
    "output": {"cadence_steps": 5},
}


def _sweep_cfg(worker_count=1, alpha=(2.0, 2.2, 2), beta=(2.0, 4.0, 2)):
    return parse_sweep_config(
        json.dumps(
            {
                "alpha_range": {"min": alpha[0], "max": alpha[1], "count": alpha[2]},
                "beta_range": {"min": beta[0], "max": beta[1], "count": beta[2]},
                "worker_count": worker_count,
                "base": BASE,
            }
        )
    )


def test_all_covered_sweep_verdicts():
    rows = run_sweep(_sweep_cfg())
    assert len(rows) == 4
    assert [(r[0], r[1]) for r in rows] == [(2.0, 2.0), (2.0, 4.0), (2.2, 2.0), (2.2, 4.0)]
    for row in rows:
        assert row[2] in ("CoveredCase1", "CoveredCase2")
        assert row[3] is True  # beta > 3/2
        assert row[4] == "bounded"


def test_single_cell_sweep_matches_plain_run():
    sw = _sweep_cfg(alpha=(2.0, 2.0, 1), beta=(2.0, 2.0, 1))
    rows = run_sweep(sw)
    assert len(rows) == 1
    state, series = execute_run(parse_config(json.dumps(BASE)))
    assert rows[0][4] == classify_observed(state, series, 0.3)
    assert rows[0][5] == pytest.approx(float(series.linf.max()), abs=0.0)
    assert rows[0][6] == pytest.approx(state.t, abs=0.0)


def test_worker_count_does_not_change_output():
    rows1 = run_sweep(_sweep_cfg(worker_count=1))
    rows8 = run_sweep(_sweep_cfg(worker_count=8))
    assert sweep_rows_to_csv_text(rows1) == sweep_rows_to_csv_text(rows8)


def test_csv_schema():
    text = sweep_rows_to_csv_text([])
    assert text == ",".join(SWEEP_COLUMNS) + "\n"
    rows = [(2.0, 2.5, "CoveredCase1", True, "bounded", 1.25, 0.3)]
    lines = sweep_rows_to_csv_text(rows).splitlines()
    assert lines[1] == "2.0,2.5,CoveredCase1,true,bounded,1.25,0.3"


def test_observed_blowup_classification():
    import math

    cfg = parse_config(
        json.dumps(
            {
                "dimension": 2,
                "grid": {"cells": 48},
                "model": {"reaction": {"variant": "off"}},
                "initial": {
                    "kind": "gaussian",
                    "amplitude": 500.0 / (2 * math.pi * 0.05**2),
                    "width": 0.05,
                },
                "time": {"t_end": 1.0, "dt_init": 1e-6, "dt_min": 1e-11, "dt_max": 1e-3, "u_blowup": 1e5},
            }
        )
    )
    state, series = execute_run(cfg)
    assert classify_observed(state, series, 1.0) == "blowup"
