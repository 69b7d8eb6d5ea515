import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from rghyper.experiments import (BISECTION, EXACT, SweepConfig, aggregates_csv, default_n_values,
                                 fit_slope, nondecreasing_within_ci, result_json, run_sweep,
                                 theorem_validation, trials_csv, validation_csv, wilson_interval,
                                 ValidationRow)
from rghyper.geometry import FIXED, POISSON, Box, trial_samples
from rghyper.threshold import critical_radius_exact


def test_default_n_values():
    ns = default_n_values()
    assert ns[0] == 1000 and ns[-1] == 10000 and len(ns) == 8
    ratios = np.diff(np.log(ns))
    assert np.allclose(ratios, math.log(10) / 7, atol=1e-3)


@pytest.mark.parametrize("kwargs", [
    dict(n_values=[]), dict(n_values=[5]), dict(n_values=[100, 100]), dict(trials=0),
    dict(split=(0.7, 0.2)), dict(split=(1.0, 0.0)), dict(mode="grid"), dict(method="guess"),
    dict(bisection_tol=0), dict(d=0),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SweepConfig(**kwargs)


def test_config_round_trip():
    cfg = SweepConfig(d=3, n_values=[100, 200], trials=3, master_seed=9)
    assert SweepConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"dims": 3})


def test_single_trial_determinism():
    cfg = SweepConfig(n_values=[100], trials=1, master_seed=4)
    a, b = run_sweep(cfg), run_sweep(cfg)
    assert a.records == b.records and a.levels == b.levels
    assert trials_csv(a) == trials_csv(b)
    assert result_json(a) == result_json(b)


def test_recomputation_oracle():
    cfg = SweepConfig(n_values=[1000, 2000], trials=50, master_seed=11)
    res = run_sweep(cfg)
    domain = Box.unit(2)
    direct = []
    for t in range(50):
        _, nodes, centers = trial_samples(domain, 1000, 0.8, FIXED, 11, t)
        direct.append(critical_radius_exact(nodes, centers, "prim").r_star)
    level = res.levels[0]
    assert level.mean == pytest.approx(np.mean(direct), rel=1e-15)
    assert level.min == min(direct) and level.max == max(direct)
    for s in res.levels:
        assert 0 < s.min <= s.mean <= s.max
        assert s.trials == 50 == sum(r.n == s.n for r in res.records)


def test_bisection_sweep_agrees():
    base = dict(n_values=[100, 200], trials=3, master_seed=2)
    ex = run_sweep(SweepConfig(**base))
    bi = run_sweep(SweepConfig(**base, method=BISECTION, bisection_tol=1e-10))
    for a, b in zip(ex.records, bi.records):
        assert abs(a.r_star - b.r_star) <= 1e-10


def test_thread_count_does_not_change_output():
    cfg = SweepConfig(n_values=[100, 300], trials=6, master_seed=5)
    ref = trials_csv(run_sweep(cfg, threads=1))
    assert trials_csv(run_sweep(cfg, threads=3)) == ref
    assert trials_csv(run_sweep(cfg, threads=0)) == ref


def test_never_connects_level_is_excluded(caplog):
    # n = 10 with a 0.99 split leaves no centres
    cfg = SweepConfig(n_values=[10, 1000], trials=2, split=(0.99, 0.01), master_seed=1)
    res = run_sweep(cfg)
    first = res.levels[0]
    assert first.never_connects == 2 and first.mean is None
    assert res.levels[1].mean is not None
    assert res.slope_fit is None
    assert "never connect" in caplog.text
    rows = list(csv.reader(io.StringIO(trials_csv(res))))
    assert rows[1][5] == "never"


def test_csv_formats():
    res = run_sweep(SweepConfig(n_values=[100, 200], trials=2, master_seed=3))
    rows = list(csv.reader(io.StringIO(trials_csv(res))))
    assert rows[0] == ["n", "trial", "seed", "n1", "n2", "r_star", "method", "wall_time_ms"]
    assert len(rows) == 5 and all(r[7] == "" for r in rows[1:])
    assert rows[1][:5] == ["100", "0", str(res.records[0].seed), "80", "20"]
    assert float(rows[1][5]) == res.records[0].r_star and rows[1][6] == EXACT
    timed = list(csv.reader(io.StringIO(trials_csv(res, timing=True))))
    assert all(float(r[7]) >= 0 for r in timed[1:])
    agg = list(csv.reader(io.StringIO(aggregates_csv(res))))
    assert agg[0] == ["n", "mean_r", "min_r", "max_r", "trials"]
    assert [int(r[0]) for r in agg[1:]] == [100, 200]
    data = json.loads(result_json(res))
    assert data["config"]["master_seed"] == 3
    assert data["slope_fit"]["slope"] == res.slope_fit.slope


def test_fit_slope_exact_power_law():
    fit = fit_slope([(1e3, 7 * 1e3**-0.5), (1e4, 7 * 1e4**-0.5)])
    assert fit.slope == pytest.approx(-0.5, abs=1e-14)
    assert math.exp(fit.intercept) == pytest.approx(7.0)
    assert fit.residual == pytest.approx(0.0, abs=1e-14)
    assert fit_slope([(10, 2.0), (100, 2.0), (1000, 2.0)]).slope == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-0.05, 0.05), min_size=8, max_size=8), st.floats(-1.5, 0.5))
def test_fit_slope_matches_polyfit(noise, slope):
    ns = np.geomspace(1e3, 1e4, 8)
    rs = 3.0 * ns**slope * np.exp(noise)
    fit = fit_slope(zip(ns, rs))
    ref_slope, ref_icpt = np.polyfit(np.log(ns), np.log(rs), 1)
    ls = stats.linregress(np.log(ns), np.log(rs))
    assert fit.slope == pytest.approx(ref_slope, abs=1e-10)
    assert fit.slope == pytest.approx(ls.slope, abs=1e-10)
    assert fit.intercept == pytest.approx(ref_icpt, abs=1e-9)
    assert abs(fit.slope - slope) <= 0.1 / (np.log(1e4) - np.log(1e3)) * 2


def test_fit_slope_errors():
    with pytest.raises(ValueError):
        fit_slope([(10, 1.0)])
    with pytest.raises(ValueError):
        fit_slope([(10, 1.0), (20, 0.0)])


@pytest.mark.parametrize("k, n", [(0, 10), (3, 10), (10, 10), (57, 100), (999, 1000)])
def test_wilson_matches_scipy(k, n):
    ci = stats.binomtest(k, n).proportion_ci(0.95, method="wilson")
    lo, hi = wilson_interval(k, n)
    assert lo == pytest.approx(ci.low, abs=1e-6) and hi == pytest.approx(ci.high, abs=1e-6)


def test_trend_check():
    row = lambda n, k: ValidationRow(n, 0.1, 100, k, k, 0)  # noqa: E731
    assert nondecreasing_within_ci([row(1, 50), row(2, 45), row(3, 90)])
    assert not nondecreasing_within_ci([row(1, 95), row(2, 40)])


def test_theorem_validation_small():
    rows = theorem_validation([300, 1000], 2, 30, seed=8, threads=2)
    for row in rows:
        assert row.violations == 0
        assert row.connected >= row.covered
    text = validation_csv(rows)
    assert text.splitlines()[0].startswith("n,r,trials,coverage_fraction")
    assert theorem_validation([300, 1000], 2, 30, seed=8, threads=1) == rows


def test_theorem_validation_weak_bound_poisson():
    rows = theorem_validation([500], 2, 20, seed=1, bound="weak", mode=POISSON)
    assert rows[0].violations == 0
