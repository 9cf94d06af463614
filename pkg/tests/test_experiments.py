import csv
import json
import math

import numpy as np
import pytest

from cavtrans.experiments import (
    CSV_COLUMNS, SCENARIO_IDS, Scenario, crossover_locator, fit_scaling,
    peak_characterize, run_scenario,
)


def test_fit_powerlaw_exact():
    xs = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    f = fit_scaling(xs, xs**-2, "powerlaw")
    assert abs(f.exponent + 2.0) < 1e-9
    assert f.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_exponential_exact():
    xs = np.linspace(0, 5, 6)
    f = fit_scaling(xs, np.exp(-xs), "exponential")
    assert abs(f.exponent + 1.0) < 1e-9


def test_fit_rejects_bad_input():
    with pytest.raises(ValueError, match="4 points"):
        fit_scaling([1, 2, 3], [1, 2, 3], "powerlaw")
    with pytest.raises(ValueError, match="positive"):
        fit_scaling([1, 2, 3, 4], [1.0, -1.0, 2.0, 3.0], "exponential")
    with pytest.raises(ValueError, match="model"):
        fit_scaling([1, 2, 3, 4], [1, 2, 3, 4], "quadratic")


def test_crossover_on_step_curve():
    gs = np.geomspace(0.01, 1.0, 21)
    ys = np.where(gs < 0.1, 1e-6, 1e-2)
    gstar = crossover_locator(gs, ys)
    k = np.searchsorted(gs, 0.1)
    assert gs[k - 1] <= gstar <= gs[k + 1]


def test_crossover_flat_curve():
    gs = np.geomspace(0.01, 1.0, 15)
    assert crossover_locator(gs, np.full(15, 0.5)) is None


def test_peak_characterize_lorentzian():
    xs = np.linspace(-5, 5, 201)
    w = 1.4
    ys = 1.0 / (1.0 + (xs - 0.3) ** 2 / (w / 2) ** 2)
    pk = peak_characterize(xs, ys)
    assert abs(pk["position"] - 0.3) < 0.01
    assert abs(pk["height"] - 1.0) < 0.01
    assert abs(pk["fwhm"] - w) < 0.05


def test_unknown_scenario_and_override_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown scenario"):
        run_scenario(Scenario(id="fig9z", out_dir=tmp_path))
    with pytest.raises(ValueError, match="unresolvable override"):
        run_scenario(Scenario(id="fig1b", overrides={"bogus": 1}, out_dir=tmp_path))


def test_scenario_ids_cover_all_builders():
    assert len(SCENARIO_IDS) == 13


def _read(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_fig1b_scenario_contract(tmp_path):
    res = run_scenario(Scenario(id="fig1b", overrides={"dt": 5.0}, out_dir=tmp_path))
    rows = _read(res.csv_path)
    assert rows[0] == CSV_COLUMNS
    by_name = {}
    for r in rows[1:]:
        rec = dict(zip(CSV_COLUMNS, r))
        by_name.setdefault(rec["observable_name"], []).append(rec)
    assert float(by_name["T_ts"][0]["value"]) > 0.5
    assert float(by_name["T_ts"][0]["t_or_none"]) == 30.0
    assert float(by_name["T_tl"][0]["t_or_none"]) == 55.0
    # every row carries the full resolved parameter tuple
    rec = dict(zip(CSV_COLUMNS, rows[1]))
    assert rec["N"] == "50" and rec["M"] == "50" and float(rec["g"]) == 10.0
    meta = json.loads(res.meta_path.read_text())
    assert meta["scenario"] == "fig1b"
    assert meta["resolved_parameters"]["Delta"] == 69.0
    assert "conventions" in meta


def test_fig2a_defaults_resolve():
    from cavtrans.experiments import _BUILDERS
    jobs, desc, params = _BUILDERS["fig2a"]({}, (1,), False)
    assert params["N"] == 100 and params["M"] == 50
    assert params["g"] == 50.0
    assert params["Jprime"] == pytest.approx(4 * (2 * math.log(2)) ** 0.25 * math.sqrt(10))


def test_scenario_determinism_byte_identical(tmp_path):
    o = {"gammaP_list": [0.2, 0.6], "g_list": [0.0, 0.2], "N": 8}
    a = run_scenario(Scenario(id="fig3b", overrides=o, out_dir=tmp_path / "a", seeds=(7,)))
    b = run_scenario(Scenario(id="fig3b", overrides=o, out_dir=tmp_path / "b", seeds=(7,)))
    assert a.csv_path.read_bytes() == b.csv_path.read_bytes()
    # metadata may differ in wall time only
    ma = json.loads(a.meta_path.read_text())
    mb = json.loads(b.meta_path.read_text())
    ma.pop("wall_time_s"), mb.pop("wall_time_s")
    assert ma == mb


def test_aggregates_recomputable(tmp_path):
    o = {"N_list": [10, 20], "g_list": [0.0], "seeds": 4}
    res = run_scenario(Scenario(id="fig3a", overrides=o, out_dir=tmp_path))
    rows = [dict(zip(CSV_COLUMNS, r)) for r in _read(res.csv_path)[1:]]
    per_seed = [r for r in rows if r["seed"] not in ("mean", "stderr")]
    means = {tuple(r[c] for c in CSV_COLUMNS[2:15]): float(r["value"])
             for r in rows if r["seed"] == "mean"}
    errs = {tuple(r[c] for c in CSV_COLUMNS[2:15]): float(r["value"])
            for r in rows if r["seed"] == "stderr"}
    assert means and len(means) == len(errs)
    for key, mval in means.items():
        vals = [float(r["value"]) for r in per_seed
                if tuple(r[c] for c in CSV_COLUMNS[2:15]) == key]
        assert len(vals) == 4
        assert mval == pytest.approx(np.mean(vals), abs=1e-12)
        assert errs[key] == pytest.approx(np.std(vals, ddof=1) / 2.0, abs=1e-12)


def test_fig3b_kappa_recorded(tmp_path):
    o = {"gammaP_list": [0.5], "g_list": [0.1], "N": 6}
    res = run_scenario(Scenario(id="fig3b", overrides=o, out_dir=tmp_path, seeds=(1,)))
    meta = json.loads(res.meta_path.read_text())
    assert meta["resolved_parameters"]["kappa"] == 1.0
    assert "kappa_choice" in meta["resolved_parameters"]
    rows = [dict(zip(CSV_COLUMNS, r)) for r in _read(res.csv_path)[1:]]
    assert all(float(r["kappa"]) == 1.0 for r in rows)


def test_figS2_emits_peak_diagnostics(tmp_path):
    o = {"g_list": [10.0]}
    res = run_scenario(Scenario(id="figS2", overrides=o, out_dir=tmp_path, seeds=(1,)))
    names = {dict(zip(CSV_COLUMNS, r))["observable_name"] for r in _read(res.csv_path)[1:]}
    assert {"fwhm_numeric", "peak_T", "peak_offset", "fwhm_analytic",
            "fwhm_packet"} <= names


def test_figA1_series_names(tmp_path):
    o = {"N_list": [25], "seeds": 2}
    res = run_scenario(Scenario(id="figA1", overrides=o, out_dir=tmp_path))
    names = {dict(zip(CSV_COLUMNS, r))["observable_name"] for r in _read(res.csv_path)[1:]}
    for series in ("nn", "lr", "cavity_g0.2", "cavity_g0.02"):
        assert f"T_tl_{series}" in names
