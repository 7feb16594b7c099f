import csv
import io
import json

import numpy as np
import pytest

from zakpol.channel import SceneSpec
from zakpol.core import ParameterError, reference_grid
from zakpol.estimation import DetectionOutcome, ParamEstimate
from zakpol.harness import (
    CSV_COLUMNS,
    RunConfig,
    System,
    TrialError,
    TrialRecord,
    auc,
    four_target_scene,
    heatmap_scenario,
    histogram_csv,
    records_csv,
    rmse_curves,
    roc_curve,
    roc_from_scores,
    run_monte_carlo,
    scene_totals,
    selftest,
    write_monte_carlo,
)


def record(trial, hyp, stat, k_hat=None, l_hat=None, tau_bins=0.0, nu_bins=0.0, snr=10.0):
    p = reference_grid()
    det = ParamEstimate(k_hat, l_hat, {}, {}, k_hat is not None)
    return TrialRecord(
        trial, snr, hyp, tau_bins / p.bandwidth, nu_bins / p.duration, np.eye(2), DetectionOutcome(stat, 0.1), det
    )


# ---- configuration ----------------------------------------------------------------

def test_config_validation():
    for bad in [dict(system="ofdm"), dict(polarization="tri"), dict(trials=0), dict(snr_db=()), dict(N=36)]:
        with pytest.raises(ParameterError):
            RunConfig(**bad)


def test_config_json_and_overrides():
    text = json.dumps({"system": "fmcw", "trials": 10, "seed": 4, "snr_db": [5]})
    cfg = RunConfig.from_json(text, seed=9, trials=None, out="x")
    assert (cfg.system, cfg.trials, cfg.seed, cfg.out, cfg.snr_db) == ("fmcw", 10, 9, "x", (5.0,))
    assert RunConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(ParameterError, match="unknown"):
        RunConfig.from_json('{"colour": 1}')


# ---- Monte Carlo ----------------------------------------------------------------------

def test_determinism_and_counts():
    cfg = RunConfig(system="zak", trials=1, seed=5, snr_db=(0.0, 20.0))
    a, b = run_monte_carlo(cfg), run_monte_carlo(cfg)
    assert len(a) == cfg.trials * len(cfg.snr_db) * 2
    assert records_csv(a) == records_csv(b)


@pytest.mark.parametrize("system", ["zak", "phase_coded", "fmcw"])
def test_worker_count_does_not_change_output(system):
    cfg = RunConfig(system=system, trials=3, seed=11, snr_db=(0.0, 10.0))
    one = records_csv(run_monte_carlo(cfg))
    two = records_csv(run_monte_carlo(RunConfig(**{**cfg.__dict__, "workers": 2})))
    assert one == two


def test_present_and_absent_share_geometry():
    recs = run_monte_carlo(RunConfig(trials=2, snr_db=(10.0,)))
    for pres, absn in zip(recs[::2], recs[1::2]):
        assert (pres.hypothesis, absn.hypothesis) == ("present", "absent")
        assert pres.tau_true == absn.tau_true and pres.nu_true == absn.nu_true


def test_csv_schema(tmp_path):
    cfg = RunConfig(system="fmcw", polarization="uni", trials=2, snr_db=(0.0,), out=str(tmp_path))
    recs = run_monte_carlo(cfg)
    d = write_monte_carlo(cfg, recs)
    rows = list(csv.reader((d / "fmcw_uni_trials.csv").open(encoding="utf-8")))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 4
    assert rows[1][11:] == ["", "", ""]  # uni runs weigh only HH
    for name in ("roc", "rmse", "hist"):
        assert (d / f"fmcw_uni_{name}.csv").stat().st_size > 0


def test_trial_errors_carry_context(monkeypatch):
    import zakpol.harness as h

    def boom(*a, **k):
        raise ValueError("bad frame")

    monkeypatch.setattr(h, "detection_statistic", boom)
    with pytest.raises(TrialError, match="trial 0 at 10.0 dB"):
        run_monte_carlo(RunConfig(trials=1, snr_db=(10.0,)))


def test_zak_dual_high_snr_separation():
    recs = run_monte_carlo(RunConfig(system="zak", polarization="dual", snr_db=(20.0,), trials=200))
    pres = np.array([r.detection.statistic_present for r in recs if r.hypothesis == "present"])
    floor = max(r.detection.statistic_floor for r in recs)
    assert np.mean(pres > floor) >= 0.99


@pytest.mark.xfail(
    strict=True,
    reason="with unit-energy frames and sigma^2 = 1/(MN snr) the matched filter keeps ~30 dB of gain; AUC is ~0.8 at -20 dB",
)
def test_fmcw_uni_low_snr_overlap():
    recs = run_monte_carlo(RunConfig(system="fmcw", polarization="uni", snr_db=(-20.0,), trials=300))
    assert auc(recs) < 0.7


# ---- ROC and RMSE ----------------------------------------------------------------------

def test_roc_perfect_and_random():
    fpr, tpr, a = roc_from_scores(np.array([2.0, 3.0]), np.array([0.0, 1.0]))
    assert a == 1.0
    rng = np.random.default_rng(0)
    x = rng.standard_normal(20_000)
    _, _, a = roc_from_scores(x[:10_000], x[10_000:])
    assert a == pytest.approx(0.5, abs=0.02)
    _, _, a = roc_from_scores(np.ones(5), np.ones(5))
    assert a == pytest.approx(0.5)


def test_roc_monotone_and_bounded():
    rng = np.random.default_rng(1)
    recs = [record(t, "present", float(rng.normal(1))) for t in range(200)]
    recs += [record(t, "absent", float(rng.normal(0))) for t in range(200)]
    fpr, tpr, a = roc_curve(recs)
    assert np.all(np.diff(fpr) >= 0) and np.all(np.diff(tpr) >= 0)
    assert (fpr[0], tpr[0], fpr[-1], tpr[-1]) == (0, 0, 1, 1)
    assert 0.5 < a <= 1
    _, _, af = roc_curve(recs, negatives="floor")
    assert 0 <= af <= 1


def test_roc_needs_both_hypotheses():
    with pytest.raises(ParameterError):
        roc_curve([record(0, "present", 1.0)])
    with pytest.raises(ParameterError):
        roc_curve([record(0, "present", 1.0), record(0, "absent", 0.0)], negatives="other")


def test_rmse_units():
    p = reference_grid()
    exact = [record(t, "present", 1.0, k_hat=3.0, l_hat=-2.0, tau_bins=3.0, nu_bins=-2.0) for t in range(5)]
    row = rmse_curves(exact, p)[0]
    assert row.delay_rmse == pytest.approx(0, abs=1e-9) and row.doppler_rmse == pytest.approx(0, abs=1e-9)
    off = [record(t, "present", 1.0, k_hat=4.0, l_hat=-2.0, tau_bins=3.0, nu_bins=-2.0) for t in range(5)]
    assert rmse_curves(off, p)[0].delay_rmse == pytest.approx(1.0)
    missed = off + [record(9, "present", 0.1)]
    row = rmse_curves(missed, p)[0]
    assert row.miss_rate == pytest.approx(1 / 6) and row.detected == 5
    none = rmse_curves([record(0, "present", 0.1)], p)[0]
    assert none.delay_rmse is None and none.doppler_rmse is None and none.miss_rate == 1.0


def test_histogram_counts():
    recs = [record(t, h, float(t)) for t in range(10) for h in ("present", "absent")]
    rows = list(csv.reader(io.StringIO(histogram_csv(recs, bins=5))))
    assert sum(int(r[4]) for r in rows[1:]) == 20


# ---- heatmaps -----------------------------------------------------------------------

def test_heatmap_four_target_scene(tmp_path):
    cfg = RunConfig(seed=3)
    res = heatmap_scenario(cfg, out=tmp_path)
    zak = res["zak"][1]
    assert (zak[("H", "H")].true, zak[("H", "H")].false) == (2, 0)
    assert (zak[("H", "V")].true, zak[("V", "H")].true) == (2, 2)
    assert not zak[("V", "V")].peaks
    fm = res["fmcw"][1]
    assert len(fm[("H", "H")].peaks) > 2 or fm[("V", "H")].missed > 0
    rows = list(csv.reader((tmp_path / "zak_hh.csv").open(encoding="utf-8")))
    assert len(rows) == 31 and all(len(r) == 37 for r in rows)
    assert len(list(tmp_path.glob("*.csv"))) == 12


def test_heatmap_empty_scene():
    res = heatmap_scenario(RunConfig(seed=4), SceneSpec())
    for name, (_, tallies) in res.items():
        assert all(not t.peaks for t in tallies.values()), name
        assert scene_totals(tallies, SceneSpec()) == (0, 0, 0)


def test_four_target_scene_gains():
    s = four_target_scene(reference_grid())
    mags = sorted(abs(p.gain[0, 0]) for p in s.paths if p.gain[0, 0]) + sorted(abs(p.gain[0, 1]) for p in s.paths if p.gain[0, 1])
    assert mags == [0.7, 0.7, 0.3, 0.95]
    assert all(p.gain[0, 1] == p.gain[1, 0] for p in s.paths)


def test_system_observe_uses_all_receivers():
    cfg = RunConfig(system="fmcw", polarization="dual")
    est = System(cfg).observe(four_target_scene(cfg.params), 20.0, np.random.default_rng(0))
    assert est.frames == 2 and len(est.surfaces) == 4


def test_selftest_passes():
    assert all(ok for _, ok, _ in selftest())
