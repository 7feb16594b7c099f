"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line and the session summary repeats them.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from zakpol import ambiguity
from zakpol.channel import SceneSpec, apply_pol_channel, on_grid_spreading
from zakpol.cli import main
from zakpol.core import POL_PAIRS, DDSurface, GdaftParams, PolPath, SupportBox, ZakParams, reference_grid, support_set
from zakpol.estimation import entropy_weight, estimate_pol_channels_zak
from zakpol.harness import RunConfig, SYSTEMS, auc, four_target_scene, heatmap_scenario, rmse_curves, run_monte_carlo, scene_totals
from zakpol.waveform import gdaft_direct, pulsone, spread_carrier

GRID = reference_grid()


def report(n, ok, detail):
    ACCEPTANCE.append((n, bool(ok), detail))
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_spread_carrier_closed_form():
    t0 = time.perf_counter()
    small = ZakParams(3, 5, 1.0, 1.0)
    worst = 0.0
    for p, pairs in [
        (small, [(k, l) for k in range(3) for l in range(5)]),
        (GRID, [tuple(v) for v in np.random.default_rng(1).integers(0, [31, 37], size=(10, 2))]),
    ]:
        g = GdaftParams.for_grid(p)
        for k, l in pairs:
            d = spread_carrier(p, g, k, l).samples - gdaft_direct(p, g, pulsone(p, k, l)).samples
            worst = max(worst, float(np.max(np.abs(d))))
    dt = time.perf_counter() - t0
    report(1, worst <= 1e-9 and dt < 10, f"max elementwise error {worst:.2e} (<= 1e-9), {dt:.1f} s (< 10 s)")


def test_criterion_02_mutual_unbiasedness():
    t0 = time.perf_counter()
    c = spread_carrier(GRID, GdaftParams.for_grid(GRID)).samples
    p = pulsone(GRID).samples
    A = ambiguity.cross_ambiguity_fast(c, p)
    dev = float(np.max(np.abs(np.abs(A) * math.sqrt(1147) - 1)))
    dt = time.perf_counter() - t0
    report(2, A.shape == (1147, 1147) and dev <= 1e-9 and dt < 60,
           f"max | |A| sqrt(1147) - 1 | = {dev:.2e} over {A.size} points (<= 1e-9), {dt:.1f} s (< 60 s)")


def test_criterion_03_fast_equals_direct():
    rng = np.random.default_rng(3)
    L = 1147
    k = np.arange(L)
    worst = 0.0
    for _ in range(50):
        y = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        y /= np.linalg.norm(y)
        x /= np.linalg.norm(x)
        worst = max(worst, float(np.max(np.abs(ambiguity.cross_ambiguity_fast(y, x) - ambiguity.cross_ambiguity_direct(y, x, k, k)))))
    report(3, worst <= 1e-9, f"max |fast - direct| over 50 pairs, full {L}x{L} grid = {worst:.2e} (<= 1e-9)")


def test_criterion_04_pulsone_lattice_and_crystallization():
    S = ambiguity.self_ambiguity_support(pulsone(GRID), tol=1e-9)
    lattice = support_set([(31 * a, 37 * b) for a in range(37) for b in range(31)], 1147)
    roi_ok, _ = ambiguity.crystallization_check(S, SupportBox(0, 7, -4, 4), 1147)
    long_ok, pair = ambiguity.crystallization_check(S, SupportBox(0, 31, 0, 0), 1147)
    report(4, S == lattice and roi_ok and not long_ok,
           f"support == lattice: {S == lattice} ({len(S)} points); [0,7]x[-4,4] passes: {roi_ok}; "
           f"[0,31]x[0,0] fails: {not long_ok} (overlap {pair})")


def test_criterion_05_twisted_convolution_decomposition():
    small = ZakParams(3, 5, 1.0, 1.0)
    rng = np.random.default_rng(5)
    xs = {"H": pulsone(small), "V": spread_carrier(small, GdaftParams.for_grid(small))}
    paths = [
        PolPath(int(rng.integers(0, 3)) / small.bandwidth, int(rng.integers(-2, 3)) / small.duration,
                rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        for _ in range(4)
    ]
    scene = SceneSpec(paths)
    yV, yH = apply_pol_channel(xs["V"], xs["H"], scene)
    est = estimate_pol_channels_zak(yV, yH, xs["V"], xs["H"], small)
    rows, cols = small.delay_bins % 15, small.doppler_bins % 15
    worst = 0.0
    for j, i in POL_PAIRS:
        expansion = sum(
            ambiguity.twisted_convolve(on_grid_spreading(scene, small, (j, ip)),
                                       ambiguity.cross_ambiguity_direct(xs[ip], xs[i], range(15), range(15)))
            for ip in ("H", "V")
        )
        worst = max(worst, float(np.max(np.abs(est[(j, i)].values - expansion[np.ix_(rows, cols)]))))
    report(5, worst <= 1e-6, f"max |estimate - twisted-convolution expansion| = {worst:.2e} (<= 1e-6)")


def test_criterion_06_four_target_scene():
    t0 = time.perf_counter()
    cfg = RunConfig(seed=2026)
    scene = four_target_scene(GRID)
    res = heatmap_scenario(cfg, scene, snr_db=20.0)
    totals = {name: scene_totals(t, scene) for name, (_, t) in res.items()}
    dt = time.perf_counter() - t0
    zak_ok = totals["zak"][:2] == (4, 0)
    pc_ok = totals["phase_coded"][:2] == (4, 0)
    fm_ok = totals["fmcw"][1] >= 1 or totals["fmcw"][2] >= 1
    report(6, zak_ok and pc_ok and fm_ok and dt < 120,
           "(true, spurious, missed): " + ", ".join(f"{k} {v}" for k, v in totals.items()) + f"; {dt:.1f} s (< 120 s)")


@pytest.fixture(scope="session")
def desk_monte_carlo():
    t0 = time.perf_counter()
    runs = {}
    for system in SYSTEMS:
        for pol in ("uni", "dual"):
            cfg = RunConfig(system=system, polarization=pol, snr_db=(0.0, 10.0, 20.0), trials=2000, seed=20250101)
            runs[(system, pol)] = (cfg, run_monte_carlo(cfg))
    return runs, time.perf_counter() - t0


def test_criterion_07_roc_ordering(desk_monte_carlo):
    runs, dt = desk_monte_carlo
    a = {key: auc(recs) for key, (_, recs) in runs.items()}
    best_uni = max(a[(s, "uni")] for s in SYSTEMS)
    ok = a[("zak", "dual")] >= 0.99 and a[("zak", "dual")] >= a[("fmcw", "dual")] >= best_uni and dt < 900
    detail = ", ".join(f"{s}/{p} {v:.4f}" for (s, p), v in a.items())
    report(7, ok, f"pooled AUC: {detail}; 6 x 3 x 2000 trials in {dt:.0f} s (< 900 s)")


def test_criterion_08_rmse_ratios(desk_monte_carlo):
    runs, _ = desk_monte_carlo

    def at20(key):
        cfg, recs = runs[key]
        return next(r for r in rmse_curves(recs, cfg.params) if r.snr_db == 20.0)

    zak, fm, pc = at20(("zak", "dual")), at20(("fmcw", "dual")), at20(("phase_coded", "dual"))
    dop_ratio = fm.doppler_rmse / zak.doppler_rmse
    del_ratio = zak.delay_rmse / pc.delay_rmse
    ok = dop_ratio >= 1.3 and max(del_ratio, 1 / del_ratio) <= 1.2
    report(8, ok, f"Doppler RMSE fmcw/zak = {dop_ratio:.3f} (>= 1.3); delay RMSE zak/phase-coded = {del_ratio:.3f} (within 1.2x)")


def test_criterion_09_entropy_cases():
    flat = entropy_weight(DDSurface(np.ones((31, 37)), GRID))
    one = np.zeros((31, 37), complex)
    one[2, 7] = 1
    single = entropy_weight(DDSurface(one, GRID))
    one[9, 30] = 1j
    two = entropy_weight(DDSurface(one, GRID))
    target = 1 - 1 / math.log2(1147)
    ok = abs(flat) <= 1e-12 and abs(single - 1) <= 1e-12 and abs(two - target) <= 1e-12
    report(9, ok, f"flat {flat:.3e}, single {single:.15f}, two-bin {two:.15f} vs {target:.15f}")


def test_criterion_10_byte_identical_runs(tmp_path):
    outs = []
    for n, workers in enumerate(["1", "1", "2", "3"]):
        d = tmp_path / f"run{n}"
        args = ["montecarlo", "--system", "zak", "--trials", "4", "--seed", "77", "--snr", "0", "20",
                "--workers", workers, "--out", str(d)]
        assert main(args) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.glob("*.csv"))})
    same = all(o == outs[0] for o in outs[1:]) and len(outs[0]) == 4
    report(10, same, f"{len(outs[0])} CSVs byte-identical across 4 runs with 1, 1, 2 and 3 workers: {same}")
