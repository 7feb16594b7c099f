"""Seeded Monte Carlo runs, ROC/RMSE aggregation, heatmap scenes and CSV export."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .channel import SceneSpec, add_noise, apply_pol_channel, draw_scene
from .core import POL_PAIRS, ComplexFrame, GdaftParams, ParameterError, PolPath, ZakParams, roi_box
from .estimation import (
    DetectionOutcome,
    ParamEstimate,
    PolChannelEstimate,
    detection_statistic,
    estimate_parameters,
    estimate_pol_channels_fmcw,
    estimate_pol_channels_phase_coded,
    estimate_pol_channels_zak,
    find_peaks,
)
from .waveform import fmcw_frame, phase_coded_frame, pulsone, spread_carrier, zadoff_chu

SYSTEMS = ("zak", "phase_coded", "fmcw")
CSV_COLUMNS = (
    "trial", "snr_db", "hypothesis", "tau_true_s", "nu_true_hz", "stat_present", "stat_floor",
    "detected", "k_hat", "l_hat", "w_hh", "w_hv", "w_vh", "w_vv",
)


@dataclass(frozen=True)
class RunConfig:
    system: str = "zak"
    polarization: str = "dual"
    snr_db: tuple[float, ...] = (0.0, 10.0, 20.0)
    trials: int = 2000
    seed: int = 20250101
    M: int = 31
    N: int = 37
    delay_period: float = 1.0 / 30e3
    doppler_period: float = 30e3
    gdaft: tuple[int, int, int] = (1, 1, 1)
    zc_roots: tuple[int, int] = (101, 107)
    pfa: float = 1e-6
    guards: tuple[int, int] = (2, 2)
    oversample: int = 2
    bernoulli: str = "symmetric"
    workers: int = 1
    out: str = "out"

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(self, "gdaft", tuple(int(v) for v in self.gdaft))
        object.__setattr__(self, "zc_roots", tuple(int(v) for v in self.zc_roots))
        object.__setattr__(self, "guards", tuple(int(v) for v in self.guards))
        if self.system not in SYSTEMS:
            raise ParameterError(f"system must be one of {SYSTEMS}, got {self.system!r}")
        if self.polarization not in ("uni", "dual"):
            raise ParameterError(f"polarization must be 'uni' or 'dual', got {self.polarization!r}")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if not self.snr_db:
            raise ParameterError("snr_db list must not be empty")
        self.params  # validates the grid

    @property
    def params(self) -> ZakParams:
        return ZakParams(self.M, self.N, self.delay_period, self.doppler_period)

    @classmethod
    def from_json(cls, text: str, **overrides) -> "RunConfig":
        doc = json.loads(text) if text else {}
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        doc.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**doc)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


# ---------------------------------------------------------------------------
# per-system transmit/receive chains
# ---------------------------------------------------------------------------

@dataclass
class System:
    """Transmit waveforms for one (system, polarization) setting, built once per run."""

    cfg: RunConfig
    tx: dict = field(default_factory=dict)

    def __post_init__(self):
        cfg, p = self.cfg, self.cfg.params
        dual = cfg.polarization == "dual"
        if cfg.system == "zak":
            self.tx["H"] = pulsone(p, 0, 0)
            self.tx["V"] = spread_carrier(p, GdaftParams.for_grid(p, *cfg.gdaft), 0, 0) if dual else None
        elif cfg.system == "phase_coded":
            u_h, u_v = cfg.zc_roots
            self.tx["H"] = phase_coded_frame(p, zadoff_chu(p.MN, u_h), cfg.oversample)
            self.tx["V"] = phase_coded_frame(p, zadoff_chu(p.MN, u_v), cfg.oversample) if dual else None
        else:
            self.tx["up"], self.tx["down"] = fmcw_frame(p, cfg.oversample)

    @property
    def receive_pols(self) -> tuple[str, ...]:
        return ("H", "V") if self.cfg.polarization == "dual" else ("H",)

    def propagate(self, scene: SceneSpec) -> dict[tuple, ComplexFrame]:
        """Noiseless received frames keyed by (frame index, half, receive pol)."""
        out = {}
        if self.cfg.system == "fmcw":
            for f, tx in enumerate(("H", "V")[: len(self.receive_pols)]):
                for half in ("up", "down"):
                    ref = self.tx[half]
                    yV, yH = apply_pol_channel(ref if tx == "V" else None, ref if tx == "H" else None, scene)
                    for rx, y in (("H", yH), ("V", yV)):
                        if rx in self.receive_pols:
                            out[(f, half, rx)] = y
        else:
            yV, yH = apply_pol_channel(self.tx["V"], self.tx["H"], scene)
            for rx, y in (("H", yH), ("V", yV)):
                if rx in self.receive_pols:
                    out[(0, "", rx)] = y
        return out

    def noise(self, keys: Iterable[tuple], lengths: dict, snr_db: float, rng) -> dict:
        MN = self.cfg.params.MN
        out = {}
        for key in keys:
            L = lengths[key]
            zero = ComplexFrame(np.zeros(L, dtype=complex), 1.0)
            # reference energy scaled by samples per critical sample: equal noise variance across systems
            out[key] = add_noise(zero, snr_db, L / MN, rng).samples
        return out

    def estimate(self, rx: dict[tuple, ComplexFrame]) -> PolChannelEstimate:
        cfg, p = self.cfg, self.cfg.params
        if cfg.system == "zak":
            return estimate_pol_channels_zak(rx.get((0, "", "V")), rx.get((0, "", "H")), self.tx["V"], self.tx["H"], p)
        if cfg.system == "phase_coded":
            return estimate_pol_channels_phase_coded(
                rx.get((0, "", "V")), rx.get((0, "", "H")), (self.tx["H"], self.tx["V"]), p, cfg.oversample
            )
        frames = []
        for f in range(len(self.receive_pols)):
            frames.append(
                tuple((rx.get((f, half, "V")), rx.get((f, half, "H"))) for half in ("up", "down"))
            )
        return estimate_pol_channels_fmcw(frames, p, cfg.oversample)

    def observe(self, scene: SceneSpec, snr_db: float, rng: np.random.Generator) -> PolChannelEstimate:
        """One noisy frame (or frame pair, for FMCW) through the receiver."""
        clean = self.propagate(scene)
        noise = self.noise(sorted(clean), {k: len(v) for k, v in clean.items()}, snr_db, rng)
        return self.estimate({k: ComplexFrame(v.samples + noise[k], v.sample_rate) for k, v in clean.items()})


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    trial: int
    snr_db: float
    hypothesis: str  # "present" | "absent"
    tau_true: float
    nu_true: float
    H: np.ndarray = field(repr=False)
    detection: DetectionOutcome = field(repr=False)
    estimate: ParamEstimate = field(repr=False)

    @property
    def weights(self) -> dict:
        return self.estimate.weights

    def csv_row(self) -> list[str]:
        e = self.estimate
        w = [repr(float(e.weights[p])) if p in e.weights else "" for p in POL_PAIRS]
        return [
            str(self.trial), repr(self.snr_db), self.hypothesis, repr(self.tau_true), repr(self.nu_true),
            repr(self.detection.statistic_present), repr(self.detection.statistic_floor),
            "1" if e.detected else "0",
            "" if e.delay is None else repr(float(e.delay)),
            "" if e.doppler is None else repr(float(e.doppler)),
            *w,
        ]


def trial_rng(seed: int, snr_index: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, SNR index, trial): order- and worker-independent."""
    return np.random.default_rng(np.random.SeedSequence([seed, snr_index, trial]))


def true_bin(params: ZakParams, tau: float, nu: float) -> tuple[int, int]:
    k, l = params.to_bins(tau, nu)
    return int(round(k)) % params.M, int(round(l))


def run_trial(system: System, snr_index: int, trial: int) -> list[TrialRecord]:
    """Both hypotheses of one trial, sharing the scene geometry and noise draw."""
    cfg = system.cfg
    p = cfg.params
    snr = cfg.snr_db[snr_index]
    rng = trial_rng(cfg.seed, snr_index, trial)
    scene = draw_scene(rng, p, cfg.bernoulli)
    path = scene.paths[0]
    clean = system.propagate(scene)
    keys = sorted(clean)
    noise = system.noise(keys, {k: len(v) for k, v in clean.items()}, snr, rng)
    tb = true_bin(p, path.delay, path.doppler)
    roi = roi_box(p)
    records = []
    for hyp in ("present", "absent"):
        rx = {
            k: ComplexFrame((clean[k].samples if hyp == "present" else 0) + noise[k], clean[k].sample_rate)
            for k in keys
        }
        est = system.estimate(rx)
        det = detection_statistic(est, tb, cfg.polarization)
        par = estimate_parameters(est, roi, cfg.guards, cfg.pfa, cfg.polarization)
        records.append(TrialRecord(trial, snr, hyp, path.delay, path.doppler, path.gain, det, par))
    return records


class TrialError(RuntimeError):
    """A pipeline failure, tagged with the trial that raised it."""


def _run_chunk(args) -> list[TrialRecord]:
    cfg, jobs = args
    system = System(cfg)
    out = []
    for si, t in jobs:
        try:
            out.extend(run_trial(system, si, t))
        except Exception as exc:
            raise TrialError(
                f"{cfg.system}/{cfg.polarization} trial {t} at {cfg.snr_db[si]} dB (seed {cfg.seed}): {exc}"
            ) from exc
    return out


def run_monte_carlo(cfg: RunConfig) -> list[TrialRecord]:
    """Every (SNR, trial) pair, both hypotheses, in deterministic order."""
    jobs = [(si, t) for si in range(len(cfg.snr_db)) for t in range(cfg.trials)]
    workers = max(1, int(cfg.workers))
    if workers == 1:
        return _run_chunk((cfg, jobs))
    size = math.ceil(len(jobs) / (workers * 4))
    chunks = [(cfg, jobs[i : i + size]) for i in range(0, len(jobs), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for part in pool.map(_run_chunk, chunks) for r in part]


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

def _scores(records: Sequence[TrialRecord], negatives: str) -> tuple[np.ndarray, np.ndarray]:
    pos = np.array([r.detection.statistic_present for r in records if r.hypothesis == "present"])
    if negatives == "absent":
        neg = np.array([r.detection.statistic_present for r in records if r.hypothesis == "absent"])
    elif negatives == "floor":
        neg = np.array([r.detection.statistic_floor for r in records if r.hypothesis == "present"])
    else:
        raise ParameterError(f"negatives must be 'absent' or 'floor', got {negatives!r}")
    if pos.size == 0 or neg.size == 0:
        raise ParameterError("ROC needs records from both hypotheses")
    return pos, neg


def roc_from_scores(pos: np.ndarray, neg: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """ROC points (false-alarm rate, detection rate) over every threshold, plus the AUC."""
    thr = np.unique(np.concatenate([pos, neg]))[::-1]
    ps, ns = np.sort(pos), np.sort(neg)
    tpr = (ps.size - np.searchsorted(ps, thr, side="left")) / ps.size
    fpr = (ns.size - np.searchsorted(ns, thr, side="left")) / ns.size
    fpr = np.concatenate([[0.0], fpr, [1.0]])
    tpr = np.concatenate([[0.0], tpr, [1.0]])
    return fpr, tpr, float(np.trapezoid(tpr, fpr))


def roc_curve(records: Sequence[TrialRecord], negatives: str = "absent", snr_db: float | None = None):
    """ROC of the target-bin statistic; negatives from target-absent trials or per-trial floors."""
    if snr_db is not None:
        records = [r for r in records if r.snr_db == snr_db]
    return roc_from_scores(*_scores(records, negatives))


def auc(records: Sequence[TrialRecord], negatives: str = "absent", snr_db: float | None = None) -> float:
    return roc_curve(records, negatives, snr_db)[2]


@dataclass(frozen=True)
class RmseRow:
    snr_db: float
    delay_rmse: float | None  # units of 1/B
    doppler_rmse: float | None  # units of 1/T
    miss_rate: float
    detected: int
    trials: int


def rmse_curves(records: Sequence[TrialRecord], params: ZakParams) -> list[RmseRow]:
    """Per-SNR RMSE over detected target-present trials; misses are counted, not averaged in."""
    rows = []
    for snr in sorted({r.snr_db for r in records}):
        sel = [r for r in records if r.snr_db == snr and r.hypothesis == "present"]
        hits = [r for r in sel if r.estimate.detected]
        if hits:
            dk = np.array([r.estimate.delay - r.tau_true * params.bandwidth for r in hits])
            dl = np.array([r.estimate.doppler - r.nu_true * params.duration for r in hits])
            d_rmse, l_rmse = float(np.sqrt(np.mean(dk**2))), float(np.sqrt(np.mean(dl**2)))
        else:
            d_rmse = l_rmse = None
        miss = 1.0 - len(hits) / len(sel) if sel else float("nan")
        rows.append(RmseRow(snr, d_rmse, l_rmse, miss, len(hits), len(sel)))
    return rows


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def records_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def roc_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("snr_db", "false_alarm_rate", "detection_rate"))
    for snr in [None, *sorted({r.snr_db for r in records})]:
        fpr, tpr, _ = roc_curve(records, snr_db=snr)
        label = "pooled" if snr is None else repr(snr)
        for f, t in zip(fpr, tpr):
            w.writerow((label, repr(float(f)), repr(float(t))))
    return buf.getvalue()


def rmse_csv(records: Sequence[TrialRecord], params: ZakParams) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("snr_db", "delay_rmse_bins", "doppler_rmse_bins", "miss_rate", "detected", "trials", "auc"))
    fmt = lambda v: "" if v is None else repr(float(v))
    for row in rmse_curves(records, params):
        w.writerow((repr(row.snr_db), fmt(row.delay_rmse), fmt(row.doppler_rmse), fmt(row.miss_rate),
                    row.detected, row.trials, fmt(auc(records, snr_db=row.snr_db))))
    w.writerow(("pooled", "", "", "", "", "", fmt(auc(records))))
    return buf.getvalue()


def histogram_csv(records: Sequence[TrialRecord], bins: int = 50) -> str:
    """Counts of the target-bin statistic per SNR and hypothesis on shared bin edges."""
    stats = np.array([r.detection.statistic_present for r in records])
    edges = np.histogram_bin_edges(stats, bins=bins)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("snr_db", "hypothesis", "bin_lo", "bin_hi", "count"))
    for snr in sorted({r.snr_db for r in records}):
        for hyp in ("present", "absent"):
            v = [r.detection.statistic_present for r in records if r.snr_db == snr and r.hypothesis == hyp]
            counts, _ = np.histogram(v, bins=edges)
            for lo, hi, c in zip(edges[:-1], edges[1:], counts):
                w.writerow((repr(snr), hyp, repr(float(lo)), repr(float(hi)), int(c)))
    return buf.getvalue()


def matrix_csv(values: np.ndarray) -> str:
    """M rows x N columns of real values."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(values, dtype=float):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def frame_csv(frame: ComplexFrame) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("n", "re", "im"))
    for n, v in enumerate(frame.samples):
        w.writerow((n, repr(float(v.real)), repr(float(v.imag))))
    return buf.getvalue()


def write_monte_carlo(cfg: RunConfig, records: Sequence[TrialRecord], out: str | os.PathLike | None = None) -> Path:
    d = Path(out or cfg.out)
    d.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.system}_{cfg.polarization}"
    (d / f"{stem}_trials.csv").write_text(records_csv(records), encoding="utf-8")
    (d / f"{stem}_roc.csv").write_text(roc_csv(records), encoding="utf-8")
    (d / f"{stem}_rmse.csv").write_text(rmse_csv(records, cfg.params), encoding="utf-8")
    (d / f"{stem}_hist.csv").write_text(histogram_csv(records), encoding="utf-8")
    return d


# ---------------------------------------------------------------------------
# multi-target heatmap scene
# ---------------------------------------------------------------------------

def four_target_scene(params: ZakParams) -> SceneSpec:
    """Four on-grid targets: two co-polar (HH = 0.7) and two cross-polar (HV = VH = 0.3, 0.95).

    Positions are chosen inside the region of interest so that FMCW
    up/down-ridge cross pairings also land inside it.
    """
    B, T = params.bandwidth, params.duration

    def tgt(k, l, g):
        return PolPath(k / B, l / T, np.array(g, dtype=complex))

    return SceneSpec((
        tgt(1, -2, [[0.7, 0], [0, 0]]),
        tgt(5, 2, [[0.7, 0], [0, 0]]),
        tgt(3, 0, [[0, 0.3], [0.3, 0]]),
        tgt(6, -2, [[0, 0.95], [0.95, 0]]),
    ))


@dataclass(frozen=True)
class PeakTally:
    true: int
    false: int
    missed: int
    peaks: tuple[tuple[int, int], ...]
    matched: tuple[int, ...] = ()  # indices into scene.paths
    spurious: tuple[tuple[int, int], ...] = ()


def tally_peaks(est: PolChannelEstimate, scene: SceneSpec, cfg: RunConfig) -> dict:
    """Above-threshold local maxima per surface, matched to targets within one bin."""
    p = cfg.params
    roi = roi_box(p)
    out = {}
    idx = {"H": 0, "V": 1}
    for pair, surf in est.surfaces.items():
        peaks = find_peaks(surf, roi, cfg.guards, cfg.pfa)
        unmatched = {
            n: p.to_bins(t.delay, t.doppler)
            for n, t in enumerate(scene.paths)
            if t.gain[idx[pair[0]], idx[pair[1]]] != 0
        }
        matched, spurious = [], []
        for k, l in peaks:
            hit = next((n for n, t in unmatched.items() if abs(t[0] - k) <= 1 and abs(t[1] - l) <= 1), None)
            if hit is None:
                spurious.append((k, l))
            else:
                del unmatched[hit]
                matched.append(hit)
        out[pair] = PeakTally(
            len(matched), len(spurious), len(unmatched), tuple(peaks), tuple(sorted(matched)), tuple(spurious)
        )
    return out


def scene_totals(tallies: dict, scene: SceneSpec) -> tuple[int, int, int]:
    """(targets found in some surface, distinct spurious positions, targets never found)."""
    found = set().union(*(t.matched for t in tallies.values()))
    ghosts = set().union(*(t.spurious for t in tallies.values()))
    return len(found), len(ghosts), len(scene.paths) - len(found)


def heatmap_scenario(
    cfg: RunConfig,
    scene: SceneSpec | None = None,
    systems: Sequence[str] = SYSTEMS,
    out: str | os.PathLike | None = None,
    snr_db: float = 20.0,
) -> dict[str, tuple[PolChannelEstimate, dict]]:
    """One noisy dual-polarized observation per system at ``snr_db``.

    Writes ``<system>_<rx><tx>.csv`` energy matrices when ``out`` is given.
    Returns, per system, the estimate and the peak tally.
    """
    p = cfg.params
    scene = four_target_scene(p) if scene is None else scene
    scene.check(p)
    results = {}
    for si, name in enumerate(systems):
        sys_cfg = replace(cfg, system=name, polarization="dual")
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 7919, si]))
        est = System(sys_cfg).observe(scene, snr_db, rng)
        results[name] = (est, tally_peaks(est, scene, sys_cfg))
        if out is not None:
            d = Path(out)
            d.mkdir(parents=True, exist_ok=True)
            for (j, i), surf in est.surfaces.items():
                (d / f"{name}_{j}{i}.csv".lower()).write_text(matrix_csv(surf.energy), encoding="utf-8")
    return results


# ---------------------------------------------------------------------------
# oracle self-test
# ---------------------------------------------------------------------------

def selftest(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Exact-math checks on small grids: closed forms against brute force.

    Returns ``(name, passed, detail)`` per check.
    """
    from . import ambiguity
    from .channel import on_grid_spreading
    from .core import SupportBox
    from .waveform import gdaft_direct

    rng = np.random.default_rng(seed)
    small = ZakParams(3, 5, 1.0, 1.0)
    g = GdaftParams.for_grid(small)
    out = []

    err = max(
        float(np.max(np.abs(spread_carrier(small, g, k, l).samples - gdaft_direct(small, g, pulsone(small, k, l)).samples)))
        for k in range(small.M)
        for l in range(small.N)
    )
    out.append(("spread carrier closed form", err < 1e-9, f"max error {err:.2e}"))

    L = small.MN
    pc, sc = pulsone(small).samples, spread_carrier(small, g).samples
    dev = float(np.max(np.abs(np.abs(ambiguity.cross_ambiguity_fast(sc, pc)) * math.sqrt(L) - 1)))
    out.append(("mutual unbiasedness", dev < 1e-9, f"max deviation {dev:.2e}"))

    worst = 0.0
    for _ in range(5):
        y, x = rng.standard_normal((2, 41)) + 1j * rng.standard_normal((2, 41))
        k = np.arange(41)
        worst = max(worst, float(np.max(np.abs(
            ambiguity.cross_ambiguity_fast(y, x) - ambiguity.cross_ambiguity_direct(y, x, k, k)))))
    out.append(("fast vs direct ambiguity", worst < 1e-9, f"max difference {worst:.2e}"))

    lattice = {(a * small.M % L, b * small.N % L) for a in range(small.N) for b in range(small.M)}
    got = set(ambiguity.self_ambiguity_support(pc, tol=1e-9))
    out.append(("pulsone ambiguity lattice", got == lattice, f"{len(got)} points, expected {len(lattice)}"))

    ok_small, _ = ambiguity.crystallization_check(got, SupportBox(0, 1, -1, 1), L)
    ok_long, _ = ambiguity.crystallization_check(got, SupportBox(0, small.M, 0, 0), L)
    out.append(("crystallization", ok_small and not ok_long, f"narrow box {ok_small}, long box {ok_long}"))

    paths = []
    for _ in range(3):
        k, l = int(rng.integers(0, small.M)), int(rng.integers(-2, 3))
        gain = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        paths.append(PolPath(k / small.bandwidth, l / small.duration, gain))
    scene = SceneSpec(paths)
    xs = {"H": pulsone(small), "V": spread_carrier(small, g)}
    yV, yH = apply_pol_channel(xs["V"], xs["H"], scene)
    est = estimate_pol_channels_zak(yV, yH, xs["V"], xs["H"], small)
    ys = {"H": yH, "V": yV}
    worst = 0.0
    rows, cols = small.delay_bins % L, small.doppler_bins % L
    for j, i in POL_PAIRS:
        full = sum(
            ambiguity.twisted_convolve(
                on_grid_spreading(scene, small, (j, ip)),
                ambiguity.cross_ambiguity_fast(xs[ip], xs[i]),
            )
            for ip in ("H", "V")
        )
        direct = ambiguity.cross_ambiguity_fast(ys[j], xs[i])
        worst = max(worst, float(np.max(np.abs(full - direct))),
                    float(np.max(np.abs(full[np.ix_(rows, cols)] - est[(j, i)].values))))
    out.append(("twisted-convolution decomposition", worst < 1e-6, f"max difference {worst:.2e}"))
    return out
