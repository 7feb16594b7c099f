"""Polarimetric channel estimation, detection statistics, thresholding and fusion.

Three receivers produce a ``PolChannelEstimate`` on the M x N fundamental
delay-Doppler domain:

* Zak-OTFS: pulsone on H, spread carrier on V, one frame, FFT ambiguity.
* phase-coded: two Zadoff-Chu codes on rectangular chips, direct correlation.
* FMCW: one polarization per frame, up/down chirp halves intersected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import ndimage

from . import ambiguity
from .core import POL_PAIRS, ComplexFrame, DDSurface, ParameterError, SupportBox, ZakParams
from .waveform import fmcw_frame, fmcw_half_length

Pair = tuple[str, str]


@dataclass(frozen=True)
class PolChannelEstimate:
    """Estimated effective channels keyed by (receive, transmit) polarization."""

    surfaces: Mapping[Pair, DDSurface]
    system: str
    frames: int = 1

    def __post_init__(self):
        shapes = {s.values.shape for s in self.surfaces.values()}
        if len(shapes) > 1:
            raise ParameterError(f"surfaces disagree in shape: {shapes}")

    @property
    def params(self) -> ZakParams:
        return next(iter(self.surfaces.values())).params

    def __getitem__(self, pair: Pair) -> DDSurface:
        return self.surfaces[pair]

    def __add__(self, other: "PolChannelEstimate") -> "PolChannelEstimate":
        return PolChannelEstimate(
            {p: self.surfaces[p] + other.surfaces[p] for p in self.surfaces}, self.system, self.frames
        )


@dataclass(frozen=True)
class DetectionOutcome:
    statistic_present: float
    statistic_floor: float
    per_surface: Mapping[Pair, tuple[float, float]] = field(default_factory=dict)


@dataclass(frozen=True)
class ParamEstimate:
    delay: float | None
    doppler: float | None
    raw_peaks: Mapping[Pair, tuple[int, int] | None]
    weights: Mapping[Pair, float]
    detected: bool


def _fundamental(params: ZakParams, rows: np.ndarray) -> DDSurface:
    return DDSurface(rows, params)


def _lags(params: ZakParams, oversample: int, L: int) -> np.ndarray:
    return (params.delay_bins * oversample) % L


# ---------------------------------------------------------------------------
# receivers
# ---------------------------------------------------------------------------

def estimate_pol_channels_zak(
    yV: ComplexFrame | None,
    yH: ComplexFrame | None,
    xV: ComplexFrame | None,
    xH: ComplexFrame | None,
    params: ZakParams,
) -> PolChannelEstimate:
    """Cross-ambiguity of each received polarization against each transmitted one.

    Only the M delay rows of the fundamental domain are transformed, each with
    one length-MN FFT, and the N centered Doppler columns are kept. ``None``
    frames are skipped (a uni-polarized run passes only ``yH``/``xH``).
    """
    rx = {"H": yH, "V": yV}
    tx = {"H": xH, "V": xV}
    L = params.MN
    for f in (*rx.values(), *tx.values()):
        if f is not None and len(f) != L:
            raise ParameterError(f"Zak-OTFS frames must be critically sampled (length {L}), got {len(f)}")
    delays = _lags(params, 1, L)
    cols = params.doppler_bins % L
    out = {}
    for j, i in POL_PAIRS:
        if rx[j] is None or tx[i] is None:
            continue
        A = ambiguity.cross_ambiguity_fast(rx[j], tx[i], delays)
        out[(j, i)] = _fundamental(params, A[:, cols])
    return PolChannelEstimate(out, "zak", 1)


def estimate_pol_channels_phase_coded(
    yV: ComplexFrame | None,
    yH: ComplexFrame | None,
    codes: tuple[ComplexFrame | None, ComplexFrame | None],
    params: ZakParams,
    oversample: int = 2,
) -> PolChannelEstimate:
    """Direct delay-Doppler correlation of oversampled phase-coded frames.

    ``codes`` is ``(xH, xV)``: the chip-shaped transmit frames. Delay bin k
    maps to lag ``oversample * k`` samples; with L = oversample * MN samples the
    Doppler bin spacing is already 1/T.
    """
    rx = {"H": yH, "V": yV}
    tx = {"H": codes[0], "V": codes[1]}
    L = oversample * params.MN
    for f in (*rx.values(), *tx.values()):
        if f is not None and len(f) != L:
            raise ParameterError(f"phase-coded frames must have {L} samples, got {len(f)}")
    delays = _lags(params, oversample, L)
    dopplers = params.doppler_bins % L
    out = {}
    for j, i in POL_PAIRS:
        if rx[j] is None or tx[i] is None:
            continue
        out[(j, i)] = _fundamental(params, ambiguity.cross_ambiguity_direct(rx[j], tx[i], delays, dopplers))
    return PolChannelEstimate(out, "phase_coded", 1)


def _native_to_bins(native: np.ndarray, m0: int, params: ZakParams) -> np.ndarray:
    """Map a surface on the 2/T Doppler grid onto 1/T bins.

    Even bins take the native value directly; odd bins sit on a native cell
    boundary and take the mean of the two neighbours.
    """
    out = np.empty((params.M, params.N), dtype=native.dtype)
    for c, l in enumerate(params.doppler_bins):
        if l % 2 == 0:
            out[:, c] = native[:, l // 2 + m0]
        else:
            out[:, c] = 0.5 * (native[:, (l - 1) // 2 + m0] + native[:, (l + 1) // 2 + m0])
    return out


def fmcw_half_surfaces(
    y: ComplexFrame, ref: ComplexFrame, params: ZakParams, oversample: int
) -> tuple[np.ndarray, int]:
    """Correlation of one chirp half on its native grid (delay 1/B, Doppler 2/T).

    Returns the complex array [delay row, native Doppler] and the column index
    of native bin 0.
    """
    L = fmcw_half_length(params, oversample)
    m_half = params.N // 4 + 1
    native = np.arange(-m_half, m_half + 1)
    A = ambiguity.cross_ambiguity_direct(y, ref, _lags(params, oversample, L), native % L)
    return A, m_half


def estimate_pol_channels_fmcw(
    frames: Sequence[tuple[tuple[ComplexFrame | None, ComplexFrame | None], tuple[ComplexFrame | None, ComplexFrame | None]]],
    params: ZakParams,
    oversample: int = 2,
) -> PolChannelEstimate:
    """Sequential FMCW polarimetry.

    ``frames[0]`` was transmitted on H and ``frames[1]`` (if present) on V;
    each entry is ``((yV_up, yH_up), (yV_down, yH_down))``. Each half is
    correlated against its own chirp on the native 2/T Doppler grid, and the
    up and down ridges are intersected by the geometric mean of magnitudes.
    Where two targets share a surface, cross pairings of ridges appear as
    ghost peaks; nothing prunes them.
    """
    if not 1 <= len(frames) <= 2:
        raise ParameterError("FMCW takes one (uni) or two (dual) sequential frames")
    up_ref, down_ref = fmcw_frame(params, oversample)
    out = {}
    for tx, frame in zip(("H", "V"), frames):
        (up_V, up_H), (down_V, down_H) = frame
        for rx, y_up, y_down in (("H", up_H, down_H), ("V", up_V, down_V)):
            if y_up is None or y_down is None:
                continue
            U, m0 = fmcw_half_surfaces(y_up, up_ref, params, oversample)
            D, _ = fmcw_half_surfaces(y_down, down_ref, params, oversample)
            native = np.sqrt(np.abs(U) * np.abs(D))
            out[(rx, tx)] = _fundamental(params, _native_to_bins(native, m0, params))
    return PolChannelEstimate(out, "fmcw", len(frames))


# ---------------------------------------------------------------------------
# detection and estimation
# ---------------------------------------------------------------------------

def _surfaces_for(est: PolChannelEstimate, mode: str) -> list[Pair]:
    if mode == "uni":
        return [("H", "H")]
    if mode == "dual":
        return [p for p in POL_PAIRS if p in est.surfaces]
    raise ParameterError(f"mode must be 'uni' or 'dual', got {mode!r}")


def detection_statistic(est: PolChannelEstimate, true_bin: tuple[int, int], mode: str = "dual") -> DetectionOutcome:
    """|h| at the target bin versus the RMS of every other bin.

    Dual mode takes the largest target-bin magnitude over the four surfaces and
    pools all non-target bins of all four surfaces for the RMS.
    """
    params = est.params
    row, col = true_bin[0] % params.M, params.doppler_column(true_bin[1])
    mask = np.ones((params.M, params.N), dtype=bool)
    mask[row, col] = False
    present, energy, count, per = 0.0, 0.0, 0, {}
    for pair in _surfaces_for(est, mode):
        v = est[pair].values
        at = float(abs(v[row, col]))
        e = np.abs(v[mask]) ** 2
        per[pair] = (at, float(math.sqrt(e.mean())))
        present = max(present, at)
        energy += float(e.sum())
        count += e.size
    return DetectionOutcome(present, math.sqrt(energy / count), per)


def threshold_scale(pfa: float) -> float:
    """alpha with P(E > alpha * mean) = pfa for exponentially distributed energy."""
    if not 0 < pfa < 1:
        raise ParameterError(f"pfa must lie in (0, 1), got {pfa}")
    return math.log(1.0 / pfa)


@dataclass(frozen=True)
class SurfaceThreshold:
    noise_mean: float
    threshold: float
    peak: tuple[int, int] | None  # (signed delay bin, Doppler bin)


def _signed_delay(params: ZakParams, row: int) -> int:
    return int(params.delay_bins[row])


def threshold_surface(
    surface: DDSurface, roi: SupportBox, guards: tuple[int, int] = (2, 2), pfa: float = 1e-6
) -> tuple[SurfaceThreshold, np.ndarray]:
    """Threshold one surface; also returns the boolean search-region mask."""
    params = surface.params
    region = roi.widened(*guards).mask(params)
    noise = ~region
    if not noise.any():
        raise ParameterError("region of interest plus guards covers the whole domain; no noise cells")
    E = surface.energy
    mu = float(E[noise].mean())
    thr = threshold_scale(pfa) * mu
    cand = np.where(region & (E > thr), E, -np.inf)
    peak = None
    if np.isfinite(cand.max()):
        r, c = np.unravel_index(int(np.argmax(cand)), cand.shape)
        peak = (_signed_delay(params, r), int(params.doppler_bins[c]))
    return SurfaceThreshold(mu, thr, peak), region


def threshold_and_peak(
    est: PolChannelEstimate,
    roi: SupportBox,
    guards: tuple[int, int] = (2, 2),
    pfa: float = 1e-6,
    mode: str = "dual",
) -> dict[Pair, SurfaceThreshold]:
    """CFAR-style threshold and strongest above-threshold bin for each surface.

    Noise energy is averaged outside the ROI widened by ``guards``; the peak
    search covers that widened ROI.
    """
    return {p: threshold_surface(est[p], roi, guards, pfa)[0] for p in _surfaces_for(est, mode)}


def find_peaks(
    surface: DDSurface, roi: SupportBox, guards: tuple[int, int] = (2, 2), pfa: float = 1e-6
) -> list[tuple[int, int]]:
    """All above-threshold local maxima (3x3, delay axis circular) in the search region."""
    th, region = threshold_surface(surface, roi, guards, pfa)
    E = surface.energy
    local = E >= ndimage.maximum_filter(E, size=3, mode=("wrap", "nearest"))
    rows, cols = np.nonzero(local & region & (E > th.threshold))
    params = surface.params
    return sorted((_signed_delay(params, r), int(params.doppler_bins[c])) for r, c in zip(rows, cols))


def entropy_weight(surface: DDSurface | np.ndarray) -> float:
    """1 - H(p)/log2(cells) for the normalized energy distribution p; 0 for an all-zero surface."""
    v = surface.values if isinstance(surface, DDSurface) else np.asarray(surface)
    E = np.abs(v).ravel() ** 2
    total = E.sum()
    if total <= 0:
        return 0.0
    p = E[E > 0] / total
    H = float(-(p * np.log2(p)).sum())
    return float(min(1.0, max(0.0, 1.0 - H / math.log2(E.size))))


def fuse_estimates(
    raw_peaks: Mapping[Pair, tuple[float, float] | None], weights: Mapping[Pair, float]
) -> ParamEstimate:
    """Entropy-weighted average of per-surface peaks; surfaces without a peak get no say."""
    num_k = num_l = total = 0.0
    for pair, peak in raw_peaks.items():
        if peak is None:
            continue
        w = weights.get(pair, 0.0)
        num_k += w * peak[0]
        num_l += w * peak[1]
        total += w
    if total <= 0:
        return ParamEstimate(None, None, dict(raw_peaks), dict(weights), False)
    return ParamEstimate(num_k / total, num_l / total, dict(raw_peaks), dict(weights), True)


def estimate_parameters(
    est: PolChannelEstimate,
    roi: SupportBox,
    guards: tuple[int, int] = (2, 2),
    pfa: float = 1e-6,
    mode: str = "dual",
) -> ParamEstimate:
    """Threshold, pick peaks and fuse across the surfaces used by ``mode``."""
    th = threshold_and_peak(est, roi, guards, pfa, mode)
    weights = {p: entropy_weight(est[p]) for p in th}
    return fuse_estimates({p: t.peak for p, t in th.items()}, weights)
