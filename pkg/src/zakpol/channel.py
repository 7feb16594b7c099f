"""Polarimetric point-scatterer channel: scene draws, application, noise, ground truth."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import POLS, ComplexFrame, DDSurface, ParameterError, PolPath, ZakParams


@dataclass(frozen=True)
class SceneSpec:
    """A list of scatterers; an empty list is the target-absent scene."""

    paths: tuple[PolPath, ...] = ()
    rng_seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))

    def check(self, params: ZakParams) -> None:
        for p in self.paths:
            p.check(params)

    def to_json(self) -> str:
        doc = {
            "paths": [
                {
                    "delay_s": p.delay,
                    "doppler_hz": p.doppler,
                    "H": [[float(g.real), float(g.imag)] for g in p.gain.reshape(-1)],
                }
                for p in self.paths
            ]
        }
        if self.rng_seed is not None:
            doc["rng_seed"] = self.rng_seed
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "SceneSpec":
        doc = json.loads(text)
        paths = []
        for entry in doc.get("paths", []):
            H = entry["H"]
            if len(H) != 4:
                raise ParameterError("scene path 'H' must list 4 [re, im] pairs (HH, HV, VH, VV)")
            g = np.array([complex(re, im) for re, im in H]).reshape(2, 2)
            paths.append(PolPath(float(entry["delay_s"]), float(entry["doppler_hz"]), g))
        return cls(tuple(paths), doc.get("rng_seed"))


@dataclass(frozen=True)
class PulseShape:
    """Delay-Doppler pulse shaping.

    ``kind`` is ``"sinc"`` or ``"rect"`` (rectangular chips; baselines only).
    ``taps`` is the truncated-sinc half-width used for fractional delays; None
    selects exact periodic band-limited interpolation.
    """

    kind: str = "sinc"
    taps: int | None = None

    def __post_init__(self):
        if self.kind not in ("sinc", "rect"):
            raise ParameterError(f"unknown pulse shape {self.kind!r}")
        if self.taps is not None and self.taps < 8:
            raise ParameterError(f"sinc truncation must be >= 8 taps, got {self.taps}")


# ---------------------------------------------------------------------------
# random scene model
# ---------------------------------------------------------------------------

def draw_polar_response(
    rng: np.random.Generator,
    *,
    a: float | None = None,
    b: float | None = None,
    sigma: float | None = None,
    phases: Sequence[float] | None = None,
    bernoulli: str = "symmetric",
) -> np.ndarray:
    """Random reciprocal 2x2 scattering matrix.

    HH = a*s*e^{j phi}, HV = VH = a*sqrt(1-s^2)*e^{j delta}, VV = b*s*e^{j gamma}
    with s ~ U(0, 1) and phases ~ U(0, 2pi). ``a`` and ``b`` are +/-1 with equal
    probability (``bernoulli="symmetric"``) or 0/1 (``"zero_one"``). Any of the
    random quantities may be pinned by keyword.
    """
    if bernoulli == "symmetric":
        levels = (-1.0, 1.0)
    elif bernoulli == "zero_one":
        levels = (0.0, 1.0)
    else:
        raise ParameterError(f"unknown Bernoulli convention {bernoulli!r}")
    draws = rng.integers(0, 2, size=2)
    s = rng.uniform(0.0, 1.0)
    ph = rng.uniform(0.0, 2 * np.pi, size=3)
    a = levels[draws[0]] if a is None else a
    b = levels[draws[1]] if b is None else b
    s = s if sigma is None else sigma
    phi, delta, gamma = ph if phases is None else phases
    cross = a * math.sqrt(max(0.0, 1.0 - s * s)) * np.exp(1j * delta)
    return np.array(
        [[a * s * np.exp(1j * phi), cross], [cross, b * s * np.exp(1j * gamma)]], dtype=complex
    )


def draw_target_geometry(rng: np.random.Generator, params: ZakParams) -> tuple[float, float]:
    """(delay, Doppler) ~ U(0, tau_p/4) x U(-nu_p/8, nu_p/8)."""
    tau = rng.uniform(0.0, params.delay_period / 4)
    nu = rng.uniform(-params.doppler_period / 8, params.doppler_period / 8)
    return float(tau), float(nu)


def draw_scene(rng: np.random.Generator, params: ZakParams, bernoulli: str = "symmetric") -> SceneSpec:
    """Single random target."""
    tau, nu = draw_target_geometry(rng, params)
    return SceneSpec((PolPath(tau, nu, draw_polar_response(rng, bernoulli=bernoulli)),))


# ---------------------------------------------------------------------------
# channel application
# ---------------------------------------------------------------------------

def fractional_delay(x: np.ndarray, shift: float, taps: int | None = None) -> np.ndarray:
    """Circularly delay ``x`` by ``shift`` samples under a band-limited model.

    ``taps=None`` multiplies the DFT by a linear phase (periodic sinc kernel,
    exact and energy preserving). An integer ``taps`` uses a truncated sinc of
    that half-width instead.
    """
    x = np.asarray(x, dtype=complex)
    L = x.size
    if taps is None:
        f = np.fft.fftfreq(L)
        return np.fft.ifft(np.fft.fft(x) * np.exp(-2j * np.pi * f * shift))
    whole = math.floor(shift)
    frac = shift - whole
    if frac == 0.0:
        return np.roll(x, whole)
    t = np.arange(-taps + 1, taps + 1)
    h = np.sinc(t - frac)  # y[n] = sum_t x[n - whole - t] sinc(t - frac)
    y = np.zeros(L, dtype=complex)
    for ti, hi in zip(t, h):
        y += hi * np.roll(x, whole + ti)
    return y


def _path_response(x: ComplexFrame, path: PolPath, taps: int | None) -> np.ndarray:
    fs = x.sample_rate
    n = np.arange(len(x))
    delayed = fractional_delay(x.samples, path.delay * fs, taps)
    return delayed * np.exp(2j * np.pi * path.doppler * (n / fs - path.delay))


def apply_pol_channel(
    xV: ComplexFrame | None,
    xH: ComplexFrame | None,
    scene: SceneSpec,
    shape: PulseShape = PulseShape(),
    *,
    check_params: ZakParams | None = None,
) -> tuple[ComplexFrame, ComplexFrame]:
    """Pass the two transmit frames through every path of ``scene``.

    y_j(t) = sum_p sum_i H_p[j, i] x_i(t - tau_p) exp(j 2 pi nu_p (t - tau_p)),
    delays circular over the frame. A ``None`` transmit frame is silent.
    Returns ``(yV, yH)``.
    """
    frames = {"H": xH, "V": xV}
    ref = xH if xH is not None else xV
    if ref is None:
        raise ParameterError("at least one polarization must transmit")
    for f in frames.values():
        if f is not None and (len(f) != len(ref) or f.sample_rate != ref.sample_rate):
            raise ParameterError("transmit frames must share length and sample rate")
    if check_params is not None:
        scene.check(check_params)
    out = {"H": np.zeros(len(ref), dtype=complex), "V": np.zeros(len(ref), dtype=complex)}
    for path in scene.paths:
        for i, tx in enumerate(POLS):
            x = frames[tx]
            if x is None or not np.any(path.gain[:, i]):
                continue
            r = _path_response(x, path, shape.taps)
            for j, rx in enumerate(POLS):
                if path.gain[j, i] != 0:
                    out[rx] += path.gain[j, i] * r
    return ComplexFrame(out["V"], ref.sample_rate), ComplexFrame(out["H"], ref.sample_rate)


def noise_variance(length: int, snr_db: float, signal_ref_energy: float = 1.0) -> float:
    """Per-sample variance sigma^2 = E_ref / (L * 10^(snr/10))."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return signal_ref_energy / (length * 10 ** (snr_db / 10))


def add_noise(
    y: ComplexFrame, snr_db: float, signal_ref_energy: float, rng: np.random.Generator
) -> ComplexFrame:
    """Add circular complex white Gaussian noise; ``snr_db=inf`` adds nothing."""
    var = noise_variance(len(y), snr_db, signal_ref_energy)
    if var == 0.0:
        return y
    w = rng.standard_normal((2, len(y))) * math.sqrt(var / 2)
    return ComplexFrame(y.samples + w[0] + 1j * w[1], y.sample_rate)


# ---------------------------------------------------------------------------
# ground-truth effective channel
# ---------------------------------------------------------------------------

def sinc_effective_response(
    params: ZakParams, tau: np.ndarray, nu: np.ndarray, path_delay: float, path_doppler: float
) -> np.ndarray:
    """Receive filter (*) point scatterer (*) transmit filter, twisted convolutions, sinc shaping.

    With w_tx = sqrt(BT) sinc(B tau) sinc(T nu) and its matched filter, both
    twisted-convolution integrals separate into 1-D products of sincs that
    integrate in closed form:

        (1 - |nu_t|/B)(1 - |tau|/T) sinc((B - |nu_t|)(tau - tau_t)) sinc((T - |tau|)(nu - nu_t))
        * exp(j pi nu_t (tau - tau_t)) * exp(j pi tau (nu - nu_t))

    valid for |nu_t| < B and |tau| < T (zero beyond).
    """
    B, T = params.bandwidth, params.duration
    tau = np.asarray(tau, dtype=float)
    nu = np.asarray(nu, dtype=float)
    dt = tau - path_delay
    a = max(B - abs(path_doppler), 0.0)
    c = np.clip(T - np.abs(tau), 0.0, None)
    mag = (a / B) * (c / T) * np.sinc(a * dt) * np.sinc(c * (nu - path_doppler))
    return mag * np.exp(1j * np.pi * (path_doppler * dt + tau * (nu - path_doppler)))


def effective_channel_truth(
    scene: SceneSpec, params: ZakParams, shape: PulseShape, pol_pair: tuple[str, str]
) -> DDSurface:
    """Sampled sinc-shaped effective channel for receive/transmit pair ``pol_pair``."""
    if shape.kind != "sinc":
        raise ParameterError("ground-truth effective channel is only defined for sinc shaping")
    j, i = POLS.index(pol_pair[0]), POLS.index(pol_pair[1])
    tau = params.delay_bins[:, None] / params.bandwidth
    nu = params.doppler_bins[None, :] / params.duration
    out = np.zeros((params.M, params.N), dtype=complex)
    for p in scene.paths:
        if p.gain[j, i] != 0:
            out += p.gain[j, i] * sinc_effective_response(params, tau, nu, p.delay, p.doppler)
    return DDSurface(out, params)


def on_grid_spreading(scene: SceneSpec, params: ZakParams, pol_pair: tuple[str, str]) -> np.ndarray:
    """Discrete MN x MN spreading function of an on-grid scene for one polarization pair.

    Entry [k, l] holds the summed gain of paths at delay k/B and Doppler l/T
    (both mod MN). Non-integer bins raise.
    """
    L = params.MN
    j, i = POLS.index(pol_pair[0]), POLS.index(pol_pair[1])
    h = np.zeros((L, L), dtype=complex)
    for p in scene.paths:
        k, l = params.to_bins(p.delay, p.doppler)
        kr, lr = round(k), round(l)
        if abs(k - kr) > 1e-9 or abs(l - lr) > 1e-9:
            raise ParameterError(f"path at ({k!r}, {l!r}) bins is not on the grid")
        h[kr % L, lr % L] += p.gain[j, i]
    return h
