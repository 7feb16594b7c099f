"""Transmit waveform synthesis.

Zak-OTFS frames are critically sampled (MN samples at rate B). The two
baselines run at ``oversample * B``.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    ComplexFrame,
    GdaftParams,
    ParameterError,
    ZakParams,
    epsilon_N,
    jacobi_symbol,
    mod_inverse,
)


def _check_index(params: ZakParams, k0: int, l0: int) -> None:
    if not (0 <= k0 < params.M and 0 <= l0 < params.N):
        raise ParameterError(
            f"pulsone index ({k0}, {l0}) outside [0, {params.M}) x [0, {params.N})"
        )


def pulsone(params: ZakParams, k0: int = 0, l0: int = 0) -> ComplexFrame:
    """Discrete-time pulsone at delay bin ``k0`` and Doppler bin ``l0``.

    An impulse train with period M starting at ``k0``; tooth ``d`` carries
    the phase ``exp(2j*pi*d*l0/N) / sqrt(N)``.
    """
    _check_index(params, k0, l0)
    x = np.zeros(params.MN, dtype=complex)
    d = np.arange(params.N)
    x[k0 + d * params.M] = np.exp(2j * np.pi * ((d * l0) % params.N) / params.N) / math.sqrt(params.N)
    return ComplexFrame(x, params.bandwidth)


def mount_symbols(params: ZakParams, X: np.ndarray) -> ComplexFrame:
    """Superpose pulsones weighted by the M x N symbol array ``X``.

    Tooth d of delay row k is ``sum_l X[k, l] exp(2j*pi*d*l/N) / sqrt(N)``,
    which is a scaled inverse DFT along the Doppler axis.
    """
    X = np.asarray(X, dtype=complex)
    if X.shape != (params.M, params.N):
        raise ParameterError(f"symbol array shape {X.shape} != {(params.M, params.N)}")
    teeth = np.fft.ifft(X, axis=1) * math.sqrt(params.N)  # [k, d]
    return ComplexFrame(teeth.T.reshape(-1), params.bandwidth)


def _phase(num: np.ndarray, den: int) -> np.ndarray:
    # exact integer reduction before the float multiply keeps phases accurate for large n
    return np.exp(2j * np.pi * (np.asarray(num) % den) / den)


def gdaft_matrix(mn: int, g: GdaftParams) -> np.ndarray:
    """Dense MN x MN kernel of the affine Fourier transform."""
    if g.mn != mn:
        raise ParameterError(f"GDAFT coefficients were checked for MN={g.mn}, not {mn}")
    n = np.arange(mn, dtype=np.int64)
    q = g.A * n[:, None] ** 2 + g.B * np.outer(n, n) + g.C * n[None, :] ** 2
    return _phase(q, mn) / math.sqrt(mn)


def gdaft_direct(params: ZakParams, g: GdaftParams, x: ComplexFrame) -> ComplexFrame:
    """Reference O((MN)^2) evaluation of the generalized affine Fourier transform."""
    if len(x) != params.MN:
        raise ParameterError(f"frame length {len(x)} != MN = {params.MN}")
    return ComplexFrame(gdaft_matrix(params.MN, g) @ x.samples, x.sample_rate)


def spread_carrier(params: ZakParams, g: GdaftParams, k0: int = 0, l0: int = 0) -> ComplexFrame:
    """Closed-form image of pulsone (k0, l0) under the affine Fourier transform.

    The pulsone's teeth collapse a quadratic Gauss sum modulo N, so the
    output is a unimodular chirp of magnitude 1/sqrt(MN). Requires
    gcd(4CM, N) = 1.
    """
    _check_index(params, k0, l0)
    if g.mn != params.MN:
        raise ParameterError(f"GDAFT coefficients were checked for MN={g.mn}, not {params.MN}")
    M, N, MN = params.M, params.N, params.MN
    inv = mod_inverse(4 * g.C * M, N)
    n = np.arange(MN, dtype=np.int64)
    outer = _phase(g.A * n**2 + g.B * n * k0 + g.C * k0**2, MN)
    b = (g.B * n + l0 + 2 * g.C * k0) % N
    inner = _phase(-inv * b**2, N)
    gauss = epsilon_N(N) * jacobi_symbol(g.C * M, N)
    return ComplexFrame(outer * inner * gauss / math.sqrt(MN), params.bandwidth)


def zadoff_chu(L: int, u: int, sample_rate: float = 1.0) -> ComplexFrame:
    """Unit-energy odd-length Zadoff-Chu sequence exp(-j*pi*u*n*(n+1)/L)/sqrt(L)."""
    if L < 1 or L % 2 == 0:
        raise ParameterError(f"Zadoff-Chu length must be odd, got {L}")
    if math.gcd(u, L) != 1:
        raise ParameterError(f"root {u} is not coprime to length {L} (gcd {math.gcd(u, L)})")
    n = np.arange(L, dtype=np.int64)
    # n(n+1) is even, so the phase is -2*pi*u*(n(n+1)/2)/L
    z = _phase(-u * (n * (n + 1) // 2), L) / math.sqrt(L)
    return ComplexFrame(z, sample_rate)


def phase_coded_frame(params: ZakParams, code: ComplexFrame, oversample: int = 2) -> ComplexFrame:
    """Rectangular-chip carrier: each chip held for ``oversample`` samples, energy kept."""
    if len(code) != params.MN:
        raise ParameterError(f"code length {len(code)} != MN = {params.MN} chips")
    if oversample < 1:
        raise ParameterError(f"oversample must be >= 1, got {oversample}")
    x = np.repeat(code.samples, oversample) / math.sqrt(oversample)
    return ComplexFrame(x, oversample * params.bandwidth)


def fmcw_half_length(params: ZakParams, oversample: int) -> int:
    if oversample < 2:
        raise ParameterError(f"FMCW needs oversample >= 2, got {oversample}")
    if (oversample * params.MN) % 2:
        raise ParameterError("oversample * MN must be even so each chirp half has whole samples")
    return oversample * params.MN // 2


def fmcw_frame(params: ZakParams, oversample: int = 2) -> tuple[ComplexFrame, ComplexFrame]:
    """Baseband up-chirp and down-chirp halves, each T/2 long and unit energy.

    The up-chirp sweeps 0 -> B over T/2 (slope 2B/T); the down-chirp is its
    conjugate and sweeps 0 -> -B.
    """
    L = fmcw_half_length(params, oversample)
    fs = oversample * params.bandwidth
    slope = 2 * params.bandwidth / params.duration
    t = np.arange(L) / fs
    up = np.exp(1j * np.pi * slope * t**2) / math.sqrt(L)
    return ComplexFrame(up, fs), ComplexFrame(up.conj(), fs)
