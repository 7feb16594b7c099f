"""Cross-ambiguity, discrete twisted convolution and crystallization checks.

Convention (all routines): for frames of length L,

    A[k, l] = sum_n y[n] conj(x[(n - k) mod L]) exp(-2j*pi*l*(n - k)/L)

with k and l taken modulo L.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import ComplexFrame, ParameterError, SupportBox, support_set


def _arrays(y, x) -> tuple[np.ndarray, np.ndarray]:
    ya = y.samples if isinstance(y, ComplexFrame) else np.asarray(y, dtype=complex)
    xa = x.samples if isinstance(x, ComplexFrame) else np.asarray(x, dtype=complex)
    if ya.shape != xa.shape or ya.ndim != 1:
        raise ParameterError(f"frame lengths differ: {ya.shape} vs {xa.shape}")
    return ya, xa


@lru_cache(maxsize=16)
def _tables(L: int, delays: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    # lag index table and exp(2j*pi*k*l/L) twist for every Doppler bin; reused across calls
    k = np.asarray(delays, dtype=np.int64)
    idx = (np.arange(L)[None, :] - k[:, None]) % L
    l = np.arange(L, dtype=np.int64)
    twist = np.exp(2j * np.pi * (np.outer(k, l) % L) / L)
    idx.setflags(write=False)
    twist.setflags(write=False)
    return idx, twist


def _lagged_products(y: np.ndarray, x: np.ndarray, delays: np.ndarray) -> np.ndarray:
    idx, _ = _tables(y.size, tuple(int(d) for d in delays))
    return y[None, :] * np.conj(x[idx])


def cross_ambiguity_direct(y, x, delays: Sequence[int], dopplers: Sequence[int]) -> np.ndarray:
    """Evaluate the cross-ambiguity at every (delay, Doppler) pair of the two index lists.

    Plain summation, O(L) per output point, no transforms. Returns an array of
    shape ``(len(delays), len(dopplers))``.
    """
    y, x = _arrays(y, x)
    L = y.size
    k = np.asarray(delays, dtype=np.int64)
    l = np.asarray(dopplers, dtype=np.int64)
    prod = _lagged_products(y, x, k)  # [k, n]
    kernel, twist = _direct_tables(L, tuple(int(v) for v in k), tuple(int(v) for v in l))
    return (prod @ kernel) * twist


@lru_cache(maxsize=16)
def _direct_tables(L: int, delays: tuple[int, ...], dopplers: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    # exp(-2j*pi*l*(n-k)/L) = exp(-2j*pi*l*n/L) * exp(+2j*pi*l*k/L)
    k = np.asarray(delays, dtype=np.int64)
    l = np.asarray(dopplers, dtype=np.int64)
    n = np.arange(L, dtype=np.int64)
    kernel = np.exp(-2j * np.pi * (np.outer(n, l) % L) / L)  # [n, l]
    twist = np.exp(2j * np.pi * (np.outer(k, l) % L) / L)
    kernel.setflags(write=False)
    twist.setflags(write=False)
    return kernel, twist


def cross_ambiguity_fast(y, x, delays: Sequence[int] | None = None) -> np.ndarray:
    """All L Doppler bins for each requested delay, one length-L FFT per delay.

    Returns shape ``(len(delays), L)``; column ``l`` is Doppler bin ``l`` mod L.
    Rows are independent, so callers may split ``delays`` across workers.
    """
    y, x = _arrays(y, x)
    L = y.size
    k = np.arange(L) if delays is None else np.asarray(delays, dtype=np.int64) % L
    spec = np.fft.fft(_lagged_products(y, x, k), axis=1)
    return spec * _tables(L, tuple(int(d) for d in k))[1]


def twisted_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Discrete twisted convolution on Z_L x Z_L.

    out[k, l] = sum_{k', l'} a[k', l'] b[k - k', l - l'] exp(2j*pi*l'*(k - k')/L)

    Composition of delay-Doppler shift operators: shifting by (k1, l1) after
    (k2, l2) equals exp(2j*pi*l1*k2/L) times the shift by (k1 + k2, l1 + l2).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"twisted convolution needs equal square arrays, got {a.shape}, {b.shape}")
    L = a.shape[0]
    k = np.arange(L)
    out = np.zeros_like(b)
    for kp, lp in zip(*np.nonzero(a)):
        shifted = np.roll(b, (kp, lp), axis=(0, 1))  # b[k - kp, l - lp]
        phase = np.exp(2j * np.pi * (lp * (k - kp) % L) / L)
        out += a[kp, lp] * phase[:, None] * shifted
    return out


def self_ambiguity_support(x, tol: float = 1e-6) -> frozenset[tuple[int, int]]:
    """Delay-Doppler points where the self-ambiguity of unit-norm ``x`` is unimodular."""
    xa = x.samples if isinstance(x, ComplexFrame) else np.asarray(x, dtype=complex)
    A = cross_ambiguity_fast(xa, xa)
    ks, ls = np.nonzero(np.abs(np.abs(A) - 1.0) <= tol)
    return support_set(zip(ks, ls), xa.size)


def crystallization_check(
    S: Iterable[tuple[int, int]], C: SupportBox, L: int
) -> tuple[bool, tuple[tuple[int, int], tuple[int, int]] | None]:
    """Whether translates of box ``C`` by distinct points of ``S`` are pairwise disjoint mod L.

    Returns ``(ok, pair)`` where ``pair`` is the first overlapping (s, s') found
    or None. Two translates meet iff s - s' lies in C - C (mod L).
    """
    pts = sorted(support_set(S, L))
    if len(pts) < 2:
        return True, None
    wk, wl = min(C.k_max - C.k_min, L), min(C.l_max - C.l_min, L)
    members = set(pts)
    diffs = [(dk, dl) for dk in range(-wk, wk + 1) for dl in range(-wl, wl + 1) if (dk, dl) != (0, 0)]
    for s in pts:
        for dk, dl in diffs:
            t = ((s[0] + dk) % L, (s[1] + dl) % L)
            if t != s and t in members:
                return False, (s, t)
    return True, None
