"""Shared domain types and number-theoretic helpers.

Everything here is immutable and pure. The Zak-OTFS grid (``ZakParams``) is
the single source of truth for bandwidth, frame length and bin units; nothing
downstream stores B or T independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

#: receive/transmit polarization labels, in matrix index order
POLS = ("H", "V")
#: the four (receive, transmit) channel components, row-major over ``POLS``
POL_PAIRS = (("H", "H"), ("H", "V"), ("V", "H"), ("V", "V"))


class ParameterError(ValueError):
    """Raised for grid or transform parameters that violate a structural rule."""


# ---------------------------------------------------------------------------
# number theory
# ---------------------------------------------------------------------------

def mod_inverse(a: int, n: int) -> int:
    """Return x in [1, n) with a*x = 1 (mod n), via the extended Euclid algorithm."""
    if n < 2:
        raise ParameterError(f"modulus must be >= 2, got {n}")
    r0, r1 = a % n, n
    s0, s1 = 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ParameterError(f"{a} has no inverse modulo {n}: gcd({a}, {n}) = {r0}")
    return s0 % n


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, by quadratic reciprocity."""
    if n < 1 or n % 2 == 0:
        raise ParameterError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def epsilon_N(N: int) -> complex:
    """Gauss-sum unit: 1 if N = 1 (mod 4), 1j if N = 3 (mod 4)."""
    if N % 2 == 0:
        raise ParameterError(f"epsilon_N is only defined for odd N, got {N}")
    return 1.0 + 0j if N % 4 == 1 else 1j


# ---------------------------------------------------------------------------
# grid and transform parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZakParams:
    """Delay-Doppler grid geometry.

    Parameters
    ----------
    M, N : int
        Delay and Doppler bins per period. ``N`` must be odd.
    delay_period : float
        Delay period in seconds.
    doppler_period : float
        Doppler period in Hz; ``delay_period * doppler_period`` must equal 1.
    """

    M: int
    N: int
    delay_period: float
    doppler_period: float

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ParameterError(f"M and N must be positive, got M={self.M}, N={self.N}")
        if self.delay_period <= 0 or self.doppler_period <= 0:
            raise ParameterError("delay and Doppler periods must be positive")
        if not math.isclose(self.delay_period * self.doppler_period, 1.0, rel_tol=1e-12):
            raise ParameterError(
                "delay_period * doppler_period must equal 1, got "
                f"{self.delay_period * self.doppler_period!r}"
            )
        if self.N % 2 == 0:
            raise ParameterError(
                f"N must be odd (got {self.N}): the spread-carrier closed form needs the "
                "Gauss-sum unit epsilon_N and the Jacobi symbol modulo N"
            )

    @property
    def MN(self) -> int:
        return self.M * self.N

    @property
    def bandwidth(self) -> float:
        """B = M / delay_period, in Hz."""
        return self.M / self.delay_period

    @property
    def duration(self) -> float:
        """T = N / doppler_period, in seconds."""
        return self.N / self.doppler_period

    @property
    def doppler_bins(self) -> np.ndarray:
        """Centered Doppler bin labels, -N//2 .. N//2."""
        h = self.N // 2
        return np.arange(-h, h + 1)

    @property
    def delay_bins(self) -> np.ndarray:
        """Signed delay lag of each delay row 0..M-1 (rows past M//2 are negative lags)."""
        i = np.arange(self.M)
        return np.where(i <= self.M // 2, i, i - self.M)

    def doppler_column(self, l: int) -> int:
        """Array column that holds Doppler bin ``l``."""
        h = self.N // 2
        if not -h <= l <= h:
            raise ParameterError(f"Doppler bin {l} outside [-{h}, {h}]")
        return l + h

    def to_bins(self, delay_s: float, doppler_hz: float) -> tuple[float, float]:
        """Convert seconds / Hz to (delay, Doppler) in units of 1/B and 1/T."""
        return delay_s * self.bandwidth, doppler_hz * self.duration


def validate_params(M: int, N: int, delay_period: float, doppler_period: float) -> ZakParams:
    return ZakParams(int(M), int(N), float(delay_period), float(doppler_period))


def reference_grid() -> ZakParams:
    """The 31 x 37 grid with a 30 kHz Doppler period used in the reference experiments."""
    return ZakParams(31, 37, 1.0 / 30e3, 30e3)


@dataclass(frozen=True)
class GdaftParams:
    """Chirp coefficients (A, B, C) of the generalized affine Fourier transform.

    ``mn`` is the sequence length the coefficients are checked against; each
    coefficient must lie in [1, mn) and be coprime to it.
    """

    A: int
    B: int
    C: int
    mn: int

    def __post_init__(self):
        for name in ("A", "B", "C"):
            v = getattr(self, name)
            if not 1 <= v < self.mn:
                raise ParameterError(f"{name}={v} outside [1, {self.mn})")
            g = math.gcd(v, self.mn)
            if g != 1:
                raise ParameterError(f"{name}={v} is not coprime to MN={self.mn} (gcd {g})")

    @classmethod
    def for_grid(cls, params: ZakParams, A: int = 1, B: int = 1, C: int = 1) -> "GdaftParams":
        return cls(A, B, C, params.MN)


# ---------------------------------------------------------------------------
# scene and signal containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolPath:
    """One point scatterer.

    ``gain`` is 2x2 complex, rows indexed by receive polarization (H, V) and
    columns by transmit polarization (H, V).
    """

    delay: float
    doppler: float
    gain: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = np.asarray(self.gain, dtype=complex)
        if g.shape != (2, 2):
            raise ParameterError(f"gain must be 2x2, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ParameterError("gain entries must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "gain", g)

    def check(self, params: ZakParams) -> None:
        if not 0 <= self.delay < params.delay_period:
            raise ParameterError(
                f"path delay {self.delay!r} s outside [0, {params.delay_period!r})"
            )
        if abs(self.doppler) >= params.doppler_period / 2:
            raise ParameterError(
                f"path Doppler {self.doppler!r} Hz outside +/- {params.doppler_period / 2!r}"
            )


@dataclass(frozen=True)
class ComplexFrame:
    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 1:
            raise ParameterError("a frame needs a non-empty 1-D sample vector")
        object.__setattr__(self, "samples", s)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def energy(self) -> float:
        return float(np.vdot(self.samples, self.samples).real)


@dataclass(frozen=True)
class DDSurface:
    """M x N complex values on the fundamental delay-Doppler domain.

    Row ``i`` is delay lag ``params.delay_bins[i]`` (units of 1/B), column ``c``
    is Doppler bin ``c - N//2`` (units of 1/T).
    """

    values: np.ndarray
    params: ZakParams

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.params.M, self.params.N):
            raise ParameterError(
                f"surface shape {v.shape} does not match grid {(self.params.M, self.params.N)}"
            )
        object.__setattr__(self, "values", v)

    @property
    def energy(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def at(self, k: int, l: int) -> complex:
        return self.values[k % self.params.M, self.params.doppler_column(l)]

    def __add__(self, other: "DDSurface") -> "DDSurface":
        return DDSurface(self.values + other.values, self.params)


@dataclass(frozen=True)
class SupportBox:
    """Inclusive integer box [k_min, k_max] x [l_min, l_max]."""

    k_min: int
    k_max: int
    l_min: int
    l_max: int

    def __post_init__(self):
        if self.k_min > self.k_max or self.l_min > self.l_max:
            raise ParameterError(f"box bounds out of order: {self}")

    def widened(self, dk: int, dl: int) -> "SupportBox":
        return SupportBox(self.k_min - dk, self.k_max + dk, self.l_min - dl, self.l_max + dl)

    def contains(self, k: int, l: int) -> bool:
        return self.k_min <= k <= self.k_max and self.l_min <= l <= self.l_max

    def mask(self, params: ZakParams) -> np.ndarray:
        """Boolean M x N mask of the box on the fundamental domain (delay wraps mod M)."""
        ks = np.arange(self.k_min, self.k_max + 1) % params.M
        ls = params.doppler_bins
        out = np.zeros((params.M, params.N), dtype=bool)
        lsel = (ls >= self.l_min) & (ls <= self.l_max)
        out[np.ix_(np.unique(ks), lsel)] = True
        return out


def support_set(points: Iterable[tuple[int, int]], modulus: int) -> frozenset[tuple[int, int]]:
    """Reduce (k, l) pairs modulo ``modulus`` into a hashable set."""
    return frozenset((int(k) % modulus, int(l) % modulus) for k, l in points)


def roi_box(params: ZakParams) -> SupportBox:
    """Delay-Doppler region of interest in bins: [0, tau_p/4] x [-nu_p/8, nu_p/8], floored."""
    return SupportBox(0, params.M // 4, -(params.N // 8), params.N // 8)
