"""
Pulsones and the spread carrier
===============================

A pulsone is an impulse train in time. The spread carrier is its image
under an affine Fourier transform, and it has a closed form.
"""

# %%
import numpy as np

from zakpol import GdaftParams, gdaft_direct, reference_grid, pulsone, spread_carrier

grid = reference_grid()
print(f"M={grid.M}, N={grid.N}, B={grid.bandwidth / 1e3:.1f} kHz, T={grid.duration * 1e3:.4f} ms")

# %%
# The pulsone has N nonzero teeth, one every M samples.
p = pulsone(grid, 0, 0)
print("teeth at", np.flatnonzero(p.samples)[:5], "...")

# %%
# The closed-form carrier agrees with brute-force evaluation of the
# MN x MN transform, and every sample has the same magnitude.
g = GdaftParams.for_grid(grid, 1, 1, 1)
c = spread_carrier(grid, g, 0, 0)
err = np.max(np.abs(c.samples - gdaft_direct(grid, g, p).samples))
print(f"closed form vs direct: {err:.1e}")
print(f"max | |c[n]| sqrt(MN) - 1 |: {np.max(np.abs(np.abs(c.samples) * np.sqrt(grid.MN) - 1)):.1e}")
