"""
Ambiguity surfaces and crystallization
======================================

The pulsone's self-ambiguity lives on a lattice. Its cross-ambiguity with
the spread carrier is flat, which is what lets both share one frame.
"""

# %%
import numpy as np

from zakpol import (
    GdaftParams,
    SupportBox,
    crystallization_check,
    cross_ambiguity_fast,
    reference_grid,
    pulsone,
    roi_box,
    self_ambiguity_support,
    spread_carrier,
)

grid = reference_grid()
p = pulsone(grid)
c = spread_carrier(grid, GdaftParams.for_grid(grid))

# %%
S = self_ambiguity_support(p, tol=1e-9)
print(len(S), "lattice points, e.g.", sorted(S)[:4])

# %%
# Cross-ambiguity magnitude is 1/sqrt(MN) everywhere.
A = np.abs(cross_ambiguity_fast(c, p))
print(f"min {A.min():.5f}, max {A.max():.5f}, 1/sqrt(MN) = {1 / np.sqrt(grid.MN):.5f}")

# %%
# Channel supports that fit inside one lattice cell can be read off unaliased.
for box in (roi_box(grid), SupportBox(0, grid.M, 0, 0)):
    ok, pair = crystallization_check(S, box, grid.MN)
    print(box, "->", "ok" if ok else f"aliases {pair}")
