"""Brute-force references for tests.

Nothing in the production modules imports this file; tests compare fast
implementations against these slow, obviously-correct ones.
"""

from __future__ import annotations

import numpy as np

from .links import PiecewiseLinearFn


def naive_envelope(xs, ys) -> PiecewiseLinearFn:
    """Lower convex envelope by the literal argmin-slope walk, O(k^2).

    From the current vertex, hop to the later point with the smallest chord
    slope, taking the farthest such point on exact ties so that collinear
    runs collapse to their endpoints (the printed procedure leaves the
    tie-break open; this choice matches the tie-merging of the fast hull).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2:
        raise ValueError("need at least two points")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("xs must be strictly increasing")
    hull_x = [xs[0]]
    hull_y = [ys[0]]
    i = 0
    while i < xs.size - 1:
        slopes = (ys[i + 1:] - ys[i]) / (xs[i + 1:] - xs[i])
        best = slopes.min()
        j = i + 1 + int(np.nonzero(slopes == best)[0][-1])
        hull_x.append(xs[j])
        hull_y.append(ys[j])
        i = j
    return PiecewiseLinearFn(hull_x, hull_y)


def grid_reserve(dist, step: float):
    """(reserve, revenue) by exhaustive grid argmax of x * Pr[V >= x]."""
    if step <= 0:
        raise ValueError("step must be positive")
    hi = dist.support_top()
    if not np.isfinite(hi):
        hi = float(dist.ppf(1.0 - 1e-12))
    grid = np.arange(0.0, hi + step, step)
    revs = grid * np.asarray(dist.survival_quantile(grid))
    i = int(np.argmax(revs))
    return float(grid[i]), float(revs[i])
