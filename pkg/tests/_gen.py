"""Shared random-instance generators for the test suite.

Everything takes an explicit numpy Generator so tests stay reproducible.
"""

import numpy as np

from robust_auctions.distributions import PiecewiseLinkCDF, StepCDF
from robust_auctions.links import link_origin


def random_points(rng, k_max=50, allow_flats=True):
    """Non-decreasing (xs, ys) point sets for envelope tests."""
    k = int(rng.integers(2, k_max + 1))
    xs = np.sort(rng.uniform(0.0, 10.0, size=k))
    xs = np.unique(xs)
    while xs.size < 2:
        xs = np.unique(np.sort(rng.uniform(0.0, 10.0, size=k)))
    inc = rng.uniform(0.0, 1.0, size=xs.size - 1)
    if allow_flats:
        inc[rng.random(xs.size - 1) < 0.25] = 0.0
    ys = np.concatenate(([rng.uniform(0.0, 1.0)], )) + np.concatenate(
        ([0.0], np.cumsum(inc)))
    return xs, ys


def random_link_cdf(rng, kind, k_max=8, max_tries=50, from_zero=False):
    """A valid random PiecewiseLinkCDF with no near-zero virtual-value
    intercepts (those make grid-vs-closed-form reserve comparisons flaky:
    revenue is then nearly flat along a whole piece).

    `from_zero` pins the first knot to x = 0, which keeps the link curve
    convex on all of [0, top]; without it some draws carry an atom at an
    interior bottom knot and sit outside the KS-ball guarantee class.
    """
    for _ in range(max_tries):
        k = int(rng.integers(2, k_max + 1))
        xs = np.concatenate(([0.0], np.cumsum(rng.uniform(0.2, 1.5, size=k - 1))))
        if not from_zero and rng.random() < 0.3:
            xs = xs + rng.uniform(0.0, 0.5)
        slopes = np.cumsum(rng.uniform(0.1, 1.0, size=k - 1))
        h0 = link_origin(kind) + rng.uniform(0.0, 1.0)
        hs = np.concatenate(([h0], h0 + np.cumsum(slopes * np.diff(xs))))
        top = float(xs[-1]) + (rng.uniform(0.1, 1.5) if rng.random() < 0.5 else 0.0)
        cdf = PiecewiseLinkCDF(kind, xs, hs, top)
        if kind == "regular":
            consts = xs[:-1] - hs[:-1] / slopes
            if np.any(np.abs(consts) < 1e-6):
                continue
        else:
            stats = 1.0 / slopes
            if np.any(np.abs(stats - xs[:-1]) < 1e-6) or \
               np.any(np.abs(stats - xs[1:]) < 1e-6):
                continue
        return cdf
    raise RuntimeError("could not draw a clean random link CDF")


def random_step_cdf(rng, k_max=12, lo=0.0, hi=10.0):
    k = int(rng.integers(1, k_max + 1))
    values = np.unique(np.round(rng.uniform(lo, hi, size=k), 6))
    masses = rng.dirichlet(np.ones(values.size))
    while np.any(masses < 1e-9):
        masses = rng.dirichlet(np.ones(values.size))
    return StepCDF(values, masses)
