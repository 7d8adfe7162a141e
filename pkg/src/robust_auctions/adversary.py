"""Corruption generators inside a KS ball, verified at generation time.

Every generator checks ks_distance(corrupted, original) against the declared
budget and raises AdversaryError when the check fails, so a sweep can never
silently run with an adversary that exceeds its radius.
"""

from __future__ import annotations

import numpy as np

from .distributions import (AppxC1, AppxC2, Distribution, DownShiftSpike,
                            UpShift, appx_c1, appx_c2, ks_distance)

_VERIFY_TOL = 1e-9


class AdversaryError(RuntimeError):
    """Generated corruption failed its KS-radius verification."""


def _verify(d_tilde: Distribution, d_star: Distribution, budget: float,
            label: str) -> Distribution:
    ks = ks_distance(d_tilde, d_star)
    if ks > budget + _VERIFY_TOL:
        raise AdversaryError(
            f"{label}: corruption KS {ks:.6g} exceeds budget {budget:.6g}")
    return d_tilde


def tail_spike(d_star: Distribution, alpha: float, c: float) -> Distribution:
    """Move the alpha lowest quantiles to a point mass at c/alpha."""
    alpha = float(alpha)
    c = float(c)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if c <= 0:
        raise ValueError("spike scale c must be positive")
    d = DownShiftSpike(d_star, alpha, c / alpha)
    return _verify(d, d_star, alpha, "tail_spike")


def cdf_shift(d_star: Distribution, alpha: float, direction: str) -> Distribution:
    """Shift the CDF by alpha: 'up' pushes mass toward 0, 'down' pushes mass
    toward larger values (closed off by a far-quantile spike)."""
    alpha = float(alpha)
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    if alpha == 0.0:
        return d_star
    if direction == "up":
        d = UpShift(d_star, alpha)
    else:
        close_q = 1.0 - min(alpha / 2.0, 1e-4)
        spike_x = float(d_star.ppf(close_q))
        spike_x = max(spike_x, float(d_star.ppf(alpha)) + 1e-12)
        d = DownShiftSpike(d_star, alpha, spike_x)
    return _verify(d, d_star, alpha, f"cdf_shift({direction})")


def mhr_lb_family(n: int, beta: float):
    """The confusable MHR triple (base point mass, high CDF, low CDF)."""
    return appx_c1(n, beta, "b"), appx_c1(n, beta, "h"), appx_c1(n, beta, "l")


def regular_lb_family(n: int, beta: float):
    """The confusable regular triple (base point mass, high CDF, low CDF)."""
    return appx_c2(n, beta, "b"), appx_c2(n, beta, "h"), appx_c2(n, beta, "l")


def mhr_lb_radius(n: int, beta: float) -> float:
    """Exact KS distance between the MHR family's low and high members.

    The gap below the break v2 = a is e^{-(b/a)v} - e^{-v}; its stationary
    point v_c = a ln(a/b)/(a-b) can fall inside (0, v2), in which case the
    interior maximum exceeds the b-to-break value beta/n.  Above v2 the gap
    decreases from beta/n to 0, so the radius is the max of the two.
    """
    b = np.log(n)
    a = b - np.log1p(-beta)
    if b <= 0:
        raise ValueError("need n >= 2")
    v2 = a
    v_c = a * np.log(a / b) / (a - b)
    v_c = min(max(v_c, 0.0), v2)
    interior = np.exp(-(b / a) * v_c) - np.exp(-v_c)
    return float(max(beta / n, interior))


def regular_lb_radius(n: int, beta: float) -> float:
    """Exact KS distance between the regular family's low and high members,
    attained at v = 1 + 1/(1 - sqrt(1-beta)); always <= beta^2/n."""
    return float((1.0 - np.sqrt(1.0 - beta)) ** 2 / n)


def corrupt(d_star: Distribution, adversary: str, alpha: float) -> Distribution:
    """Dispatch on an adversary spec string.

    Formats: 'tailspike:C', 'shift:up', 'shift:down', 'mhr-lb:BETA',
    'regular-lb:BETA'.  The lower-bound families require the input to be a
    family member (they swap it for its confusable partner) and check that
    the family's exact radius fits the alpha budget.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    name, _, arg = adversary.partition(":")
    if name == "tailspike":
        if alpha == 0.0:
            return d_star
        return tail_spike(d_star, alpha, float(arg))
    if name == "shift":
        return cdf_shift(d_star, alpha, arg)
    if name in ("mhr-lb", "regular-lb"):
        cls, radius_fn = ((AppxC1, mhr_lb_radius) if name == "mhr-lb"
                          else (AppxC2, regular_lb_radius))
        if not isinstance(d_star, cls) :
            raise ValueError(
                f"{name} adversary needs a matching family member as input")
        beta = float(arg) if arg else d_star.beta
        if abs(beta - d_star.beta) > 1e-12:
            raise ValueError("adversary beta does not match the input family")
        radius = radius_fn(d_star.n, beta)
        if radius > alpha + _VERIFY_TOL:
            raise AdversaryError(
                f"{name}: family radius {radius:.6g} exceeds budget {alpha:.6g}")
        partner = {"l": "h", "h": "l"}.get(d_star.which)
        if partner is None:
            raise ValueError("input must be the family's low or high member")
        return cls(d_star.n, beta, partner)
    raise ValueError(f"unknown adversary spec {adversary!r}")
