"""Value distributions: step CDFs, piecewise-link CDFs, parametric families,
corruption wrappers, products, and the KS metric.

Conventions used throughout:

  * CDFs are right-continuous; `survival_quantile(v)` uses the left limit so
    that an atom at v counts in Pr[V >= v].
  * Supports live on [0, inf); bounded types close with a top atom.
  * Sampling is inverse-transform on counter-based uniform substreams, so a
    sample prefix never depends on how many draws were requested.
"""

from __future__ import annotations

import numpy as np

from . import links
from ._rng import profile_uniforms, uniform_stream

_ATOM_TOL = 1e-15


class Distribution:
    """Base interface. Subclasses implement _cdf/_ppf (and _cdf_left when
    they carry atoms) on 1-d float arrays; scalar handling lives here."""

    purely_atomic = False
    piecewise_exact = False

    # -- array core, overridden by subclasses ------------------------------
    def _cdf(self, arr: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _cdf_left(self, arr: np.ndarray) -> np.ndarray:
        # continuous distributions: left limit equals the CDF
        return self._cdf(arr)

    def _ppf(self, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- public API ---------------------------------------------------------
    def cdf(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        # formulas like 1 - 1/(n(x-1)) can land a hair outside [0, 1] at
        # support boundaries; the public contract clips that noise away
        out = np.clip(self._cdf(arr), 0.0, 1.0)
        return float(out[0]) if np.ndim(x) == 0 else out

    def cdf_left(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.clip(self._cdf_left(arr), 0.0, 1.0)
        return float(out[0]) if np.ndim(x) == 0 else out

    def survival_quantile(self, v):
        """Pr[V >= v], atoms at v included."""
        return 1.0 - self.cdf_left(v) if np.ndim(v) == 0 \
            else 1.0 - np.asarray(self.cdf_left(v))

    def ppf(self, q):
        arr = np.atleast_1d(np.asarray(q, dtype=float))
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("quantiles must be in [0, 1]")
        out = self._ppf(arr)
        return float(out[0]) if np.ndim(q) == 0 else out

    def sample(self, count: int, seed: int, start: int = 0) -> np.ndarray:
        return self._ppf(uniform_stream(seed, start, count))

    def support_bottom(self) -> float:
        raise NotImplementedError

    def support_top(self) -> float:
        raise NotImplementedError

    def breakpoints(self) -> np.ndarray:
        """Finite discontinuities and kinks, for grids and the KS metric."""
        raise NotImplementedError

    def atoms(self):
        """(locations, masses) of point masses, found at breakpoints."""
        xs = self.breakpoints()
        m = np.asarray(self.cdf(xs)) - np.asarray(self.cdf_left(xs))
        keep = m > _ATOM_TOL
        return xs[keep], m[keep]

    def to_dict(self) -> dict:
        raise NotImplementedError


class StepCDF(Distribution):
    """Finite discrete distribution: mass masses[i] at values[i]."""

    purely_atomic = True
    piecewise_exact = True

    def __init__(self, values, masses):
        values = np.asarray(values, dtype=float)
        masses = np.asarray(masses, dtype=float)
        if values.ndim != 1 or values.shape != masses.shape or values.size == 0:
            raise ValueError("values and masses must be matching nonempty 1-d arrays")
        if np.any(np.diff(values) <= 0):
            raise ValueError("values must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("values must be nonnegative")
        if np.any(masses <= 0):
            raise ValueError("masses must be positive")
        cum = np.cumsum(masses)
        if abs(cum[-1] - 1.0) > 1e-9:
            raise ValueError("masses must sum to 1")
        cum[-1] = 1.0
        self.values = values
        self.masses = masses
        self._cum = cum
        self._cum0 = np.concatenate(([0.0], cum))

    def _cdf(self, arr):
        return self._cum0[np.searchsorted(self.values, arr, side="right")]

    def _cdf_left(self, arr):
        return self._cum0[np.searchsorted(self.values, arr, side="left")]

    def _ppf(self, q):
        idx = np.searchsorted(self._cum, q, side="left")
        return self.values[np.minimum(idx, self.values.size - 1)]

    def support_bottom(self):
        return float(self.values[0])

    def support_top(self):
        return float(self.values[-1])

    def breakpoints(self):
        return self.values.copy()

    def atoms(self):
        return self.values.copy(), self.masses.copy()

    def to_dict(self):
        return {"type": "step", "values": self.values.tolist(),
                "masses": self.masses.tolist()}

    def __repr__(self):
        return f"StepCDF({self.values.size} atoms on [{self.values[0]:g}, {self.values[-1]:g}])"


class PiecewiseLinkCDF(Distribution):
    """CDF given by straight knots in link space plus a closing top atom.

    Between knots, F(x) = link_inverse(linear interpolation of h).  Beyond the
    last knot F stays flat until `support_top`, where the remaining mass
    1 - link_inverse(h_last) sits as an atom.  Knot convexity is validated at
    construction (no ironing here: non-convex inputs are rejected).
    """

    piecewise_exact = True

    def __init__(self, kind, xs, hs, support_top):
        links.check_kind(kind)
        xs = np.asarray(xs, dtype=float)
        hs = np.asarray(hs, dtype=float)
        if xs.ndim != 1 or xs.shape != hs.shape or xs.size == 0:
            raise ValueError("xs and hs must be matching nonempty 1-d arrays")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("knot xs must be strictly increasing")
        if xs[0] < 0:
            raise ValueError("knot xs must be nonnegative")
        origin = links.link_origin(kind)
        if hs[0] < origin - 1e-9:
            raise ValueError("h values must start at or above the link origin")
        if np.any(np.diff(hs) < -1e-12):
            raise ValueError("h values must be non-decreasing")
        hs = np.maximum.accumulate(np.maximum(hs, origin))
        if not np.all(np.isfinite(hs)):
            raise ValueError("h values must be finite")
        if xs.size >= 3:
            slopes = np.diff(hs) / np.diff(xs)
            if np.any(np.diff(slopes) < -1e-9 * np.maximum(1.0, slopes[:-1])):
                raise ValueError("link knots must be convex")
        support_top = float(support_top)
        if not np.isfinite(support_top) or support_top < xs[-1]:
            raise ValueError("support_top must be finite, at or beyond the last knot")
        self.kind = kind
        self.xs = xs
        self.hs = hs
        self._top = support_top
        self.f_knots = np.asarray(links.link_inverse(kind, hs))
        self.top_atom = 1.0 - float(self.f_knots[-1])
        self.purely_atomic = xs.size == 1

    def _interp_cdf(self, arr):
        return links.link_inverse(self.kind, np.interp(arr, self.xs, self.hs))

    def _cdf(self, arr):
        f_last = self.f_knots[-1]
        return np.select(
            [arr >= self._top, arr > self.xs[-1], arr >= self.xs[0]],
            [1.0, f_last, self._interp_cdf(arr)],
            default=0.0)

    def _cdf_left(self, arr):
        f_last = self.f_knots[-1]
        return np.select(
            [arr > self._top, arr > self.xs[-1], arr > self.xs[0]],
            [1.0, f_last, self._interp_cdf(arr)],
            default=0.0)

    def _ppf(self, q):
        f0, f_last = self.f_knots[0], self.f_knots[-1]
        out = np.full(q.shape, self._top)
        out[q == f_last] = self.xs[-1]
        out[q <= f0] = self.xs[0]
        mid = (q > f0) & (q < f_last)
        if np.any(mid):
            hq = np.asarray(links.link_forward(self.kind, q[mid]))
            j = np.searchsorted(self.hs, hq, side="left")
            j = np.clip(j, 1, self.hs.size - 1)
            dh = self.hs[j] - self.hs[j - 1]
            dx = self.xs[j] - self.xs[j - 1]
            frac = np.where(dh > 0, (hq - self.hs[j - 1]) / np.where(dh > 0, dh, 1.0), 1.0)
            out[mid] = self.xs[j - 1] + frac * dx
        return out

    def support_bottom(self):
        return float(self.xs[0])

    def support_top(self):
        return self._top

    def breakpoints(self):
        if self._top > self.xs[-1]:
            return np.concatenate((self.xs, [self._top]))
        return self.xs.copy()

    def to_dict(self):
        return {"type": "link_cdf", "kind": self.kind,
                "knots": [[float(x), float(h)] for x, h in zip(self.xs, self.hs)],
                "support_top": self._top, "top_atom": self.top_atom}

    def __repr__(self):
        return (f"PiecewiseLinkCDF({self.kind}, {self.xs.size} knots, "
                f"top={self._top:g}, top_atom={self.top_atom:.4g})")


class PointMass(Distribution):
    purely_atomic = True
    piecewise_exact = True

    def __init__(self, value):
        value = float(value)
        if value < 0:
            raise ValueError("point mass location must be nonnegative")
        self.value = value

    def _cdf(self, arr):
        return np.where(arr >= self.value, 1.0, 0.0)

    def _cdf_left(self, arr):
        return np.where(arr > self.value, 1.0, 0.0)

    def _ppf(self, q):
        return np.full(q.shape, self.value)

    def support_bottom(self):
        return self.value

    def support_top(self):
        return self.value

    def breakpoints(self):
        return np.array([self.value])

    def to_dict(self):
        return {"type": "point", "value": self.value}


class Exponential(Distribution):
    def __init__(self, rate):
        rate = float(rate)
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.rate = rate

    def _cdf(self, arr):
        return np.where(arr <= 0, 0.0, -np.expm1(-self.rate * np.maximum(arr, 0.0)))

    def _ppf(self, q):
        with np.errstate(divide="ignore"):
            return -np.log1p(-q) / self.rate

    def support_bottom(self):
        return 0.0

    def support_top(self):
        return np.inf

    def breakpoints(self):
        return np.array([0.0])

    def to_dict(self):
        return {"type": "exp", "rate": self.rate}


class Uniform(Distribution):
    def __init__(self, lo, hi):
        lo, hi = float(lo), float(hi)
        if lo < 0 or hi <= lo:
            raise ValueError("need 0 <= lo < hi")
        self.lo, self.hi = lo, hi

    def _cdf(self, arr):
        return np.clip((arr - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def _ppf(self, q):
        return self.lo + q * (self.hi - self.lo)

    def support_bottom(self):
        return self.lo

    def support_top(self):
        return self.hi

    def breakpoints(self):
        return np.array([self.lo, self.hi])

    def to_dict(self):
        return {"type": "unif", "lo": self.lo, "hi": self.hi}


class EqualRevenue(Distribution):
    """F(x) = 1 - lo/x on [lo, cap), closed with an atom at cap.

    Every reserve in [lo, cap] earns revenue lo; the regular link is the
    straight line h_r(x) = x / lo.
    """

    piecewise_exact = True

    def __init__(self, lo, cap):
        lo, cap = float(lo), float(cap)
        if lo < 1:
            raise ValueError("scale lo must be >= 1")
        if cap <= lo:
            raise ValueError("cap must exceed lo")
        self.lo, self.cap = lo, cap

    def _cdf(self, arr):
        out = np.zeros(arr.shape)
        m = arr >= self.cap
        out[m] = 1.0
        m = (arr >= self.lo) & (arr < self.cap)
        out[m] = 1.0 - self.lo / arr[m]
        return out

    def _cdf_left(self, arr):
        out = np.zeros(arr.shape)
        m = arr > self.cap
        out[m] = 1.0
        m = (arr > self.lo) & (arr <= self.cap)
        out[m] = 1.0 - self.lo / arr[m]
        return out

    def _ppf(self, q):
        qcut = 1.0 - self.lo / self.cap
        out = np.full(q.shape, self.cap)
        m = q < qcut
        out[m] = self.lo / (1.0 - q[m])
        return out

    def support_bottom(self):
        return self.lo

    def support_top(self):
        return self.cap

    def breakpoints(self):
        return np.array([self.lo, self.cap])

    def to_dict(self):
        return {"type": "eqrev", "lo": self.lo, "cap": self.cap}


class AppxC1(Distribution):
    """A confusable pair of bounded MHR distributions.

    Parameterized by (n, beta); `which` selects the lower ('l') or upper ('h')
    member.  Both close with an atom of e^{-v1} at v1 and are KS-close while
    demanding very different reserves; use `appx_c1` for the point-mass base
    'b' variant.  Derived constants are exposed as attributes (a, b_, v0, v1,
    v2) for the generator that declares the pair's exact KS radius.
    """

    def __init__(self, n, beta, which):
        n = int(n)
        if n < 2:
            raise ValueError("need n >= 2")
        beta = float(beta)
        if not 0 < beta < 1:
            raise ValueError("beta must be in (0, 1)")
        if which not in ("l", "h"):
            raise ValueError("which must be 'l' or 'h'")
        c = -np.log1p(-beta)
        self.n, self.beta, self.which = n, beta, which
        self.a = float(np.log(n) + c)
        self.b_ = float(np.log(n))
        self.v0 = self.a - 1.0
        self.v1 = float(np.log(n) + 2 * c)
        self.v2 = self.a
        if self.v0 <= 0:
            raise ValueError("base value v0 = ln(n) - ln(1-beta) - 1 must be positive")

    def _cdf(self, arr):
        if self.which == "l":
            body = -np.expm1(-np.maximum(arr, 0.0))
            return np.select([arr >= self.v1, arr >= 0], [1.0, body], 0.0)
        low = -np.expm1(-(self.b_ / self.a) * np.maximum(arr, 0.0))
        mid = -np.expm1(-(2.0 * (arr - self.a) + self.b_))
        return np.select([arr >= self.v1, arr >= self.v2, arr >= 0],
                         [1.0, mid, low], 0.0)

    def _cdf_left(self, arr):
        if self.which == "l":
            body = -np.expm1(-np.maximum(arr, 0.0))
            return np.select([arr > self.v1, arr > 0], [1.0, body], 0.0)
        low = -np.expm1(-(self.b_ / self.a) * np.maximum(arr, 0.0))
        mid = -np.expm1(-(2.0 * (arr - self.a) + self.b_))
        return np.select([arr > self.v1, arr >= self.v2, arr > 0],
                         [1.0, mid, low], 0.0)

    def _ppf(self, q):
        f_top = -np.expm1(-self.v1)  # CDF just below the closing atom
        with np.errstate(divide="ignore"):
            t = -np.log1p(-q)
        if self.which == "l":
            return np.where(q >= f_top, self.v1, t)
        f2 = -np.expm1(-self.b_)     # CDF at the middle kink v2
        return np.select([q >= f_top, q >= f2],
                         [self.v1, self.a + 0.5 * (t - self.b_)],
                         (self.a / self.b_) * t)

    def support_bottom(self):
        return 0.0

    def support_top(self):
        return self.v1

    def breakpoints(self):
        if self.which == "l":
            return np.array([0.0, self.v1])
        return np.array([0.0, self.v2, self.v1])

    def to_dict(self):
        return {"type": "appxC1", "n": self.n, "beta": self.beta,
                "which": self.which}


class AppxC2(Distribution):
    """A confusable pair of unbounded regular distributions.

    Equal-revenue-flavoured: the lower member has constant virtual value on
    its support, the upper one thickens the tail beyond v2 = 1 + 1/beta.
    """

    def __init__(self, n, beta, which):
        n = int(n)
        if n < 1:
            raise ValueError("need n >= 1")
        beta = float(beta)
        if not 0 < beta < 1:
            raise ValueError("beta must be in (0, 1)")
        if which not in ("l", "h"):
            raise ValueError("which must be 'l' or 'h'")
        self.n, self.beta, self.which = n, beta, which
        self.bottom = 1.0 + 1.0 / n
        self.v2 = 1.0 + 1.0 / beta

    def _cdf(self, arr):
        out = np.zeros(arr.shape)
        if self.which == "l":
            m = arr >= self.bottom
            out[m] = 1.0 - 1.0 / (self.n * (arr[m] - 1.0))
        else:
            m = (arr >= self.bottom) & (arr < self.v2)
            out[m] = 1.0 - 1.0 / (self.n * (arr[m] - 1.0))
            m = arr >= self.v2
            out[m] = 1.0 - (1.0 - self.beta) / (self.n * (arr[m] - 2.0))
        return out

    def _ppf(self, q):
        with np.errstate(divide="ignore"):
            low = np.maximum(self.bottom, 1.0 + 1.0 / (self.n * (1.0 - q)))
            if self.which == "l":
                return low
            high = 2.0 + (1.0 - self.beta) / (self.n * (1.0 - q))
        return np.where(q < 1.0 - self.beta / self.n, low, high)

    def support_bottom(self):
        return self.bottom

    def support_top(self):
        return np.inf

    def breakpoints(self):
        if self.which == "l":
            return np.array([self.bottom])
        return np.array([self.bottom, self.v2])

    def to_dict(self):
        return {"type": "appxC2", "n": self.n, "beta": self.beta,
                "which": self.which}


def appx_c1(n, beta, which) -> Distribution:
    if which == "b":
        probe = AppxC1(n, beta, "l")   # validates parameters, computes v0
        return PointMass(probe.v0)
    return AppxC1(n, beta, which)


def appx_c2(n, beta, which) -> Distribution:
    if which == "b":
        AppxC2(n, beta, "l")
        return PointMass(1.5)
    return AppxC2(n, beta, which)


# ---------------------------------------------------------------------------
# corruption wrappers
# ---------------------------------------------------------------------------

class UpShift(Distribution):
    """min(F + alpha, 1): moves alpha of mass to an atom at 0."""

    def __init__(self, base: Distribution, alpha):
        alpha = float(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        self.base = base
        self.alpha = alpha
        self._top = float(base.ppf(1.0 - alpha))
        self.purely_atomic = base.purely_atomic
        self.piecewise_exact = base.piecewise_exact

    def _cdf(self, arr):
        return np.where(arr < 0, 0.0,
                        np.minimum(np.asarray(self.base.cdf(arr)) + self.alpha, 1.0))

    def _cdf_left(self, arr):
        return np.where(arr <= 0, 0.0,
                        np.minimum(np.asarray(self.base.cdf_left(arr)) + self.alpha, 1.0))

    def _ppf(self, q):
        at_zero = self.alpha + float(self.base.cdf(0.0))
        shifted = np.asarray(self.base.ppf(np.clip(q - self.alpha, 0.0, 1.0)))
        return np.where(q <= at_zero, 0.0, np.minimum(shifted, self._top))

    def support_bottom(self):
        return 0.0

    def support_top(self):
        return self._top

    def breakpoints(self):
        base_pts = self.base.breakpoints()
        pts = np.concatenate(([0.0], base_pts[base_pts < self._top], [self._top]))
        return np.unique(pts)

    def to_dict(self):
        return {"type": "upshift", "alpha": self.alpha, "base": self.base.to_dict()}


class DownShiftSpike(Distribution):
    """max(F - alpha, 0) below spike_x, with all remaining mass at spike_x."""

    def __init__(self, base: Distribution, alpha, spike_x):
        alpha = float(alpha)
        spike_x = float(spike_x)
        if not 0 < alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if not np.isfinite(spike_x) or spike_x <= 0:
            raise ValueError("spike location must be positive and finite")
        self.base = base
        self.alpha = alpha
        self.spike_x = spike_x
        self._left_at_spike = max(float(base.cdf_left(spike_x)) - alpha, 0.0)
        self.purely_atomic = base.purely_atomic
        self.piecewise_exact = base.piecewise_exact

    def _cdf(self, arr):
        return np.where(arr >= self.spike_x, 1.0,
                        np.maximum(np.asarray(self.base.cdf(arr)) - self.alpha, 0.0))

    def _cdf_left(self, arr):
        return np.where(arr > self.spike_x, 1.0,
                        np.maximum(np.asarray(self.base.cdf_left(arr)) - self.alpha, 0.0))

    def _ppf(self, q):
        shifted = np.asarray(self.base.ppf(np.minimum(q + self.alpha, 1.0)))
        return np.where(q <= self._left_at_spike,
                        np.minimum(shifted, self.spike_x), self.spike_x)

    def support_bottom(self):
        return float(self.base.ppf(self.alpha))

    def support_top(self):
        return self.spike_x

    def breakpoints(self):
        base_pts = self.base.breakpoints()
        pts = np.concatenate((base_pts[base_pts < self.spike_x],
                              [float(self.base.ppf(self.alpha)), self.spike_x]))
        return np.unique(pts)

    def to_dict(self):
        return {"type": "downshift_spike", "alpha": self.alpha,
                "spike_x": self.spike_x, "base": self.base.to_dict()}


class Truncated(Distribution):
    """Mass Pr[V >= cutoff] collapsed onto an atom at the cutoff."""

    def __init__(self, base: Distribution, cutoff):
        cutoff = float(cutoff)
        if cutoff < 0 or not np.isfinite(cutoff):
            raise ValueError("cutoff must be finite and nonnegative")
        self.base = base
        self.cutoff = cutoff
        self.purely_atomic = base.purely_atomic
        self.piecewise_exact = base.piecewise_exact

    def _cdf(self, arr):
        return np.where(arr >= self.cutoff, 1.0, np.asarray(self.base.cdf(arr)))

    def _cdf_left(self, arr):
        return np.where(arr > self.cutoff, 1.0, np.asarray(self.base.cdf_left(arr)))

    def _ppf(self, q):
        return np.minimum(np.asarray(self.base.ppf(q)), self.cutoff)

    def support_bottom(self):
        return min(self.base.support_bottom(), self.cutoff)

    def support_top(self):
        return min(self.base.support_top(), self.cutoff)

    def breakpoints(self):
        base_pts = self.base.breakpoints()
        return np.unique(np.concatenate((base_pts[base_pts < self.cutoff],
                                         [self.cutoff])))

    def to_dict(self):
        return {"type": "truncated", "cutoff": self.cutoff,
                "base": self.base.to_dict()}


def truncate(dist: Distribution, cutoff) -> Truncated:
    return Truncated(dist, cutoff)


# ---------------------------------------------------------------------------
# empirical CDFs, products
# ---------------------------------------------------------------------------

def empirical_from_samples(samples) -> StepCDF:
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("no samples")
    if np.any(~np.isfinite(samples)) or np.any(samples < 0):
        raise ValueError("samples must be finite and nonnegative")
    values, counts = np.unique(samples, return_counts=True)
    return StepCDF(values, counts / samples.size)


class ProductDist:
    """Independent per-bidder value distributions; draws whole profiles."""

    def __init__(self, components):
        components = list(components)
        if not components:
            raise ValueError("need at least one component")
        self.components = components
        self.n = len(components)

    def sample_profiles(self, count: int, seed: int,
                        first_profile: int = 0) -> np.ndarray:
        u = profile_uniforms(seed, first_profile, count, self.n)
        out = np.empty_like(u)
        for j, dist in enumerate(self.components):
            out[:, j] = dist._ppf(u[:, j])
        return out

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]


# ---------------------------------------------------------------------------
# KS distance and dominance
# ---------------------------------------------------------------------------

_KS_GRID = 100_000
_KS_QGRID = 4096


def _finite_breakpoints(dist):
    pts = np.asarray(dist.breakpoints(), dtype=float)
    return pts[np.isfinite(pts)]


def _candidate_points(d1, d2):
    pts = [_finite_breakpoints(d1), _finite_breakpoints(d2)]
    if not (d1.piecewise_exact and d2.piecewise_exact):
        tops = []
        for d in (d1, d2):
            t = d.support_top()
            tops.append(t if np.isfinite(t) else float(d.ppf(1.0 - 1e-9)))
        lo = min(d1.support_bottom(), d2.support_bottom())
        hi = max(tops)
        if hi > lo:
            pts.append(np.linspace(lo, hi, _KS_GRID))
        qs = np.linspace(0.0, 1.0 - 1e-9, _KS_QGRID)
        pts.append(np.asarray(d1.ppf(qs)))
        pts.append(np.asarray(d2.ppf(qs)))
    cand = np.unique(np.concatenate(pts))
    return cand[np.isfinite(cand)]


def _golden_max(f, lo, hi, iters=80):
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a < 1e-13 * max(1.0, abs(a)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return max(fc, fd)


def ks_distance(d1: Distribution, d2: Distribution) -> float:
    """sup-norm distance between the two CDFs.

    Piecewise pairs (step or link CDFs) are evaluated exactly over the union
    of their breakpoints with one-sided limits; when a parametric side is
    involved, a dense grid plus golden-section refinement (to well below 1e-7)
    finds interior maxima between breakpoints.
    """
    cand = _candidate_points(d1, d2)
    gap_r = np.abs(np.asarray(d1.cdf(cand)) - np.asarray(d2.cdf(cand)))
    gap_l = np.abs(np.asarray(d1.cdf_left(cand)) - np.asarray(d2.cdf_left(cand)))
    best = float(max(gap_r.max(), gap_l.max()))
    if d1.piecewise_exact and d2.piecewise_exact:
        return best
    # refine around the best few grid points; the gap is continuous there
    order = np.argsort(np.maximum(gap_r, gap_l))[::-1][:5]
    g = lambda x: abs(float(d1.cdf(x)) - float(d2.cdf(x)))
    for i in order:
        lo = cand[i - 1] if i > 0 else cand[i]
        hi = cand[i + 1] if i + 1 < cand.size else cand[i]
        if hi > lo:
            best = max(best, _golden_max(g, lo, hi))
    return best


def dominates(d1: Distribution, d2: Distribution, slack: float = 1e-9) -> bool:
    """True when F1 <= F2 + slack at evaluation points (d1 first-order
    dominates d2)."""
    cand = _candidate_points(d1, d2)
    f1r, f2r = np.asarray(d1.cdf(cand)), np.asarray(d2.cdf(cand))
    f1l, f2l = np.asarray(d1.cdf_left(cand)), np.asarray(d2.cdf_left(cand))
    return bool(np.all(f1r <= f2r + slack) and np.all(f1l <= f2l + slack))


# ---------------------------------------------------------------------------
# spec strings and JSON round trip
# ---------------------------------------------------------------------------

def parse_dist_spec(spec: str) -> Distribution:
    """Build a distribution from a compact string.

    Syntax: exp:RATE | unif:A:B | eqrev:LO:CAP | point:V |
    appxC1:N:BETA:b|h|l | appxC2:N:BETA:b|h|l
    """
    parts = str(spec).strip().split(":")
    name, args = parts[0], parts[1:]
    try:
        if name == "exp" and len(args) == 1:
            return Exponential(float(args[0]))
        if name == "unif" and len(args) == 2:
            return Uniform(float(args[0]), float(args[1]))
        if name == "eqrev" and len(args) == 2:
            return EqualRevenue(float(args[0]), float(args[1]))
        if name == "point" and len(args) == 1:
            return PointMass(float(args[0]))
        if name == "appxC1" and len(args) == 3:
            return appx_c1(int(args[0]), float(args[1]), args[2])
        if name == "appxC2" and len(args) == 3:
            return appx_c2(int(args[0]), float(args[1]), args[2])
    except ValueError as exc:
        raise ValueError(f"bad distribution spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown distribution spec {spec!r}")


def dist_from_dict(d: dict) -> Distribution:
    kind = d.get("type")
    if kind == "step":
        return StepCDF(d["values"], d["masses"])
    if kind == "link_cdf":
        knots = np.asarray(d["knots"], dtype=float)
        return PiecewiseLinkCDF(d["kind"], knots[:, 0], knots[:, 1],
                                d["support_top"])
    if kind == "point":
        return PointMass(d["value"])
    if kind == "exp":
        return Exponential(d["rate"])
    if kind == "unif":
        return Uniform(d["lo"], d["hi"])
    if kind == "eqrev":
        return EqualRevenue(d["lo"], d["cap"])
    if kind == "appxC1":
        return AppxC1(d["n"], d["beta"], d["which"])
    if kind == "appxC2":
        return AppxC2(d["n"], d["beta"], d["which"])
    if kind == "upshift":
        return UpShift(dist_from_dict(d["base"]), d["alpha"])
    if kind == "downshift_spike":
        return DownShiftSpike(dist_from_dict(d["base"]), d["alpha"],
                              d["spike_x"])
    if kind == "truncated":
        return Truncated(dist_from_dict(d["base"]), d["cutoff"])
    raise ValueError(f"unknown distribution dict type {kind!r}")
