"""End-to-end robust auction construction.

Two entry points:

  * population_robust_myerson: corrupted distributions are known exactly;
    each bidder's CDF is replaced by the smallest member of its KS ball
    (pessimal but shape-constrained) and Myerson's auction is built on top.

  * robust_empirical_myerson: only samples are available; per-bidder
    empirical quantiles are shaded down by a Bernstein-style confidence term
    plus the corruption budget, then (envelope path) pushed through the link
    convexification to obtain a valid shape-constrained CDF.

The no-envelope ablation keeps the confidence shading but skips both the
corruption term and the convexification, selling at the discrete revenue
argmax of the shaded empirical CDF.  That is the classical empirical Myerson
reserve, and it is exactly the construction the tail-spike corruption blows
up, so it is kept runnable on purpose (single bidder only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ball import minimal_in_ks_ball
from .distributions import ProductDist, StepCDF, empirical_from_samples
from .myerson import Mechanism, Outcome


@dataclass(frozen=True)
class ShadingParams:
    m: int
    n: int
    delta: float
    alpha: tuple

    def __post_init__(self):
        if int(self.m) < 1:
            raise ValueError("m must be at least 1")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if len(self.alpha) != self.n:
            raise ValueError("need one alpha per bidder")
        if any(not 0.0 <= a < 1.0 for a in self.alpha):
            raise ValueError("alpha entries must lie in [0, 1)")


def _shaded_survivals(E: StepCDF, m, n, delta, alpha_i, include_alpha=True):
    """Apply the quantile shading formula at every atom of E.

    q_hat(v) = max{0, q(v) - sqrt(2 q (1-q) L / m) - 4 L / m - alpha_i} with
    L = ln(2 m n / delta), and q_hat(0) = 1.  Atoms whose shaded survival
    reaches 0 are truncated away; the last atom with positive shaded survival
    closes the support.  Returns (values, shaded survivals) with a 0 atom
    prepended, shaded survivals non-increasing by construction.
    """
    xs = E.values
    q = 1.0 - np.asarray(E.cdf_left(xs))        # Pr[V >= x], atom included
    L = np.log(2.0 * m * n / delta)
    shaved = q - np.sqrt(2.0 * q * (1.0 - q) * L / m) - 4.0 * L / m
    if include_alpha:
        shaved = shaved - alpha_i
    q_hat = np.maximum(shaved, 0.0)
    q_hat[xs == 0.0] = 1.0
    q_hat = np.minimum.accumulate(q_hat)
    if xs[0] > 0.0:
        xs = np.concatenate(([0.0], xs))
        q_hat = np.concatenate(([1.0], q_hat))
    return xs, q_hat


def _step_from_survivals(xs, q_hat) -> StepCDF:
    masses = np.append(-np.diff(q_hat), q_hat[-1])
    keep = masses > 0
    if not np.any(keep):
        return StepCDF([0.0], [1.0])
    return StepCDF(xs[keep], masses[keep])


def shade_quantiles(E: StepCDF, params: ShadingParams, bidder_index: int) -> StepCDF:
    """Shaded pessimistic version of an empirical CDF (see _shaded_survivals)."""
    xs, q_hat = _shaded_survivals(E, params.m, params.n, params.delta,
                                  params.alpha[bidder_index])
    return _step_from_survivals(xs, q_hat)


@dataclass
class StepMechanism:
    """Single-bidder posted price at the discrete revenue argmax of a StepCDF.

    This is the no-envelope ablation's mechanism: the reserve maximizes
    x * Pr[V >= x] over the atoms (smallest maximizer on ties), which is the
    discrete-virtual-value optimum for one bidder.
    """

    kind: str
    bidder: StepCDF
    alpha: list | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        xs = self.bidder.values
        revs = xs * (1.0 - np.asarray(self.bidder.cdf_left(xs)))
        self._reserve = float(xs[int(np.argmax(revs))])

    @property
    def n(self) -> int:
        return 1

    @property
    def reserves(self) -> list:
        return [self._reserve]

    def payments_batch(self, profiles):
        B = np.asarray(profiles, dtype=float)
        if B.ndim != 2 or B.shape[1] != 1:
            raise ValueError("profile matrix arity mismatch")
        sold = B[:, 0] >= self._reserve
        winners = np.where(sold, 0, -1)
        payments = np.where(sold, self._reserve, 0.0)
        return winners, payments

    def run(self, bids) -> Outcome:
        bids = np.asarray(bids, dtype=float)
        if bids.shape != (1,):
            raise ValueError("arity mismatch")
        if np.any(bids < 0):
            raise ValueError("bids must be nonnegative")
        sold = bool(bids[0] >= self._reserve)
        return Outcome(winner=0 if sold else None,
                       payment=self._reserve if sold else 0.0)

    def to_dict(self) -> dict:
        return {"n": 1, "kind": self.kind,
                "bidders": [dict(self.bidder.to_dict(), reserve=self._reserve)],
                "alpha": self.alpha, "provenance": self.provenance}


def mechanism_from_dict(d: dict):
    """Load either mechanism flavor from its JSON dict."""
    types = {b.get("type") for b in d["bidders"]}
    if types == {"step"}:
        if d["n"] != 1 or len(d["bidders"]) != 1:
            raise ValueError("step mechanisms are single-bidder")
        b = d["bidders"][0]
        return StepMechanism(kind=d["kind"],
                             bidder=StepCDF(b["values"], b["masses"]),
                             alpha=d.get("alpha"),
                             provenance=d.get("provenance") or {})
    return Mechanism.from_dict(d)


def population_robust_myerson(f_tilde: ProductDist, alpha, kind: str) -> Mechanism:
    """Myerson auction on the minimal KS-ball member of each reported CDF."""
    alphas = [float(a) for a in alpha]
    if len(alphas) != f_tilde.n:
        raise ValueError("need one alpha per bidder")
    if any(not 0.0 <= a < 1.0 for a in alphas):
        raise ValueError("alpha entries must lie in [0, 1)")
    bidders = [minimal_in_ks_ball(dist, a, kind)
               for dist, a in zip(f_tilde.components, alphas)]
    return Mechanism(kind=kind, bidders=bidders, alpha=alphas,
                     provenance={"algorithm": "population"})


def robust_empirical_myerson(samples, alpha, delta: float, kind: str,
                             with_envelope: bool = True):
    """Learn a mechanism from per-bidder sample lists.

    samples: sequence of n arrays, all of the same length m.
    """
    cols = [np.asarray(s, dtype=float) for s in samples]
    if not cols or any(c.size == 0 for c in cols):
        raise ValueError("empty samples")
    m = cols[0].size
    if any(c.size != m for c in cols):
        raise ValueError("inconsistent m across bidders")
    n = len(cols)
    params = ShadingParams(m=m, n=n, delta=float(delta), alpha=tuple(alpha))
    prov = {"algorithm": "empirical", "m": m, "delta": float(delta),
            "with_envelope": bool(with_envelope)}
    if not with_envelope:
        if n != 1:
            raise ValueError("the no-envelope ablation is single-bidder only")
        E = empirical_from_samples(cols[0])
        xs, q_hat = _shaded_survivals(E, m, n, params.delta, 0.0,
                                      include_alpha=False)
        shaded = _step_from_survivals(xs, q_hat)
        return StepMechanism(kind=kind, bidder=shaded,
                             alpha=list(params.alpha), provenance=prov)
    bidders = []
    for i, col in enumerate(cols):
        shaded = shade_quantiles(empirical_from_samples(col), params, i)
        bidders.append(minimal_in_ks_ball(shaded, 0.0, kind))
    return Mechanism(kind=kind, bidders=bidders, alpha=list(params.alpha),
                     provenance=prov)
