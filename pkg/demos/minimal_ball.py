"""How the minimal member of a KS ball is built, and what it costs.

Starting from an exponential truth, we grow the corruption radius alpha and
watch the pessimistic stand-in distribution (the MHR distribution dominated
by every MHR member of the ball) get more conservative: the support shrinks,
the reserve drifts, and the guaranteed revenue decays smoothly.  The same
construction run on a raw empirical CDF shows how a step function gets
snapped into the MHR class.
"""

import numpy as np

from robust_auctions import (Exponential, empirical_from_samples,
                             ks_distance, minimal_in_ks_ball, opt_single)

truth = Exponential(1.0)
_, opt = opt_single(truth)
print("truth: Exponential(1), reserve 1, OPT %.6f" % opt)
print()
print("alpha   ks(G*, F)   support top   reserve   revenue   ratio")
for alpha in [0.0, 0.01, 0.02, 0.05, 0.1, 0.2]:
    g = minimal_in_ks_ball(truth, alpha, "mhr")
    reserve, rev = opt_single(g)
    # revenue the pessimistic mechanism actually earns on the truth
    earned = reserve * (1.0 - truth.cdf_left(reserve))
    print("%5.2f   %9.6f   %11.4f   %7.4f   %7.4f   %.4f"
          % (alpha, ks_distance(g, truth), g.support_top(), reserve,
             earned, earned / opt))

print()
print("At alpha = 0 only the quantile-grid discretization separates the")
print("stand-in from the truth (about 1/2048, visible in the ks column),")
print("and the reserve and revenue match exactly.  Each wider ball caps")
print("the CDF at min(F + alpha, 1), truncates where the cap hits 1, and")
print("takes the convex envelope in log-survival space, so the output is")
print("again MHR and is dominated by everything the adversary could have")
print("meant.")
print()

rng = np.random.default_rng(7)
samples = truth.sample(400, 12)
emp = empirical_from_samples(samples)
snapped = minimal_in_ks_ball(emp, 0.05, "mhr")
r_emp, _ = opt_single(emp)
r_snap, _ = opt_single(snapped)
print("empirical CDF from 400 draws: argmax reserve %.4f" % r_emp)
print("snapped into the 0.05-ball:   reserve %.4f, %d link knots"
      % (r_snap, snapped.xs.size))
print("earned on the truth: %.4f (empirical) vs %.4f (snapped)"
      % (r_emp * (1 - truth.cdf_left(r_emp)),
         r_snap * (1 - truth.cdf_left(r_snap))))
