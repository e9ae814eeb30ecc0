"""
Simulating the channel
======================

The simulator is used only to check distributions the bounds rely on:
the conditional law of |Y|^2, the wrapped phase entropy, and E ln|X|^2.
"""

# %%
import math

import numpy as np

from wpnbounds import bounds as B
from wpnbounds import channel as ch
from wpnbounds import entropy as E

params = B.ChannelParams(10.0, 0.1)
traj = ch.simulate(params, ch.InputSampler("gaussian", power=10.0), 8, seed=1)
print(ch.trajectory_csv(traj, params))

# %%
# |Y|^2 given |X| = sqrt(5): non-central chi-square with lambda = 5.
c = ch.chi2_conditional_check(params, math.sqrt(5), 10**6, seed=0)
print("mean", c.mean.value, "+-", c.mean.std_error, "(expect 7)")
print("var ", c.var.value, "+-", c.var.std_error, "(expect 24)")
print("total variation vs density:", c.tv_distance)

# %%
# Histogram entropy of the wrapped increment against the exact value.
for s2 in (0.1, 0.5, 1.0, 4.0, 100.0):
    est = ch.empirical_entropy_wrapped(s2, 10**6, seed=0)
    print(f"sigma2 = {s2:6g}: {est.value:.4f} +- {est.std_error:.4f}   exact {E.wrapped_entropy_exact(s2).bits:.4f}")

# %%
# E ln|X|^2 for complex Gaussian input is ln P - gamma.
for P in (0.5, 1.0, 10.0):
    est = ch.empirical_elog_power(P, 10**6, seed=0)
    print(P, est.value, ch.expected_elog_power(P))

# %%
# The amplitude channel |X|^2 -> |Y|^2 on its own: mutual information by
# quadrature, between its lower bound and the non-coherent outer bound.
for P in (1, 10, 50):
    print(P, B.amplitude_lower(P), ch.amplitude_mi_estimate(P), B.noncoherent_outer(P))

# %%
# Random walk of the phase: variance grows linearly in time.
finals = np.array([ch.simulate(B.ChannelParams(0.0, 0.05), ch.InputSampler("constant"),
                               10**4, seed=9, stream_id=k).theta[-1] for k in range(300)])
print("var(theta_N) / N =", finals.var() / 10**4, "(sigma2 = 0.05)")
