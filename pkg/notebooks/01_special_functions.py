"""
Special functions behind the bounds
===================================

A walk through the small special-function kernel: the exponential
integral, the modified Bessel function I0 and its two closed-form upper
bounds, and the Euler function phi(q).
"""

# %%
import math

import numpy as np
from scipy import special as sps

from wpnbounds import special

# Ei(-x) for a few x, next to scipy's value
for x in (0.1, 1.0, 5.0, 30.0):
    print(f"Ei(-{x:g}) = {special.expint_ei(-x): .15g}   scipy: {sps.expi(-x): .15g}")

# %%
# I0 grows like e^x / sqrt(2 pi x). Both bounds sit above it; the first one
# is tight near the origin, the second has a pole there.
xs = np.geomspace(1e-3, 50, 9)
print(f"{'x':>8} {'I0':>12} {'lemma':>12} {'corollary':>12}")
for x in xs:
    print(f"{x:8.3g} {special.bessel_i0(x):12.6g} "
          f"{special.i0_upper_lemma(x):12.6g} {special.i0_upper_corollary(x):12.6g}")

# %%
# How loose are the bounds? Ratio to I0 on a log grid.
xs = np.geomspace(1e-4, 100, 200)
ratio_l = special.i0_upper_lemma(xs) / special.bessel_i0(xs)
ratio_c = special.i0_upper_corollary(xs) / special.bessel_i0(xs)
print("lemma ratio range:", ratio_l.min(), ratio_l.max())
print("corollary ratio at x = 100:", ratio_c[-1], "(limit (sqrt(pi)+1) sqrt(2 pi)/4 =",
      (math.sqrt(math.pi) + 1) * math.sqrt(2 * math.pi) / 4, ")")

# %%
# phi(q) = prod (1 - q^n). With q = exp(-sigma2) it drives the wrapped
# Gaussian entropy series; near q = 1 the product needs many factors.
for s2 in (6.0, 1.0, 0.1, 0.01):
    q = math.exp(-s2)
    print(f"sigma2 = {s2:5g}  q = {q:.6f}  log phi(q) = {special.log_euler_phi(q):.10g}")
