"""
Entropy of the wrapped phase and of the received power
======================================================

Reproduces the data behind the two entropy figures and plots them if
matplotlib is around. Figures land in ``notebooks/out``.
"""

# %%
import math
from pathlib import Path

import numpy as np

from wpnbounds import entropy as E
from wpnbounds.cli import fig1_crossing, fig1_rows, fig2_rows

OUT = Path(__file__).parent / "out"

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # the numbers below are the point, plots are a bonus
    plt = None

# %%
# Wrapped Gaussian: exact entropy against the lower bound and the two
# natural upper bounds (Gaussian entropy, uniform entropy log 2 pi).
rows = fig1_rows()
print("crossing of the two upper bounds:", fig1_crossing(rows), " 2 pi / e =", 2 * math.pi / math.e)
for r in rows[::100]:
    print({k: round(float(v), 5) for k, v in r.items()})

# %%
# The lower bound is very tight: the largest shortfall is a few hundredths
# of a bit, close to the crossing.
short = [(r["h_exact"] - r["h_lower"], r["sigma2"]) for r in rows]
print("largest exact - lower: %.4f bits at sigma2 = %.2f" % max(short))

# %%
if plt is not None:
    OUT.mkdir(exist_ok=True)
    s = np.array([r["sigma2"] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(s, [r["h_exact"] for r in rows], label="exact")
    ax.plot(s, [r["h_lower"] for r in rows], "--", label="lower bound")
    ax.plot(s, [r["gaussian_entropy"] for r in rows], ":", label="Gaussian")
    ax.axhline(math.log2(2 * math.pi), color="k", lw=0.8, label="log 2 pi")
    ax.set_ylim(-2, 3.2)
    ax.set_xlabel("sigma^2")
    ax.set_ylabel("bits")
    ax.legend()
    fig.savefig(OUT / "wrapped_entropy.png", dpi=120)

# %%
# Non-central chi-square with 2 degrees of freedom: exact entropy and the
# bracket. The bracket width tends to log2 3 for large lambda.
rows2 = fig2_rows()
for r in rows2[::20]:
    print({k: round(float(v), 4) for k, v in r.items()})
lam = 1e4
print("width at lambda = 1e4:", E.chi2_entropy_upper(lam).bits - E.chi2_entropy_lower(lam).bits,
      " log2 3 =", math.log2(3))

# %%
if plt is not None:
    lam = np.array([r["lambda"] for r in rows2])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lam, [r["h_exact"] for r in rows2], label="exact")
    ax.plot(lam[1:], [r["inner_bound"] for r in rows2[1:]], "--", label="lower")
    ax.plot(lam, [r["outer_bound"] for r in rows2], ":", label="upper")
    ax.set_xlabel("lambda")
    ax.set_ylabel("bits")
    ax.legend()
    fig.savefig(OUT / "chi2_entropy.png", dpi=120)

# %%
# The chi lower bound changes sign once, at lambda = r^2.
r = E.solve_r()
print("r =", r, " bound at r^2:", E.chi_entropy_lower(r * r).bits)
