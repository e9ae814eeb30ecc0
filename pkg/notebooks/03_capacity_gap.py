"""
Inner and outer bounds, and the gap between them
================================================

Sweeps the bounds over SNR and phase-noise variance and looks at where the
gap is largest.
"""

# %%
import math
from pathlib import Path

import numpy as np

from wpnbounds import bounds as B
from wpnbounds.cli import SweepSpec, gap_grid

OUT = Path(__file__).parent / "out"

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

# %%
# One point, every number.
rep = B.report(B.ChannelParams(10, 0.1))
for k, v in rep.as_dict().items():
    print(f"{k:>24}: {v}")

# %%
# Bounds against P for three phase-noise levels.
for s2 in (0.01, 0.1, 3.0):
    print(f"\nsigma2 = {s2}")
    print(f"{'P':>6} {'regime':>13} {'inner':>8} {'barletta':>9} {'outer':>8} {'gap':>7}")
    for P in (1, 5, 20, 100, 1000):
        r = B.report(B.ChannelParams(P, s2))
        print(f"{P:6g} {r.regime:>13} {r.inner_gaussian:8.3f} {r.inner_barletta:9.3f} "
              f"{min(r.outer_memoryless, r.outer_regime):8.3f} {r.gap_exact:7.3f}")

# %%
# Pre-log: doubling P buys half a bit at fixed sigma2, one bit when
# sigma2 shrinks like 1/P.
for P in (1e2, 1e4, 1e6):
    fixed = B.inner_gaussian(B.ChannelParams(2 * P, 0.1)) - B.inner_gaussian(B.ChannelParams(P, 0.1))
    along = (B.inner_gaussian(B.ChannelParams(2 * P, 1 / (2 * P)))
             - B.inner_gaussian(B.ChannelParams(P, 1 / P)))
    print(f"P = {P:g}: {fixed:.4f} bits (fixed sigma2), {along:.4f} bits (sigma2 = 1/P)")

# %%
# Gap over the usual domain. The worst cells sit on sigma2 P = 1, where
# the intermediate regime starts.
rows = gap_grid(SweepSpec())
top = max(rows, key=lambda r: r["gap"])
print("max gap %.4f at P = %.1f, 1/sigma2 = %.1f" % (top["gap"], top["power"], top["inv_sigma2"]))

# the intermediate gap keeps creeping up along sigma2 P = 1
for P in (10, 100, 1e4, 1e6):
    print(P, B.gap_exact(B.ChannelParams(P, 1 / P)))

# %%
if plt is not None:
    OUT.mkdir(exist_ok=True)
    spec = SweepSpec()
    Z = np.array([r["gap"] for r in rows]).reshape(spec.p_steps, spec.inv_sigma_steps)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    cs = ax.contourf(spec.inv_sigmas(), spec.powers(), Z, levels=20)
    fig.colorbar(cs, label="gap (bits)")
    ax.set_xlabel("1 / sigma^2")
    ax.set_ylabel("P")
    fig.savefig(OUT / "gap_contour.png", dpi=120)
