"""Invariant suites run by ``wpnbounds verify``.

Each check returns a :class:`CheckResult`; a suite is just an ordered list
of them. ``quick`` uses coarse grids and 1e5 Monte Carlo samples, ``full``
dense grids and 1e6 samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special as sps

from . import bounds, channel, entropy
from .special import bessel_i0, expint_ei, i0_upper_corollary, i0_upper_lemma


# numerical slack (nats) for entropy sandwiches: at small sigma2 the exact
# entropy and both bounds coincide to within exp(-pi^2 / (2 sigma2))
SANDWICH_SLACK = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _levels(level):
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    full = level == "full"
    return {
        "n_mc": 10**6 if full else 10**5,
        "bessel_pts": 200 if full else 40,
        "sigma_pts": 600 if full else 60,
        "lambda_pts": 100 if full else 20,
        "order_P": [0.5, 1, 2, 5, 10, 20, 50, 100] if full else [0.5, 2, 10, 100],
        "order_s": 40 if full else 8,
        "gap_grid": 100 if full else 30,
        "mi_P": [1, 2, 5, 10, 50] if full else [1, 10],
    }


def check_special(cfg):
    out = []
    xs = np.geomspace(1e-4, 100, cfg["bessel_pts"])
    i0 = bessel_i0(xs)
    ok = bool(np.all(i0 <= i0_upper_lemma(xs)) and np.all(i0 <= i0_upper_corollary(xs)))
    ok &= abs(i0_upper_lemma(1e-4) - 1) < 0.01
    ok &= bool(np.all(2 * np.exp(-xs) * (1 - np.exp(-xs)) < np.sqrt(xs)))
    out.append(CheckResult("bessel_bounds", ok, f"{xs.size} points on [1e-4, 100]"))

    worst = 0.0
    for x in (0.5, 3.0, 10.0, 40.0):
        ref, _ = integrate.quad(lambda t: math.exp(x * (math.cos(t) - 1)), 0, math.pi,
                                epsabs=0, epsrel=1e-13)
        worst = max(worst, abs(bessel_i0(x) * math.exp(-x) / (ref / math.pi) - 1))
    for x in (0.2, 1.0, 5.0, 30.0):
        worst = max(worst, abs(expint_ei(-x) / sps.expi(-x) - 1))
    out.append(CheckResult("special_vs_oracle", worst < 1e-8, f"max rel err {worst:.3g}"))
    return out


def check_entropy(cfg):
    out = []
    s2 = np.linspace(6 / cfg["sigma_pts"], 6, cfg["sigma_pts"])
    viol = 0
    for s in s2:
        lo = entropy.wrapped_entropy_lower(s).nats
        ex = entropy.wrapped_entropy_exact(s).nats
        up = entropy.wrapped_entropy_upper(s).nats
        viol += not (lo <= ex + SANDWICH_SLACK and ex <= up + SANDWICH_SLACK)
    out.append(CheckResult("wrapped_sandwich", viol == 0, f"{viol} violations of {s2.size}"))

    lams = np.linspace(10 / cfg["lambda_pts"], 10, cfg["lambda_pts"])
    viol = 0
    for lam in lams:
        ex = entropy.chi2_entropy_exact(lam).nats
        viol += not (entropy.chi2_entropy_lower(lam).nats <= ex <= entropy.chi2_entropy_upper(lam).nats)
    out.append(CheckResult("chi2_bracket", viol == 0, f"{viol} violations of {lams.size}"))

    r = entropy.solve_r()
    out.append(CheckResult("root_r", abs(r - 0.937) <= 1e-3, f"r = {r:.6f}"))
    return out


def check_bounds(cfg):
    out = []
    worst_order, worst_decomp = -math.inf, 0.0
    for P in cfg["order_P"]:
        for s in np.geomspace(1e-4, 10, cfg["order_s"]):
            rep = bounds.report(bounds.ChannelParams(P, s))
            lo = max(0.0, rep.inner_gaussian, rep.inner_barletta)
            hi = min(rep.outer_memoryless, rep.outer_regime, rep.outer_simple)
            worst_order = max(worst_order, lo - hi)
            worst_decomp = max(worst_decomp, abs(rep.amplitude_rate + rep.phase_rate
                                                 - bounds.inner_gaussian(bounds.ChannelParams(P, s))))
    out.append(CheckResult("bound_ordering", worst_order <= 1e-9,
                           f"max(inner) - min(outer) = {worst_order:.4g}"))
    out.append(CheckResult("inner_decomposition", worst_decomp <= 1e-12, f"{worst_decomp:.3g}"))

    n = cfg["gap_grid"]
    grids = {
        "intermediate": [(P, 1 / i) for P in np.linspace(50 / n, 50, n)
                         for i in np.linspace(1, 100, n)],
        "high": [(P, s) for P in np.linspace(100 / n, 100, n)
                 for s in np.geomspace(entropy.SIGMA2_CROSS * 1.0001, 100, n)],
        "small": [(P, s) for P in np.linspace(2, 100, n)
                  for s in np.linspace(0, 1 / P, n, endpoint=False)],
    }
    fails = []
    for name, pts in grids.items():
        for P, s in pts:
            p = bounds.ChannelParams(P, s)
            g = bounds.gap_exact(p)
            if g > bounds.gap_cap(bounds.classify(p)) + 1e-9:
                fails.append((name, P, s, g))
    out.append(CheckResult("gap_caps", not fails,
                           f"{len(fails)} cells above cap" + (f", first {fails[0]}" if fails else "")))
    g = bounds.gap_exact(bounds.ChannelParams(2.0, 0.5 - 1e-6))
    out.append(CheckResult("small_regime_tightness", abs(g - 1.209) <= 0.002, f"gap = {g:.6f}"))
    return out


def check_channel(cfg, seed):
    out = []
    n = cfg["n_mc"]
    params = bounds.ChannelParams(10.0, 0.1)
    ok, detail = True, []
    for k, xm in enumerate((0.0, math.sqrt(5))):
        c = channel.chi2_conditional_check(params, xm, n, seed + k)
        ok &= c.passed
        detail.append(f"lam={c.lam:.3g} mean={c.mean.value:.5g} var={c.var.value:.5g}")
    out.append(CheckResult("chi2_conditional_moments", ok, "; ".join(detail)))

    ok, detail = True, []
    for k, s in enumerate((0.5, 1.0, 4.0)):
        est = channel.empirical_entropy_wrapped(s, n, seed, stream_id=10 + k)
        ref = entropy.wrapped_entropy_exact(s).bits
        ok &= abs(est.value - ref) <= 0.02
        detail.append(f"s2={s}: {est.value:.5f} vs {ref:.5f}")
    out.append(CheckResult("wrapped_entropy_mc", ok, "; ".join(detail)))

    ok, detail = True, []
    for k, P in enumerate((1.0, 10.0)):
        est = channel.empirical_elog_power(P, n, seed, stream_id=20 + k)
        ok &= est.within(channel.expected_elog_power(P), 4.0)
        detail.append(f"P={P}: {est.value:.5f}")
    out.append(CheckResult("elog_power_mc", ok, "; ".join(detail)))

    mean, var = channel.wiener_increment_check(0.3, n, seed)
    ok = abs(mean.value) < 4 * math.sqrt(0.3 / n) and abs(var.value - 0.3) / 0.3 < 0.05
    out.append(CheckResult("wiener_increments", ok, f"mean={mean.value:.3g} var={var.value:.5g}"))

    ok, detail = True, []
    for P in cfg["mi_P"]:
        mi = channel.amplitude_mi_estimate(P)
        lo, hi = bounds.amplitude_lower(P), bounds.noncoherent_outer(P)
        ok &= lo - 1e-4 <= mi <= hi + 1e-4
        detail.append(f"P={P}: {lo:.4f} <= {mi:.4f} <= {hi:.4f}")
    out.append(CheckResult("amplitude_mi_chain", ok, "; ".join(detail)))
    return out


def run_all(level="quick", seed=0):
    cfg = _levels(level)
    results = []
    results += check_special(cfg)
    results += check_entropy(cfg)
    results += check_bounds(cfg)
    results += check_channel(cfg, seed)
    return results
