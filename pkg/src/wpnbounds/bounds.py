"""Capacity inner and outer bounds for the Wiener phase noise channel.

All rates are in bits per channel use. ``power`` is the average input power
P (the additive noise has total variance 2, so the SNR is P/2) and
``sigma2`` is the per-symbol frequency noise variance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .entropy import SIGMA2_CROSS, wrapped_entropy_exact
from .special import EULER_GAMMA, DomainError, expint_e1

LOG2E = math.log2(math.e)
LOG2_2PI = math.log2(2 * math.pi)

#: Gap caps per regime (bits per channel use).
GAP_CAPS = {"high": 4.0, "intermediate": 6.65, "small": 1.21}

_Q_CROSS = math.exp(-SIGMA2_CROSS)
# uniform-phase correction 2 q/(1-q) log e evaluated at sigma2 = 2 pi / e
_HIGH_CORRECTION = 2 * _Q_CROSS / (1 - _Q_CROSS) * LOG2E


class DegenerateChannelError(ValueError):
    """Raised when a bound is requested for a channel with zero input power."""


@dataclass(frozen=True)
class ChannelParams:
    power: float
    sigma2: float

    def __post_init__(self):
        for name in ("power", "sigma2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {v}")


class Regime(str, enum.Enum):
    HIGH = "high"
    INTERMEDIATE = "intermediate"
    SMALL = "small"


def _params(params_or_power, sigma2=None):
    if isinstance(params_or_power, ChannelParams):
        return params_or_power
    return ChannelParams(float(params_or_power), float(sigma2))


def classify(params):
    """Frequency-noise regime; both boundaries belong to the intermediate regime."""
    p = _params(params)
    if p.power == 0:
        raise DegenerateChannelError("regime is undefined for zero input power")
    if p.sigma2 > SIGMA2_CROSS:
        return Regime.HIGH
    if p.sigma2 * p.power >= 1.0:
        return Regime.INTERMEDIATE
    return Regime.SMALL


def gap_cap(regime):
    return GAP_CAPS[Regime(regime).value]


# --------------------------------------------------------------------------
# Gaussian-input inner bound


def amplitude_lower(power):
    """Lower bound on I(|X|^2; |Y|^2) for X ~ CN(0, P). Not clipped at zero."""
    P = float(power)
    return (0.5 * math.log2(1 + P / 2) - 0.5 * math.log2(2 * math.pi / math.e)
            + 0.5 * math.log2((1 + P / 2) / (1 + P)))


def phase_lower(params):
    """Lower bound on the phase-modulation rate with Gaussian inputs."""
    p = _params(params)
    if p.power <= 0:
        raise DegenerateChannelError("phase rate needs power > 0")
    spread = 2 * math.pi * math.e * (p.sigma2 * p.power + 1) / p.power
    return LOG2_2PI - 0.5 * math.log2(spread) - 0.5 * EULER_GAMMA * LOG2E


def inner_gaussian(params):
    p = _params(params)
    if p.power <= 0:
        raise DegenerateChannelError("inner bound needs power > 0")
    P, s = p.power, p.sigma2
    inner = (1 + P / 2) / (1 + P) * P * math.exp(-EULER_GAMMA) / (s * P + 1)
    return 0.5 * math.log2(1 + P / 2) + 0.5 * math.log2(inner)


def achievable_rate(params):
    """Gaussian-input rate with the phase term floored at zero.

    The phase-modulation mutual information is nonnegative, so a negative
    lower bound on it can be replaced by 0. This is the rate the gap is
    measured from.
    """
    p = _params(params)
    return amplitude_lower(p.power) + max(0.0, phase_lower(p))


# --------------------------------------------------------------------------
# truncated-exponential inner bound


def expected_inv_power_trunc_exp(b, power):
    """E[1/V] for V = b + Exp(mean P/2 - b), i.e. (1/m) e^{b/m} E1(b/m)."""
    m = power / 2 - b
    if not b > 0:
        raise DomainError("b must be > 0")
    if not m > 0:
        raise DomainError("b must be < P/2")
    z = b / m
    if z > 700:
        # e^z E1(z) -> 1/z (1 - 1/z + 2/z^2 ...); avoid exp overflow
        return (1 / m) * (1 / z) * (1 - 1 / z + 2 / z**2 - 6 / z**3)
    return math.exp(z) * expint_e1(z) / m


def _rho(inv_mean, sigma2):
    # 1 - E|X|^-2 lower-bounds a nonnegative correlation; once it goes negative
    # squaring it is no longer a valid bound, so it is floored at zero.
    return 1 - np.maximum(0.0, 1 - inv_mean) ** 2 * math.exp(-sigma2 / 2)


def barletta_objective(b, nu, params, inv_mean=None):
    """Objective of the truncated-exponential bound in bits; -inf where infeasible.

    ``b`` and ``nu`` may be arrays (broadcast together) when ``inv_mean``
    is supplied with the same shape as ``b``.
    """
    p = _params(params)
    P = p.power
    b = np.asarray(b, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if inv_mean is None:
        inv_mean = np.vectorize(
            lambda bb: expected_inv_power_trunc_exp(bb, P) if 0 < bb < P / 2 else math.nan)(b)
    rho = _rho(inv_mean, p.sigma2)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = (P - 2 * b + 2 * nu) / (math.pi**2 * math.e * nu * rho)
        val = 0.5 * np.log2(arg) - ((2 + 1 / b) / nu + 3 * b / (P - 2 * b)) * LOG2E
    val = np.where((rho > 0) & (b > 0) & (b < P / 2) & (nu > 0), val, -np.inf)
    return val if val.ndim else float(val)


@dataclass(frozen=True)
class BarlettaOptimum:
    b: float
    nu: float
    rho: float
    value: float


def golden_max(f, lo, hi, rel_tol=1e-6, max_iter=200):
    """Golden-section search for the maximum of a unimodal f on [lo, hi]."""
    inv_phi = (math.sqrt(5) - 1) / 2
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(hi - lo) <= rel_tol * max(abs(lo), abs(hi), 1e-300):
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def barletta_grid(power, n=64):
    """Logarithmic (b, nu) search grid used by :func:`inner_barletta`."""
    b = np.geomspace(1e-3 * power, 0.49 * power, n)
    nu = np.geomspace(1e-3, 1e3, n)
    return b, nu


def inner_barletta(params, n_grid=64, rel_tol=1e-6):
    """Maximise the truncated-exponential bound over (b, nu).

    A deterministic log grid is scanned first; the best cell is then refined
    by alternating golden-section searches in log b and log nu, each confined
    to the neighbouring grid cells.
    """
    p = _params(params)
    P = p.power
    if P <= 0:
        raise DegenerateChannelError("truncated-exponential bound needs power > 0")
    b_grid, nu_grid = barletta_grid(P, n_grid)
    inv = np.array([expected_inv_power_trunc_exp(b, P) for b in b_grid])
    table = barletta_objective(b_grid[:, None], nu_grid[None, :], p, inv_mean=inv[:, None])
    i, j = np.unravel_index(np.argmax(table), table.shape)
    best = float(table[i, j])
    lb = math.log(b_grid[max(i - 1, 0)]), math.log(b_grid[min(i + 1, n_grid - 1)])
    ln = math.log(nu_grid[max(j - 1, 0)]), math.log(nu_grid[min(j + 1, n_grid - 1)])
    b, nu = float(b_grid[i]), float(nu_grid[j])

    def obj(bb, nn):
        return barletta_objective(bb, nn, p)

    for _ in range(50):
        prev = best
        lb_opt, vb = golden_max(lambda x: obj(math.exp(x), nu), *lb, rel_tol=rel_tol * 1e-2)
        if vb > best:
            b, best = math.exp(lb_opt), vb
        ln_opt, vn = golden_max(lambda x: obj(b, math.exp(x)), *ln, rel_tol=rel_tol * 1e-2)
        if vn > best:
            nu, best = math.exp(ln_opt), vn
        if abs(best - prev) <= rel_tol * max(abs(best), 1.0):
            break
    rho = float(_rho(expected_inv_power_trunc_exp(b, P), p.sigma2))
    return BarlettaOptimum(b=b, nu=nu, rho=rho, value=best)


# --------------------------------------------------------------------------
# outer bounds


def noncoherent_outer(power):
    """Amplitude-only rate cap 1/2 log(2 pi e (P + 2))."""
    if power < 0:
        raise DomainError("power must be >= 0")
    return 0.5 * math.log2(2 * math.pi * math.e * (power + 2))


def outer_memoryless(params):
    p = _params(params)
    coherent = math.log2(1 + p.power / 2)
    if p.sigma2 == 0:
        return coherent
    h = wrapped_entropy_exact(p.sigma2).bits
    return min(noncoherent_outer(p.power) + LOG2_2PI - h, coherent)


def outer_regime(params):
    """Three-regime outer bound; the constant log^2(e) is read as (log2 e)^2."""
    p = _params(params)
    half = 0.5 * math.log2(1 + p.power / 2)
    regime = classify(p)
    if regime is Regime.HIGH:
        return half + 0.5 * math.log2(4 * math.pi * math.e) + _HIGH_CORRECTION
    if regime is Regime.INTERMEDIATE:
        return half + 0.5 * math.log2(2 / p.sigma2) + LOG2_2PI + LOG2E**2
    return 2 * half


def outer_simple(params):
    p = _params(params)
    half = 0.5 * math.log2(1 + p.power / 2)
    regime = classify(p)
    if regime is Regime.HIGH:
        return half + 4.0
    if regime is Regime.INTERMEDIATE:
        return half - 0.5 * math.log2(p.sigma2) + 5.5
    return 2 * half


def gap_exact(params):
    """Outer minus inner bound as compared in the constant-gap argument.

    The outer side is the regime bound (the trivial log(1 + P/2) in the small
    variance regime); the inner side is :func:`achievable_rate`.
    """
    p = _params(params)
    if classify(p) is Regime.SMALL:
        outer = math.log2(1 + p.power / 2)
    else:
        outer = outer_regime(p)
    return outer - achievable_rate(p)


@dataclass(frozen=True)
class BoundReport:
    power: float
    sigma2: float
    regime: str
    inner_gaussian: float
    inner_barletta: float
    inner_barletta_clipped: float
    barletta_b: float
    barletta_nu: float
    barletta_rho: float
    amplitude_rate: float
    phase_rate: float
    achievable_rate: float
    outer_memoryless: float
    outer_regime: float
    outer_simple: float
    gap_exact: float
    gap_cap: float

    def as_dict(self):
        return asdict(self)


def report(params):
    """All bounds, the regime and the gap at one parameter point."""
    p = _params(params)
    if p.power == 0:
        zero = dict.fromkeys(
            [f for f in BoundReport.__dataclass_fields__ if f not in ("power", "sigma2", "regime")],
            0.0,
        )
        return BoundReport(power=0.0, sigma2=p.sigma2, regime=Regime.SMALL.value, **zero)
    regime = classify(p)
    amp = amplitude_lower(p.power)
    phase = phase_lower(p)
    bar = inner_barletta(p)
    rep = BoundReport(
        power=p.power,
        sigma2=p.sigma2,
        regime=regime.value,
        inner_gaussian=amp + phase,
        inner_barletta=bar.value,
        inner_barletta_clipped=max(0.0, bar.value),
        barletta_b=bar.b,
        barletta_nu=bar.nu,
        barletta_rho=bar.rho,
        amplitude_rate=amp,
        phase_rate=phase,
        achievable_rate=achievable_rate(p),
        outer_memoryless=outer_memoryless(p),
        outer_regime=outer_regime(p),
        outer_simple=outer_simple(p),
        gap_exact=gap_exact(p),
        gap_cap=gap_cap(regime),
    )
    if abs(rep.inner_gaussian - inner_gaussian(p)) > 1e-12:
        raise AssertionError("inner bound decomposition violated")
    return rep
