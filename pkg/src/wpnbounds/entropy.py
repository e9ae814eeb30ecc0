"""Differential entropies of the wrapped Gaussian and non-central chi-square laws.

Every routine computes in nats and hands back an :class:`EntropyValue`
carrying both nats and bits, so the base conversion happens exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy.special import logsumexp

from .special import (
    ConvergenceError,
    DomainError,
    DEFAULT_ACCURACY,
    bessel_i0e,
    erf,
    expint_ei,
    log_euler_phi,
)

LN2 = math.log(2.0)
LOG_2PI = math.log(2 * math.pi)
#: Crossing point of the Gaussian and uniform entropies, 2*pi/e.
SIGMA2_CROSS = 2 * math.pi / math.e

# Below this variance the theta series is not attempted at all.
_SERIES_MIN_SIGMA2 = 1e-6
# Below this, -log phi(q) ~ pi^2/(6 sigma2) cancels against the alternating
# sum and the series loses digits; the image-sum quadrature is used instead.
_SERIES_SWITCH_SIGMA2 = 0.1


@dataclass(frozen=True)
class EntropyValue:
    nats: float
    bits: float

    @classmethod
    def from_nats(cls, nats):
        nats = float(nats)
        return cls(nats=nats, bits=nats / LN2)


@dataclass(frozen=True)
class WrappedGaussian:
    """Gaussian phase increment of variance ``sigma2`` reduced to [-pi, pi)."""

    sigma2: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise DomainError(f"wrapped Gaussian needs sigma2 > 0, got {self.sigma2}")

    @property
    def q(self):
        return math.exp(-self.sigma2)


@dataclass(frozen=True)
class NoncentralChiSq2:
    """Non-central chi-square with two degrees of freedom."""

    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError(f"non-centrality must be >= 0, got {self.lam}")

    @property
    def mean(self):
        return 2.0 + self.lam

    @property
    def var(self):
        return 4.0 * (1.0 + self.lam)


def _as_wg(wg):
    return wg if isinstance(wg, WrappedGaussian) else WrappedGaussian(float(wg))


def _as_chi(d):
    return d if isinstance(d, NoncentralChiSq2) else NoncentralChiSq2(float(d))


# --------------------------------------------------------------------------
# wrapped Gaussian


def _n_images(sigma2):
    sigma = math.sqrt(sigma2)
    k = math.ceil(4 * sigma / (2 * math.pi)) + 2
    return max(k, math.ceil((math.pi + 9 * sigma) / (2 * math.pi)) + 1)


def wrapped_logpdf_images(theta, sigma2, n_images=None):
    """log density as a sum of Gaussian images theta + 2 pi k, |k| <= n_images."""
    k_max = _n_images(sigma2) if n_images is None else n_images
    theta = np.asarray(theta, dtype=float)
    k = np.arange(-k_max, k_max + 1)
    shifted = theta[..., None] + 2 * math.pi * k
    lp = logsumexp(-(shifted**2) / (2 * sigma2), axis=-1)
    return lp - 0.5 * math.log(2 * math.pi * sigma2)


def wrapped_logpdf_jacobi(theta, sigma2, acc=DEFAULT_ACCURACY):
    """log density from the Jacobi triple product with q = exp(-sigma2)."""
    theta = np.asarray(theta, dtype=float)
    q = math.exp(-sigma2)
    log_phi = log_euler_phi(q, acc)
    # factors (1 + q^{n-1/2} e^{ix})(1 + q^{n-1/2} e^{-ix}) = 1 + 2a cos x + a^2
    n_max = math.ceil(40.0 / sigma2) + 1
    a = np.exp(-(np.arange(1, n_max + 1) - 0.5) * sigma2)
    cos = np.cos(theta)[..., None]
    lp = np.sum(np.log1p(2 * a * cos + a * a), axis=-1)
    return lp + log_phi - LOG_2PI


def wrapped_pdf(theta, wg):
    """Wrapped Gaussian density on [-pi, pi).

    Uses the image sum for sigma2 <= 1 and the Jacobi product above, where
    each converges fastest.
    """
    wg = _as_wg(wg)
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < -math.pi) or np.any(theta >= math.pi):
        raise DomainError("theta must lie in [-pi, pi)")
    if wg.sigma2 <= 1.0:
        lp = wrapped_logpdf_images(theta, wg.sigma2)
    else:
        lp = wrapped_logpdf_jacobi(theta, wg.sigma2)
    out = np.exp(lp)
    return out if out.ndim else float(out)


def wrapped_entropy_series(sigma2, acc=DEFAULT_ACCURACY):
    """Entropy in nats from the theta-function series (may raise ConvergenceError)."""
    if sigma2 < _SERIES_MIN_SIGMA2:
        raise ConvergenceError(f"series not attempted below sigma2={_SERIES_MIN_SIGMA2}")
    q = math.exp(-sigma2)
    total = 0.0
    for j in range(1, 10**6):
        log_mag = -sigma2 * j * (j + 1) / 2 - math.log(j) - math.log(-math.expm1(-sigma2 * j))
        mag = math.exp(log_mag)
        total += mag if j % 2 == 0 else -mag
        if mag < acc.abs_tol * 1e-3:
            break
    else:
        raise ConvergenceError(f"wrapped entropy series stalled at sigma2={sigma2}")
    return -log_euler_phi(q, acc) + LOG_2PI + 2 * total


def wrapped_entropy_quad(sigma2):
    """Entropy in nats by quadrature of -p log p with the image-sum density."""

    def integrand(t):
        lp = float(wrapped_logpdf_images(t, sigma2))
        return -math.exp(lp) * lp

    # beyond +-14 sigma the density is below exp(-98)
    width = min(math.pi, 14 * math.sqrt(sigma2))
    val, err = integrate.quad(integrand, -width, width, points=[0.0], limit=400,
                              epsabs=1e-13, epsrel=1e-12)
    if err > 1e-9:
        raise ConvergenceError(f"wrapped entropy quadrature error {err:g} at sigma2={sigma2}")
    return val


def wrapped_entropy_exact(wg):
    """Entropy of the wrapped Gaussian: theta series, or quadrature at small sigma2."""
    wg = _as_wg(wg)
    if wg.sigma2 < _SERIES_SWITCH_SIGMA2:
        return EntropyValue.from_nats(wrapped_entropy_quad(wg.sigma2))
    try:
        nats = wrapped_entropy_series(wg.sigma2)
    except ConvergenceError:
        nats = wrapped_entropy_quad(wg.sigma2)
    return EntropyValue.from_nats(nats)


def g_of_sigma(sigma2):
    """Correction term (nats) in the small-variance wrapped entropy lower bound."""
    if not (0 < sigma2 <= SIGMA2_CROSS):
        raise DomainError(f"g is defined for 0 < sigma2 <= 2 pi / e, got {sigma2}")
    s = sigma2
    tail = math.exp(-(math.pi**2) / (2 * s)) / math.sqrt(2 * math.pi * s)
    bracket = math.pi + 4 * (math.pi + s / math.pi) / (-math.expm1(-(math.pi**2) / s))
    return 0.5 * erf(math.pi / math.sqrt(2 * s)) - tail * bracket - 0.5


def wrapped_entropy_lower(wg):
    wg = _as_wg(wg)
    s = wg.sigma2
    if s > SIGMA2_CROSS:
        q = wg.q
        nats = LOG_2PI - 2 * q / (1 - q)
    else:
        nats = 0.5 * math.log(2 * math.pi * math.e * s) + g_of_sigma(s)
    return EntropyValue.from_nats(nats)


def wrapped_entropy_upper(wg):
    wg = _as_wg(wg)
    gauss = 0.5 * math.log(2 * math.pi * math.e * wg.sigma2)
    return EntropyValue.from_nats(min(gauss, LOG_2PI))


# --------------------------------------------------------------------------
# non-central chi-square, two degrees of freedom


def chi2_logpdf(t, d):
    d = _as_chi(d)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("chi-square density needs t >= 0")
    s = np.sqrt(d.lam * t)
    out = -LN2 - 0.5 * (t + d.lam) + s + np.log(bessel_i0e(s))
    return out if np.ndim(out) else float(out)


def chi2_pdf(t, d):
    """Density 1/2 exp(-(t + lam)/2) I0(sqrt(lam t))."""
    out = np.exp(chi2_logpdf(t, d))
    return out if np.ndim(out) else float(out)


def chi2_support(d, n_sd=40.0):
    """Integration window [lo, hi]: mean +- n_sd standard deviations, clipped at 0."""
    d = _as_chi(d)
    sd = math.sqrt(d.var)
    return max(0.0, d.mean - n_sd * sd), d.mean + n_sd * sd


def _chi2_quad(func, d):
    lo, hi = chi2_support(d)
    pts = [x for x in (d.lam, d.mean) if lo < x < hi]
    val, err, info = integrate.quad(func, lo, hi, points=pts or None, limit=500,
                                    epsabs=1e-12, epsrel=1e-11, full_output=1)[:3]
    if err > 1e-7 * max(1.0, abs(val)):
        raise ConvergenceError(
            f"chi-square quadrature: lam={d.lam} value={val} abserr={err} "
            f"evals={info['neval']}"
        )
    return val


def chi2_entropy_exact(d):
    d = _as_chi(d)

    def integrand(t):
        lp = chi2_logpdf(t, d)
        return -math.exp(lp) * lp

    return EntropyValue.from_nats(_chi2_quad(integrand, d))


def chi2_entropy_lower(d):
    d = _as_chi(d)
    if d.lam == 0:
        return EntropyValue(-math.inf, -math.inf)
    return EntropyValue.from_nats(0.5 * math.log(8 * math.pi * math.e * d.lam) - math.log(3))


def chi2_entropy_upper(d):
    d = _as_chi(d)
    return EntropyValue.from_nats(0.5 * math.log(8 * math.pi * math.e * (1 + d.lam)))


def expected_log_chi2(d):
    """E[ln T] for T ~ chi2_2(lam), lam > 0 (nats)."""
    d = _as_chi(d)
    if d.lam <= 0:
        raise DomainError("E[log T] closed form needs lam > 0")
    return math.log(d.lam) - expint_ei(-d.lam / 2)


def chi_entropy_lower(lam):
    """Lower bound on the entropy of the chi variable sqrt(T), T ~ chi2_2(lam)."""
    if not (math.isfinite(lam) and lam > 0):
        raise DomainError("chi entropy bound needs lam > 0")
    nats = (0.5 * math.log(8 * math.pi * math.e) - math.log(6)
            + 0.5 * expint_ei(-lam / 2))
    return EntropyValue.from_nats(nats)


def solve_r(lo=0.1, hi=5.0, xtol=1e-6):
    """Amplitude r at which the chi entropy lower bound crosses zero (about 0.937)."""
    f = lambda r: chi_entropy_lower(r * r).nats  # noqa: E731
    if f(lo) * f(hi) > 0:
        raise ConvergenceError(f"no sign change of the chi bound on [{lo}, {hi}]")
    return optimize.bisect(f, lo, hi, xtol=xtol)
