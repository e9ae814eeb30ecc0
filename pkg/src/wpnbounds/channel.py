"""Seeded simulation of the Wiener phase noise channel and empirical checks.

Random streams come from numpy's counter-based Philox generator keyed by
``(seed, stream_id)``: the same key always reproduces the same draws, and
distinct stream ids give independent streams.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from .bounds import ChannelParams
from .entropy import LN2, chi2_entropy_exact, chi2_pdf
from .special import EULER_GAMMA, DomainError

GENERATOR_NAME = "numpy.random.Philox(4x64, SeedSequence(seed, spawn_key=(stream_id,)))"


def make_rng(seed, stream_id=0):
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class InputSampler:
    """Input law. ``kind`` is ``"gaussian"`` (CN(0, P)), ``"trunc_exp"``
    (|X|^2 = b + Exp(mean P/2 - b)) or ``"constant"`` (|X| = magnitude);
    the phase is uniform in every case."""

    kind: str
    power: float = 0.0
    b: float = 0.0
    magnitude: float = 0.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "trunc_exp", "constant"):
            raise DomainError(f"unknown sampler kind {self.kind!r}")
        if self.kind == "trunc_exp" and not (0 < self.b < self.power / 2):
            raise DomainError("truncated exponential needs 0 < b < P/2")

    def sample(self, rng, n):
        if self.kind == "gaussian":
            scale = math.sqrt(self.power / 2)
            return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        if self.kind == "trunc_exp":
            mag2 = self.b + rng.exponential(self.power / 2 - self.b, n)
        else:
            mag2 = np.full(n, self.magnitude**2)
        phase = rng.uniform(0.0, 2 * math.pi, n)
        return np.sqrt(mag2) * np.exp(1j * phase)


@dataclass(frozen=True)
class Trajectory:
    theta: np.ndarray  # Theta_0 .. Theta_N, unwrapped
    x: np.ndarray
    w: np.ndarray
    y: np.ndarray
    seed: int
    stream_id: int
    n: int


def simulate(params, sampler, n, seed, stream_id=0):
    """One block of N channel uses: Y_i = X_i exp(j Theta_i) + W_i."""
    if n < 1:
        raise DomainError("block length must be >= 1")
    rng = make_rng(seed, stream_id)
    x = sampler.sample(rng, n)
    increments = rng.normal(0.0, math.sqrt(params.sigma2), n)
    theta = np.concatenate(([0.0], np.cumsum(increments)))
    # W ~ CN(0, 2): unit variance per real component
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = x * np.exp(1j * theta[1:]) + w
    return Trajectory(theta=theta, x=x, w=w, y=y, seed=int(seed), stream_id=int(stream_id), n=n)


def trajectory_csv(traj, params):
    """Text dump of a trajectory; the header records seed, generator and params."""
    buf = io.StringIO()
    buf.write(f"# seed: {traj.seed}\n# stream_id: {traj.stream_id}\n")
    buf.write(f"# generator: {GENERATOR_NAME}\n")
    buf.write(f"# power: {params.power:.12g}\n# sigma2: {params.sigma2:.12g}\n")
    buf.write("i,theta,re_x,im_x,re_y,im_y\n")
    buf.write(f"0,{traj.theta[0]:.12g},,,,\n")
    for i in range(traj.n):
        x, y = traj.x[i], traj.y[i]
        buf.write(f"{i + 1},{traj.theta[i + 1]:.12g},{x.real:.12g},{x.imag:.12g},"
                  f"{y.real:.12g},{y.imag:.12g}\n")
    return buf.getvalue()


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    std_error: float
    n_samples: int

    def within(self, target, n_se=4.0, floor=0.0):
        return abs(self.value - target) <= max(floor, n_se * self.std_error)


def _mean_estimate(samples):
    n = samples.size
    return EstimateWithError(float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n)), n)


def _var_estimate(samples):
    n = samples.size
    c = samples - samples.mean()
    m2 = float(np.mean(c**2))
    m4 = float(np.mean(c**4))
    return EstimateWithError(m2 * n / (n - 1), math.sqrt(max(m4 - m2 * m2, 0.0) / n), n)


@dataclass(frozen=True)
class Chi2Check:
    lam: float
    mean: EstimateWithError
    var: EstimateWithError
    tv_distance: float
    mean_ok: bool
    var_ok: bool

    @property
    def passed(self):
        return self.mean_ok and self.var_ok


def chi2_bin_probs(lam, edges):
    cdf = [0.0]
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(chi2_pdf, lo, hi, args=(lam,), epsabs=1e-13)
        cdf.append(val)
    return np.array(cdf[1:])


def chi2_conditional_check(params, x_mag, n, seed, n_bins=100, n_se=4.0):
    """Simulate |Y|^2 with |X| = x_mag and compare with chi2_2(x_mag^2)."""
    if x_mag < 0:
        raise DomainError("x_mag must be >= 0")
    lam = x_mag**2
    traj = simulate(params, InputSampler("constant", magnitude=x_mag), n, seed)
    t = np.abs(traj.y) ** 2
    mean = _mean_estimate(t)
    var = _var_estimate(t)
    hi = 2 + lam + 8 * 2 * math.sqrt(1 + lam)
    edges = np.linspace(0.0, hi, n_bins + 1)
    counts, _ = np.histogram(t, bins=edges)
    p_emp = counts / n
    p_true = chi2_bin_probs(lam, edges)
    tv = 0.5 * (np.abs(p_emp - p_true).sum() + abs((1 - p_emp.sum()) - (1 - p_true.sum())))
    return Chi2Check(
        lam=lam,
        mean=mean,
        var=var,
        tv_distance=float(tv),
        mean_ok=mean.within(2 + lam, n_se),
        var_ok=var.within(4 * (1 + lam), n_se),
    )


def wiener_increment_check(sigma2, n, seed):
    """Mean / variance of the simulated phase increments against N(0, sigma2)."""
    traj = simulate(ChannelParams(0.0, sigma2), InputSampler("constant"), n, seed)
    inc = np.diff(traj.theta)
    return _mean_estimate(inc), _var_estimate(inc)


def empirical_entropy_wrapped(sigma2, n, seed, stream_id=0):
    """Histogram entropy estimate (bits) of the wrapped phase increment.

    Uses ceil(n^(1/3)) equal bins on [-pi, pi). The estimator carries a small
    discretisation bias, of order (bin width)^2 times the Fisher information.
    """
    if n < 10**4:
        raise DomainError("need at least 1e4 samples")
    rng = make_rng(seed, stream_id)
    d = rng.normal(0.0, math.sqrt(sigma2), n)
    wrapped = np.mod(d + math.pi, 2 * math.pi) - math.pi
    n_bins = math.ceil(n ** (1 / 3))
    edges = np.linspace(-math.pi, math.pi, n_bins + 1)
    counts, _ = np.histogram(wrapped, bins=edges)
    width = edges[1] - edges[0]
    dens = counts / (n * width)
    idx = np.clip(np.searchsorted(edges, wrapped, side="right") - 1, 0, n_bins - 1)
    neg_log = -np.log(dens[idx]) / LN2
    return EstimateWithError(float(neg_log.mean()), float(neg_log.std(ddof=1) / math.sqrt(n)), n)


def empirical_elog_power(power, n, seed, stream_id=0):
    """Monte Carlo E[ln |X|^2] for X ~ CN(0, P), in nats (expected ln P - gamma)."""
    if power <= 0:
        raise DomainError("power must be > 0")
    rng = make_rng(seed, stream_id)
    return _mean_estimate(np.log(rng.exponential(power, n)))


def expected_elog_power(power):
    return math.log(power) - EULER_GAMMA


_U_MIN, _U_MAX = math.log(1e-10), math.log(60.0)


def amplitude_mi_estimate(power, grid_size=64):
    """I(|X|^2; |Y|^2) in bits for X ~ CN(0, P), by quadrature.

    h(|Y|^2) is exact (|Y|^2 is exponential with mean P + 2). The conditional
    entropy is averaged over lambda = P x, x ~ Exp(1), with a
    ``grid_size``-node Gauss-Legendre rule in u = log x on [log 1e-10, log 60];
    the mass left outside that window is below 1e-10 and is assigned h(0)
    and h(60 P) respectively.
    """
    if power <= 0:
        raise DomainError("power must be > 0")
    nodes, weights = roots_legendre(grid_size)
    half = 0.5 * (_U_MAX - _U_MIN)
    u = _U_MIN + half * (nodes + 1)
    x = np.exp(u)
    cond = sum(
        w * half * xi * math.exp(-xi) * chi2_entropy_exact(power * xi).nats
        for xi, w in zip(x, weights)
    )
    cond += -math.expm1(-math.exp(_U_MIN)) * chi2_entropy_exact(0.0).nats
    cond += math.exp(-math.exp(_U_MAX)) * chi2_entropy_exact(power * math.exp(_U_MAX)).nats
    return (1 + math.log(power + 2) - cond) / LN2
