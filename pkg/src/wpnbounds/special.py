"""Special functions used by the entropy and capacity bounds.

Everything here works in natural units. The kernels are small and
self-contained: erf comes from the standard library, the exponential
integral and I0 are evaluated by series / continued fraction / asymptotic
expansion, and the Euler function by a truncated product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.5772156649015329
MAX_TERMS = 10**6

# Below this |x| the power series for E1 is used, above it the continued fraction.
_EI_SWITCH = 1.0
# Power series for I0 up to here, scaled asymptotic expansion beyond.
_I0_SWITCH = 20.0


class DomainError(ValueError):
    """Argument outside the domain a function is defined (or needed) on."""


class ConvergenceError(RuntimeError):
    """A series, product or quadrature did not converge within its budget."""


@dataclass(frozen=True)
class Accuracy:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_ACCURACY = Accuracy()


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"non-finite argument: {x!r}")


def erf(x):
    """Error function, scalar or elementwise on arrays."""
    _check_finite(x)
    if np.ndim(x) == 0:
        return math.erf(float(x))
    return np.vectorize(math.erf, otypes=[float])(x)


def _e1_series(z, acc):
    # E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, MAX_TERMS):
        term *= -z / k
        contrib = term / k
        total += contrib
        if abs(contrib) < acc.abs_tol * max(abs(total), 1e-300):
            return -EULER_GAMMA - math.log(z) - total
    raise ConvergenceError(f"E1 series did not converge at z={z}")


def _e1_contfrac(z, acc):
    # Modified Lentz evaluation of the continued fraction for e^z E1(z).
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, MAX_TERMS):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < acc.abs_tol:
            return h * math.exp(-z)
    raise ConvergenceError(f"E1 continued fraction did not converge at z={z}")


def expint_e1(z, acc=DEFAULT_ACCURACY):
    """E1(z) = int_z^inf e^{-t}/t dt for z > 0."""
    _check_finite(z)
    z = float(z)
    if z <= 0:
        raise DomainError("E1 needs z > 0")
    if z <= _EI_SWITCH:
        return _e1_series(z, acc)
    return _e1_contfrac(z, acc)


def expint_ei(x, acc=DEFAULT_ACCURACY):
    """Exponential integral Ei(x) for x < 0, i.e. -E1(-x)."""
    if np.ndim(x) != 0:
        return np.array([expint_ei(v, acc) for v in np.ravel(x)]).reshape(np.shape(x))
    if math.isinf(x) and x < 0:
        return 0.0
    _check_finite(x)
    if x >= 0:
        raise DomainError("Ei is only provided for negative arguments")
    return -expint_e1(-x, acc)


def _i0_series(x, acc):
    y = 0.25 * x * x
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, MAX_TERMS):
        term = term * y / (k * k)
        total = total + term
        if np.all(term <= acc.abs_tol * total):
            return total
    raise ConvergenceError("I0 power series did not converge")


def _i0e_asymptotic(x, acc):
    # e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 200):
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if np.all(nxt <= acc.abs_tol * total):
            break
        if np.any(nxt > term):
            # asymptotic series started diverging; stop at the smallest term
            break
        term = nxt
        total = total + term
    return total / np.sqrt(2.0 * math.pi * x)


def bessel_i0e(x, acc=DEFAULT_ACCURACY):
    """Exponentially scaled I0: exp(-x) I0(x), x >= 0."""
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    if np.any(arr < 0):
        raise DomainError("I0 is only provided for x >= 0")
    out = np.empty_like(arr)
    small = arr <= _I0_SWITCH
    if np.any(small):
        xs = arr[small]
        out[small] = _i0_series(xs, acc) * np.exp(-xs)
    if np.any(~small):
        out[~small] = _i0e_asymptotic(arr[~small], acc)
    return out if out.ndim else float(out)


def bessel_i0(x, acc=DEFAULT_ACCURACY):
    """Modified Bessel function of the first kind, order zero, x >= 0."""
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    if np.any(arr < 0):
        raise DomainError("I0 is only provided for x >= 0")
    out = np.empty_like(arr)
    small = arr <= _I0_SWITCH
    if np.any(small):
        out[small] = _i0_series(arr[small], acc)
    if np.any(~small):
        xl = arr[~small]
        with np.errstate(over="ignore"):
            out[~small] = np.exp(xl) * _i0e_asymptotic(xl, acc)
    return out if out.ndim else float(out)


def _check_positive(x, name):
    _check_finite(x)
    if np.any(np.asarray(x) <= 0):
        raise DomainError(f"{name} needs x > 0")


def i0_upper_lemma(x):
    """Upper bound on I0 obtained from piecewise bounds on cos in the integrand.

    Tight as x -> 0 (tends to 1 there).
    """
    _check_positive(x, "i0_upper_lemma")
    x = np.asarray(x, dtype=float)
    sx = np.sqrt(x)
    val = np.exp(x) / (4 * sx) * (
        erf(sx) * math.sqrt(math.pi) + 2 * np.exp(-x) * (-np.expm1(-x)) / sx
    )
    return val if val.ndim else float(val)


def i0_upper_corollary(x):
    """Weaker closed-form bound e^x (sqrt(pi) + 1) / (4 sqrt(x)); blows up at 0."""
    _check_positive(x, "i0_upper_corollary")
    x = np.asarray(x, dtype=float)
    val = np.exp(x) * (math.sqrt(math.pi) + 1) / (4 * np.sqrt(x))
    return val if val.ndim else float(val)


def _euler_terms(q, acc):
    if not (0 <= q < 1):
        raise DomainError("Euler function needs 0 <= q < 1")
    if q == 0:
        return 0
    n = math.ceil(math.log(acc.abs_tol) / math.log(q)) + 1
    if n > MAX_TERMS:
        raise ConvergenceError(f"Euler product needs {n} factors at q={q}")
    return n


def log_euler_phi(q, acc=DEFAULT_ACCURACY):
    """log of prod_{n>=1} (1 - q^n); safe when the product itself underflows."""
    _check_finite(q)
    q = float(q)
    n = _euler_terms(q, acc)
    if n == 0:
        return 0.0
    powers = np.exp(np.arange(1, n + 1) * math.log(q))
    return float(np.sum(np.log1p(-powers)))


def euler_phi(q, acc=DEFAULT_ACCURACY):
    """Euler function prod_{n>=1} (1 - q^n) for 0 <= q < 1."""
    return math.exp(log_euler_phi(q, acc))
