import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from wpnbounds import entropy as E
from wpnbounds.special import DomainError, expint_ei

LOG2_2PI = math.log2(2 * math.pi)


def wrapped_entropy_oracle(sigma2):
    """-int p log p in bits, p as a plain image sum, integrated with mpmath."""
    mpmath.mp.dps = 25
    s = mpmath.mpf(sigma2)
    k = int(math.ceil(6 * math.sqrt(sigma2) / (2 * math.pi))) + 3

    def p(t):
        return sum(mpmath.exp(-(t + 2 * mpmath.pi * j) ** 2 / (2 * s)) for j in range(-k, k + 1)) \
            / mpmath.sqrt(2 * mpmath.pi * s)

    h = -mpmath.quad(lambda t: p(t) * mpmath.log(p(t)), [-mpmath.pi, 0, mpmath.pi])
    return float(h / mpmath.log(2))


def chi2_entropy_oracle(lam):
    """Entropy in bits using scipy's independent ncx2 density."""
    dist = stats.ncx2(2, lam) if lam > 0 else stats.expon(scale=2)
    hi = dist.ppf(1 - 1e-15)
    f = lambda t: -dist.pdf(t) * math.log(dist.pdf(t)) if dist.pdf(t) > 0 else 0.0
    val, _ = integrate.quad(f, 0, hi, points=[lam] if lam > 0 else None, limit=400,
                            epsabs=1e-12, epsrel=1e-12)
    return val / math.log(2)


# -- frozen oracle values ----------------------------------------------------

def test_wrapped_oracle_frozen():
    assert wrapped_entropy_oracle(6.0) == pytest.approx(2.647916, abs=1e-6)
    assert wrapped_entropy_oracle(1.0) == pytest.approx(2.040138, abs=1e-6)


@pytest.mark.parametrize("s2", [0.05, 0.25, 1.0, 2.0, 4.0, 6.0, 20.0])
def test_wrapped_exact_against_oracle(s2):
    assert E.wrapped_entropy_exact(s2).bits == pytest.approx(wrapped_entropy_oracle(s2), abs=1e-8)


def test_wrapped_exact_examples():
    assert E.wrapped_entropy_exact(6.0).bits == pytest.approx(2.648, abs=1e-3)
    assert E.wrapped_entropy_exact(100.0).bits == pytest.approx(LOG2_2PI, abs=1e-6)
    gauss = 0.5 * math.log2(2 * math.pi * math.e * 0.25)
    assert E.wrapped_entropy_exact(0.25).bits == pytest.approx(gauss, abs=1e-3)
    assert gauss == pytest.approx(1.047, abs=1e-3)


def test_entropy_value_units():
    v = E.EntropyValue.from_nats(1.0)
    assert v.bits == pytest.approx(1 / math.log(2))
    assert E.wrapped_entropy_exact(E.WrappedGaussian(1.0)) == E.wrapped_entropy_exact(1.0)


def test_series_matches_quadrature():
    for s2 in np.geomspace(0.01, 10, 25):
        assert E.wrapped_entropy_series(s2) == pytest.approx(E.wrapped_entropy_quad(s2), abs=1e-7)


# -- wrapped density ---------------------------------------------------------

def test_wrapped_pdf_values():
    # the k = +-1 images add 2 e^(-2 pi^2) / sqrt(2 pi) ~ 2.1e-9 to the Gaussian peak
    images = 1 / math.sqrt(2 * math.pi) * (1 + 2 * math.exp(-2 * math.pi**2))
    assert E.wrapped_pdf(0.0, E.WrappedGaussian(1.0)) == pytest.approx(images, abs=1e-13)
    assert E.wrapped_pdf(0.0, E.WrappedGaussian(1.0)) == pytest.approx(0.398942, abs=1e-6)
    for t in (-3.0, 0.0, 2.0):
        assert E.wrapped_pdf(t, E.WrappedGaussian(100.0)) == pytest.approx(1 / (2 * math.pi), abs=1e-8)


@pytest.mark.parametrize("s2", [0.01, 1.0, 6.0])
def test_wrapped_pdf_normalised(s2):
    wg = E.WrappedGaussian(s2)
    mass, _ = integrate.quad(lambda t: E.wrapped_pdf(t, wg), -math.pi, math.pi,
                             points=[0.0], limit=200, epsabs=1e-12)
    assert mass == pytest.approx(1.0, abs=1e-9)


@given(st.floats(-math.pi, math.pi - 1e-9), st.floats(0.05, 50))
@settings(max_examples=80)
def test_image_and_jacobi_forms_agree(theta, s2):
    a = E.wrapped_logpdf_images(theta, s2)
    b = E.wrapped_logpdf_jacobi(theta, s2)
    assert a == pytest.approx(b, abs=1e-8)


def test_wrapped_domain():
    with pytest.raises(DomainError):
        E.WrappedGaussian(0.0)
    with pytest.raises(DomainError):
        E.wrapped_pdf(4.0, E.WrappedGaussian(1.0))


# -- bounds on the wrapped entropy -------------------------------------------

def test_lower_bound_examples():
    assert E.wrapped_entropy_lower(4.0).bits == pytest.approx(2.5977, abs=1e-4)
    assert E.wrapped_entropy_lower(1.0).bits == pytest.approx(1.9756, abs=1e-4)
    assert E.wrapped_entropy_lower(4.0).bits <= E.wrapped_entropy_exact(4.0).bits


def test_g_examples():
    assert abs(E.g_of_sigma(0.01)) < 1e-6
    assert E.g_of_sigma(1.0) == pytest.approx(-0.04956, abs=1e-5)
    assert E.g_of_sigma(0.5) > E.g_of_sigma(2.0)
    with pytest.raises(DomainError):
        E.g_of_sigma(3.0)


def test_g_monotone_and_bounded():
    g = np.array([E.g_of_sigma(s) for s in np.linspace(0.01, E.SIGMA2_CROSS, 200)])
    assert np.all(np.diff(g) <= 1e-15)
    assert g.min() >= -1


def test_upper_bound_examples():
    assert E.wrapped_entropy_upper(E.SIGMA2_CROSS).bits == pytest.approx(LOG2_2PI, abs=1e-12)
    assert E.wrapped_entropy_upper(6.0).bits == pytest.approx(LOG2_2PI)
    # 0.5 log2(2 pi e 0.1) recomputed
    assert E.wrapped_entropy_upper(0.1).bits == pytest.approx(0.386132, abs=1e-6)


def test_sandwich_on_fig1_grid():
    slack = 1e-9
    for s2 in np.linspace(0.01, 6, 600):
        lo = E.wrapped_entropy_lower(s2).nats
        ex = E.wrapped_entropy_exact(s2).nats
        up = E.wrapped_entropy_upper(s2).nats
        assert lo <= ex + slack and ex <= up + slack, s2


# -- non-central chi-square --------------------------------------------------

def test_chi2_pdf_examples():
    assert E.chi2_pdf(2.0, 0.0) == pytest.approx(0.5 * math.exp(-1))
    assert E.chi2_pdf(2.0, 0.0) == pytest.approx(0.18394, abs=1e-5)
    mean, _ = integrate.quad(lambda t: t * E.chi2_pdf(t, 5.0), 0, np.inf, limit=200)
    second, _ = integrate.quad(lambda t: t * t * E.chi2_pdf(t, 5.0), 0, np.inf, limit=200)
    assert mean == pytest.approx(7.0, abs=1e-6)
    assert second - mean**2 == pytest.approx(24.0, abs=1e-5)


@pytest.mark.parametrize("lam", [0.5, 3.0, 40.0, 500.0])
def test_chi2_pdf_against_mpmath(lam):
    mpmath.mp.dps = 30
    for t in np.linspace(0.01, lam + 60, 25):
        ref = mpmath.exp(-(t + lam) / 2) * mpmath.besseli(0, mpmath.sqrt(lam * t)) / 2
        assert E.chi2_pdf(t, lam) == pytest.approx(float(ref), rel=1e-10)


def test_chi2_exact_examples():
    assert E.chi2_entropy_exact(0.0).bits == pytest.approx((1 + math.log(2)) / math.log(2), abs=1e-10)
    assert E.chi2_entropy_exact(0.0).bits == pytest.approx(2.4427, abs=1e-4)
    h10 = E.chi2_entropy_exact(10.0).bits
    assert 3.123 <= h10 <= 4.777
    seq = [E.chi2_entropy_exact(lam).bits for lam in range(11)]
    assert all(b > a for a, b in zip(seq, seq[1:]))


@pytest.mark.parametrize("lam", [0.0, 0.3, 2.0, 10.0, 75.0])
def test_chi2_exact_against_oracle(lam):
    assert E.chi2_entropy_exact(lam).bits == pytest.approx(chi2_entropy_oracle(lam), abs=1e-7)


def test_chi2_oracle_frozen():
    assert chi2_entropy_oracle(10.0) == pytest.approx(4.665355, abs=1e-6)


def test_chi2_bracket_examples():
    assert E.chi2_entropy_upper(10.0).bits == pytest.approx(4.777, abs=1e-3)
    assert E.chi2_entropy_lower(10.0).bits == pytest.approx(3.123, abs=1e-3)
    assert E.chi2_entropy_lower(0.0).bits == -math.inf
    lam = 1e6
    width = E.chi2_entropy_upper(lam).bits - E.chi2_entropy_lower(lam).bits
    assert width == pytest.approx(math.log2(3), abs=1e-5)


def test_chi2_bracket_grid():
    for lam in np.linspace(0.1, 10, 100):
        ex = E.chi2_entropy_exact(lam).nats
        assert E.chi2_entropy_lower(lam).nats <= ex <= E.chi2_entropy_upper(lam).nats


def test_noncentral_type():
    d = E.NoncentralChiSq2(5.0)
    assert (d.mean, d.var) == (7.0, 24.0)
    with pytest.raises(DomainError):
        E.NoncentralChiSq2(-1.0)


# -- E[ln T] and the chi bound -----------------------------------------------

def test_expected_log_examples():
    assert E.expected_log_chi2(2.0) == pytest.approx(math.log(2) - expint_ei(-1.0))
    assert E.expected_log_chi2(2.0) == pytest.approx(0.9125, abs=1e-4)
    assert E.expected_log_chi2(50.0) == pytest.approx(math.log(50), abs=1e-3)
    quad, _ = integrate.quad(lambda t: math.log(t) * stats.ncx2.pdf(t, 2, 2.0), 0, np.inf, limit=200)
    assert E.expected_log_chi2(2.0) == pytest.approx(quad, abs=1e-5)


@given(st.floats(1e-3, 1e3))
@settings(max_examples=50)
def test_expected_log_exceeds_log_lambda(lam):
    assert E.expected_log_chi2(lam) >= math.log(lam)


def test_chi_bound_examples():
    # limit value recomputed: 0.5 log2(8 pi e) - log2 6
    limit = 0.5 * math.log2(8 * math.pi * math.e) - math.log2(6)
    assert limit == pytest.approx(0.462133, abs=1e-6)
    assert E.chi_entropy_lower(1e4).bits == pytest.approx(limit, abs=1e-4)
    assert abs(E.chi_entropy_lower(0.937**2).bits) < 2e-3
    assert E.chi_entropy_lower(0.1).bits < 0


def test_solve_r():
    r = E.solve_r()
    assert r == pytest.approx(0.937, abs=1e-3)
    assert abs(E.chi_entropy_lower(r * r).bits) < 1e-5
    grid = np.arange(0.1, 5.0 + 1e-9, 0.01)
    vals = np.array([E.chi_entropy_lower(x * x).nats for x in grid])
    assert np.count_nonzero(np.diff(np.sign(vals))) == 1
