import math

import numpy as np
import pytest
from scipy import integrate

from wpnbounds import bounds as B
from wpnbounds.channel import make_rng
from wpnbounds.special import EULER_GAMMA, DomainError, expint_e1

C = B.ChannelParams
LOG2E = 1 / math.log(2)


def log2(x):
    return math.log2(x)


# -- parameters and regimes ---------------------------------------------------

def test_params_validation():
    with pytest.raises(DomainError):
        C(-1.0, 0.1)
    with pytest.raises(DomainError):
        C(1.0, math.nan)


def test_classify():
    assert B.classify(C(10, 3)) is B.Regime.HIGH
    assert B.classify(C(10, 0.1)) is B.Regime.INTERMEDIATE  # boundary is inclusive
    assert B.classify(C(10, 0.01)) is B.Regime.SMALL
    assert B.classify(C(10, 2 * math.pi / math.e)) is B.Regime.INTERMEDIATE
    with pytest.raises(B.DegenerateChannelError):
        B.classify(C(0, 1))


def test_gap_caps():
    assert B.gap_cap(B.Regime.HIGH) == 4
    assert B.gap_cap(B.Regime.INTERMEDIATE) == 6.65
    assert B.gap_cap(B.Regime.SMALL) == 1.21


# -- inner bounds -------------------------------------------------------------

def test_amplitude_lower():
    assert B.amplitude_lower(10) == pytest.approx(0.250846, abs=1e-6)
    assert B.amplitude_lower(0.1) < 0
    P = 1e8
    # log(1 + P/2) and log((1 + P/2)/(1 + P)) each shed half a bit
    asym = 0.5 * log2(P) - 0.5 * log2(2 * math.pi / math.e) - 1
    assert B.amplitude_lower(P) - asym == pytest.approx(0, abs=1e-6)


def test_phase_and_inner_examples():
    assert B.phase_lower(C(10, 0.1)) == pytest.approx(1.3490, abs=1e-4)
    assert B.inner_gaussian(C(10, 0.1)) == pytest.approx(1.600, abs=1e-3)
    ref = 0.5 * log2(6) + 0.5 * log2(6 / 11 * 10 * math.exp(-EULER_GAMMA))
    assert B.inner_gaussian(C(10, 0)) == pytest.approx(ref, abs=1e-12)
    assert ref == pytest.approx(2.099838, abs=1e-6)
    P = 10.0
    coherent = log2(2 * math.pi) - 0.5 * log2(2 * math.pi * math.e / P) - EULER_GAMMA / 2 * LOG2E
    assert B.phase_lower(C(P, 0)) == pytest.approx(coherent, abs=1e-12)


def test_decomposition_at_random_points():
    rng = np.random.default_rng(7)
    for P, s in zip(rng.uniform(0.1, 100, 20), rng.uniform(0, 10, 20)):
        p = C(P, s)
        assert B.inner_gaussian(p) == pytest.approx(B.amplitude_lower(P) + B.phase_lower(p), abs=1e-12)


def test_prelog():
    for P in (1e4, 1e6):
        half = B.inner_gaussian(C(2 * P, 0.1)) - B.inner_gaussian(C(P, 0.1))
        one = B.inner_gaussian(C(2 * P, 1 / (2 * P))) - B.inner_gaussian(C(P, 1 / P))
        assert half == pytest.approx(0.5, abs=1e-3)
        assert one == pytest.approx(1.0, abs=1e-3)


def test_achievable_rate_drops_negative_phase_term():
    p = C(10, 50.0)
    assert B.phase_lower(p) < 0
    assert B.achievable_rate(p) == B.amplitude_lower(10)


# -- truncated-exponential input -----------------------------------------------

def test_expected_inv_power_closed_form():
    P = 10.0
    b = m = P / 4
    assert B.expected_inv_power_trunc_exp(b, P) == pytest.approx(math.e * expint_e1(1.0) / m)
    assert math.e * expint_e1(1.0) == pytest.approx(0.596347, abs=1e-6)
    val, _ = integrate.quad(lambda v: math.exp(-(v - b) / m) / m / v, b, np.inf)
    assert B.expected_inv_power_trunc_exp(b, P) == pytest.approx(val, rel=1e-10)
    assert B.expected_inv_power_trunc_exp(1.0, 10.0) < 1.0


def test_expected_inv_power_monte_carlo():
    b, P = 1.0, 10.0
    v = b + make_rng(3).exponential(P / 2 - b, 10**6)
    inv = 1 / v
    se = inv.std(ddof=1) / math.sqrt(inv.size)
    assert abs(inv.mean() - B.expected_inv_power_trunc_exp(b, P)) < 3 * se


@pytest.mark.parametrize("b", [0.0, -1.0, 5.0, 6.0])
def test_expected_inv_power_domain(b):
    with pytest.raises(DomainError):
        B.expected_inv_power_trunc_exp(b, 10.0)


def test_trunc_exp_bound_objective_by_hand():
    b, nu, P, s = 1.0, 1.0, 10.0, 0.1
    inv = math.exp(b / (P / 2 - b)) * expint_e1(b / (P / 2 - b)) / (P / 2 - b)
    rho = 1 - (1 - inv) ** 2 * math.exp(-s / 2)
    ref = 0.5 * log2((P - 2 * b + 2 * nu) / (math.pi**2 * math.e * nu * rho)) \
        - ((2 + 1 / b) / nu + 3 * b / (P - 2 * b)) * LOG2E
    assert B.barletta_objective(b, nu, C(P, s)) == pytest.approx(ref, abs=1e-12)


def test_trunc_exp_bound_objective_infeasible():
    for b in (0.0, 5.0, 6.0):
        assert B.barletta_objective(b, 1.0, C(10, 0.1)) == -math.inf
    assert B.barletta_objective(1.0, 0.0, C(10, 0.1)) == -math.inf


def test_trunc_exp_bound_beats_random_points():
    p = C(20.0, 0.05)
    opt = B.inner_barletta(p)
    rng = np.random.default_rng(11)
    bs = np.exp(rng.uniform(math.log(1e-3 * 20), math.log(0.49 * 20), 100))
    nus = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), 100))
    for b, nu in zip(bs, nus):
        assert opt.value >= B.barletta_objective(b, nu, p) - 1e-12


def test_trunc_exp_bound_feasible_and_locally_optimal():
    p = C(50.0, 0.01)
    opt = B.inner_barletta(p)
    assert 0 < opt.b < 25 and opt.nu > 0 and 0 < opt.rho <= 1
    for fb in (0.99, 1.01):
        for fn in (0.99, 1.01):
            assert opt.value >= B.barletta_objective(opt.b * fb, opt.nu * fn, p) - 1e-9
    b_grid, nu_grid = B.barletta_grid(50.0)
    table = B.barletta_objective(b_grid[:, None], nu_grid[None, :], p)
    assert opt.value >= table.max() - 1e-12


def test_trunc_exp_bound_below_memoryless_outer():
    p = C(100, 0.01)
    assert B.inner_barletta(p).value <= B.outer_memoryless(p)


def test_trunc_exp_bound_degenerate():
    with pytest.raises(B.DegenerateChannelError):
        B.inner_barletta(C(0, 0.1))


# -- outer bounds ---------------------------------------------------------------

def test_noncoherent_outer():
    assert B.noncoherent_outer(0) == pytest.approx(0.5 * log2(4 * math.pi * math.e))
    assert B.noncoherent_outer(0) == pytest.approx(2.547096, abs=1e-6)
    assert B.noncoherent_outer(10) == pytest.approx(3.839577, abs=1e-6)
    vals = [B.noncoherent_outer(P) for P in np.linspace(0, 100, 50)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_outer_memoryless_examples():
    assert B.outer_memoryless(C(10, 100)) == pytest.approx(log2(6))
    first = B.noncoherent_outer(10) + log2(2 * math.pi) - 2.040138
    assert first == pytest.approx(4.450935, abs=1e-6)
    assert B.outer_memoryless(C(10, 1.0)) == pytest.approx(log2(6))
    assert B.outer_memoryless(C(2, 1e-6)) == pytest.approx(1.0)
    assert B.outer_memoryless(C(2, 0)) == pytest.approx(1.0)
    # only the non-coherent branch is active for tiny P and huge phase noise
    p = C(1000, 1000)
    assert B.outer_memoryless(p) == pytest.approx(B.noncoherent_outer(1000), abs=1e-6)


def test_outer_regime_examples():
    assert B.outer_regime(C(10, 0.1)) == pytest.approx(8.186, abs=1e-3)
    assert B.outer_regime(C(10, 0.01)) == pytest.approx(log2(6))
    q = math.exp(-2 * math.pi / math.e)
    assert q == pytest.approx(0.099117, abs=1e-6)
    ref = 0.5 * log2(6) + 0.5 * log2(4 * math.pi * math.e) + 2 * q / (1 - q) * LOG2E
    assert B.outer_regime(C(10, 3)) == pytest.approx(ref, abs=1e-12)
    assert ref == pytest.approx(4.157033, abs=1e-6)


def test_outer_simple_examples():
    assert B.outer_simple(C(10, 3)) == pytest.approx(5.292, abs=1e-3)
    assert B.outer_simple(C(10, 0.1)) == pytest.approx(8.453, abs=1e-3)
    assert B.outer_simple(C(10, 0.001)) == pytest.approx(log2(6))


# -- gap ------------------------------------------------------------------------

def test_gap_examples():
    assert B.gap_exact(C(10, 0.1)) == pytest.approx(6.586, abs=1e-3)
    assert B.gap_exact(C(2, 0.4)) <= 1.21
    assert B.gap_exact(C(10, 3)) <= 4
    assert B.gap_exact(C(2, 0.5 - 1e-6)) == pytest.approx(1.209, abs=2e-3)


def test_small_regime_gap_closed_form():
    for P in (2.0, 5.0, 40.0):
        ref = 0.5 * log2(2 * math.exp(EULER_GAMMA) * (1 + P) / P)
        s = 0.999 / P
        # the closed form is the sigma2 -> 1/P limit of the small-regime gap
        assert B.gap_exact(C(P, 1 / P - 1e-9)) == pytest.approx(ref, abs=1e-6)
        assert B.gap_exact(C(P, s)) <= ref + 1e-9


def test_ordering_grid():
    for P in (0.5, 1, 2, 5, 10, 20, 50, 100):
        for s in np.geomspace(1e-4, 10, 40):
            rep = B.report(C(P, s))
            lo = max(0.0, rep.inner_gaussian, rep.inner_barletta)
            hi = min(rep.outer_memoryless, rep.outer_regime, rep.outer_simple)
            assert lo <= hi + 1e-9, (P, s)
            assert rep.gap_exact <= rep.gap_cap + 1e-9, (P, s)


# -- report ---------------------------------------------------------------------

def test_report_example():
    rep = B.report(C(10, 0.1))
    assert rep.regime == "intermediate"
    assert rep.inner_gaussian == pytest.approx(1.600, abs=1e-3)
    assert rep.outer_regime == pytest.approx(8.186, abs=1e-3)
    assert rep.gap_exact == pytest.approx(6.586, abs=1e-3)
    assert rep.inner_barletta_clipped == max(0.0, rep.inner_barletta)
    assert set(rep.as_dict()) == set(B.BoundReport.__dataclass_fields__)


def test_report_degenerate():
    rep = B.report(C(0, 1))
    d = rep.as_dict()
    assert d["regime"] == "small"
    assert all(v == 0 for k, v in d.items() if k not in ("regime", "sigma2"))
