"""Capacity bounds for the discrete-time Wiener phase noise channel."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BarlettaOptimum,
    BoundReport,
    ChannelParams,
    Regime,
    achievable_rate,
    amplitude_lower,
    classify,
    gap_cap,
    gap_exact,
    inner_barletta,
    inner_gaussian,
    noncoherent_outer,
    outer_memoryless,
    outer_regime,
    outer_simple,
    phase_lower,
    report,
)
from .entropy import (  # noqa: E402
    EntropyValue,
    NoncentralChiSq2,
    WrappedGaussian,
    chi2_entropy_exact,
    chi2_entropy_lower,
    chi2_entropy_upper,
    chi_entropy_lower,
    solve_r,
    wrapped_entropy_exact,
    wrapped_entropy_lower,
    wrapped_entropy_upper,
)
