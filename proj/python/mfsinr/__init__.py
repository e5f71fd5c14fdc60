"""Exact SINR distribution and ergodic rate under matched-filter precoding.

Thin Python layer over the C++ core. The main entry points:

- :class:`SystemConfig` — antenna count L, user count K, power, noise variance.
- :func:`sinr_cdf` / :func:`sinr_pdf` / :func:`outage_probability` — exact
  distribution via characteristic-function inversion.
- :func:`sinr_cdf_beta_approx` / :func:`sinr_cdf_high_snr_beta` — Beta
  approximation of the interference sum.
- :func:`scaled_inverse_sinr_cdf` / :func:`massive_limit_cdf` — limit laws.
- :func:`ergodic_rate_jensen` / :func:`ergodic_rate_robust` /
  :func:`ergodic_rate_asymptotic` / :func:`ergodic_rate_mc` — rate estimates.
- :func:`sample_sinr` — deterministic Monte Carlo SINR samples.
"""

from ._mfsinr import (
    QuadratureSpec,
    SystemConfig,
    __version__,
    beta_approx_params,
    ergodic_rate_asymptotic,
    ergodic_rate_jensen,
    ergodic_rate_mc,
    ergodic_rate_robust,
    massive_limit_cdf,
    nonconvergence_probability_bound,
    outage_probability,
    sample_sinr,
    scaled_inverse_sinr_cdf,
    sinr_cdf,
    sinr_cdf_beta_approx,
    sinr_cdf_high_snr_beta,
    sinr_pdf,
)

__all__ = [
    "QuadratureSpec",
    "SystemConfig",
    "__version__",
    "beta_approx_params",
    "ergodic_rate_asymptotic",
    "ergodic_rate_jensen",
    "ergodic_rate_mc",
    "ergodic_rate_robust",
    "massive_limit_cdf",
    "nonconvergence_probability_bound",
    "outage_probability",
    "sample_sinr",
    "scaled_inverse_sinr_cdf",
    "sinr_cdf",
    "sinr_cdf_beta_approx",
    "sinr_cdf_high_snr_beta",
    "sinr_pdf",
]
