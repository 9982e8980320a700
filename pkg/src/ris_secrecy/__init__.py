"""Secrecy performance of a surface-assisted MISO downlink with a Poisson
field of eavesdroppers: analytic distributions, outage/capacity metrics, and
an exact Monte-Carlo engine that cross-validates them.

Conventions: SNRs in dB at the API boundary, the outage threshold C_th in
nats, capacities in bits/s/Hz. See README for the model summary.
"""

from .errors import ConfigError, UnsupportedPathError
from .metrics import (SecrecyResult, esc, esc_asymptotic, rd_upper_bound,
                      secrecy_diversity_order, sop_asymptotic,
                      sop_closed_form, sop_quadrature)
from .montecarlo import (EmpiricalSummary, MetricPoint, MetricSeries,
                         TrialOutcome, run_single_trial, run_trials, sweep)
from .presets import PRESETS, ExperimentPreset, get_preset
from .snr_dist import (EveTailParams, GammaFit, cdf_gamma_d, cdf_gamma_e,
                       cdf_gamma_e_asymptotic, cdf_gamma_e_closed,
                       gamma_fit, mean_gamma_d, pdf_gamma_d,
                       pdf_gamma_e_closed, varpi_xi)
from .specfun import ConvergenceError
from .sysmodel import ChannelRealization, SystemConfig

__all__ = [
    "ChannelRealization",
    "ConfigError",
    "ConvergenceError",
    "EmpiricalSummary",
    "EveTailParams",
    "ExperimentPreset",
    "GammaFit",
    "MetricPoint",
    "MetricSeries",
    "PRESETS",
    "SecrecyResult",
    "SystemConfig",
    "TrialOutcome",
    "UnsupportedPathError",
    "cdf_gamma_d",
    "cdf_gamma_e",
    "cdf_gamma_e_asymptotic",
    "cdf_gamma_e_closed",
    "esc",
    "esc_asymptotic",
    "gamma_fit",
    "get_preset",
    "mean_gamma_d",
    "pdf_gamma_d",
    "pdf_gamma_e_closed",
    "rd_upper_bound",
    "run_single_trial",
    "run_trials",
    "secrecy_diversity_order",
    "sop_asymptotic",
    "sop_closed_form",
    "sop_quadrature",
    "sweep",
    "varpi_xi",
]

__version__ = "0.1.0"
