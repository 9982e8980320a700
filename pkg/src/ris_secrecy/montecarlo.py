"""Trial engine: empirical SNR laws, outage rate, and secrecy throughput.

Every trial owns a counter-based stream keyed by (seed, trial index), so the
drawn channels are a pure function of (cfg, trials, seed) no matter how
trials are scheduled across workers, and aggregation uses a fixed-order
pairwise reduction so even the floating-point roundoff is reproducible.

In pure-LoS feed mode each trial evaluates the reduced per-trial forms
(user SNR from the co-phased amplitude, eavesdropper SNR from the
phase-aligned scalar sum); the full matrix chain through the beamforming
state is algebraically identical there and the equality is asserted in
tests. Dual-Rician feed mode runs the full matrix chain.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .beamform import build_state, eavesdropper_snrs, snr_legitimate
from .errors import ConfigError
from .sysmodel import ChannelRealization, SystemConfig, make_trial_rng, \
    sample_channels

LN2 = math.log(2.0)

# trials per work unit; fixed so chunk boundaries (and therefore the
# concatenation order) never depend on the worker count
_CHUNK = 1024


@dataclass(frozen=True)
class TrialOutcome:
    """One trial's SNR pair and secrecy rate (rate in nats)."""

    gamma_d: float
    gamma_e_max: float
    secrecy_rate_nats: float
    n_eves: int

    def __post_init__(self):
        if self.gamma_d < 0 or self.gamma_e_max < 0:
            raise ValueError("SNRs must be nonnegative")
        if self.n_eves == 0 and self.gamma_e_max != 0.0:
            raise ValueError("empty disk must give gamma_e_max = 0")
        if self.secrecy_rate_nats > math.log1p(self.gamma_d) + 1e-12:
            raise ValueError("secrecy rate cannot exceed the user rate")


@dataclass(frozen=True)
class EmpiricalSummary:
    """Aggregates of one run.

    esc_bits clamps per sample ([ln(1+g_d) - ln(1+g_e)]^+ averaged, then
    bits); esc_diff_bits clamps the difference of the averaged rates, the
    estimator the analytic expression corresponds to. Both standard errors
    are of the underlying mean (the outer clamp of esc_diff_bits is not
    propagated). ecdf_d / ecdf_e are the sorted per-trial SNR samples.
    """

    sop: float
    sop_se: float
    esc_bits: float
    esc_se: float
    esc_diff_bits: float
    esc_diff_se: float
    ecdf_d: np.ndarray
    ecdf_e: np.ndarray
    trials: int
    seed: int


@dataclass(frozen=True)
class MetricPoint:
    axis_value: float
    config: SystemConfig
    summary: EmpiricalSummary


@dataclass(frozen=True)
class MetricSeries:
    axis: str
    points: list
    trials: int
    seed: int


def _pairwise_sum(x: np.ndarray) -> float:
    """Deterministic pairwise tree sum, independent of chunking."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0.0
    while x.size > 1:
        if x.size % 2:
            x = np.concatenate([x[0:-1:2] + x[1::2], x[-1:]])
        else:
            x = x[0::2] + x[1::2]
    return float(x[0])


def _pairwise_mean(x: np.ndarray) -> float:
    return _pairwise_sum(x) / max(len(x), 1)


def _los_snrs(cfg: SystemConfig, real: ChannelRealization):
    # reduced forms, valid for the rank-1 LoS feed (see beamform)
    mags = np.abs(real.h_RD)
    scale = cfg.K * cfg.nu
    gamma_d = cfg.rho_d * scale * float(mags.sum()) ** 2
    if real.n_eves == 0:
        return gamma_d, 0.0
    unit = np.where(mags > 0, real.h_RD / np.where(mags > 0, mags, 1.0), 0.0)
    z = np.conj(real.eve_channels) @ unit
    gamma_e = cfg.rho_e * scale * float(np.max(np.abs(z)) ** 2)
    return gamma_d, gamma_e


def _matrix_snrs(cfg: SystemConfig, real: ChannelRealization):
    state = build_state(cfg, real)
    gamma_d = snr_legitimate(real, state, cfg.rho_d)
    snrs = eavesdropper_snrs(real, state, cfg.rho_e)
    return gamma_d, float(snrs.max()) if snrs.size else 0.0


def run_single_trial(cfg: SystemConfig, seed: int,
                     trial_index: int) -> TrialOutcome:
    """One trial, exactly as the batch engine computes it."""
    rng = make_trial_rng(seed, trial_index)
    real = sample_channels(cfg, rng, seed_info=(seed, trial_index))
    if cfg.epsilon1 is None:
        gamma_d, gamma_e = _los_snrs(cfg, real)
    else:
        gamma_d, gamma_e = _matrix_snrs(cfg, real)
    rate = math.log1p(gamma_d) - math.log1p(gamma_e)
    return TrialOutcome(gamma_d=gamma_d, gamma_e_max=gamma_e,
                        secrecy_rate_nats=rate, n_eves=real.n_eves)


def _run_chunk(cfg: SystemConfig, seed: int, lo: int, hi: int):
    gd = np.empty(hi - lo)
    ge = np.empty(hi - lo)
    los = cfg.epsilon1 is None
    for t in range(lo, hi):
        rng = make_trial_rng(seed, t)
        real = sample_channels(cfg, rng, seed_info=(seed, t))
        if los:
            d, e = _los_snrs(cfg, real)
        else:
            d, e = _matrix_snrs(cfg, real)
        gd[t - lo] = d
        ge[t - lo] = e
    return gd, ge


def run_trials(cfg: SystemConfig, trials: int, seed: int = 42,
               workers: int = 1) -> EmpiricalSummary:
    """Run `trials` independent channel realizations.

    Bitwise deterministic for fixed (cfg, trials, seed): trial t's draws
    come from the Philox stream keyed (seed, t) and the per-chunk results
    are concatenated in index order, so the worker count only affects wall
    time.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    bounds = [(lo, min(lo + _CHUNK, trials))
              for lo in range(0, trials, _CHUNK)]
    if workers == 1 or len(bounds) == 1:
        parts = [_run_chunk(cfg, seed, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_chunk, cfg, seed, lo, hi)
                    for lo, hi in bounds]
            parts = [f.result() for f in futs]
    gd = np.concatenate([p[0] for p in parts])
    ge = np.concatenate([p[1] for p in parts])

    rate = np.log1p(gd) - np.log1p(ge)
    n = trials
    sop = float(np.count_nonzero(rate < cfg.C_th)) / n
    sop_se = math.sqrt(sop * (1.0 - sop) / n)

    clamped = np.maximum(rate, 0.0)
    m_cl = _pairwise_mean(clamped)
    var_cl = _pairwise_sum((clamped - m_cl) ** 2) / max(n - 1, 1)
    m_diff = _pairwise_mean(rate)
    var_diff = _pairwise_sum((rate - m_diff) ** 2) / max(n - 1, 1)

    return EmpiricalSummary(
        sop=sop, sop_se=sop_se,
        esc_bits=m_cl / LN2, esc_se=math.sqrt(var_cl / n) / LN2,
        esc_diff_bits=max(m_diff, 0.0) / LN2,
        esc_diff_se=math.sqrt(var_diff / n) / LN2,
        ecdf_d=np.sort(gd), ecdf_e=np.sort(ge),
        trials=trials, seed=seed)


def sweep(cfg: SystemConfig, axis: str, values, trials: int, seed: int = 42,
          common_random_numbers: bool = True,
          workers: int = 1) -> MetricSeries:
    """run_trials across one config axis.

    With common random numbers (default) every point reuses the same seed,
    so curves differ only through the parameter, not the noise; otherwise
    point i runs on seed + i.
    """
    field_names = {f.name for f in dataclasses.fields(SystemConfig)}
    if axis not in field_names:
        raise ConfigError(f"unknown sweep axis: {axis}")
    points = []
    for i, value in enumerate(values):
        point_cfg = cfg.replace(**{axis: value})
        point_seed = seed if common_random_numbers else seed + i
        summary = run_trials(point_cfg, trials, seed=point_seed,
                             workers=workers)
        points.append(MetricPoint(axis_value=value, config=point_cfg,
                                  summary=summary))
    return MetricSeries(axis=axis, points=points, trials=trials, seed=seed)
