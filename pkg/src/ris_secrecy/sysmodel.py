"""Scenario configuration, geometry, and channel sampling.

A scenario is one downlink: a K-antenna source S, an N-element reflecting
surface R (both uniform square planar arrays), a single-antenna user D, and
eavesdroppers scattered as a homogeneous PPP of density lambda_e inside a
disk of radius r_e centered on the surface. The direct S-D and S-E paths are
blocked; everything flows through the surface.

Conventions fixed here and used verbatim everywhere else:
  * path gains: nu = beta0 d_SR^-alpha1 (S-R), mu_i = beta0 d_Ri^-alpha2
    (R-to-ground-node i), with the eavesdropper ground range r as d_RE.
  * planar array indexing is row-major: element n = x*sqrt(Z) + y with
    0 <= x, y < sqrt(Z).
  * SNRs enter and leave as dB (value = 10 log10(ratio)).
  * the secrecy rate threshold C_th is in nats; capacities are reported in
    bits/s/Hz elsewhere.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_PI = math.pi


@dataclass(frozen=True)
class SystemConfig:
    """All physical and geometric parameters of one scenario.

    epsilon is the Rician factor of the R-to-ground links (h_RD, h_RE).
    epsilon1, when set, switches the S-R link from pure LoS to Rician with
    that factor; epsilon2, when set, overrides epsilon for the ground links
    (the two together form the dual-Rician mode). eve_ref_azimuth/elevation
    optionally pin the reference eavesdropper direction used by the
    analytic tail; left unset, the tail uses the disk-plane direction
    (see snr_dist.varpi_xi).
    """

    K: int = 16
    N: int = 36
    epsilon: float = 2.0
    epsilon1: float | None = None
    epsilon2: float | None = None
    alpha1: float = 2.0
    alpha2: float = 2.0
    beta0: float = 1.0
    d_SR: float = 30.0
    d_RD: float = 40.0
    r_e: float = 200.0
    lambda_e: float = 1e-3
    rho_d_dB: float = 20.0
    rho_e_dB: float = 30.0
    C_th: float = 0.05
    element_spacing_ratio: float = 0.5
    h_RIS: float = 10.0
    # S-R link angles (radians): arrival at the surface, departure at S
    sr_aoa_azimuth: float = _PI / 6
    sr_aoa_elevation: float = _PI / 4
    sr_aod_azimuth: float = _PI / 3
    sr_aod_elevation: float = _PI / 4
    # R-D departure angles (the legitimate user's direction)
    rd_azimuth: float = _PI / 4
    rd_elevation: float = _PI / 3
    # optional fixed reference direction for the eavesdropper tail fit
    eve_ref_azimuth: float | None = None
    eve_ref_elevation: float | None = None

    # -- derived quantities ------------------------------------------------

    @property
    def rho_d(self) -> float:
        """Legitimate-link transmit SNR, linear."""
        return 10.0 ** (self.rho_d_dB / 10.0)

    @property
    def rho_e(self) -> float:
        """Eavesdropper-link transmit SNR, linear."""
        return 10.0 ** (self.rho_e_dB / 10.0)

    @property
    def nu(self) -> float:
        """S-R path gain beta0 d_SR^-alpha1."""
        return path_loss(self.beta0, self.d_SR, self.alpha1)

    @property
    def mu_D(self) -> float:
        """R-D path gain beta0 d_RD^-alpha2."""
        return path_loss(self.beta0, self.d_RD, self.alpha2)

    @property
    def phi(self) -> float:
        """Outage threshold factor e^{C_th} (C_th in nats)."""
        return math.exp(self.C_th)

    @property
    def sqrt_K(self) -> int:
        return int(round(math.isqrt(self.K)))

    @property
    def sqrt_N(self) -> int:
        return int(round(math.isqrt(self.N)))

    @property
    def ground_epsilon(self) -> float:
        """Rician factor actually applied to h_RD / h_RE draws."""
        return self.epsilon if self.epsilon2 is None else self.epsilon2

    @property
    def mean_eve_count(self) -> float:
        return self.lambda_e * _PI * self.r_e**2

    # -- validation and serialization ---------------------------------------

    def validate(self) -> "SystemConfig":
        """Check every invariant; raises ConfigError with the failing field."""
        if not (isinstance(self.K, int) and self.K >= 1):
            raise ConfigError("K must be a positive integer")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ConfigError("N must be a positive integer")
        if math.isqrt(self.K) ** 2 != self.K:
            raise ConfigError("K must be a perfect square (planar array)")
        if math.isqrt(self.N) ** 2 != self.N:
            raise ConfigError("N must be a perfect square (planar array)")
        for name in ("epsilon",):
            if not (_finite(getattr(self, name)) and getattr(self, name) >= 0):
                raise ConfigError(f"{name} must be >= 0")
        for name in ("epsilon1", "epsilon2"):
            v = getattr(self, name)
            if v is not None and not (_finite(v) and v >= 0):
                raise ConfigError(f"{name} must be >= 0 or null")
        for name in ("alpha1", "alpha2"):
            if not (_finite(getattr(self, name)) and getattr(self, name) >= 2):
                raise ConfigError(f"{name} must be >= 2")
        for name in ("beta0", "d_SR", "d_RD", "r_e", "lambda_e",
                     "element_spacing_ratio"):
            if not (_finite(getattr(self, name)) and getattr(self, name) > 0):
                raise ConfigError(f"{name} must be > 0")
        # h = 0 puts the surface phase center in the eavesdropper plane, the
        # geometry where one steering offset covers the whole disk
        if not (_finite(self.h_RIS) and self.h_RIS >= 0):
            raise ConfigError("h_RIS must be >= 0")
        for name in ("rho_d_dB", "rho_e_dB"):
            if not _finite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if not (_finite(self.C_th) and self.C_th >= 0):
            raise ConfigError("C_th must be >= 0")
        angle_fields = ("sr_aoa_azimuth", "sr_aoa_elevation",
                        "sr_aod_azimuth", "sr_aod_elevation",
                        "rd_azimuth", "rd_elevation")
        for name in angle_fields:
            if not _finite(getattr(self, name)):
                raise ConfigError(f"{name} must be a finite angle in radians")
        ref = (self.eve_ref_azimuth, self.eve_ref_elevation)
        if (ref[0] is None) != (ref[1] is None):
            raise ConfigError(
                "eve_ref_azimuth and eve_ref_elevation must be set together")
        if ref[0] is not None and not (_finite(ref[0]) and _finite(ref[1])):
            raise ConfigError("eve reference angles must be finite radians")
        return self

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes).validate()

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        merged = {}
        for f in dataclasses.fields(cls):
            if f.name in data:
                merged[f.name] = _coerce(f.name, data[f.name])
        try:
            cfg = cls(**merged)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        return cfg.validate()

    @classmethod
    def from_json(cls, text: str) -> "SystemConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def normalized_json(self) -> str:
        """Canonical JSON with every field (defaults included), sorted keys."""
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"), allow_nan=False)

    def sha256(self) -> str:
        return hashlib.sha256(self.normalized_json().encode()).hexdigest()


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def _coerce(name: str, value):
    # JSON has no int/float distinction worth fighting; ints stay ints for
    # K and N, everything else numeric becomes float, None passes through.
    if value is None:
        return None
    if name in ("K", "N"):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number")
    return float(value)


# ---------------------------------------------------------------------------
# Geometry primitives
# ---------------------------------------------------------------------------

def path_loss(beta0: float, d: float, alpha: float) -> float:
    """Distance-law gain beta0 * d^-alpha (beta0 referenced at 1 m)."""
    if d <= 0:
        raise ValueError("distance must be > 0")
    return beta0 * d ** (-alpha)


def array_response(Z: int, azimuth: float, elevation: float,
                   spacing_ratio: float = 0.5) -> np.ndarray:
    """Steering vector of a Z-element square planar array.

    Entry for grid position (x, y) is
    exp(j 2 pi s (x sin(az) sin(el) + y cos(el))), s = spacing in
    wavelengths, flattened row-major as n = x*sqrt(Z) + y. All entries are
    unit modulus, so ||a||^2 = Z identically.
    """
    side = math.isqrt(Z)
    if side * side != Z:
        raise ValueError("array size must be a perfect square")
    grid = np.arange(side)
    xs = np.repeat(grid, side)
    ys = np.tile(grid, side)
    phase = 2.0 * _PI * spacing_ratio * (
        xs * math.sin(azimuth) * math.sin(elevation)
        + ys * math.cos(elevation))
    return np.exp(1j * phase)


def eve_elevation(radius, h_ris: float):
    """Departure elevation toward an eavesdropper at a given ground range.

    The surface sits h_ris above the eavesdropper plane, so the ray dips at
    atan2(h_ris, r): a distant eavesdropper approaches elevation 0 and the
    cos(el) term of the steering phase approaches 1.
    """
    return np.arctan2(h_ris, radius)


# ---------------------------------------------------------------------------
# Random channel sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChannelRealization:
    """One draw of every random quantity in the scenario.

    eve_positions is (n, 2) of polar (ground range r, azimuth); a zero-row
    array is a legal (and at low density common) draw. eve_channels holds
    h_RE row per eavesdropper.
    """

    H_SR: np.ndarray
    h_RD: np.ndarray
    eve_positions: np.ndarray
    eve_channels: np.ndarray
    seed_info: tuple

    @property
    def n_eves(self) -> int:
        return self.eve_positions.shape[0]


def make_trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based per-trial stream: key = (seed, trial index).

    Philox keys the stream rather than seeding state, so trial t's draws are
    identical no matter which worker runs it or in what order.
    """
    key = np.array([seed, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard circular complex Gaussians via Box-Muller on the stream.

    z = sqrt(-ln(1-U1)) * exp(j 2 pi U2), giving E|z|^2 = 1. Pinning the
    transform (instead of Generator.normal) keeps draws byte-stable even if
    numpy ever changes its Gaussian algorithm.
    """
    u1 = rng.random(shape)
    u2 = rng.random(shape)
    return np.sqrt(-np.log1p(-u1)) * np.exp(2j * _PI * u2)


def sample_channels(cfg: SystemConfig, rng: np.random.Generator,
                    seed_info: tuple = (0, 0)) -> ChannelRealization:
    """Draw one full channel realization.

    Draw order on the stream is fixed and documented (changing it is a
    breaking change): (1) Poisson eavesdropper count, (2) radii via
    r_e*sqrt(U), (3) azimuths 2*pi*U, (4) h_RD scatter vector, (5)
    eavesdropper scatter matrix, (6) S-R scatter matrix (dual-Rician mode
    only). Eavesdropper path gain uses the ground range (the surface height
    only sets the departure elevation).
    """
    N, K = cfg.N, cfg.K
    s = cfg.element_spacing_ratio

    n_eves = int(rng.poisson(cfg.mean_eve_count))
    radii = cfg.r_e * np.sqrt(rng.random(n_eves))
    # U can be exactly 0 (p = 2^-53 per draw); keep the path gain finite
    radii = np.maximum(radii, 1e-9 * cfg.r_e)
    azimuths = 2.0 * _PI * rng.random(n_eves)

    eps_g = cfg.ground_epsilon
    los_w = math.sqrt(eps_g / (1.0 + eps_g))
    sc_w = math.sqrt(1.0 / (1.0 + eps_g))

    a_rd = array_response(N, cfg.rd_azimuth, cfg.rd_elevation, s)
    h_rd = math.sqrt(cfg.mu_D) * (los_w * a_rd
                                  + sc_w * complex_normal(rng, N))

    # all eavesdropper steering vectors at once: phase(m, n) =
    # x_n sin(az_m) sin(el_m) + y_n cos(el_m)
    side = cfg.sqrt_N
    grid = np.arange(side)
    xs = np.repeat(grid, side)
    ys = np.tile(grid, side)
    els = eve_elevation(radii, cfg.h_RIS)
    ph = 2.0 * _PI * s * (
        np.outer(np.sin(azimuths) * np.sin(els), xs) + np.outer(np.cos(els), ys))
    a_re = np.exp(1j * ph)
    mu_e = cfg.beta0 * radii ** (-cfg.alpha2)
    h_re = np.sqrt(mu_e)[:, None] * (
        los_w * a_re + sc_w * complex_normal(rng, (n_eves, N)))

    a_sr = array_response(N, cfg.sr_aoa_azimuth, cfg.sr_aoa_elevation, s)
    a_k = array_response(K, cfg.sr_aod_azimuth, cfg.sr_aod_elevation, s)
    h_sr_los = np.outer(a_sr, a_k.conj())
    if cfg.epsilon1 is None:
        H_SR = math.sqrt(cfg.nu) * h_sr_los
    else:
        e1 = cfg.epsilon1
        H_SR = math.sqrt(cfg.nu) * (
            math.sqrt(e1 / (1.0 + e1)) * h_sr_los
            + math.sqrt(1.0 / (1.0 + e1)) * complex_normal(rng, (N, K)))

    return ChannelRealization(
        H_SR=H_SR, h_RD=h_rd,
        eve_positions=np.column_stack([radii, azimuths]),
        eve_channels=h_re, seed_info=seed_info)
