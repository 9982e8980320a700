"""Closed-form SNR distributions for the user and the eavesdropper field.

User side: after co-phasing, the cascaded amplitude |A| is a sum of N iid
Rice magnitudes, moment-matched to Gamma(k, theta); gamma_D = rho_d |A|^2.

Eavesdropper side: each eavesdropper's post-beamforming channel scalar is
asymptotically (in N) complex Gaussian with mean M and variance V, so its
SNR is noncentral chi-square; aggregating the per-eavesdropper tails over
the Poisson field via the generating functional, with the Marcum tail
replaced by its exponential fit, gives the closed CDF
exp(-t0 (Gamma(t1) - Gamma(t1, t2 x^{t3})) x^{-t4}) and, for an unbounded
disk, exp(-t0 Gamma(t1) x^{-t4}).

The Marcum argument ratio varpi = s/sigma is direction-dependent through the
steering-vector alignment between the eavesdropper and the user, but one
scalar must represent the whole field in the closed forms. The default is the
disk-plane departure direction (elevation 0): when the eavesdropper disk is
coplanar with the surface every position shares the same steering offset
(sin(az) sin(0) kills the azimuth term), so the scalar is exact rather than
an average, and it remains the natural constant for an elevated surface once
r >> h. A fixed reference direction can be forced through the config or per
call, and reference_angles="average" selects the direction-averaged RMS value
instead (the alignment power |R1 R2|^2 averages to N over directions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ConfigError
from .specfun import laguerre_half, marcum_exp_params, marcum_q1
from .sysmodel import SystemConfig, eve_elevation

_QUARTER_PI = math.pi / 4.0


# ---------------------------------------------------------------------------
# User SNR: Gamma fit of the cascaded amplitude
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaFit:
    """Shape/scale of the fitted amplitude law: |A| ~ Gamma(k, theta)."""

    k: float
    theta: float


def _rice_factor_terms(eps: float):
    # recurring combination: (pi/4) L^2 with L = L_{1/2}(-eps)
    L = laguerre_half(eps)
    return L, _QUARTER_PI * L * L


def gamma_fit(cfg: SystemConfig) -> GammaFit:
    """Moment-matched Gamma parameters of the co-phased amplitude |A|.

    k = N (pi/4) L^2 / (1 + eps - (pi/4) L^2)
    theta = sqrt(K) sqrt(mu_D nu / (1+eps)) (1 + eps - (pi/4) L^2)
            / ((sqrt(pi)/2) L)
    """
    eps = cfg.ground_epsilon
    if eps < 0:
        raise ConfigError("epsilon must be >= 0")
    L, piL2 = _rice_factor_terms(eps)
    rem = 1.0 + eps - piL2
    # 1+eps-(pi/4)L^2 > 0 for all eps >= 0 (it is the relative variance of a
    # Rice magnitude, scaled); guards against pathological rounding only
    if rem <= 0:
        raise ConfigError("Rice moment combination degenerate")
    k = cfg.N * piL2 / rem
    theta = (math.sqrt(cfg.K) * math.sqrt(cfg.mu_D * cfg.nu / (1.0 + eps))
             * rem / ((math.sqrt(math.pi) / 2.0) * L))
    return GammaFit(k=k, theta=theta)


def cdf_gamma_d(x, cfg: SystemConfig, fit: GammaFit | None = None):
    """F_{gamma_D}(x) = P(rho_d |A|^2 <= x), regularized incomplete gamma."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    f = fit or gamma_fit(cfg)
    u = np.sqrt(x / cfg.rho_d) / f.theta
    out = special.gammainc(f.k, u)
    return out if out.ndim else float(out)


def pdf_gamma_d(x, cfg: SystemConfig, fit: GammaFit | None = None):
    """Density of gamma_D; d/dx of cdf_gamma_d.

    With u = sqrt(x/rho_d)/theta: f(x) = u^k e^{-u} / (2 x Gamma(k)),
    evaluated in log space so large k does not overflow.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be > 0")
    f = fit or gamma_fit(cfg)
    u = np.sqrt(x / cfg.rho_d) / f.theta
    logpdf = f.k * np.log(u) - u - math.log(2.0) - np.log(x) \
        - special.gammaln(f.k)
    out = np.exp(logpdf)
    return out if out.ndim else float(out)


def mean_gamma_d(cfg: SystemConfig) -> float:
    """Leading-order average user SNR (pi L^2/(4(1+eps))) rho_d mu_D nu K N^2.

    The exact mean of the fitted law is rho_d k(1+k) theta^2 =
    rho_d K N nu mu_D (1 + (pi/4)(N-1) L^2/(1+eps)); this function returns
    the N^2 leading form, which is also the standard large-N statement. Both
    are below the coherent ceiling rho_d mu_D nu K N^2.
    """
    eps = cfg.ground_epsilon
    _, piL2 = _rice_factor_terms(eps)
    return (piL2 / (1.0 + eps)) * cfg.rho_d * cfg.mu_D * cfg.nu \
        * cfg.K * cfg.N**2


def mean_gamma_d_exact(cfg: SystemConfig) -> float:
    """Exact mean of the fitted SNR law, rho_d k (1+k) theta^2."""
    f = gamma_fit(cfg)
    return cfg.rho_d * f.k * (1.0 + f.k) * f.theta**2


# ---------------------------------------------------------------------------
# Eavesdropper channel scalar: Gaussian fit and per-node SNR law
# ---------------------------------------------------------------------------

def sinc_ratio(u: float, side: int) -> float:
    """Aligned-array gain R(u) = sin(pi side u)/sin(pi u).

    u is the per-element phase offset in cycles (spacing ratio already
    applied). Near integer u the quotient is evaluated by series:
    R = (-1)^{m(side-1)} side (1 - (pi h)^2 (side^2 - 1)/6 + O(h^4)) for
    u = m + h. |R| <= side always.
    """
    su = math.sin(math.pi * u)
    if abs(su) < 1e-8:
        m = round(u)
        h = u - m
        mag = side * (1.0 - (math.pi * h) ** 2 * (side**2 - 1) / 6.0)
        sign = -1.0 if (m * (side - 1)) % 2 else 1.0
        return sign * mag
    return math.sin(math.pi * side * u) / su


def direction_deltas(cfg: SystemConfig, azimuth: float, elevation: float):
    """Steering offsets (delta1, delta2) of a direction relative to the user.

    delta1 = sin(az) sin(el) - sin(az_D) sin(el_D), delta2 = cos(el) -
    cos(el_D); these enter the alignment product through u_i = spacing *
    delta_i.
    """
    d1 = math.sin(azimuth) * math.sin(elevation) \
        - math.sin(cfg.rd_azimuth) * math.sin(cfg.rd_elevation)
    d2 = math.cos(elevation) - math.cos(cfg.rd_elevation)
    return d1, d2


def _alignment(cfg: SystemConfig, azimuth: float, elevation: float) -> complex:
    """Complex alignment sum_n conj(a_E(n)) a_D(n) = product of two
    geometric sums, one per array axis."""
    d1, d2 = direction_deltas(cfg, azimuth, elevation)
    side = cfg.sqrt_N
    s = cfg.element_spacing_ratio
    out = 1.0 + 0.0j
    for d in (d1, d2):
        u = s * d
        out *= sinc_ratio(u, side) * np.exp(1j * math.pi * (side - 1) * u)
    return complex(out)


def eve_gauss_fit(cfg: SystemConfig, eve_angles, radius: float | None = None):
    """CLT fit (M, V) of the post-beamforming eavesdropper channel scalar.

    Z = sum_n conj(h_RE(n)) h_RD(n)/|h_RD(n)| ~ CN(M, V) with
    |M| = sqrt(mu_E eps^2 / ((pi/4)(1+eps) L^2)) |R(u1) R(u2)| and
    V = N mu_E (1 - eps^2/((pi/4)(1+eps) L^2)).

    eve_angles is (azimuth, elevation). radius fixes mu_E = beta0 r^-alpha2;
    when omitted it is recovered from the elevation via the surface height
    (r = h_RIS / tan(el)), the same geometry the sampler uses.
    """
    azimuth, elevation = eve_angles
    if radius is None:
        t = math.tan(elevation)
        if not 0 < elevation < math.pi / 2 or t <= 0:
            raise ConfigError(
                "cannot infer radius from elevation; pass radius explicitly")
        radius = cfg.h_RIS / t
    if radius <= 0:
        raise ValueError("radius must be > 0")
    eps = cfg.ground_epsilon
    L, piL2 = _rice_factor_terms(eps)
    mu_e = cfg.beta0 * radius ** (-cfg.alpha2)
    ratio = eps**2 / ((1.0 + eps) * piL2)
    # eps^2 < (pi/4)(1+eps)L^2 holds for all eps >= 0
    assert ratio < 1.0, "variance of the Gaussian fit must be positive"
    M = math.sqrt(mu_e * ratio) * _alignment(cfg, azimuth, elevation)
    V = cfg.N * mu_e * (1.0 - ratio)
    return M, V


def cdf_gamma_e_single(x, cfg: SystemConfig, radius: float,
                       angles=None):
    """CDF of one eavesdropper's SNR at a known position.

    gamma_E = rho_e K nu |Z|^2 with Z ~ CN(M, V): noncentral chi-square,
    F(x) = 1 - Q1(s/sigma, sqrt(x/(rho_e K nu))/sigma), s = |M|,
    sigma^2 = V/2. Exact Marcum evaluation. angles default to the position's
    geometric direction (azimuth 0, elevation from the surface height).
    """
    if angles is None:
        angles = (0.0, float(eve_elevation(radius, cfg.h_RIS)))
    M, V = eve_gauss_fit(cfg, angles, radius=radius)
    s = abs(M)
    sigma = math.sqrt(V / 2.0)
    scale = cfg.rho_e * cfg.K * cfg.nu
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0):
        raise ValueError("x must be >= 0")
    out = np.array([1.0 - marcum_q1(s / sigma, math.sqrt(v / scale) / sigma)
                    for v in xs])
    return out if np.ndim(x) else float(out[0])


# ---------------------------------------------------------------------------
# Aggregate eavesdropper field: tail parameters and CDF forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EveTailParams:
    """Scalars of the aggregated eavesdropper SNR law.

    varpi and Xi feed the Marcum exponential fit Q1(varpi, Xi sqrt(x)
    r^{alpha2/2}) ~ exp(-e^v (Xi sqrt(x) r^{alpha2/2})^mu); t0..t4 are the
    resulting closed-CDF constants. s and sigma2 are the noncentral
    parameters of a single eavesdropper at the disk edge r_e (diagnostic
    anchor; varpi = s/sigma independent of radius). All fields are computed
    together and must never be mutated independently.
    """

    varpi: float
    Xi: float
    v: float
    mu: float
    t0: float
    t1: float
    t2: float
    t3: float
    t4: float
    s: float
    sigma2: float


def varpi_xi(cfg: SystemConfig, reference_angles=None) -> EveTailParams:
    """Tail parameters of the aggregated eavesdropper SNR.

    reference_angles:
      * None (default): use the config's eve reference direction if set,
        otherwise the disk-plane direction (elevation 0), whose steering
        offset is shared by every position in a coplanar disk.
      * (azimuth, elevation): single fixed direction, the literal
        one-direction reduction.
      * "average": direction-averaged varpi = sqrt(2/((pi/4)(1+eps)L^2/
        eps^2 - 1)) (the alignment power |R1 R2|^2 averages to N over
        directions, cancelling the N in the variance).
    """
    eps = cfg.ground_epsilon
    L, piL2 = _rice_factor_terms(eps)
    ratio = eps**2 / ((1.0 + eps) * piL2)  # < 1 always

    if reference_angles is None and cfg.eve_ref_azimuth is not None:
        reference_angles = (cfg.eve_ref_azimuth, cfg.eve_ref_elevation)
    if reference_angles is None:
        reference_angles = (0.0, 0.0)

    if eps == 0.0:
        varpi = 0.0
    elif isinstance(reference_angles, str):
        if reference_angles != "average":
            raise ConfigError(
                "reference_angles must be a direction pair or 'average'")
        # E[|R1 R2|^2] = N over directions: varpi_rms^2 = 2/(B-1),
        # B = (pi/4)(1+eps)L^2/eps^2
        varpi = math.sqrt(2.0 / (1.0 / ratio - 1.0))
    else:
        align = abs(_alignment(cfg, *reference_angles))
        varpi = align * math.sqrt(
            2.0 * ratio / (cfg.N * (1.0 - ratio)))

    Xi = math.sqrt(2.0 / (cfg.N * cfg.K * cfg.nu * cfg.beta0
                          * cfg.rho_e * (1.0 - ratio)))
    v, mu = marcum_exp_params(varpi)

    a2h = cfg.alpha2 / 2.0
    t4 = 2.0 / cfg.alpha2
    t3 = mu / 2.0
    t1 = 2.0 / (a2h * mu)
    t2 = math.exp(v) * Xi**mu * cfg.r_e ** (a2h * mu)
    t0 = (2.0 * math.pi * cfg.lambda_e
          / (a2h * mu * math.exp(4.0 * v / (cfg.alpha2 * mu))
             * Xi ** (4.0 / cfg.alpha2)))

    mu_e_edge = cfg.beta0 * cfg.r_e ** (-cfg.alpha2)
    sigma2 = cfg.N * mu_e_edge * (1.0 - ratio) / 2.0
    s = varpi * math.sqrt(sigma2)
    return EveTailParams(varpi=varpi, Xi=Xi, v=v, mu=mu, t0=t0, t1=t1,
                         t2=t2, t3=t3, t4=t4, s=s, sigma2=sigma2)


def cdf_gamma_e(x, cfg: SystemConfig, kernel: str = "approx",
                params: EveTailParams | None = None):
    """Aggregate CDF of the strongest eavesdropper SNR, by PGFL quadrature.

    F(x) = exp(-2 pi lambda_e int_0^{r_e} Q1(varpi, Xi sqrt(x) r^{alpha2/2})
    r dr). kernel selects the Marcum evaluation inside the integral:
    "approx" uses the exponential fit (the primary variant, the one the
    closed forms integrate), "exact" the exact Marcum Q1 (oracle variant).
    Absolute quadrature tolerance 1e-10 on the r-integral.
    """
    p = params or varpi_xi(cfg)
    a2h = cfg.alpha2 / 2.0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be > 0")
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        root = math.sqrt(xv)
        if kernel == "approx":
            c = math.exp(p.v) * (p.Xi * root) ** p.mu

            def f(r, c=c):
                return r * math.exp(-c * r ** (a2h * p.mu))
        elif kernel == "exact":
            def f(r, root=root):
                return r * marcum_q1(p.varpi, p.Xi * root * r**a2h)
        else:
            raise ValueError("kernel must be 'approx' or 'exact'")
        val, err = integrate.quad(f, 0.0, cfg.r_e, epsabs=1e-10,
                                  epsrel=1e-10, limit=200)
        out[i] = math.exp(-2.0 * math.pi * cfg.lambda_e * val)
    return out if np.ndim(x) else float(out[0])


def cdf_gamma_e_closed(x, cfg: SystemConfig,
                       params: EveTailParams | None = None):
    """Closed finite-disk CDF exp(-t0 gamma(t1, t2 x^{t3}) x^{-t4}).

    Continuous limit at x -> 0+ is the empty-field atom exp(-lambda_e pi
    r_e^2) (identity t0 t2^{t1}/t1 = pi lambda_e r_e^2); x = 0 returns that
    atom.
    """
    p = params or varpi_xi(cfg)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0):
        raise ValueError("x must be >= 0")
    out = np.empty_like(xs)
    atom = math.exp(-cfg.lambda_e * math.pi * cfg.r_e**2)
    for i, xv in enumerate(xs):
        if xv == 0.0:
            out[i] = atom
            continue
        u = p.t2 * xv**p.t3
        g = special.gammainc(p.t1, u) * special.gamma(p.t1)
        out[i] = math.exp(-p.t0 * g * xv ** (-p.t4))
    return out if np.ndim(x) else float(out[0])


def pdf_gamma_e_closed(x, cfg: SystemConfig,
                       params: EveTailParams | None = None):
    """Density of the closed CDF (its x-derivative).

    F'(x) = F(x) t0 x^{-t4-1} [t4 gamma(t1,u) - t3 u^{t1} e^{-u}],
    u = t2 x^{t3}; the bracket is positive for x > 0 (it vanishes only in
    the x -> 0 limit, at order u^{t1+1}).
    """
    p = params or varpi_xi(cfg)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be > 0")
    F = np.atleast_1d(cdf_gamma_e_closed(xs, cfg, params=p))
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        u = p.t2 * xv**p.t3
        g = special.gammainc(p.t1, u) * special.gamma(p.t1)
        bracket = p.t4 * g - p.t3 * u**p.t1 * math.exp(-u)
        out[i] = F[i] * p.t0 * xv ** (-p.t4 - 1.0) * max(bracket, 0.0)
    return out if np.ndim(x) else float(out[0])


def cdf_gamma_e_asymptotic(x, cfg: SystemConfig,
                           params: EveTailParams | None = None):
    """Unbounded-disk CDF exp(-t0 Gamma(t1) x^{-t4}) (r_e -> infinity).

    Valid once t2 x^{t3} is large (the incomplete upper tail below 1e-6 of
    Gamma(t1) for t2 x^{t3} > 50); no probability atom at 0.
    """
    p = params or varpi_xi(cfg)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be > 0")
    a = p.t0 * special.gamma(p.t1)
    out = np.exp(-a * xs ** (-p.t4))
    return out if np.ndim(x) else float(out[0])


def _cdf_gamma_e_per_direction(x, cfg: SystemConfig,
                               params: EveTailParams | None = None,
                               n_azimuth: int = 64):
    """Diagnostic aggregate CDF with position-dependent varpi.

    Same PGFL, but each position keeps its own alignment (azimuth averaged
    on a trapezoid grid, elevation from the ground range). Quantifies what
    the single-varpi reduction discards; not part of the closed-form chain.
    """
    p = params or varpi_xi(cfg)
    eps = cfg.ground_epsilon
    L, piL2 = _rice_factor_terms(eps)
    ratio = eps**2 / ((1.0 + eps) * piL2)
    a2h = cfg.alpha2 / 2.0
    azs = (np.arange(n_azimuth) + 0.5) * (2.0 * math.pi / n_azimuth)

    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    varpi_of = {}

    def varpis(r):
        if r not in varpi_of:
            el = float(eve_elevation(r, cfg.h_RIS))
            al = np.array([abs(_alignment(cfg, az, el)) for az in azs])
            varpi_of[r] = al * math.sqrt(
                2.0 * ratio / (cfg.N * (1.0 - ratio))) if eps > 0 \
                else np.zeros(n_azimuth)
        return varpi_of[r]

    for i, xv in enumerate(xs):
        root = math.sqrt(xv)

        def f(r):
            b = p.Xi * root * r**a2h
            return r * float(np.mean([marcum_q1(w, b) for w in varpis(r)]))

        val, err = integrate.quad(f, 0.0, cfg.r_e, epsabs=1e-8,
                                  epsrel=1e-8, limit=100)
        out[i] = math.exp(-2.0 * math.pi * cfg.lambda_e * val)
    return out if np.ndim(x) else float(out[0])
