"""Secrecy metrics: outage probability and ergodic secrecy capacity.

Each metric has several evaluation routes that should agree inside their
stated regimes:

* quadrature against the fitted SNR laws (reference route; numerical
  integration only, no large-disk step),
* a general closed form through a Meijer G kernel, valid for any rational
  path-loss exponent, with dedicated alpha2 = 2 and alpha2 = 4 special
  cases evaluated on an independent backend (mpmath),
* high-SNR asymptotics (diversity order, capacity offset law).

Outage means ln(1+gamma_D) - ln(1+gamma_E) < C_th with C_th in nats;
phi = exp(C_th). Capacities are reported in bits/s/Hz.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from scipy import integrate, special

from .errors import UnsupportedPathError
from .snr_dist import (EveTailParams, GammaFit, cdf_gamma_e_closed,
                       gamma_fit, mean_gamma_d_exact, varpi_xi)
from .specfun import (EULER_GAMMA, ConvergenceError, exp_shi_minus_chi,
                      g_series_signed, laguerre_half,
                      meijer_g_m0_0m_log_contour)
from .sysmodel import SystemConfig

LN2 = math.log(2.0)
_LNPI = math.log(math.pi)
_LOG2_10 = math.log2(10.0)

_METHODS = ("quadrature", "closed_form", "special_case_a2_2",
            "special_case_a2_4", "asymptotic")


@dataclass(frozen=True)
class SecrecyResult:
    """Metric value tagged with the route that produced it.

    value is a probability in [0, 1] for SOP routes and bits/s/Hz (>= 0)
    for capacity routes. Exception: the asymptotic SOP is a tail expansion
    and may exceed 1 outside its regime; treat it as an approximation
    there, not a probability. diagnostics carries route-specific numbers
    (series terms, quadrature error estimates, regime indicators).
    """

    value: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.value >= 0.0 and math.isfinite(self.value)):
            raise ValueError(f"metric value must be finite and >= 0, "
                             f"got {self.value!r}")


def rationalize_alpha2(alpha2: float) -> tuple[int, int]:
    """alpha2 as a small rational p/q with q <= 16.

    The product-form closed SOP needs integer p, q. Raises
    UnsupportedPathError when no such fraction matches alpha2 to 1e-9;
    the quadrature route has no restriction.
    """
    frac = Fraction(alpha2).limit_denominator(16)
    if abs(alpha2 - frac.numerator / frac.denominator) > 1e-9:
        raise UnsupportedPathError(
            f"closed form needs alpha2 = p/q with q <= 16, got {alpha2!r}; "
            "use the quadrature route")
    return frac.numerator, frac.denominator


# ---------------------------------------------------------------------------
# Secrecy outage probability
# ---------------------------------------------------------------------------

def sop_quadrature(cfg: SystemConfig, params: EveTailParams | None = None,
                   fit: GammaFit | None = None) -> SecrecyResult:
    """Outage probability by direct integration of the definition.

    SOP = E_u[1 - F_{gamma_E}((1 + gamma_D)/phi - 1)] where u ~ Gamma(k, 1)
    is the variable behind gamma_D = rho_d theta^2 u^2. The eavesdropper
    CDF is the finite-disk closed form (zero-eavesdropper atom included),
    so no large-disk approximation enters; this is the reference the
    closed forms are checked against.
    """
    cfg.validate()
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    phi = cfg.phi
    scale = cfg.rho_d * f.theta ** 2
    # below u0 the eavesdropper threshold is <= 0: outage regardless
    u0 = math.sqrt(max(phi - 1.0, 0.0) / cfg.rho_d) / f.theta
    head = float(special.gammainc(f.k, u0))
    lgk = math.lgamma(f.k)

    def integrand(u):
        if u <= 0.0:
            return 0.0
        x = (1.0 + scale * u * u) / phi - 1.0
        if x <= 0.0:
            tail = 1.0
        else:
            tail = 1.0 - cdf_gamma_e_closed(x, cfg, params=p_t)
        return tail * math.exp((f.k - 1.0) * math.log(u) - u - lgk)

    hi = f.k + 40.0 * math.sqrt(f.k) + 40.0
    pts = [u for u in (2.0 * u0, f.k) if u0 < u < hi]
    val, err = integrate.quad(integrand, u0, hi, points=pts or None,
                              epsabs=1e-11, epsrel=1e-10, limit=400)
    sop = min(1.0, max(0.0, head + val))
    return SecrecyResult(sop, "quadrature",
                         {"head": head, "quad_err": err, "u_hi": hi})


def _prop_orders_and_pref(k: float, p: int, q: int):
    # pole row [j/p] + [(k+i)/(4q)] and the normalizing prefactor whose
    # product with the leading residue term is exactly 1
    orders = [j / p for j in range(p)] \
        + [(k + i) / (4 * q) for i in range(4 * q)]
    m = p + 4 * q
    log_pref = (0.5 * math.log(p) + (k - 0.5) * math.log(q)
                - (0.5 * m - 2.0 * k) * LN2
                - (0.5 * m - 1.0) * _LNPI - math.lgamma(k))
    return orders, log_pref


def _disk_saturation(cfg: SystemConfig, p_t: EveTailParams) -> float:
    # how saturated the disk kernel gamma(t1, t2 x^{t3}) is at the typical
    # outage threshold x ~ mean(gamma_D)/phi; close to 1 means the
    # large-disk replacement by Gamma(t1) is safe
    x_med = mean_gamma_d_exact(cfg) / cfg.phi
    if x_med <= 0.0:
        return 0.0
    return float(special.gammainc(p_t.t1, p_t.t2 * x_med ** p_t.t3))


def sop_closed_form(cfg: SystemConfig, params: EveTailParams | None = None,
                    fit: GammaFit | None = None) -> SecrecyResult:
    """General closed-form SOP for rational alpha2 = p/q.

    Uses the Meijer G^{m,0}_{0,m} kernel with m = p + 4q pole orders
    [j/p] + [(k+i)/(4q)] at argument
    (t0 Gamma(t1) phi^{t4})^p / (p^p (4q sqrt(rho_d) theta)^{4q}).
    The normalization identity pref * (leading residue term) = 1 lets the
    outage be summed as -pref * (residue series without the constant term),
    which is stable where the argument is small; when the series cancels
    too heavily a saddle-centered contour integral takes over. Assumes a
    large disk radius; a warning is emitted when the kernel is visibly
    unsaturated at the typical outage threshold.
    """
    cfg.validate()
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    p, q = rationalize_alpha2(cfg.alpha2)
    if p_t.t0 == 0.0:
        return SecrecyResult(0.0, "closed_form", {"route": "degenerate"})

    sat = _disk_saturation(cfg, p_t)
    if sat < 0.999:
        warnings.warn(
            f"large-disk closed form is weak here: kernel only {sat:.4f} "
            "saturated at the typical outage threshold (small r_e or low "
            "SNR); prefer sop_quadrature", stacklevel=2)

    log_b = math.log(p_t.t0) + math.lgamma(p_t.t1) + p_t.t4 * cfg.C_th
    log_x = (p * log_b - p * math.log(p)
             - 4 * q * (math.log(4 * q) + 0.5 * math.log(cfg.rho_d)
                        + math.log(f.theta)))
    orders, log_pref = _prop_orders_and_pref(f.k, p, q)

    diag = {"p": p, "q": q, "log10_arg": log_x / math.log(10.0),
            "saturation": sat}
    try:
        sign, log_s, sdiag = g_series_signed(orders, log_x,
                                             skip_constant=True)
        # the contour route is exact and cheap, so hand over as soon as the
        # series starts losing digits instead of riding the full envelope
        if sdiag["cancel_digits"] > 6.0:
            raise ConvergenceError("series cancelled",
                                   bound=sdiag["cancel_digits"])
        raw = -sign * math.exp(log_pref + log_s)
        diag.update(route="series", terms=sdiag["terms"],
                    cancel_digits=sdiag["cancel_digits"],
                    perturbed=sdiag["perturbed"])
    except ConvergenceError:
        log_g = meijer_g_m0_0m_log_contour(orders, log_x)
        raw = 1.0 - math.exp(log_pref + log_g)
        diag.update(route="contour")
    diag["raw"] = raw
    return SecrecyResult(min(1.0, max(0.0, raw)), "closed_form", diag)


def sop_closed_form_a2_2(cfg: SystemConfig,
                         params: EveTailParams | None = None,
                         fit: GammaFit | None = None) -> SecrecyResult:
    """alpha2 = 2 special case: G^{3,0}_{0,3} reduction, via mpmath.

    SOP = 1 - 2^{k-1}/(sqrt(pi) Gamma(k)) *
    G^{3,0}_{0,3}(t0 Gamma(t1) phi / (4 rho_d theta^2) | -; 0, k/2,
    (k+1)/2). Evaluated on an independent backend so the p/q reduction of
    sop_closed_form can be cross-checked against it.
    """
    cfg.validate()
    if abs(cfg.alpha2 - 2.0) > 1e-9:
        raise UnsupportedPathError("this reduction needs alpha2 = 2")
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    if p_t.t0 == 0.0:
        return SecrecyResult(0.0, "special_case_a2_2",
                             {"route": "degenerate"})
    with mpmath.mp.workdps(40):
        k = mpmath.mpf(f.k)
        y = (mpmath.mpf(p_t.t0) * mpmath.gamma(p_t.t1) * mpmath.exp(cfg.C_th)
             / (4 * mpmath.mpf(cfg.rho_d) * mpmath.mpf(f.theta) ** 2))
        g = mpmath.meijerg([[], []], [[0, k / 2, (k + 1) / 2], []], y)
        sop = 1 - mpmath.power(2, k - 1) / (mpmath.sqrt(mpmath.pi)
                                            * mpmath.gamma(k)) * g
        val = float(sop)
    return SecrecyResult(min(1.0, max(0.0, val)), "special_case_a2_2",
                         {"arg": float(y)})


def sop_bessel_a2_4(cfg: SystemConfig, params: EveTailParams | None = None,
                    fit: GammaFit | None = None) -> SecrecyResult:
    """alpha2 = 4 special case: SOP = 1 - (2/Gamma(k)) c^{k/2} K_k(2 sqrt(c))
    with c = t0 Gamma(t1) sqrt(phi) / (sqrt(rho_d) theta).

    Evaluated in mpmath throughout: for the relevant k (order 1e2) the
    Bessel factor under/overflows doubles, and near c -> 0 the subtraction
    from 1 cancels.
    """
    cfg.validate()
    if abs(cfg.alpha2 - 4.0) > 1e-9:
        raise UnsupportedPathError("this reduction needs alpha2 = 4")
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    if p_t.t0 == 0.0:
        return SecrecyResult(0.0, "special_case_a2_4",
                             {"route": "degenerate"})
    c = (p_t.t0 * math.gamma(p_t.t1) * math.exp(0.5 * cfg.C_th)
         / (math.sqrt(cfg.rho_d) * f.theta))
    with mpmath.mp.workdps(40):
        k = mpmath.mpf(f.k)
        cm = mpmath.mpf(c)
        term = (2 / mpmath.gamma(k) * cm ** (k / 2)
                * mpmath.besselk(k, 2 * mpmath.sqrt(cm)))
        val = float(1 - term)
    return SecrecyResult(min(1.0, max(0.0, val)), "special_case_a2_4",
                         {"c": c})


def sop_asymptotic(cfg: SystemConfig, params: EveTailParams | None = None,
                   fit: GammaFit | None = None) -> SecrecyResult:
    """Leading high-SNR outage term, slope exactly -2/alpha2 in log-log.

    SOP ~ t0 Gamma(t1) phi^{2/alpha2} Gamma(k - 4/alpha2) /
    (theta^{4/alpha2} Gamma(k)) * rho_d^{-2/alpha2}. Not clamped to 1: the
    expansion is meaningless where it exceeds 1. Requires k > 4/alpha2
    (otherwise the retained term is not finite).
    """
    cfg.validate()
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    four_over_a2 = 4.0 / cfg.alpha2
    if f.k <= four_over_a2:
        raise UnsupportedPathError(
            f"asymptotic SOP invalid: k = {f.k:.6g} <= 4/alpha2 = "
            f"{four_over_a2:.6g} (Gamma factor not finite)")
    if p_t.t0 == 0.0:
        return SecrecyResult(0.0, "asymptotic", {"route": "degenerate"})
    log_sop = (math.log(p_t.t0) + math.lgamma(p_t.t1) + p_t.t4 * cfg.C_th
               + math.lgamma(f.k - four_over_a2) - math.lgamma(f.k)
               - four_over_a2 * math.log(f.theta)
               - p_t.t4 * math.log(cfg.rho_d))
    return SecrecyResult(math.exp(log_sop), "asymptotic",
                         {"slope": -p_t.t4})


def secrecy_diversity_order(cfg: SystemConfig, method: str = "analytic"
                            ) -> float:
    """Negative high-SNR log-log slope of the SOP.

    method="analytic" returns 2/alpha2 directly; method="fitted" estimates
    the slope from the general closed form evaluated at rho_d = 100 and
    120 dB (finite difference per decade).
    """
    if method == "analytic":
        return 2.0 / cfg.alpha2
    if method != "fitted":
        raise ValueError("method must be 'analytic' or 'fitted'")
    s_lo = sop_closed_form(cfg.replace(rho_d_dB=100.0)).value
    s_hi = sop_closed_form(cfg.replace(rho_d_dB=120.0)).value
    if not (s_lo > 0.0 and s_hi > 0.0):
        raise ConvergenceError("fitted slope needs positive outage values",
                               partial=None)
    return -(math.log10(s_hi) - math.log10(s_lo)) / 2.0


# ---------------------------------------------------------------------------
# Ergodic secrecy capacity
# ---------------------------------------------------------------------------

def _rd_quadrature(cfg: SystemConfig, f: GammaFit):
    # R_D = (1/ln2) E[ln(1 + rho_d theta^2 u^2)], u ~ Gamma(k, 1)
    scale = cfg.rho_d * f.theta ** 2
    lgk = math.lgamma(f.k)

    def integrand(u):
        if u <= 0.0:
            return 0.0
        return math.log1p(scale * u * u) * math.exp(
            (f.k - 1.0) * math.log(u) - u - lgk)

    hi = f.k + 40.0 * math.sqrt(f.k) + 40.0
    val, err = integrate.quad(integrand, 0.0, hi, points=[f.k],
                              epsabs=1e-12, epsrel=1e-11, limit=400)
    return val / LN2, err / LN2


def _rd_meijer(cfg: SystemConfig, f: GammaFit, dps: int = 40) -> float:
    # R_D = 2^{k-1}/(sqrt(pi) Gamma(k) ln2) *
    #       G^{4,1}_{2,4}(1/(4 rho_d theta^2) | [0],[1]; [0,0,k/2,(k+1)/2])
    # the hypercomb expansion cancels at the Gamma(k) scale and the loss can
    # be silent (converged-looking value off by orders of magnitude), so
    # every result is screened against the Jensen bracket
    #   log2(1 + s e^{2 psi(k)}) <= R_D <= log2(1 + s k (k+1)),
    # exact for the fitted shape; on a trip (or a hypercomb ValueError) the
    # evaluation retries once at a precision that grows with k
    s = cfg.rho_d * f.theta ** 2
    z = 1.0 / (4.0 * s)
    lo = math.log1p(s * math.exp(2.0 * special.digamma(f.k))) / LN2
    hi = math.log1p(s * f.k * (f.k + 1.0)) / LN2
    err = None
    for d in (dps, max(200, int(0.5 * f.k), 2 * dps)):
        try:
            with mpmath.mp.workdps(d):
                k = mpmath.mpf(f.k)
                g = mpmath.meijerg([[0], [1]],
                                   [[0, 0, k / 2, (k + 1) / 2], []], z)
                val = float(mpmath.power(2, k - 1)
                            / (mpmath.sqrt(mpmath.pi) * mpmath.gamma(k)) * g
                            / mpmath.log(2))
        except ValueError as exc:
            err = exc
            continue
        if lo * (1.0 - 1e-9) <= val <= hi * (1.0 + 1e-9):
            return val
        err = None
    raise ConvergenceError(
        f"user-rate closed form did not converge (k = {f.k:.6g}, "
        f"argument = {z:.6g})") from err


def _re_quadrature(cfg: SystemConfig, p_t: EveTailParams):
    # R_E = (1/ln2) int_0^inf (1 - F_{gamma_E}(x))/(1+x) dx with the
    # finite-disk CDF; analytic alternating tail beyond the cut where the
    # disk kernel is saturated and the exponent is tiny (see module tests:
    # total tail tolerance ~1e-9 bits)
    if p_t.t0 == 0.0:
        return 0.0, {"re_cut": 0.0, "re_tail": 0.0, "re_quad_err": 0.0}
    g1 = math.gamma(p_t.t1)
    a = p_t.t0 * g1
    q_sat = float(special.gammainccinv(p_t.t1, 1e-12))
    x_sat = (q_sat / p_t.t2) ** (1.0 / p_t.t3)
    x_small = (a / 3e-6) ** (1.0 / p_t.t4)
    cut = max(2.0, x_sat, x_small)

    def integrand(x):
        y = (p_t.t0 * g1 * float(special.gammainc(p_t.t1,
                                                  p_t.t2 * x ** p_t.t3))
             * x ** (-p_t.t4))
        return -math.expm1(-y) / (1.0 + x)

    c1 = min(10.0, cut)
    v1, e1 = integrate.quad(integrand, 0.0, c1, epsabs=1e-11, epsrel=1e-10,
                            limit=200)
    v2 = e2 = 0.0
    if cut > c1:
        def log_integrand(t):
            x = math.exp(t)
            return integrand(x) * x

        v2, e2 = integrate.quad(log_integrand, math.log(c1), math.log(cut),
                                epsabs=1e-11, epsrel=1e-10, limit=200)

    # int_cut^inf (1 - e^{-a x^{-t4}})/(1+x) dx to first order in the tiny
    # exponent: a * sum_m (-1)^m cut^{-(t4+m)} / (t4+m)
    tail = 0.0
    sign = 1.0
    pw = cut ** (-p_t.t4)
    for mth in range(400):
        term = a * pw / (p_t.t4 + mth)
        tail += sign * term
        if term < 1e-14:
            break
        sign = -sign
        pw /= cut
    re_val = (v1 + v2 + tail) / LN2
    return re_val, {"re_cut": cut, "re_tail": tail / LN2,
                    "re_quad_err": (e1 + e2) / LN2}


def esc(cfg: SystemConfig, params: EveTailParams | None = None,
        fit: GammaFit | None = None) -> SecrecyResult:
    """Ergodic secrecy capacity [R_D - R_E]^+ in bits/s/Hz.

    R_D is evaluated twice, by quadrature of the fitted user-SNR law and
    by a Meijer G^{4,1}_{2,4} closed form on mpmath; the routes must agree
    to 1e-6 relative or ConvergenceError is raised. R_E integrates the
    finite-disk eavesdropper survival function with an analytic power-law
    tail (~1e-9 bits tail tolerance). The clamp applies to the difference
    of the mean rates, not per sample.
    """
    cfg.validate()
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    rd_q, rd_err = _rd_quadrature(cfg, f)
    rd_m = _rd_meijer(cfg, f)
    rel = abs(rd_q - rd_m) / max(abs(rd_m), 1e-300)
    if rel > 1e-6:
        # residual cancellation error can survive the moment screen; force
        # one high-precision pass before declaring the routes in conflict
        rd_m = _rd_meijer(cfg, f, dps=max(200, int(0.6 * f.k)))
        rel = abs(rd_q - rd_m) / max(abs(rd_m), 1e-300)
    if rel > 1e-6:
        raise ConvergenceError(
            f"user-rate routes disagree: quadrature {rd_q!r} vs closed "
            f"form {rd_m!r}", partial=rd_q, bound=rel)
    re_val, re_diag = _re_quadrature(cfg, p_t)
    diag = {"rd": rd_q, "rd_closed": rd_m, "rd_rel_gap": rel,
            "rd_quad_err": rd_err, "re": re_val, **re_diag}
    return SecrecyResult(max(0.0, rd_q - re_val), "quadrature", diag)


def esc_a2_2(cfg: SystemConfig, params: EveTailParams | None = None,
             fit: GammaFit | None = None) -> SecrecyResult:
    """alpha2 = 2 closed capacity: R_E = (gamma + ln a + e^a (Shi - Chi)(a))
    / ln2 with a = t0 Gamma(t1); R_D from the Meijer closed form.

    Large-disk route: the disk kernel is taken fully saturated.
    """
    cfg.validate()
    if abs(cfg.alpha2 - 2.0) > 1e-9:
        raise UnsupportedPathError("this reduction needs alpha2 = 2")
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    rd = _rd_meijer(cfg, f)
    a = p_t.t0 * math.gamma(p_t.t1)
    if a == 0.0:
        re_val = 0.0
    else:
        re_val = (EULER_GAMMA + math.log(a) + exp_shi_minus_chi(a)) / LN2
    return SecrecyResult(max(0.0, rd - re_val), "special_case_a2_2",
                         {"rd": rd, "re": re_val, "a": a})


def esc_a2_4(cfg: SystemConfig, params: EveTailParams | None = None,
             fit: GammaFit | None = None) -> SecrecyResult:
    """alpha2 = 4 closed capacity: R_E = G^{3,2}_{2,4}(a^2/4 | [1,1];
    [1/2,1,1],[0]) / (sqrt(pi) ln2) with a = t0 Gamma(t1).

    Large-disk route, mpmath backend.
    """
    cfg.validate()
    if abs(cfg.alpha2 - 4.0) > 1e-9:
        raise UnsupportedPathError("this reduction needs alpha2 = 4")
    f = fit or gamma_fit(cfg)
    p_t = params or varpi_xi(cfg)
    rd = _rd_meijer(cfg, f)
    a = p_t.t0 * math.gamma(p_t.t1)
    if a == 0.0:
        re_val = 0.0
    else:
        with mpmath.mp.workdps(40):
            g = mpmath.meijerg([[1, 1], []],
                               [[mpmath.mpf(1) / 2, 1, 1], [0]],
                               mpmath.mpf(a) ** 2 / 4)
            re_val = float(g / (mpmath.sqrt(mpmath.pi) * mpmath.log(2)))
    return SecrecyResult(max(0.0, rd - re_val), "special_case_a2_4",
                         {"rd": rd, "re": re_val, "a": a})


def rd_upper_bound(cfg: SystemConfig) -> float:
    """Jensen bound on the user rate:
    log2(1 + rho_d K N nu mu_D (1 + (pi/4)(N-1) L^2/(1+eps))) bits/s/Hz.
    """
    eps = cfg.ground_epsilon
    L = laguerre_half(eps)
    j = 1.0 + 0.25 * math.pi * (cfg.N - 1) * L * L / (1.0 + eps)
    return math.log1p(cfg.rho_d * cfg.K * cfg.N * cfg.nu * cfg.mu_D
                      * j) / LN2


def esc_asymptotic(cfg: SystemConfig, params: EveTailParams | None = None
                   ) -> SecrecyResult:
    """High-SNR capacity offset law, clamped at zero.

    Sum of log2(rho_d/rho_e) (from the dB difference, so a joint power
    shift cancels bitwise), the geometry term log2(mu_D/(pi lambda_e
    beta0)), -EULER_GAMMA/ln2, the tail-fit constant log2(mu e^{2v/mu} /
    Gamma(2/mu)), and the element-count term. Derived on the alpha2 = 2
    branch; warns for other exponents. Does not depend on d_SR or K.
    """
    cfg.validate()
    if abs(cfg.alpha2 - 2.0) > 1e-9:
        warnings.warn(
            f"high-SNR capacity offset is an alpha2 = 2 result; value at "
            f"alpha2 = {cfg.alpha2:g} is an extrapolation", stacklevel=2)
    p_t = params or varpi_xi(cfg)
    eps = cfg.ground_epsilon
    L = laguerre_half(eps)
    pil2 = 0.25 * math.pi * L * L
    ratio = eps * eps / ((1.0 + eps) * pil2)
    power_term = (cfg.rho_d_dB - cfg.rho_e_dB) * _LOG2_10 / 10.0
    geom_term = math.log2(cfg.mu_D / (math.pi * cfg.lambda_e * cfg.beta0))
    fit_term = (math.log(p_t.mu) + 2.0 * p_t.v / p_t.mu
                - math.lgamma(2.0 / p_t.mu)) / LN2
    elem_term = math.log2((1.0 + (cfg.N - 1) * pil2 / (1.0 + eps))
                          / (1.0 - ratio))
    value = power_term + geom_term - EULER_GAMMA / LN2 + fit_term + elem_term
    return SecrecyResult(max(0.0, value), "asymptotic",
                         {"power_term": power_term, "geom_term": geom_term,
                          "fit_term": fit_term, "elem_term": elem_term,
                          "unclamped": value})
