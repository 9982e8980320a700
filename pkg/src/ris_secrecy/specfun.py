"""Special-function kernel for the secrecy analysis.

Everything is double precision and pure. Two pieces are hand-rolled because
their accuracy envelope drives the whole analysis: the first-order Marcum Q
function (series + quadrature fallback) and the Meijer G^{m,0}_{0,m} residue
series (with a log-scaled variant for huge shape parameters). The remaining
functions wrap scipy.special with the conventions the formulas expect
(unregularized incomplete gammas, scaled Bessels for stability).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

# Euler-Mascheroni constant, 20 digits.
EULER_GAMMA = 0.57721566490153286061


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to reach its tolerance.

    Carries the best partial value and an error bound so callers can decide
    whether the partial result is still usable.
    """

    def __init__(self, message, partial=None, bound=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound


def _require_finite(name, x):
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite, got {x!r}")


# ---------------------------------------------------------------------------
# Laguerre polynomial of order 1/2 at negated argument
# ---------------------------------------------------------------------------

def laguerre_half(eps):
    """L_{1/2}(-eps) = e^{-eps/2} [(1+eps) I0(eps/2) + eps I1(eps/2)].

    This is the factor through which the Rician K-factor enters every moment
    of a Rice envelope: a Rice(nu, sigma) magnitude with eps = nu^2/(2 sigma^2)
    has mean sigma sqrt(pi/2) L_{1/2}(-eps). Increasing in eps, >= 1, and
    L^2/(1+eps) -> 4/pi as eps -> inf.
    """
    eps = np.asarray(eps, dtype=float)
    _require_finite("eps", eps)
    if np.any(eps < 0):
        raise ValueError("eps must be >= 0")
    half = eps / 2.0
    # i0e/i1e are e^{-x} I(x); the e^{-eps/2} factor cancels exactly.
    out = (1.0 + eps) * special.i0e(half) + eps * special.i1e(half)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Incomplete gamma functions (unregularized)
# ---------------------------------------------------------------------------

def lower_incomplete_gamma(k, x):
    """gamma(k, x) = int_0^x t^{k-1} e^{-t} dt (unregularized)."""
    if not (np.all(np.asarray(k) > 0) and np.all(np.isfinite(k))):
        raise ValueError("shape k must be positive and finite")
    x = np.asarray(x, dtype=float)
    _require_finite("x", x)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    out = special.gammainc(k, x) * special.gamma(k)
    return out if np.ndim(out) else float(out)


def upper_incomplete_gamma(k, x):
    """Gamma(k, x) = int_x^inf t^{k-1} e^{-t} dt (unregularized)."""
    if not (np.all(np.asarray(k) > 0) and np.all(np.isfinite(k))):
        raise ValueError("shape k must be positive and finite")
    x = np.asarray(x, dtype=float)
    _require_finite("x", x)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    out = special.gammaincc(k, x) * special.gamma(k)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# Marcum Q function of first order
# ---------------------------------------------------------------------------

# Below this product the canonical Bessel series converges in O(100) terms
# with no cancellation; above it the quadrature of the defining integral is
# better conditioned.
_MARCUM_SERIES_LIMIT = 30.0


def marcum_q1(a, b):
    """First-order Marcum Q function Q1(a, b), exact path.

    Q1(a,b) = int_b^inf t exp(-(t^2+a^2)/2) I0(at) dt, the tail of a
    non-central chi-square with 2 degrees of freedom. Uses the canonical
    Bessel series for a*b < 30 and Gauss-Kronrod quadrature of the scaled
    defining integral otherwise.
    """
    a = float(a)
    b = float(b)
    _require_finite("a", a)
    _require_finite("b", b)
    if a < 0 or b < 0:
        raise ValueError("Marcum Q arguments must be >= 0")
    if b == 0.0:
        return 1.0
    if a == 0.0:
        return math.exp(-0.5 * b * b)

    ab = a * b
    if ab < _MARCUM_SERIES_LIMIT:
        return _marcum_q1_series(a, b)
    return _marcum_q1_quad(a, b)


def _marcum_q1_series(a, b):
    # exp(-(a^2+b^2)/2) I_k(ab) = exp(-(a-b)^2/2) ive(k, ab)
    ab = a * b
    gauss = math.exp(-0.5 * (a - b) ** 2)
    if gauss == 0.0:
        # extreme separation: the sum cannot lift the underflow
        return 1.0 if a > b else 0.0
    # sum r^k ive(k, ab); terms decay geometrically once k > ab
    if b >= a:
        r = a / b
        k0 = 0
    else:
        r = b / a
        k0 = 1
    total = 0.0
    k = k0
    while k < 20000:
        ks = np.arange(k, k + 64)
        terms = r**ks * special.ive(ks, ab)
        total += float(terms.sum())
        if terms[-1] < 1e-18 * max(total, 1e-300) and ks[-1] > ab:
            break
        k += 64
    if b >= a:
        return min(1.0, gauss * total)
    return max(0.0, 1.0 - gauss * total)


def _marcum_q1_quad(a, b):
    # t exp(-(t^2+a^2)/2) I0(at) = t i0e(at) exp(-(t-a)^2/2)
    def f(t):
        return t * special.i0e(a * t) * math.exp(-0.5 * (t - a) ** 2)

    upper = max(a, b) + 45.0
    pts = [a] if b < a < upper else None
    val, err = integrate.quad(f, b, upper, points=pts, limit=200,
                              epsabs=1e-14, epsrel=1e-12)
    # deep-tail values are judged on absolute error; Q there is ~0
    if err > max(1e-13, 1e-9 * abs(val)):
        raise ConvergenceError("Marcum quadrature did not converge",
                               partial=val, bound=err)
    return min(1.0, max(0.0, val))


# Fitted polynomials for the exponential tail approximation
# Q1(varpi, z) ~= exp(-e^{v} z^{mu}).
_MARCUM_V_COEF = (-0.840, 0.327, -0.740, 0.083, -0.004)
_MARCUM_MU_COEF = (2.174, -0.592, 0.593, -0.092, 0.005)


def marcum_exp_params(varpi):
    """Coefficients (v, mu) of the exponential Marcum approximation."""
    w = float(varpi)
    _require_finite("varpi", w)
    if w < 0:
        raise ValueError("varpi must be >= 0")
    v = sum(c * w**i for i, c in enumerate(_MARCUM_V_COEF))
    mu = sum(c * w**i for i, c in enumerate(_MARCUM_MU_COEF))
    return v, mu


def marcum_q1_exp_approx(varpi, z):
    """Exponential-tail approximation exp(-e^{v(varpi)} z^{mu(varpi)})."""
    z = np.asarray(z, dtype=float)
    _require_finite("z", z)
    if np.any(z < 0):
        raise ValueError("z must be >= 0")
    v, mu = marcum_exp_params(varpi)
    out = np.exp(-np.exp(v) * z**mu)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Meijer G^{m,0}_{0,m}
# ---------------------------------------------------------------------------

def _signed_loggamma(x):
    """(log|Gamma(x)|, sign) for real non-pole x."""
    return special.gammaln(x), special.gammasgn(x)


def _two_sum(a, b):
    """Error-free sum: returns (s, e) with s + e == a + b exactly.

    Knuth's branch-free TwoSum, vectorized. Needed because the residue
    series evaluates Gamma at pairwise order differences: when two orders
    sit ~1e-6 apart, a plain float subtraction of O(1) entries leaves only
    ~1e-11 relative accuracy in the gap, which the 1/gap pole terms then
    amplify to visible error in the block sums.
    """
    s = a + b
    z = s - a
    e = (a - (s - z)) + (b - z)
    return s, e


def _integer_gapped(d, tol=1e-9):
    """True if any two order entries differ by (nearly) an integer.

    The residue series assumes simple poles: Gamma(delta_j - delta_l - n)
    must stay off its poles, so integer-gapped entries need a nudge before
    the series applies (the underlying function is perfectly regular there;
    only this representation degenerates).
    """
    gaps = d[:, None] - d[None, :]
    bad = np.abs(gaps - np.round(gaps)) < tol
    np.fill_diagonal(bad, False)
    return bool(bad.any())


def _collision_classes(d, tol=1e-9):
    """Union-find grouping of order entries whose gaps are near-integer."""
    n = len(d)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            g = d[j] - d[i]
            if abs(g - round(g)) < tol:
                parent[find(j)] = find(i)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return list(classes.values())


def _nudged(delta, h):
    """Shift collision-class members onto a ladder 0, h, 2h, ... so every
    within-class gap leaves the integer grid by at least |h|."""
    d = np.array(delta, dtype=float)
    for cls in _collision_classes(d):
        if len(cls) < 2:
            continue
        for rank, idx in enumerate(sorted(cls, key=lambda i: d[i])):
            d[idx] += rank * h
    if _integer_gapped(d, tol=abs(h) / 16.0):
        # accidental cross-class collision after the shift: retry scaled
        return _nudged(delta, h * 1.37)
    return d


def _meijer_g_series_log(delta, log_x, skip_constant=False,
                         rtol=1e-14, max_terms=100000):
    """Signed log-scaled residue series for G^{m,0}_{0,m}(x | -; delta).

    G = sum_l sum_n [(-1)^n / n!] prod_{j != l} Gamma(delta_j - delta_l - n)
        x^{delta_l + n}

    Requires orders with no integer pairwise gaps (see g_series_signed for
    the wrapper that handles that). Returns (sign, log|G|, diag). With
    skip_constant=True the single constant term (the l with delta_l = 0 at
    n = 0, present in the SOP survival function where it equals 1 after
    normalization) is omitted, which lets callers evaluate 1 - survival
    without catastrophic cancellation. diag carries the term count and the
    cancellation exponent log10(max_term / |sum|), the number of leading
    digits lost to signed cancellation.
    """
    d = np.asarray(delta, dtype=float)
    m = len(d)
    if m == 0:
        raise ValueError("orders must be non-empty")

    log_rtol = math.log(rtol)
    # global scaled accumulator: total = tot_acc * exp(tot_scale)
    tot_acc = 0.0
    tot_scale = -np.inf
    max_log = -np.inf
    nterms = 0

    skip_l = -1
    if skip_constant:
        zero = np.argmin(np.abs(d))
        if abs(d[zero]) > 1e-7:
            raise ValueError("skip_constant requires an order entry at 0")
        skip_l = int(zero)

    for l in range(m):
        others = np.delete(d, l)
        # exact gaps: gap + gap_err == others - d[l] bit-for-bit
        gap, gap_err = _two_sum(others, -d[l])
        logg, signs = _signed_loggamma(gap + gap_err)
        logt = float(np.sum(logg)) + d[l] * log_x
        sign = float(np.prod(signs))

        # each branch gets its own scaled accumulator and is summed to its
        # own peak-relative tolerance: branches cancel against each other,
        # so a break measured against the global running sum would truncate
        # a late-starting branch before it reaches its peak
        acc = 0.0
        scale = -np.inf
        branch_max = -np.inf

        def add(s, lt):
            nonlocal acc, scale, branch_max, max_log
            branch_max = max(branch_max, lt)
            max_log = max(max_log, lt)
            if not np.isfinite(lt):
                return
            if scale == -np.inf:
                scale = lt
                acc = s
                return
            if lt > scale + 40.0:
                acc = acc * math.exp(scale - lt) + s
                scale = lt
            else:
                acc += s * math.exp(lt - scale)

        if not (skip_constant and l == skip_l):
            add(sign, logt)
            nterms += 1
        prev_mag = logt
        n = 0
        while True:
            # Gamma(z - (n+1)) = Gamma(z - n) / (z - n - 1); the subtraction
            # gap - (n+1) is exact (Sterbenz) whenever it nearly cancels
            denom = (gap - (n + 1.0)) + gap_err
            logt = logt + log_x - math.log(n + 1) - float(
                np.sum(np.log(np.abs(denom))))
            sign = -sign * float(np.prod(np.sign(denom)))
            add(sign, logt)
            nterms += 1
            n += 1
            if nterms >= max_terms:
                raise ConvergenceError(
                    "Meijer G residue series hit the term cap",
                    partial=None, bound=math.exp(min(logt, 700.0)))
            # stop once this branch's terms decay and are negligible
            # against its own peak term
            if logt < prev_mag and logt < branch_max + log_rtol:
                break
            prev_mag = max(prev_mag, logt)

        if acc != 0.0 and scale != -np.inf:
            # fold the branch total into the global sum, keeping both on
            # the larger of the two scales
            if tot_scale == -np.inf:
                tot_acc, tot_scale = acc, scale
            elif scale > tot_scale:
                tot_acc = tot_acc * math.exp(tot_scale - scale) + acc
                tot_scale = scale
            else:
                tot_acc += acc * math.exp(scale - tot_scale)

    if tot_acc == 0.0:
        return 0.0, -np.inf, {"terms": nterms, "cancel_digits": np.inf}
    total_log = tot_scale + math.log(abs(tot_acc))
    cancel = (max_log - total_log) / math.log(10.0)
    return math.copysign(1.0, tot_acc), total_log, {
        "terms": nterms, "cancel_digits": cancel}


def _nudge_size(d):
    """Symmetric-perturbation step for integer-gapped orders.

    A collision class of size M puts a 1/h^{M-1} hump into each nudged
    series; averaging the +-h pair leaves an O(h^2) analytic residual.
    Balancing h^2 against (2e-15 per-term float noise) * h^{-(M-1)} gives
    h ~ eps^{1/(M+1)}.
    """
    M = max(len(c) for c in _collision_classes(d))
    eps = 2e-15
    return eps ** (1.0 / (M + 1.0))


def g_series_signed(orders, log_x, skip_constant=False,
                    rtol=1e-14, max_terms=100000):
    """Residue series with pole handling; returns (sign, log|value|, diag).

    For integer-gapped orders the series is evaluated at symmetric +-h
    nudges and averaged (the value itself is regular there; only the
    representation degenerates). diag["perturbed"] reports it.
    """
    d = np.asarray(orders, dtype=float)
    if not _integer_gapped(d):
        sign, logv, diag = _meijer_g_series_log(
            d, log_x, skip_constant=skip_constant, rtol=rtol,
            max_terms=max_terms)
        diag["perturbed"] = False
        return sign, logv, diag
    h = _nudge_size(d)
    s1, l1, diag1 = _meijer_g_series_log(
        _nudged(d, +h), log_x, skip_constant=skip_constant,
        rtol=rtol, max_terms=max_terms)
    s2, l2, diag2 = _meijer_g_series_log(
        _nudged(d, -h), log_x, skip_constant=skip_constant,
        rtol=rtol, max_terms=max_terms)
    ref = max(l1, l2)
    if ref == -np.inf:
        return 0.0, -np.inf, {"terms": diag1["terms"] + diag2["terms"],
                              "cancel_digits": np.inf, "perturbed": True}
    acc = 0.5 * (s1 * math.exp(l1 - ref) + s2 * math.exp(l2 - ref))
    diag = {"terms": diag1["terms"] + diag2["terms"],
            "cancel_digits": max(diag1["cancel_digits"],
                                 diag2["cancel_digits"]),
            "perturbed": True}
    if acc == 0.0:
        return 0.0, -np.inf, diag
    return math.copysign(1.0, acc), ref + math.log(abs(acc)), diag


def meijer_g_m0_0m(orders, x):
    """G^{m,0}_{0,m}(x | -; orders) by the residue power series.

    orders is the vector of pole locations (the lower parameter row); x > 0.
    Truncates at 1e-14 relative with a hard cap of 1e5 terms. Raises
    ConvergenceError (with partial value and bound) if the cap is reached or
    if floating-point cancellation has destroyed the result; for the large-x
    regime callers should use the asymptotic or contour forms.

    Accuracy envelope: ~1e-12 relative for well-separated orders. Orders
    whose gaps land on the integer grid are handled by symmetric
    perturbation; a collision class of M entries costs precision, roughly
    1e-10 / 1e-7 / 1e-5 relative for M = 2 / 3 / 4. The Mellin-Barnes
    contour form keeps full precision in those cases.
    """
    x = float(x)
    if not (x > 0 and np.isfinite(x)):
        raise ValueError("argument x must be positive and finite")
    sign, logv, diag = g_series_signed(orders, math.log(x))
    if diag["cancel_digits"] > 13.0:
        raise ConvergenceError(
            "Meijer G residue series lost all precision to cancellation "
            f"({diag['cancel_digits']:.1f} digits); argument too large",
            partial=sign * math.exp(min(logv, 700.0)),
            bound=math.exp(min(logv + diag["cancel_digits"] * math.log(10.0)
                               - 13.0 * math.log(10.0), 700.0)))
    if sign <= 0 and logv > -np.inf:
        # roundoff can produce a signed zero-ish result; clamp tiny negatives
        if logv < -30:
            return 0.0
        raise ConvergenceError("Meijer G series returned a negative value",
                               partial=sign * math.exp(logv))
    if logv > 709.0:
        raise OverflowError("Meijer G value exceeds double range; "
                            "use the log-scaled interface")
    return math.exp(logv) if logv > -745.0 else 0.0


def meijer_g_m0_0m_log_asymptotic(orders, log_x):
    """log G^{m,0}_{0,m}(x) from the standard large-argument expansion.

    G ~ (2pi)^{(m-1)/2} m^{-1/2} x^{theta} exp(-m x^{1/m}) with
    theta = (sum(orders) + (1-m)/2)/m. Leading term only; relative error
    O(x^{-1/m}). Exact for m = 1.
    """
    d = np.asarray(orders, dtype=float)
    m = len(d)
    theta = (float(d.sum()) + (1.0 - m) / 2.0) / m
    return (0.5 * (m - 1) * math.log(2.0 * math.pi) - 0.5 * math.log(m)
            + theta * log_x - m * math.exp(log_x / m))


def meijer_g_m0_0m_log_contour(orders, log_x):
    """log G^{m,0}_{0,m}(x) by saddle-centered Mellin-Barnes quadrature.

    Integrates (1/2pi) int Gamma-product(delta + c + it) x^{-c-it} dt along
    the vertical line through the real saddle point c (where the integrand
    modulus is minimal), which keeps the quadrature well conditioned at
    argument sizes where the residue series cancels catastrophically. The
    contour passes right of every pole, so integer-gapped orders need no
    special handling here. Returns log of the (positive) value.
    """
    d = np.asarray(orders, dtype=float)
    m = len(d)

    # saddle: sum psi(delta + c) = log x
    lo = 1e-8 - float(d.min())
    hi = max(lo + 1.0, math.exp(log_x / m) - float(d.min()) + 2.0)
    from scipy.optimize import brentq

    def slope(c):
        return float(np.sum(special.digamma(d + c))) - log_x

    while slope(hi) < 0:
        hi *= 2.0
    if slope(lo) > 0:
        c = lo
    else:
        c = brentq(slope, lo, hi, xtol=1e-12)

    peak = float(np.sum(special.gammaln(d + c))) - c * log_x

    def integrand(t):
        s = c + 1j * t
        z = np.sum(special.loggamma(d + s)) - s * log_x - peak
        return math.exp(z.real) * math.cos(z.imag)

    # |Gamma(sigma+it)| decays like e^{-m pi |t| / 2}
    t_hi = 2.0 * (745.0 / (m * math.pi / 2.0))
    val, err = integrate.quad(integrand, 0.0, t_hi, limit=400,
                              epsabs=1e-13, epsrel=1e-11)
    val /= math.pi
    if val <= 0 or err > 1e-6 * val:
        raise ConvergenceError("Mellin-Barnes quadrature failed",
                               partial=val, bound=err)
    return math.log(val) + peak


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def bessel_k(order, x):
    """Modified Bessel function of the second kind K_order(x), x > 0."""
    x = np.asarray(x, dtype=float)
    _require_finite("x", x)
    if np.any(x <= 0):
        raise ValueError("bessel_k requires x > 0")
    out = special.kv(order, x)
    if not np.all(np.isfinite(out)):
        raise OverflowError("bessel_k overflowed; use log-scaled kve")
    return out if out.ndim else float(out)


def bessel_i(order, x):
    """Modified Bessel function of the first kind, order 0 or 1."""
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are used by the analysis")
    x = np.asarray(x, dtype=float)
    _require_finite("x", x)
    if np.any(x < 0):
        raise ValueError("bessel_i requires x >= 0")
    out = special.i0(x) if order == 0 else special.i1(x)
    if not np.all(np.isfinite(out)):
        raise OverflowError("bessel_i overflowed; use scaled i0e/i1e")
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Hyperbolic sine/cosine integrals
# ---------------------------------------------------------------------------

def shi_chi(x):
    """(Shi(x), Chi(x)) for x > 0."""
    x = float(x)
    if not (x > 0 and np.isfinite(x)):
        raise ValueError("shi_chi requires x > 0")
    shi, chi = special.shichi(x)
    if not (np.isfinite(shi) and np.isfinite(chi)):
        raise OverflowError("shi_chi overflowed (x beyond ~700); "
                            "use exp_shi_minus_chi for the scaled product")
    return float(shi), float(chi)


def exp_shi_minus_chi(x):
    """e^x (Shi(x) - Chi(x)) evaluated without overflow.

    Shi - Chi = E1, so this is the scaled exponential integral e^x E1(x),
    which decays like 1/x; usable at any positive x, unlike forming the
    product from shi_chi directly (e^x overflows past ~709).
    """
    x = float(x)
    if not (x > 0 and np.isfinite(x)):
        raise ValueError("x must be > 0")
    if x < 680.0:
        return math.exp(x) * float(special.exp1(x))
    # modified Lentz continued fraction for e^x E1(x)
    # e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(x+7- ...))))
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    for n in range(1, 200):
        an = -((n - 1) ** 2) if n > 1 else 1.0
        bn = x + (2 * n - 1)
        d = bn + an * d
        d = tiny if d == 0 else d
        c = bn + an / c
        c = tiny if c == 0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-15:
            return f
    raise ConvergenceError("continued fraction for e^x E1(x) stalled",
                           partial=f)
