"""Special-function layer against independent references.

Frozen constants were computed with mpmath at 30+ decimal digits (Laguerre
via mp.laguerre, Marcum Q1 via quadrature of the defining integral, Meijer G
via mp.meijerg) or follow from exact identities.
"""

import math

import numpy as np
import pytest
from scipy import special, stats

from ris_secrecy.specfun import (ConvergenceError, bessel_i, bessel_k,
                                 exp_shi_minus_chi, g_series_signed,
                                 laguerre_half, lower_incomplete_gamma,
                                 marcum_exp_params, marcum_q1,
                                 marcum_q1_exp_approx, meijer_g_m0_0m,
                                 meijer_g_m0_0m_log_contour, shi_chi,
                                 upper_incomplete_gamma)

# mpmath: laguerre(1/2, 0, -eps)
LAGUERRE_REF = {
    0.0: 1.0,
    0.5: 1.2355820575582632,
    1.0: 1.446491344083172,
    2.0: 1.8130996534803383,
    5.0: 2.653201897329549,
    10.0: 3.6586716081480355,
}

# mpmath: quad of t exp(-(t^2+a^2)/2) I0(at) on [b, inf)
MARCUM_REF = {
    (1.5, 2.0): 0.4236792804780005,
    (4.0, 9.0): 4.358902337110662e-07,
    (0.5, 0.2): 0.9825036110169231,
    (2.0, 1.0): 0.918107696369406,
    (7.0, 3.0): 0.9999799449197975,
    (12.0, 11.5): 0.7063013363034053,
    (0.3, 14.0): 3.599326608616992e-42,
}

# mpmath: meijerg([[],[]], [list(d),[]], x)
MEIJER_REF = (
    ((0.0, 1.3, 1.5), 0.3, 0.50766768378111361),
    ((0.0, 0.25, 0.5, 0.75, 2.1), 1.2, 0.2373862230752321),
)


def test_laguerre_half_reference_values():
    for eps, ref in LAGUERRE_REF.items():
        assert laguerre_half(eps) == pytest.approx(ref, rel=1e-13)


def test_laguerre_half_monotone_in_eps():
    # the coherent-gain factor grows with the Rice factor
    es = np.linspace(0.0, 20.0, 81)
    vals = [laguerre_half(e) for e in es]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_incomplete_gamma_pair_sums_to_gamma():
    for k in (0.3, 0.963, 3.5, 17.0):
        for x in (0.0, 0.7, 2.0, 40.0):
            total = lower_incomplete_gamma(k, x) + upper_incomplete_gamma(k, x)
            assert total == pytest.approx(math.gamma(k), rel=1e-13)


def test_incomplete_gamma_reference_values():
    # mpmath gammainc spots, unregularized
    assert lower_incomplete_gamma(0.963, 2.0) == pytest.approx(
        0.892594976298655, rel=1e-13)
    assert upper_incomplete_gamma(0.963, 2.0) == pytest.approx(
        0.13016389815620513, rel=1e-13)
    assert lower_incomplete_gamma(3.5, 0.7) == pytest.approx(
        0.047951752295790497, rel=1e-13)
    assert upper_incomplete_gamma(3.5, 0.7) == pytest.approx(
        3.275399218152052, rel=1e-13)


def test_incomplete_gamma_rejects_bad_domain():
    with pytest.raises(ValueError):
        lower_incomplete_gamma(-1.0, 2.0)
    with pytest.raises(ValueError):
        upper_incomplete_gamma(2.0, -0.5)


def test_marcum_q1_reference_values():
    for (a, b), ref in MARCUM_REF.items():
        assert marcum_q1(a, b) == pytest.approx(ref, rel=1e-11)


def test_marcum_q1_limits_and_bounds():
    # Q1(a, 0) = 1 and Q1(0, b) = exp(-b^2/2) exactly
    for a in (0.0, 0.5, 3.0, 20.0):
        assert marcum_q1(a, 0.0) == 1.0
    for b in (0.1, 1.0, 4.0):
        assert marcum_q1(0.0, b) == pytest.approx(
            math.exp(-b * b / 2.0), rel=1e-13)
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b = rng.uniform(0, 12, size=2)
        q = marcum_q1(a, b)
        assert 0.0 <= q <= 1.0


def test_marcum_q1_matches_noncentral_chi_square():
    # Q1(a,b) is the ncx2(2, a^2) tail at b^2
    rng = np.random.default_rng(11)
    for _ in range(300):
        a, b = rng.uniform(0.05, 10, size=2)
        assert marcum_q1(a, b) == pytest.approx(
            float(stats.ncx2.sf(b * b, 2, a * a)), abs=1e-10, rel=1e-8)


def test_marcum_exp_params_table_anchor():
    # polynomial fit: constant terms are the table's first column
    v, mu = marcum_exp_params(0.0)
    assert v == -0.840
    assert mu == 2.174
    # frozen evaluation at an interior point (30-digit Horner reference)
    v, mu = marcum_exp_params(0.20562989964427356)
    assert v == pytest.approx(-0.8033344125503084, rel=1e-14)
    assert mu == pytest.approx(2.0765503266200653, rel=1e-14)


def test_marcum_exp_approx_error_envelope():
    # measured max |Q1 - fit| = 0.0424 on [0, 2.5] x (0, 50]
    worst = 0.0
    for w in np.linspace(0.0, 2.5, 18):
        for z in np.geomspace(1e-3, 50.0, 40):
            worst = max(worst, abs(marcum_q1(w, z)
                                   - marcum_q1_exp_approx(w, z)))
    assert worst < 0.05


def test_meijer_g_order_one_is_exponential():
    # G^{1,0}_{0,1}(x | -; 0) = e^{-x}; series route on its envelope
    for x in np.geomspace(1e-3, 4.0, 40):
        assert meijer_g_m0_0m([0.0], x) == pytest.approx(
            math.exp(-x), rel=1e-12)
    # contour route covers large arguments
    for x in (10.0, 30.0, 100.0):
        logv = meijer_g_m0_0m_log_contour([0.0], math.log(x))
        assert logv == pytest.approx(-x, abs=1e-10 * x)


def test_meijer_g_reference_values():
    for orders, x, ref in MEIJER_REF:
        assert meijer_g_m0_0m(orders, x) == pytest.approx(ref, rel=1e-11)


def test_meijer_g_contour_matches_series_and_reference():
    for orders, x, ref in MEIJER_REF:
        logv = meijer_g_m0_0m_log_contour(np.array(orders), math.log(x))
        assert math.exp(logv) == pytest.approx(ref, rel=1e-10)
    # contour in the regime the series refuses: mpmath 0.2763384247445036
    logv = meijer_g_m0_0m_log_contour(np.array([0.2, 1.7, 3.9]),
                                      math.log(25.0))
    assert math.exp(logv) == pytest.approx(0.2763384247445036, rel=1e-10)


def test_meijer_g_log_scale_survives_huge_orders():
    # mpmath: G at orders (0, 0.5, 55.55, 55.8, 56.05, 56.3), x = 0.7
    sign, logv, diag = g_series_signed(
        np.array([0.0, 0.5, 55.55, 55.8, 56.05, 56.3]), math.log(0.7))
    assert sign == 1.0
    assert logv == pytest.approx(math.log(1.3838269518975933e292), rel=1e-13)


def test_meijer_g_integer_gapped_orders():
    # collision class (0, 0, 1) has three integer-gapped members, which the
    # symmetric perturbation resolves at reduced precision (measured 1.4e-6
    # relative); mpmath reference 0.41087777699068400611
    assert meijer_g_m0_0m([0.0, 0.0, 1.0], 0.5) == pytest.approx(
        0.41087777699068400611, rel=1e-5)


def test_meijer_g_series_refuses_on_cancellation():
    with pytest.raises(ConvergenceError) as ei:
        meijer_g_m0_0m([0.0], 40.0)
    # the refusal carries a usable partial value and an error bound
    assert ei.value.partial is not None
    assert ei.value.bound is not None and ei.value.bound > 0


def test_meijer_g_rejects_nonpositive_argument():
    with pytest.raises(ValueError):
        meijer_g_m0_0m([0.0, 0.5], 0.0)
    with pytest.raises(ValueError):
        meijer_g_m0_0m([0.0, 0.5], -1.0)


def test_bessel_wrappers_match_scipy():
    xs = np.geomspace(1e-2, 30.0, 25)
    for o in (0.0, 0.5, 1.0, 2.5):
        for x in xs:
            assert bessel_k(o, x) == pytest.approx(
                float(special.kv(o, x)), rel=1e-12)
    for o in (0, 1):
        for x in xs:
            assert bessel_i(o, x) == pytest.approx(
                float(special.iv(o, x)), rel=1e-12)
    with pytest.raises(ValueError):
        bessel_i(2, 1.0)


def test_shi_chi_and_scaled_difference():
    # Shi - Chi = E1; the scaled form equals e^x E1(x) (mpmath spots)
    for x, ref in ((0.5, 0.9229106324837305), (5.0, 0.1704221762847322),
                   (50.0, 0.01961510993011487),
                   (500.0, 0.001996015904760411)):
        assert exp_shi_minus_chi(x) == pytest.approx(ref, rel=1e-12)
        # forming the difference directly cancels like e^{2x}; only sane
        # at small x, which is exactly why the scaled form exists
        if x <= 5.0:
            shi, chi = shi_chi(x)
            assert math.exp(x) * (shi - chi) == pytest.approx(ref, rel=1e-9)
