"""Secrecy metrics: route agreement and frozen references.

The scalar references were frozen from a 50-digit mpmath quadrature of the
metric definitions (independent of every code path here). Route-vs-route
checks pit implementations that share no algebra: residue series vs mpmath
Meijer backend, quadrature vs closed forms, asymptotics vs exact.
"""

import math
import warnings

import pytest

from ris_secrecy.errors import UnsupportedPathError
from ris_secrecy.metrics import (SecrecyResult, esc, esc_a2_2, esc_a2_4,
                                 esc_asymptotic, rationalize_alpha2,
                                 rd_upper_bound, secrecy_diversity_order,
                                 sop_asymptotic, sop_bessel_a2_4,
                                 sop_closed_form, sop_closed_form_a2_2,
                                 sop_quadrature)
from ris_secrecy.sysmodel import SystemConfig

CFG = SystemConfig(K=16, N=36, epsilon=2.0, alpha1=2.0, alpha2=2.0,
                   beta0=1.0, d_SR=30.0, d_RD=40.0, r_e=200.0,
                   lambda_e=1e-3, rho_d_dB=20.0, rho_e_dB=30.0,
                   C_th=0.05, h_RIS=0.0)

SOP_45_REF = 0.002818831763520928          # N=36, rho_d 45 dB, rho_e 30 dB
ESC_CFG = CFG.replace(rho_d_dB=60.0, rho_e_dB=50.0)
ESC_REF = 6.046633041282553
RD_REF = 13.590854207126089
RE_REF = 7.544221165843536


# ---------------------------------------------------------------------------
# outage probability
# ---------------------------------------------------------------------------

def test_sop_quadrature_frozen():
    res = sop_quadrature(CFG.replace(rho_d_dB=45.0))
    assert res.method == "quadrature"
    assert res.value == pytest.approx(SOP_45_REF, rel=1e-10)


def test_sop_closed_form_tracks_quadrature():
    # the closed form replaces the finite-disk kernel by its limit; on a
    # saturated-kernel grid the residual follows the threshold-shift law
    # |gap| ~ 0.054 sop^2
    for db in (35.0, 45.0, 55.0):
        c = CFG.replace(rho_d_dB=db)
        q = sop_quadrature(c).value
        g = sop_closed_form(c).value
        assert abs(q - g) <= 0.06 * q * q + 1e-9
        assert g == pytest.approx(q, rel=2e-3)
    for n in (16, 64):
        c = CFG.replace(N=n, rho_d_dB=45.0)
        assert sop_closed_form(c).value == pytest.approx(
            sop_quadrature(c).value, rel=2e-3)


def test_sop_closed_form_route_switch():
    # small argument: residue series; saturated outage at low SNR pushes the
    # argument large and the evaluation hops to the contour integral
    hi = sop_closed_form(CFG.replace(rho_d_dB=45.0))
    assert hi.diagnostics["route"] == "series"
    lo = sop_closed_form(CFG.replace(rho_d_dB=10.0))
    assert lo.diagnostics["route"] == "contour"
    assert abs(lo.value - sop_quadrature(
        CFG.replace(rho_d_dB=10.0)).value) < 1e-3


def test_sop_special_case_identity_a2_2():
    c = CFG.replace(rho_d_dB=45.0)
    g = sop_closed_form(c).value
    s = sop_closed_form_a2_2(c)
    assert s.method == "special_case_a2_2"
    assert abs(g - s.value) < 1e-10


def test_sop_special_case_identity_a2_4():
    c = CFG.replace(alpha2=4.0, rho_d_dB=45.0)
    g = sop_closed_form(c).value
    s = sop_bessel_a2_4(c)
    assert s.method == "special_case_a2_4"
    assert abs(g - s.value) < 1e-8


def test_special_cases_reject_wrong_exponent():
    with pytest.raises(UnsupportedPathError):
        sop_closed_form_a2_2(CFG.replace(alpha2=4.0))
    with pytest.raises(UnsupportedPathError):
        sop_bessel_a2_4(CFG)
    with pytest.raises(UnsupportedPathError):
        esc_a2_2(CFG.replace(alpha2=4.0))
    with pytest.raises(UnsupportedPathError):
        esc_a2_4(CFG)


def test_rationalize_alpha2():
    assert rationalize_alpha2(2.0) == (2, 1)
    assert rationalize_alpha2(2.5) == (5, 2)
    assert rationalize_alpha2(3.0) == (3, 1)
    with pytest.raises(UnsupportedPathError):
        rationalize_alpha2(math.pi)


def test_sop_closed_form_rational_exponent():
    c = CFG.replace(alpha2=2.5, rho_d_dB=45.0)
    assert sop_closed_form(c).value == pytest.approx(
        sop_quadrature(c).value, rel=2e-3)


def test_irrational_exponent_only_quadrature():
    c = CFG.replace(alpha2=math.pi, rho_d_dB=45.0)
    with pytest.raises(UnsupportedPathError):
        sop_closed_form(c)
    assert 0.0 < sop_quadrature(c).value < 1.0


def test_sop_closed_form_warns_when_kernel_unsaturated():
    with pytest.warns(UserWarning, match="weak here"):
        res = sop_closed_form(CFG.replace(rho_d_dB=0.0))
    assert 0.0 <= res.value <= 1.0


def test_sop_quadrature_monotone_in_power():
    vals = [sop_quadrature(CFG.replace(rho_d_dB=db)).value
            for db in (35.0, 40.0, 45.0, 50.0, 55.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_sop_asymptotic_power_scaling_exact():
    # SOP ~ rho_d^{-2/alpha2}: a 20 dB step scales by a fixed factor
    a = sop_asymptotic(CFG.replace(rho_d_dB=100.0)).value
    b = sop_asymptotic(CFG.replace(rho_d_dB=120.0)).value
    assert b / a == pytest.approx(1e-2, rel=1e-12)
    c4 = CFG.replace(alpha2=4.0)
    a4 = sop_asymptotic(c4.replace(rho_d_dB=100.0)).value
    b4 = sop_asymptotic(c4.replace(rho_d_dB=120.0)).value
    assert b4 / a4 == pytest.approx(1e-1, rel=1e-12)


def test_sop_asymptotic_converges_to_quadrature():
    c = CFG.replace(rho_d_dB=100.0)
    assert sop_asymptotic(c).value == pytest.approx(
        sop_quadrature(c).value, rel=1e-6)


def test_sop_asymptotic_is_unclamped():
    # outside its regime the expansion exceeds 1 and must be reported as is
    assert sop_asymptotic(CFG.replace(rho_d_dB=0.0)).value > 1.0


def test_secrecy_diversity_order():
    assert secrecy_diversity_order(CFG) == 1.0
    assert secrecy_diversity_order(CFG.replace(alpha2=4.0)) == 0.5
    assert secrecy_diversity_order(CFG.replace(alpha2=3.0)) \
        == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert secrecy_diversity_order(CFG, "fitted") \
        == pytest.approx(1.0, abs=1e-6)
    assert secrecy_diversity_order(CFG.replace(alpha2=4.0), "fitted") \
        == pytest.approx(0.5, abs=1e-3)
    with pytest.raises(ValueError):
        secrecy_diversity_order(CFG, "slope")


# ---------------------------------------------------------------------------
# ergodic secrecy capacity
# ---------------------------------------------------------------------------

def test_esc_frozen():
    res = esc(ESC_CFG)
    assert res.value == pytest.approx(ESC_REF, rel=1e-10)
    assert res.diagnostics["rd"] == pytest.approx(RD_REF, rel=1e-9)
    assert res.diagnostics["re"] == pytest.approx(RE_REF, rel=1e-9)
    # the two user-rate routes agreed (or esc would have raised)
    assert res.diagnostics["rd_rel_gap"] < 1e-6


def test_esc_special_case_identity_a2_2():
    assert abs(esc(ESC_CFG).value - esc_a2_2(ESC_CFG).value) < 1e-8


def test_esc_special_case_identity_a2_4():
    c = ESC_CFG.replace(alpha2=4.0)
    assert abs(esc(c).value - esc_a2_4(c).value) < 1e-8


def test_rd_upper_bound_dominates():
    for c in (CFG, ESC_CFG, CFG.replace(N=64, epsilon=5.0),
              CFG.replace(N=16, rho_d_dB=50.0)):
        assert rd_upper_bound(c) >= esc(c).diagnostics["rd"]


def test_esc_survives_deep_cancellation():
    # at this geometry the user-rate Meijer kernel loses ~Gamma(727)
    # digits and the default working precision returns a converged-looking
    # value near 8e10 (true rate ~2.97 bits); the moment screen has to
    # catch that and the escalated retry has to land back on quadrature
    c = SystemConfig(K=64, N=64, epsilon=4.805229552639792, alpha1=2.0,
                     alpha2=2.0, beta0=1.0, d_SR=18.672278236745942,
                     d_RD=32.590136283097394, r_e=224.37955467504915,
                     lambda_e=0.005202961463592362,
                     rho_d_dB=10.225006246982955,
                     rho_e_dB=35.438880263490496, C_th=0.05, h_RIS=0.0)
    res = esc(c)
    assert res.diagnostics["rd_rel_gap"] < 1e-6
    assert res.diagnostics["rd"] == pytest.approx(2.971783100496131,
                                                  rel=1e-9)
    assert res.diagnostics["rd"] <= rd_upper_bound(c)
    # the eavesdropper field dominates at this downlink power
    assert res.value == 0.0


def test_esc_asymptotic_offset_invariances():
    base = esc_asymptotic(ESC_CFG)
    # only the power difference enters: a joint shift cancels bitwise
    shifted = esc_asymptotic(ESC_CFG.replace(rho_d_dB=70.0, rho_e_dB=60.0))
    assert shifted.value == base.value
    # the offset carries no K or source-side distance
    assert esc_asymptotic(ESC_CFG.replace(K=4)).value == base.value
    assert esc_asymptotic(ESC_CFG.replace(d_SR=75.0)).value == base.value


def test_esc_asymptotic_geometry_steps():
    base = esc_asymptotic(ESC_CFG).value
    dense = esc_asymptotic(ESC_CFG.replace(lambda_e=2e-3)).value
    assert dense == pytest.approx(base - 1.0, abs=1e-12)
    near = esc_asymptotic(ESC_CFG.replace(d_RD=20.0)).value
    assert near == pytest.approx(base + 2.0, abs=1e-12)


def test_esc_asymptotic_tracks_esc():
    res = esc_asymptotic(ESC_CFG)
    assert abs(res.value - esc(ESC_CFG).value) < 0.1
    parts = (res.diagnostics["power_term"] + res.diagnostics["geom_term"]
             + res.diagnostics["fit_term"] + res.diagnostics["elem_term"])
    # parts differ from unclamped only by the Euler constant term
    assert res.diagnostics["unclamped"] == pytest.approx(
        parts - 0.5772156649015329 / math.log(2.0), rel=1e-12)


def test_esc_asymptotic_clamps_and_warns():
    res = esc_asymptotic(CFG.replace(rho_d_dB=0.0, rho_e_dB=50.0))
    assert res.value == 0.0
    assert res.diagnostics["unclamped"] < 0.0
    with pytest.warns(UserWarning, match="alpha2 = 2"):
        esc_asymptotic(ESC_CFG.replace(alpha2=4.0))


def test_secrecy_result_validation():
    with pytest.raises(ValueError):
        SecrecyResult(0.5, "bogus")
    with pytest.raises(ValueError):
        SecrecyResult(-0.1, "quadrature")
    with pytest.raises(ValueError):
        SecrecyResult(float("nan"), "quadrature")
