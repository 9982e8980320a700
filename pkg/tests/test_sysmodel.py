"""Scenario config contract and the channel sampler.

Statistical checks run on a frozen stream, so every asserted number is
deterministic; tolerance bands were sized from the estimator's standard
error at the chosen sample count (>= 4 sigma slack).
"""

import json
import math

import numpy as np
import pytest

from ris_secrecy.errors import ConfigError
from ris_secrecy.sysmodel import (ChannelRealization, SystemConfig,
                                  array_response, complex_normal,
                                  eve_elevation, make_trial_rng, path_loss,
                                  sample_channels)

FIG2 = dict(K=16, N=36, epsilon=2.0, alpha1=2.0, alpha2=2.0, beta0=1.0,
            d_SR=30.0, d_RD=40.0, r_e=200.0, lambda_e=1e-3, rho_d_dB=20.0,
            rho_e_dB=30.0, C_th=0.05, h_RIS=0.0)


def test_defaults_validate():
    cfg = SystemConfig().validate()
    assert cfg.K == 16 and cfg.N == 36


def test_derived_quantities():
    cfg = SystemConfig(**FIG2)
    assert cfg.nu == pytest.approx(30.0**-2, rel=1e-15)
    assert cfg.mu_D == pytest.approx(40.0**-2, rel=1e-15)
    assert cfg.rho_d == pytest.approx(100.0, rel=1e-15)
    assert cfg.rho_e == pytest.approx(1000.0, rel=1e-15)
    assert cfg.mean_eve_count == pytest.approx(
        1e-3 * math.pi * 200.0**2, rel=1e-15)
    assert cfg.sqrt_N == 6 and cfg.sqrt_K == 4


@pytest.mark.parametrize("field,value,fragment", [
    ("d_RD", -5.0, "d_RD must be > 0"),
    ("d_SR", 0.0, "d_SR must be > 0"),
    ("r_e", -1.0, "r_e must be > 0"),
    ("lambda_e", 0.0, "lambda_e must be > 0"),
    ("K", 12, "perfect square"),
    ("N", 37, "perfect square"),
    ("K", 0, "positive integer"),
    ("epsilon", -0.5, "epsilon must be >= 0"),
    ("C_th", -0.1, "C_th must be >= 0"),
    ("h_RIS", -2.0, "h_RIS must be >= 0"),
    ("rho_d_dB", math.inf, "rho_d_dB must be finite"),
])
def test_validation_rejects(field, value, fragment):
    with pytest.raises(ConfigError, match=fragment):
        SystemConfig(**{**FIG2, field: value}).validate()


def test_replace_validates():
    cfg = SystemConfig(**FIG2)
    with pytest.raises(ConfigError):
        cfg.replace(d_RD=-1.0)
    assert cfg.replace(d_RD=50.0).d_RD == 50.0


def test_eve_reference_angles_must_pair():
    with pytest.raises(ConfigError, match="set together"):
        SystemConfig(**FIG2, eve_ref_azimuth=0.1).validate()
    cfg = SystemConfig(**FIG2, eve_ref_azimuth=0.1, eve_ref_elevation=0.2)
    assert cfg.validate() is cfg


def test_json_round_trip_and_hash():
    cfg = SystemConfig(**FIG2)
    again = SystemConfig.from_json(cfg.normalized_json())
    assert again == cfg
    assert again.sha256() == cfg.sha256()
    assert cfg.replace(rho_d_dB=21.0).sha256() != cfg.sha256()
    # normalized form is canonical: key order and separators are fixed
    assert cfg.normalized_json() == SystemConfig.from_dict(
        json.loads(cfg.normalized_json())).normalized_json()


def test_from_dict_rejects_unknown_and_bad_json():
    with pytest.raises(ConfigError, match="unknown config keys"):
        SystemConfig.from_dict({"bandwidth": 1.0})
    with pytest.raises(ConfigError, match="invalid JSON"):
        SystemConfig.from_json("{not json")
    with pytest.raises(ConfigError, match="JSON object"):
        SystemConfig.from_json("[1, 2]")


def test_from_dict_coerces_and_checks_types():
    cfg = SystemConfig.from_dict({"K": 16, "N": 16, "d_RD": 40})
    assert isinstance(cfg.d_RD, float) and cfg.d_RD == 40.0
    with pytest.raises(ConfigError, match="must be an integer"):
        SystemConfig.from_dict({"K": 16.5})


def test_path_loss():
    assert path_loss(1.0, 10.0, 2.0) == pytest.approx(0.01, rel=1e-15)
    assert path_loss(2.0, 30.0, 3.0) == pytest.approx(
        2.0 * 30.0**-3, rel=1e-15)
    with pytest.raises(ValueError):
        path_loss(1.0, 0.0, 2.0)


def test_array_response_structure():
    a = array_response(16, 0.7, 1.1, 0.5)
    assert a.shape == (16,)
    np.testing.assert_allclose(np.abs(a), 1.0, rtol=1e-14)
    # row-major (x, y) layout: entry n = x*side + y
    side, s = 4, 0.5
    x, y = 2, 3
    ph = 2 * math.pi * s * (x * math.sin(0.7) * math.sin(1.1)
                            + y * math.cos(1.1))
    assert a[x * side + y] == pytest.approx(np.exp(1j * ph), rel=1e-13)
    with pytest.raises(ValueError):
        array_response(15, 0.0, 0.0)


def test_eve_elevation():
    assert eve_elevation(50.0, 0.0) == 0.0
    assert eve_elevation(10.0, 10.0) == pytest.approx(math.pi / 4, rel=1e-15)
    els = eve_elevation(np.array([1.0, 100.0]), 10.0)
    assert els[0] > els[1]


def test_trial_rng_is_keyed_not_sequential():
    a = make_trial_rng(42, 7).random(4)
    b = make_trial_rng(42, 7).random(4)
    c = make_trial_rng(42, 8).random(4)
    d = make_trial_rng(43, 7).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_complex_normal_moments():
    rng = make_trial_rng(5, 0)
    z = complex_normal(rng, 200_000)
    # E z = 0, E|z|^2 = 1; SE of the power estimate is 1/sqrt(n) ~ 0.0022
    assert abs(z.mean()) < 0.01
    assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.01)
    # real/imag parts each carry half the power
    assert np.mean(z.real**2) == pytest.approx(0.5, abs=0.01)


def test_sample_channels_shapes_and_determinism():
    cfg = SystemConfig(**FIG2)
    r1 = sample_channels(cfg, make_trial_rng(42, 3), seed_info=(42, 3))
    r2 = sample_channels(cfg, make_trial_rng(42, 3), seed_info=(42, 3))
    assert r1.H_SR.shape == (36, 16)
    assert r1.h_RD.shape == (36,)
    assert r1.eve_positions.shape == (r1.n_eves, 2)
    assert r1.eve_channels.shape == (r1.n_eves, 36)
    np.testing.assert_array_equal(r1.h_RD, r2.h_RD)
    np.testing.assert_array_equal(r1.eve_channels, r2.eve_channels)
    assert r1.seed_info == (42, 3)


def test_sample_channels_los_mode_is_rank_one():
    cfg = SystemConfig(**FIG2)
    real = sample_channels(cfg, make_trial_rng(1, 0))
    sv = np.linalg.svd(real.H_SR, compute_uv=False)
    assert sv[1] / sv[0] < 1e-14
    # every entry has modulus sqrt(nu) (unit steering outer product)
    np.testing.assert_allclose(np.abs(real.H_SR), math.sqrt(cfg.nu),
                               rtol=1e-12)


def test_sample_channels_dual_mode_draws_scatter():
    cfg = SystemConfig(**FIG2, epsilon1=2.0, epsilon2=2.0)
    real = sample_channels(cfg, make_trial_rng(1, 0))
    sv = np.linalg.svd(real.H_SR, compute_uv=False)
    assert sv[1] / sv[0] > 1e-3
    # per-entry power stays nu on average: 36*16 entries, SE ~ 4.2%
    p = np.mean(np.abs(real.H_SR) ** 2) / cfg.nu
    assert p == pytest.approx(1.0, abs=0.2)


def test_sample_channels_geometry():
    cfg = SystemConfig(**FIG2)
    real = sample_channels(cfg, make_trial_rng(9, 5))
    radii, az = real.eve_positions[:, 0], real.eve_positions[:, 1]
    assert np.all((radii > 0) & (radii <= cfg.r_e))
    assert np.all((az >= 0) & (az < 2 * math.pi))
    # row power tracks the distance law: E ||h_RE||^2 = N mu_e(r)
    exp_p = cfg.N * cfg.beta0 * radii**-2
    obs_p = np.sum(np.abs(real.eve_channels) ** 2, axis=1)
    assert np.mean(obs_p / exp_p) == pytest.approx(1.0, abs=0.1)


def test_sample_channels_poisson_count():
    cfg = SystemConfig(**FIG2)
    counts = [sample_channels(cfg, make_trial_rng(3, t)).n_eves
              for t in range(300)]
    # mean 125.66, SE of the average over 300 trials = 0.65
    assert np.mean(counts) == pytest.approx(cfg.mean_eve_count, abs=3.0)


def test_sample_channels_user_power():
    cfg = SystemConfig(**FIG2)
    ps = []
    for t in range(300):
        real = sample_channels(cfg, make_trial_rng(11, t))
        ps.append(np.mean(np.abs(real.h_RD) ** 2))
    # E |h_RD|^2 = mu_D; SE over 300*36 samples ~ 0.6%
    assert np.mean(ps) / cfg.mu_D == pytest.approx(1.0, abs=0.05)


def test_empty_eve_draw_is_legal():
    cfg = SystemConfig(**{**FIG2, "lambda_e": 1e-9})
    real = sample_channels(cfg, make_trial_rng(0, 0))
    assert real.n_eves == 0
    assert real.eve_channels.shape == (0, 36)
    assert isinstance(real, ChannelRealization)
