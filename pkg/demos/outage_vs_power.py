"""Secrecy outage vs downlink transmit SNR.

Four routes on one grid: the general closed form, numerical quadrature of
the same fitted laws, the high-SNR tail law, and exact simulation. At the
low end the tail law overshoots (it is not clamped on purpose); the closed
form and quadrature should agree to ~1e-3 absolute everywhere, and the
simulation to a few standard errors.
"""

import math

from ris_secrecy import (SystemConfig, run_trials, sop_asymptotic,
                         sop_closed_form, sop_quadrature)

TRIALS = 5000

cfg0 = SystemConfig(K=16, N=36, epsilon=2.0, alpha1=2.0, alpha2=2.0,
                    beta0=1.0, d_SR=30.0, d_RD=40.0, r_e=200.0,
                    lambda_e=1e-3, rho_e_dB=30.0, C_th=0.05, h_RIS=0.0)

print(f"# N = {cfg0.N}, K = {cfg0.K}, lambda_e = {cfg0.lambda_e:g}, "
      f"{TRIALS} trials per point")
print(f"{'rho_d':>6} {'closed':>12} {'quadrature':>12} {'asymptote':>12} "
      f"{'simulated':>12} {'se':>9}")

for db in (35.0, 40.0, 45.0, 50.0, 55.0):
    cfg = cfg0.replace(rho_d_dB=db)
    closed = sop_closed_form(cfg)
    quad = sop_quadrature(cfg)
    asym = sop_asymptotic(cfg)
    emp = run_trials(cfg, trials=TRIALS, seed=42)
    print(f"{db:6.0f} {closed.value:12.5e} {quad.value:12.5e} "
          f"{asym.value:12.5e} {emp.sop:12.5e} {emp.sop_se:9.2e}")
    gap = abs(closed.value - quad.value)
    assert gap <= 1e-3, gap
    assert abs(closed.value - emp.sop) <= max(4 * emp.sop_se, 5e-3)

# the tail law carries the diversity order: each +20 dB should divide the
# outage by ~100 once the asymptote has taken over
hi = sop_asymptotic(cfg0.replace(rho_d_dB=75.0)).value
lo = sop_asymptotic(cfg0.replace(rho_d_dB=55.0)).value
print(f"# asymptote ratio over +20 dB: {lo / hi:.2f} (diversity order "
      f"{math.log10(lo / hi) / 2:.3f})")
