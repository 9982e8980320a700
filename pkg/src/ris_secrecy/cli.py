"""Command-line experiment runner.

Subcommands: ``fig <id>`` replays a canned curve family from presets;
``sop``, ``esc`` and ``cdf`` evaluate a single scenario; ``sweep`` varies
one config field over a list of values; ``validate`` checks a JSON config
and echoes its normalized form; ``selftest`` runs a quick numerical oracle
suite. Every data-producing command emits one CSV schema:

    preset,axis,axis_value,metric,method,value,stderr,trials,seed,config_sha256

Numbers are written with repr so they parse back to the exact same float.
The stderr/trials/seed cells are filled only for Monte-Carlo rows; analytic
rows are deterministic and leave them empty, which also makes analytic-only
output byte-stable across runs. config_sha256 is the hash of the row's
normalized JSON config, so curves in the same file can be told apart.

All SNR inputs and outputs are in dB (value = 10 log10 of the power ratio).

Exit codes: 0 success, 2 config or usage error, 3 requested analytic route
unavailable for these parameters, 4 numerical convergence failure. Errors
are printed to standard error as ``E<code>: message``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys

import numpy as np
from scipy import optimize

from .errors import ConfigError, UnsupportedPathError
from .metrics import (esc, esc_asymptotic, sop_asymptotic, sop_closed_form,
                      sop_quadrature)
from .montecarlo import MetricSeries, run_trials
from .presets import PRESETS, get_preset
from .snr_dist import (cdf_gamma_d, cdf_gamma_e_asymptotic,
                       cdf_gamma_e_closed, pdf_gamma_d)
from .specfun import (ConvergenceError, marcum_q1, meijer_g_m0_0m,
                      meijer_g_m0_0m_log_contour)
from .sysmodel import SystemConfig

CSV_HEADER = ("preset", "axis", "axis_value", "metric", "method", "value",
              "stderr", "trials", "seed", "config_sha256")

# method vocabulary per metric; monte_carlo_diff is the difference-clamp
# capacity estimator (the one the analytic ESC route approximates)
_METHODS = {
    "sop": ("analytic", "asymptotic", "quadrature", "monte_carlo"),
    "esc": ("analytic", "asymptotic", "monte_carlo", "monte_carlo_diff"),
    "cdf_d": ("analytic", "monte_carlo"),
    "cdf_e": ("analytic", "asymptotic", "monte_carlo"),
}

_CDF_POINTS = 41
_CDF_QLO = 1e-3
_CDF_QHI = 0.999


def _num(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))  # numpy scalars repr as np.float64(...)
    return str(x)


def emit_csv(rows, sink, preset: str = "", metric: str = "sop") -> None:
    """Write the fixed-header CSV. rows is an iterable of prebuilt row
    tuples, or a MetricSeries whose Monte-Carlo summaries are rendered as
    monte_carlo rows for the given metric."""
    if isinstance(rows, MetricSeries):
        rows = _series_rows(rows, preset, metric)
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)


def _series_rows(series: MetricSeries, preset: str, metric: str):
    rows = []
    for pt in series.points:
        s = pt.summary
        if metric == "esc":
            vals = (("monte_carlo", s.esc_bits, s.esc_se),
                    ("monte_carlo_diff", s.esc_diff_bits, s.esc_diff_se))
        else:
            vals = (("monte_carlo", s.sop, s.sop_se),)
        for method, v, se in vals:
            rows.append((preset, series.axis, _num(pt.axis_value), metric,
                         method, _num(v), _num(se), str(s.trials),
                         str(s.seed), pt.config.sha256()))
    return rows


class _McCache(dict):
    """One simulation per (config, trials, seed); rows share the summary."""

    def get_summary(self, cfg, trials, seed, workers):
        key = (cfg.sha256(), trials, seed)
        if key not in self:
            self[key] = run_trials(cfg, trials, seed=seed, workers=workers)
        return self[key]


def _point_rows(cfg: SystemConfig, preset: str, axis: str, axis_value,
                metric: str, methods, trials: int, seed: int, workers: int,
                cache: _McCache):
    """CSV rows for one scalar metric at one config."""
    sha = cfg.sha256()
    av = "" if axis_value is None else _num(axis_value)
    analytic = {
        ("sop", "analytic"): sop_closed_form,
        ("sop", "asymptotic"): sop_asymptotic,
        ("sop", "quadrature"): sop_quadrature,
        ("esc", "analytic"): esc,
        ("esc", "asymptotic"): esc_asymptotic,
    }
    rows = []
    for method in methods:
        if method not in _METHODS[metric]:
            raise ConfigError(
                f"method {method!r} not available for metric {metric!r} "
                f"(choose from {', '.join(_METHODS[metric])})")
        if method.startswith("monte_carlo"):
            s = cache.get_summary(cfg, trials, seed, workers)
            if metric == "sop":
                v, se = s.sop, s.sop_se
            elif method == "monte_carlo_diff":
                v, se = s.esc_diff_bits, s.esc_diff_se
            else:
                v, se = s.esc_bits, s.esc_se
            rows.append((preset, axis, av, metric, method, _num(v),
                         _num(se), str(s.trials), str(s.seed), sha))
        else:
            v = analytic[(metric, method)](cfg).value
            rows.append((preset, axis, av, metric, method, _num(v),
                         "", "", "", sha))
    return rows


def _quantile(cdf1, p: float) -> float:
    """Invert a scalar monotone CDF by bracketed root finding."""
    lo, hi = 1e-12, 1.0
    while cdf1(hi) < p:
        hi *= 10.0
        if hi > 1e18:
            raise ConvergenceError(f"CDF never reaches {p}")
    while cdf1(lo) > p:
        lo /= 10.0
        if lo < 1e-300:
            return lo
    return float(optimize.brentq(lambda x: cdf1(x) - p, lo, hi,
                                 xtol=1e-300, rtol=1e-12))


def _cdf_grid(cfg: SystemConfig, metric: str) -> np.ndarray:
    """Log-spaced SNR grid between fixed analytic quantiles, so the grid is
    deterministic and adapts to the scenario."""
    if metric == "cdf_d":
        cdf1 = lambda x: float(cdf_gamma_d(x, cfg))
    else:
        cdf1 = lambda x: float(cdf_gamma_e_closed(x, cfg))
    lo = _quantile(cdf1, _CDF_QLO)
    hi = _quantile(cdf1, _CDF_QHI)
    return np.geomspace(lo, hi, _CDF_POINTS)


def _cdf_rows(cfg: SystemConfig, preset: str, metric: str, methods, grid,
              trials: int, seed: int, workers: int, cache: _McCache):
    """CSV rows for a CDF metric over an SNR grid; axis is the CDF argument
    (linear SNR), one row per grid point and method."""
    sha = cfg.sha256()
    if grid is None:
        grid = _cdf_grid(cfg, metric)
    rows = []
    for method in methods:
        if method not in _METHODS[metric]:
            # fig-style method lists cover several metrics; routes that do
            # not exist for this one (asymptotic F_D) are skipped, ad-hoc
            # requests for them are rejected in cmd_cdf
            continue
        if method == "analytic":
            f = cdf_gamma_d if metric == "cdf_d" else cdf_gamma_e_closed
            vals = [(x, float(f(x, cfg)), None, "", "") for x in grid]
        elif method == "asymptotic":
            vals = [(x, float(cdf_gamma_e_asymptotic(x, cfg)), None, "", "")
                    for x in grid]
        else:
            s = cache.get_summary(cfg, trials, seed, workers)
            samp = s.ecdf_d if metric == "cdf_d" else s.ecdf_e
            n = s.trials
            vals = []
            for x in grid:
                fh = np.searchsorted(samp, x, side="right") / n
                se = math.sqrt(max(fh * (1.0 - fh), 0.0) / n)
                vals.append((x, fh, se, str(n), str(s.seed)))
        for x, v, se, tr, sd in vals:
            rows.append((preset, "snr_value", _num(float(x)), metric, method,
                         _num(v), "" if se is None else _num(se), tr, sd,
                         sha))
    return rows


# ---------------------------------------------------------------------------
# subcommands


def _parse_methods(text, default):
    if text is None:
        return tuple(default)
    methods = tuple(t.strip() for t in text.split(",") if t.strip())
    if not methods:
        raise ConfigError("--methods list is empty")
    return methods


def _load_config(path) -> SystemConfig:
    if path is None:
        return SystemConfig()
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return SystemConfig.from_json(text)


def _write_rows(rows, out):
    if out is None:
        emit_csv(rows, sys.stdout)
        return
    with open(out, "w", encoding="utf-8", newline="") as f:
        emit_csv(rows, f)


def cmd_fig(args) -> int:
    try:
        preset = get_preset(args.id)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    base = _load_config(args.config) if args.config else preset.base_config
    trials = args.trials if args.trials is not None else preset.trials
    methods = _parse_methods(args.methods, preset.methods)
    cache = _McCache()
    rows = []
    for label, overrides in preset.curves:
        cfg_curve = base.replace(**overrides)
        tag = preset.id if len(preset.curves) == 1 else \
            f"{preset.id}[{label}]"
        for metric in preset.metrics:
            if metric.startswith("cdf"):
                rows += _cdf_rows(cfg_curve, tag, metric, methods, None,
                                  trials, args.seed, args.workers, cache)
            else:
                for v in preset.grid:
                    cfg_pt = cfg_curve.replace(**{preset.axis: v})
                    rows += _point_rows(cfg_pt, tag, preset.axis, v, metric,
                                        methods, trials, args.seed,
                                        args.workers, cache)
    _write_rows(rows, args.out)
    return 0


def _cmd_scalar(args, metric: str) -> int:
    cfg = _load_config(args.config)
    methods = _parse_methods(args.methods, ("analytic",))
    rows = _point_rows(cfg, "", "", None, metric, methods,
                       args.trials if args.trials is not None else 100_000,
                       args.seed, args.workers, _McCache())
    _write_rows(rows, args.out)
    return 0


def cmd_sop(args) -> int:
    return _cmd_scalar(args, "sop")


def cmd_esc(args) -> int:
    return _cmd_scalar(args, "esc")


def cmd_cdf(args) -> int:
    cfg = _load_config(args.config)
    metrics = ("cdf_d", "cdf_e") if args.metric == "both" else (args.metric,)
    methods = _parse_methods(args.methods, ("analytic",))
    for metric in metrics:
        bad = [m for m in methods if m not in _METHODS[metric]]
        if bad and len(metrics) == 1:
            raise ConfigError(
                f"method {bad[0]!r} not available for metric {metric!r}")
    grid = None
    if args.grid:
        grid = np.array([float(t) for t in args.grid.split(",")])
        if not np.all(grid > 0):
            raise ConfigError("--grid values must be positive SNRs")
    cache = _McCache()
    rows = []
    trials = args.trials if args.trials is not None else 100_000
    for metric in metrics:
        rows += _cdf_rows(cfg, "", metric, methods, grid, trials,
                          args.seed, args.workers, cache)
    _write_rows(rows, args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    fields = {f.name for f in dataclasses.fields(SystemConfig)}
    if args.axis not in fields:
        raise ConfigError(f"unknown sweep axis: {args.axis}")
    try:
        values = [json.loads(t) for t in args.values.split(",") if t.strip()]
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad --values list: {exc}") from exc
    methods = _parse_methods(args.methods, ("analytic",))
    cache = _McCache()
    rows = []
    trials = args.trials if args.trials is not None else 100_000
    for v in values:
        cfg_pt = cfg.replace(**{args.axis: v})
        # common random numbers across points: same seed at every value
        rows += _point_rows(cfg_pt, "", args.axis, v, args.metric, methods,
                            trials, args.seed, args.workers, cache)
    _write_rows(rows, args.out)
    return 0


def cmd_validate(args) -> int:
    if args.config is None:
        raise ConfigError("validate needs --config <path>")
    cfg = _load_config(args.config)
    text = cfg.normalized_json()
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    return 0


def cmd_selftest(args) -> int:
    """Deterministic oracle spot-checks; raises ConvergenceError on any
    failure so the process exits 4."""
    failures = []

    def check(name, err, tol):
        status = "ok" if err <= tol else "FAIL"
        print(f"selftest {name}: max err {err:.3e} (tol {tol:g}) {status}")
        if err > tol:
            failures.append(name)

    # order-1 Meijer G is a bare exponential; the series route holds 1e-12
    # while the alternating sum cancels less than a digit (x <= 4), the
    # contour route covers large arguments at its quadrature tolerance
    xs = np.geomspace(1e-3, 4.0, 25)
    err = max(abs(meijer_g_m0_0m([0.0], x) - math.exp(-x))
              / math.exp(-x) for x in xs)
    check("meijer_g identity (series)", err, 1e-12)
    err = 0.0
    for x in (10.0, 30.0, 100.0):
        logv = meijer_g_m0_0m_log_contour([0.0], math.log(x))
        err = max(err, abs(math.exp(logv + x) - 1.0))
    check("meijer_g identity (contour)", err, 1e-10)

    # residue series against the independent contour integral (small args;
    # at large x the series refuses by design and the contour takes over)
    err = 0.0
    for orders, x in ((np.array([0.0, 1.3, 1.5]), 0.3),
                      (np.array([0.0, 0.25, 0.5, 0.75, 2.1]), 1.2),
                      (np.array([0.2, 1.7, 3.9]), 3.0)):
        ref = meijer_g_m0_0m_log_contour(orders, math.log(x))
        got = math.log(meijer_g_m0_0m(orders, x))
        err = max(err, abs(got - ref))
    check("meijer_g series vs contour", err, 1e-9)

    # contour route in its own regime, against frozen multiprecision values
    err = 0.0
    for orders, x, ref in ((np.array([0.2, 1.7, 3.9]), 25.0,
                            0.2763384247445036),
                           (np.array([0.0, 1.3, 1.5]), 0.3,
                            0.50766768378111361)):
        logv = meijer_g_m0_0m_log_contour(orders, math.log(x))
        err = max(err, abs(math.exp(logv) - ref) / ref)
    check("meijer_g contour vs reference", err, 1e-11)

    # Marcum Q1 against the noncentral chi-square tail
    from scipy import stats
    err = 0.0
    for a, b in ((0.5, 0.2), (1.5, 2.0), (4.0, 9.0), (12.0, 11.5),
                 (2.0, 1.0), (7.0, 3.0)):
        err = max(err, abs(marcum_q1(a, b)
                           - float(stats.ncx2.sf(b * b, 2, a * a))))
    check("marcum_q1 vs ncx2", err, 1e-9)

    # fitted user-SNR law: CDF derivative must match the PDF; probe at
    # quantiles so the difference quotient stays well conditioned
    cfg = get_preset("fig3").base_config
    cdf1 = lambda x: float(cdf_gamma_d(x, cfg))
    err = 0.0
    for p in (0.05, 0.25, 0.5, 0.75, 0.95):
        x = _quantile(cdf1, p)
        h = 1e-5 * x
        num = (cdf_gamma_d(x + h, cfg) - cdf_gamma_d(x - h, cfg)) / (2 * h)
        err = max(err, abs(num - pdf_gamma_d(x, cfg))
                  / float(pdf_gamma_d(x, cfg)))
    check("gamma_d cdf/pdf consistency", err, 1e-6)

    # closed-form outage against direct quadrature of the definition
    cfg45 = cfg.replace(rho_d_dB=45.0)
    err = abs(sop_closed_form(cfg45).value - sop_quadrature(cfg45).value)
    check("sop closed vs quadrature", err, 1e-3)

    # capacity route cross-check runs inside esc() and raises on mismatch
    esc(cfg.replace(rho_d_dB=60.0, rho_e_dB=50.0))
    print("selftest esc dual-route: ok")

    if failures:
        raise ConvergenceError(f"selftest failed: {', '.join(failures)}")
    print("selftest: all checks passed")
    return 0


# ---------------------------------------------------------------------------
# parser and entry point


class _Parser(argparse.ArgumentParser):
    # argparse usage errors share exit code 2 with config errors; give them
    # the same machine-readable prefix
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"E2: {message}\n")


def _add_common(sub):
    sub.add_argument("--config", help="JSON scenario file (defaults used "
                     "for missing fields)")
    sub.add_argument("--seed", type=int, default=42,
                     help="Monte-Carlo base seed (default 42)")
    sub.add_argument("--trials", type=int, default=None,
                     help="Monte-Carlo trials (default 100000, or the "
                     "preset's own count for fig)")
    sub.add_argument("--out", help="output CSV path (default stdout)")
    sub.add_argument("--methods", help="comma-separated evaluation methods")
    sub.add_argument("--workers", type=int, default=1,
                     help="parallel simulation workers (default 1)")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ris-secrecy",
                description="Secrecy outage / capacity experiment runner "
                            "for a surface-assisted downlink with a Poisson "
                            "field of eavesdroppers. SNRs are in dB.")
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=_Parser)

    s = sub.add_parser("fig",
                       help="run a canned figure-style preset")
    s.add_argument("id", help="preset id, e.g. fig3 or just 3 "
                   f"(available: {', '.join(sorted(PRESETS))})")
    _add_common(s)
    s.set_defaults(func=cmd_fig)

    s = sub.add_parser("sop",
                       help="secrecy outage probability of one scenario")
    _add_common(s)
    s.set_defaults(func=cmd_sop)

    s = sub.add_parser("esc",
                       help="ergodic secrecy capacity of one scenario")
    _add_common(s)
    s.set_defaults(func=cmd_esc)

    s = sub.add_parser("cdf",
                       help="SNR distribution curves of one scenario")
    s.add_argument("--metric", choices=("cdf_d", "cdf_e", "both"),
                   default="both", help="which SNR law to tabulate")
    s.add_argument("--grid", help="comma-separated linear SNR values "
                   "(default: auto quantile grid)")
    _add_common(s)
    s.set_defaults(func=cmd_cdf)

    s = sub.add_parser("sweep",
                       help="sweep one config field over a value list")
    s.add_argument("--axis", required=True, help="SystemConfig field name")
    s.add_argument("--values", required=True,
                   help="comma-separated values for the axis")
    s.add_argument("--metric", choices=("sop", "esc"), default="sop")
    _add_common(s)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("validate",
                       help="check a JSON config and print its normal form")
    _add_common(s)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("selftest",
                       help="run the numerical oracle spot-checks")
    _add_common(s)
    s.set_defaults(func=cmd_selftest)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"E2: {exc}", file=sys.stderr)
        return 2
    except UnsupportedPathError as exc:
        print(f"E3: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"E4: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
