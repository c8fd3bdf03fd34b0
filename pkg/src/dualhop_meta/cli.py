"""Command-line front end: analytic sweeps and simulations written as CSV.

Subcommands and their CSV columns::

    meta-curve          theta_db,x,method,ccdf
    coverage-variance   theta_db,m1_total,variance
    local-delay         lambda2,alpha,delay
    simulate            theta_db,x,method,ccdf   (+ JSON summary)

Thresholds on the command line and in config files are in dB. Divergent
mean local delay is written as the literal ``inf``. Exit status 2 signals a
bad config, bad flags or a numerical failure; no output file is left behind.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError, DomainError, QuadratureError, SimulationError
from .meta import beta_ccdf, beta_shape, gil_pelaez_ccdf
from .moments import coverage_probability, csp_variance, mean_local_delay, moment_total
from .network import association_probability, db_to_linear, load_config
from .simulation import run_simulation, run_threshold_sweep

EXIT_USAGE = 2

SWEEP_VARIABLES = ("theta_db", "lambda2", "bias2", "x")


class CliError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise CliError(f"unknown sweep variable {self.variable!r}")
        if self.steps < 2 or not self.start < self.stop:
            raise CliError("a sweep needs start < stop and at least two steps")

    def values(self):
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]


def parse_range(text):
    """``start:step:stop`` -> (start, stop, steps), stop inclusive."""
    try:
        start, step, stop = (float(p) for p in text.split(":"))
    except ValueError:
        raise CliError(f"expected start:step:stop, got {text!r}") from None
    if not step > 0 or not stop > start:
        raise CliError(f"range {text!r} needs step > 0 and stop > start")
    steps = int(round((stop - start) / step)) + 1
    return start, stop, steps


def parse_sweep(text):
    var, _, rng = text.partition("=")
    if not rng:
        raise CliError(f"expected var=start:step:stop, got {text!r}")
    return SweepSpec(var.strip(), *parse_range(rng))


def parse_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _single(text):
    values = parse_list(text)
    if len(values) != 1:
        raise CliError(f"expected a single threshold, got {text!r}")
    return values[0]


def _num(v):
    return repr(float(v))


def _db(theta):
    return 10.0 * math.log10(theta) if theta > 0 else -math.inf


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _x_grid(text):
    start, stop, steps = parse_range(text)
    xs = [float(v) for v in np.round(np.linspace(start, stop, steps), 12)]
    if xs[0] <= 0 or xs[-1] >= 1:
        raise CliError("x grid must lie inside (0, 1)")
    return xs


def _threshold_configs(config, theta_db):
    """[(theta_db label, config)] for each requested equal threshold."""
    if theta_db is None:
        return [(_db(config.theta_d), config)]
    return [(t, config.with_thresholds(db_to_linear(t))) for t in parse_list(theta_db)]


def _apply_overrides(config, args):
    if getattr(args, "bias2", None) is not None:
        config = config.with_tier(2, bias=float(args.bias2))
    return config


# ---------------------------------------------------------------------------
# subcommands


def cmd_meta_curve(args):
    config = _apply_overrides(load_config(args.config), args)
    xs = _x_grid(args.x_grid)
    methods = ["gil-pelaez", "beta", "empirical"] if args.method == "all" else [args.method]
    cases = _threshold_configs(config, args.theta_db)
    empirical = {}
    if "empirical" in methods:
        if args.theta_db is None:
            stats = run_simulation(config, n_realizations=args.n, master_seed=args.seed, xs=xs)
            empirical[cases[0][0]] = stats
        else:
            sweep = run_threshold_sweep(
                config, [c.theta_d for _, c in cases], n_realizations=args.n,
                master_seed=args.seed, xs=xs,
            )
            empirical = {label: sweep[c.theta_d] for label, c in cases}
    rows = []
    for label, cfg in cases:
        for method in methods:
            if method == "empirical":
                values = empirical[label].empirical_ccdf.ccdf
            elif method == "beta":
                try:
                    shape = beta_shape(cfg)
                except DegenerateDistributionError:
                    shape = None
                values = [
                    beta_ccdf(x, cfg, degenerate="step") if shape is None
                    else beta_ccdf(x, cfg, shape=shape)
                    for x in xs
                ]
            else:
                values = [gil_pelaez_ccdf(x, cfg) for x in xs]
            rows.extend((_num(label), _num(x), method, _num(v)) for x, v in zip(xs, values))
    return _csv_text(["theta_db", "x", "method", "ccdf"], rows)


def cmd_coverage_variance(args):
    config = _apply_overrides(load_config(args.config), args)
    sweep = parse_sweep(args.sweep)
    if sweep.variable != "theta_db":
        raise CliError("coverage-variance sweeps theta_db")
    rows = []
    for t in sweep.values():
        cfg = config.with_thresholds(db_to_linear(t))
        rows.append((_num(t), _num(coverage_probability(cfg)), _num(csp_variance(cfg))))
    return _csv_text(["theta_db", "m1_total", "variance"], rows)


def cmd_local_delay(args):
    config = _apply_overrides(load_config(args.config), args)
    sweep = parse_sweep(args.sweep)
    if sweep.variable != "lambda2":
        raise CliError("local-delay sweeps lambda2")
    if args.theta_db is not None:
        config = config.with_thresholds(db_to_linear(_single(args.theta_db)))
    alphas = parse_list(args.alpha) if args.alpha else [None]
    rows = []
    for lam in sweep.values():
        for a in alphas:
            cfg = config.with_tier(2, density=lam)
            if a is not None:
                cfg = cfg.with_tier(1, path_loss_exponent=a).with_tier(2, path_loss_exponent=a)
            label = a if a is not None else cfg.tier1.path_loss_exponent
            rows.append((_num(lam), _num(label), _num(mean_local_delay(cfg))))
    return _csv_text(["lambda2", "alpha", "delay"], rows)


def cmd_simulate(args):
    config = _apply_overrides(load_config(args.config), args)
    if args.theta_db is not None:
        config = config.with_thresholds(db_to_linear(_single(args.theta_db)))
    xs = _x_grid(args.x_grid)
    stats = run_simulation(
        config, n_realizations=args.n, master_seed=args.seed, xs=xs, workers=args.workers
    )
    label = _db(config.theta_d)
    rows = [(_num(label), _num(x), "empirical", _num(v)) for x, v in stats.empirical_ccdf.points]

    moments = {}
    for b, (est, se) in sorted(stats.empirical_moments.items()):
        analytic = moment_total(float(b), config)
        moments[str(b)] = {
            "estimate": est,
            "standard_error": se,
            "analytic": analytic if math.isfinite(analytic) else "inf",
            "z_score": stats.z_score(b, analytic) if math.isfinite(analytic) else None,
        }
    summary = {
        "n": stats.n,
        "seed": args.seed,
        "theta_d_db": _db(config.theta_d),
        "theta_2_db": _db(config.theta_2),
        "association_frequency": {
            "tier1": stats.association_frequency[1],
            "tier2": stats.association_frequency[2],
        },
        "association_probability": {
            "tier1": association_probability(config, 1),
            "tier2": association_probability(config, 2),
        },
        "moments": moments,
    }
    summary_text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    return _csv_text(["theta_db", "x", "method", "ccdf"], rows), summary_text


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dualhop-meta",
        description="Meta distribution of the SIR in two-tier MBS/relay networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="network config (JSON)")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--bias2", type=float, help="override the relay association bias")

    p = sub.add_parser("meta-curve", help="P(CSP > x) on an x grid")
    common(p)
    p.add_argument("--theta-db", help="comma-separated thresholds in dB (theta_D = theta_2)")
    p.add_argument("--x-grid", default="0.05:0.05:0.95", help="start:step:stop")
    p.add_argument("--method", default="all", choices=["gil-pelaez", "beta", "empirical", "all"])
    p.add_argument("--n", type=int, default=10_000, help="realizations for the empirical curve")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_meta_curve)

    p = sub.add_parser("coverage-variance", help="coverage probability and CSP variance")
    common(p)
    p.add_argument("--sweep", default="theta_db=-20:0.5:20", help="theta_db=start:step:stop")
    p.set_defaults(func=cmd_coverage_variance)

    p = sub.add_parser("local-delay", help="mean local delay versus relay density")
    common(p)
    p.add_argument("--sweep", default="lambda2=10:10:100", help="lambda2=start:step:stop")
    p.add_argument("--alpha", help="comma-separated path-loss exponents applied to both tiers")
    p.add_argument("--theta-db", help="threshold in dB applied to theta_D and theta_2")
    p.set_defaults(func=cmd_local_delay)

    p = sub.add_parser("simulate", help="Monte Carlo meta distribution and moments")
    common(p)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta-db", help="threshold in dB applied to theta_D and theta_2")
    p.add_argument("--x-grid", default="0.05:0.05:0.95")
    p.add_argument("--summary", help="summary JSON path (default: <out>.json)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


# Flags whose values may start with '-' (negative dB lists and ranges).
_SIGNED_FLAGS = ("--theta-db", "--sweep", "--x-grid")


def _join_signed_values(argv):
    """Rewrite ``--flag -10,0`` as ``--flag=-10,0`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in _SIGNED_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_signed_values(argv))
    try:
        result = args.func(args)
    except (CliError, DomainError, QuadratureError, SimulationError,
            ArithmeticError, OSError) as exc:
        print(f"dualhop-meta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, tuple):
        csv_text, summary_text = result
        _write_atomic(args.out, csv_text)
        summary_path = args.summary or os.path.splitext(args.out)[0] + ".json"
        _write_atomic(summary_path, summary_text)
    else:
        _write_atomic(args.out, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
