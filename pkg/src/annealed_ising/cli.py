"""Command-line experiments: ``python -m annealed_ising <command> [flags]``.

Every command writes one machine-readable table (CSV with ``# key=value``
header lines, or JSON) whose config block echoes the fully resolved run
parameters. Exit status is 0 on success, 2 for invalid configuration and 3
when a numerical routine misses its tolerance.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .clt.checks import a_stability, gn_limit_check, partition_sweep, regime_of, window_beta
from .clt.enumerate import enumerate_spin_law, tv_distance
from .clt.gn import GnFunction, default_lambda, mgf_ratio
from .clt.limit import LimitLaw, density_normalizer, limit_constant_C, limit_density_f, limit_mgf, window_density
from .clt.sampling import exact_sample
from .criticality import (
    Regime,
    critical_beta,
    expected_slope,
    exponent_curve,
    exponent_table,
    fit_exponent,
)
from .errors import ConfigError, NumericalError
from .io import CURVE_COLUMNS, DENSITY_COLUMNS, SPIN_LAW_COLUMNS, write_samples, write_table
from .meanfield import magnetization, solve_fixed_point, susceptibility, weight_law
from .model import ModelKind, ModelSpec
from .weights import WeightSequence, empirical_moments, homogeneous_weights, limiting_moments, make_powerlaw_weights

EXPONENTS = ("delta", "beta", "gamma", "gamma-prime", "tau5")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model and weights")
    g.add_argument("--model", choices=["grg", "icw"], default="icw", help="annealed GRG or rank-1 ICW (default icw)")
    w = g.add_mutually_exclusive_group()
    w.add_argument("--homogeneous", action="store_true", help="constant weights w_i = cw")
    w.add_argument("--tau", type=float, help="power-law exponent of the weights")
    w.add_argument("--weights-file", help="CSV weight file with header i,w")
    g.add_argument("--n", type=int, help="number of vertices; omit for the limiting power law")
    g.add_argument("--cw", type=float, default=1.0, help="weight scale (default 1)")
    t = p.add_argument_group("temperature and field").add_mutually_exclusive_group()
    t.add_argument("--theta", type=float, help="effective coupling theta")
    t.add_argument("--beta", type=float, help="inverse temperature")
    t.add_argument(
        "--beta-offset", type=float, help="beta = beta_c,N + offset (default: offset 0, the critical point)"
    )
    p.add_argument("--b-field", type=float, default=0.0, help="external field B >= 0")
    o = p.add_argument_group("run")
    o.add_argument("--tol", type=float, default=1e-12, help="solver / truncation tolerance")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--samples", type=int, default=10000)
    o.add_argument("--output", help="write here instead of stdout")
    o.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annealed-ising", description="Critical behaviour of rank-1 inhomogeneous Ising models."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        _common(p)
        return p

    add("critical-point", "limiting and finite-N critical inverse temperatures")

    p = add("magnetization-curve", "fixed point, magnetization and susceptibility along beta or B")
    p.add_argument("--sweep", choices=["B", "beta"], default="B")
    p.add_argument("--from", dest="start", type=float, help="first sweep value")
    p.add_argument("--to", dest="stop", type=float, help="last sweep value")
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--spacing", choices=["log", "linear"], default="log")

    p = add("exponent-fit", "critical-exponent regression on a generated curve")
    p.add_argument("--exponent", choices=EXPONENTS, required=True)
    p.add_argument("--window", type=_floats, help="lo,hi of the fit variable")
    p.add_argument("--per-decade", type=int, default=12)

    for name, help_ in (
        ("clt-density", "limiting critical density table with normalizer and tail constant"),
        ("window", "scaling-window density table for a given b"),
    ):
        p = add(name, help_)
        p.add_argument("--b", type=float, default=0.0 if name == "clt-density" else 1.0, help="window position")
        p.add_argument("--r", type=float, default=1.0, help="MGF argument (window, with --n)")
        p.add_argument("--x-max", type=float, default=5.0)
        p.add_argument("--points", type=int, default=101)

    p = add("clt-check", "finite-N G_N and MGF against their limits")
    p.add_argument("--z-values", type=_floats, default=[0.5, 1.0, 2.0])
    p.add_argument("--r-values", type=_floats, default=[0.5, 1.0])

    add("sample", "exact samples of the total spin S_N")

    p = add("enumerate", "exact law of S_N by enumeration (n <= 22)")
    p.add_argument("--measure", choices=["tilde", "exact"], default="tilde")

    p = add("partition", "log partition function sweep and stability of the constant A_N")
    p.add_argument("--n-list", type=_ints, default=[1000, 10000, 100000, 1000000])
    p.add_argument("--power", type=float, help="power of N removed from Z_N / 2^N (default: derived)")
    return parser


# ---------------------------------------------------------------- resolution


def _weights(args, n=None):
    """WeightSequence for ``n`` (or args.n), or the limiting MomentSet when no n is given."""
    n = args.n if n is None else n
    if n is not None and n < 1:
        raise ConfigError(f"--n must be positive, got {n}")
    if args.weights_file:
        with open(args.weights_file) as fh:
            ws = WeightSequence.from_csv(fh.read())
        if n is not None and n != ws.n:
            raise ConfigError(f"--n {n} disagrees with {ws.n} weights in {args.weights_file}")
        return ws
    if args.tau is not None:
        if n is None:
            return limiting_moments(args.tau, args.cw)
        return make_powerlaw_weights(n, args.tau, args.cw)
    return homogeneous_weights(1 if n is None else n, args.cw)


def _moments(source):
    return empirical_moments(source) if isinstance(source, WeightSequence) else source


def _resolve(args, source):
    """(config dict, ModelSpec) with beta, theta, nu_N and beta_c,N filled in."""
    kind = ModelKind(args.model)
    mom = _moments(source)
    bc_n = critical_beta(kind, mom.nu)
    if args.tau is not None:
        beta_c = critical_beta(kind, limiting_moments(args.tau, args.cw).nu) if args.tau <= 5 else None
    elif args.weights_file:
        beta_c = None
    else:
        beta_c = critical_beta(kind, args.cw)
    if args.theta is not None:
        if not args.theta >= 0:
            raise ConfigError("--theta must be nonnegative")
        beta = kind.beta_from_coupling(args.theta)
    elif args.beta is not None:
        beta = args.beta
    else:
        beta = bc_n + (args.beta_offset or 0.0)
    spec = ModelSpec(kind, beta, args.b_field)
    cfg = {
        "command": args.command,
        "model": kind.value,
        "weights": "file" if args.weights_file else ("powerlaw" if args.tau is not None else "homogeneous"),
        "n": getattr(source, "n", None) if (args.n is not None or args.weights_file) else None,
        "tau": args.tau,
        "cw": args.cw,
        "beta": beta,
        "beta_offset": beta - bc_n,
        "theta": spec.theta,
        "b_field": args.b_field,
        "nu_N": mom.nu,
        "beta_c": beta_c,
        "beta_c_N": bc_n,
        "tol": args.tol,
        "seed": args.seed,
        "samples": args.samples,
        "format": args.format,
    }
    return cfg, spec


def _need_n(args, what):
    if args.n is None and not args.weights_file:
        raise ConfigError(f"{what} needs a finite system: pass --n")


# ---------------------------------------------------------------- commands


def _critical_point(args):
    source = _weights(args)
    cfg, _ = _resolve(args, source)
    rows = [["beta_c", cfg["beta_c"]], ["beta_c_N", cfg["beta_c_N"]], ["nu_N", cfg["nu_N"]]]
    return cfg, ["quantity", "value"], rows


def _thermo_row(spec, law, tol):
    fp = solve_fixed_point(spec, law, tol)
    m = magnetization(spec, law, fp.z_star)
    try:
        chi = susceptibility(spec, law, fp)
    except NumericalError:
        chi = math.inf
    return [spec.beta, spec.b_field, fp.z_star, m, chi]


def _magnetization_curve(args):
    source = _weights(args)
    cfg, spec = _resolve(args, source)
    law = weight_law(source)
    if args.points < 2:
        raise ConfigError("--points must be at least 2")
    if args.sweep == "B":
        start = 1e-6 if args.start is None else args.start
        stop = 1e-2 if args.stop is None else args.stop
    else:
        start = 0.5 * cfg["beta_c_N"] if args.start is None else args.start
        stop = 1.5 * cfg["beta_c_N"] if args.stop is None else args.stop
    if args.spacing == "log":
        if not 0 < start < stop:
            raise ConfigError("log spacing needs 0 < --from < --to")
        values = np.geomspace(start, stop, args.points)
    else:
        values = np.linspace(start, stop, args.points)
    rows = []
    for v in values:
        s = ModelSpec(spec.kind, spec.beta, float(v)) if args.sweep == "B" else ModelSpec(spec.kind, float(v), spec.b_field)
        rows.append(_thermo_row(s, law, args.tol))
    cfg.update(sweep=args.sweep, sweep_from=float(start), sweep_to=float(stop), spacing=args.spacing)
    return cfg, CURVE_COLUMNS, rows


def _exponent_fit(args):
    source = _weights(args)
    cfg, spec = _resolve(args, source)
    window = None
    if args.window is not None:
        if len(args.window) != 2:
            raise ConfigError("--window takes lo,hi")
        window = tuple(args.window)
    pts, transform = exponent_curve(args.exponent, spec.kind, source, window, args.per_decade, args.tol)
    fit = fit_exponent(pts, transform)
    regime = Regime.of(weight_law(source)) if not isinstance(source, WeightSequence) else regime_of(source)
    cfg.update(
        exponent_name=args.exponent,
        regime=str(regime),
        slope=fit.slope,
        intercept=fit.intercept,
        r_squared=fit.r_squared,
        expected=expected_slope(args.exponent, exponent_table(regime)),
        window_lo=fit.window[0],
        window_hi=fit.window[1],
    )
    return cfg, ["x", "y"], pts.tolist()


def _density_table(args, law):
    if args.points < 2 or not args.x_max > 0:
        raise ConfigError("--points must be >= 2 and --x-max positive")
    xs = np.linspace(-args.x_max, args.x_max, args.points)
    f = limit_density_f(xs, law)
    u = window_density(xs, law)
    norm = density_normalizer(law)
    rows = [[float(x), float(a), float(b), float(b / norm)] for x, a, b in zip(xs, f, u)]
    return norm, rows


def _clt_density(args, window=False):
    source = _weights(args)
    cfg, spec = _resolve(args, source)
    law = LimitLaw.from_source(source, spec.kind, window_b=args.b, truncation_tol=args.tol)
    norm, rows = _density_table(args, law)
    cfg.update(regime=str(law.regime), window_b=args.b, kappa=law.kappa, normalizer=norm)
    if not window:
        cfg.update(tail_constant_C=limit_constant_C(law), tail_power=law.tail_power)
    elif isinstance(source, WeightSequence):
        beta = window_beta(source, spec.kind, args.b)
        gn = GnFunction(source, spec.kind.effective_coupling(beta), default_lambda(source))
        cfg.update(window_beta=beta, r=args.r, mgf_finite_n=mgf_ratio(args.r, gn), mgf_limit=limit_mgf(args.r, law))
    return cfg, DENSITY_COLUMNS, rows


def _clt_check(args):
    _need_n(args, "clt-check")
    source = _weights(args)
    cfg, spec = _resolve(args, source)
    gn = GnFunction(source, spec.theta, default_lambda(source))
    law = LimitLaw.from_source(source, spec.kind, truncation_tol=args.tol)
    rows = []
    for z in args.z_values:
        lhs, rhs = gn_limit_check(gn, z, 0.0, law)
        rows.append(["gn", z, 0.0, lhs, rhs, lhs - rhs])
    for r in args.r_values:
        a, b = mgf_ratio(r, gn), limit_mgf(r, law)
        rows.append(["mgf", None, r, a, b, a - b])
    cfg.update(regime=str(law.regime), lam=gn.lam)
    return cfg, ["check", "z", "r", "finite_n", "limit", "difference"], rows


def _sample(args):
    _need_n(args, "sample")
    source = _weights(args)
    cfg, spec = _resolve(args, source)
    s = exact_sample(source, spec, args.samples, args.seed)
    return cfg, ["s"], [[int(v)] for v in s]


def _enumerate(args):
    _need_n(args, "enumerate")
    source = _weights(args)
    cfg, spec = _resolve(args, source)
    tilde = enumerate_spin_law(source, spec, "tilde")
    exact = enumerate_spin_law(source, spec, "exact")
    law = tilde if args.measure == "tilde" else exact
    cfg.update(measure=args.measure, log_partition=law.log_partition, tv_exact_tilde=tv_distance(exact, tilde))
    rows = [[int(s), float(p)] for s, p in zip(law.support, law.probabilities)]
    return cfg, SPIN_LAW_COLUMNS, rows


def _partition(args):
    source = _weights(args, args.n_list[0])
    cfg, _ = _resolve(args, source)
    rows = partition_sweep(lambda n: _weights(args, n), args.n_list, args.power)
    st = a_stability(rows)
    cfg.update(
        n=None,
        n_list=",".join(str(n) for n in args.n_list),
        decreasing=st["decreasing"],
        final_difference=st["final_difference"],
        A_estimate=st["A_estimate"],
    )
    cols = ["n", "log_partition", "exponent", "A", "diff"]
    return cfg, cols, [[r[c] for c in cols] for r in rows]


COMMANDS = {
    "critical-point": _critical_point,
    "magnetization-curve": _magnetization_curve,
    "exponent-fit": _exponent_fit,
    "clt-density": _clt_density,
    "window": lambda a: _clt_density(a, window=True),
    "clt-check": _clt_check,
    "sample": _sample,
    "enumerate": _enumerate,
    "partition": _partition,
}


def run(argv=None) -> int:
    """Parse ``argv``, run the command and write its table; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg, cols, rows = COMMANDS[args.command](args)
        if args.command == "sample" and args.format == "csv":
            text = write_samples(cfg, [r[0] for r in rows])
        else:
            text = write_table(cfg, cols, rows, args.format)
        if args.output:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc} (tolerance={exc.tolerance}, achieved={exc.achieved})", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
