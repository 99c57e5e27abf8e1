"""Command-line entry point: ``survwalk <subcommand> [flags]``.

Exit codes: 0 success, 2 invalid arguments, 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import curve_points, fit_exponential_rate, fit_polynomial_exponent, fit_subexp_rate, lambda_bounds
from .fredholm import DEFAULT_NODES as FREDHOLM_NODES
from .fredholm import DEFAULT_TOL, NonConvergenceError, lambda_beta
from .gaussian_exact import DEFAULT_L, DEFAULT_NODES, default_rule, gaussian_survival_curve
from .model import DISTRIBUTIONS, IncrementDistribution, WalkSpec, parse_time_change, parse_weight
from .rng import RngStreamConfig
from .scenarios import SCENARIOS, run_scenario
from .simulate import survival_curve

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 2, 3


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    params: dict[str, str]
    seed: int
    tool_version: str
    wall_time_seconds: float


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# argument types; each rejects bad input before any computation starts

def _int_at_least(lo):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return conv


def _uint(bits):
    def conv(text):
        v = _int_at_least(0)(text)
        if v >= 2**bits:
            raise argparse.ArgumentTypeError(f"must fit in {bits} bits, got {v}")
        return v
    return conv


def _float(lo=-math.inf, hi=math.inf, open_lo=False):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not math.isfinite(v) or v < lo or v > hi or (open_lo and v == lo):
            raise argparse.ArgumentTypeError(f"out of range: {text!r}")
        return v
    return conv


def _spec(parse):
    def conv(text):
        try:
            parse(text)
        except (ValueError, OSError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        return text
    return conv


def _n_grid(text):
    kind, _, rest = text.partition(":")
    parts = rest.split(":")
    if kind != "dyadic" or len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected dyadic:<min>:<max>, got {text!r}")
    lo, hi = (_int_at_least(1)(p) for p in parts)
    if hi < lo:
        raise argparse.ArgumentTypeError("grid max below min")
    grid = []
    n = 1
    while n <= hi:
        if n >= lo:
            grid.append(n)
        n *= 2
    if not grid:
        raise argparse.ArgumentTypeError(f"no power of two in [{lo}, {hi}]")
    return grid


def _beta_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected <min>:<max>:<count>, got {text!r}")
    lo, hi = (_float(0.0, open_lo=True)(p) for p in parts[:2])
    count = _int_at_least(1)(parts[2])
    if hi < lo or (count == 1 and hi != lo):
        raise argparse.ArgumentTypeError("need min <= max, and min == max when count is 1")
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _add_output(p, seed=True):
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--out-file", type=Path)
    p.add_argument("--quiet", action="store_true")
    if seed:
        p.add_argument("--seed", type=_uint(64), default=0)


def _add_horizons(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--N", type=_int_at_least(1))
    g.add_argument("--N-grid", type=_n_grid)


def _add_betas(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--beta", type=_float(0.0, open_lo=True))
    g.add_argument("--beta-grid", type=_beta_grid)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="survwalk", description="Survival probabilities of weighted random walks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("survival-mc", help="Monte Carlo survival curve")
    p.add_argument("--sigma", type=_spec(parse_weight), default="const")
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="gaussian")
    p.add_argument("--barrier", type=_float(), default=0.0)
    _add_horizons(p)
    p.add_argument("--paths", type=_int_at_least(1), default=1_000_000)
    p.add_argument("--streams", type=_uint(32), default=16)
    p.add_argument("--workers", type=_int_at_least(1), default=1)
    _add_output(p)

    p = sub.add_parser("survival-exact", help="Gaussian survival by density propagation")
    p.add_argument("--kappa", type=_spec(parse_time_change), required=True)
    _add_horizons(p)
    p.add_argument("--barrier", type=_float(), default=0.0)
    p.add_argument("--nodes", type=_int_at_least(16), default=DEFAULT_NODES)
    p.add_argument("--trunc-L", type=_float(0.0, open_lo=True), default=DEFAULT_L)
    _add_output(p)

    p = sub.add_parser("lambda", help="decay rate of the discrete OU chain")
    _add_betas(p)
    p.add_argument("--tol", type=_float(0.0, open_lo=True), default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=_int_at_least(2), default=100_000)
    p.add_argument("--nodes", type=_int_at_least(16), default=FREDHOLM_NODES)
    p.add_argument("--trunc-L", type=_float(0.0, open_lo=True), default=DEFAULT_L)
    _add_output(p)

    p = sub.add_parser("bounds", help="closed-form bounds on the decay rate")
    _add_betas(p)
    _add_output(p)

    p = sub.add_parser("fit", help="fit a decay law to a survival curve CSV")
    p.add_argument("input", type=Path, help="CSV with columns N and p_hat or p_exact (std_err optional)")
    p.add_argument("--kind", choices=("poly", "exp", "subexp"), default="poly")
    p.add_argument("--alpha", type=_float(0.0, 1.0, open_lo=True))
    p.add_argument("--min-n", type=_int_at_least(1), default=8)
    _add_output(p)

    p = sub.add_parser("universality", help="fitted exponents across increment laws")
    p.add_argument("--sigma", type=_spec(parse_weight), default="poly:p=0.5")
    p.add_argument("--dist", nargs="+", choices=DISTRIBUTIONS, default=list(DISTRIBUTIONS))
    p.add_argument("--N-grid", type=_n_grid, default=_n_grid("dyadic:8:512"))
    p.add_argument("--paths", type=_int_at_least(1), default=1_000_000)
    p.add_argument("--streams", type=_uint(32), default=16)
    p.add_argument("--workers", type=_int_at_least(1), default=1)
    _add_output(p)

    p = sub.add_parser("reproduce", help="run a canned acceptance scenario")
    p.add_argument("name", choices=[*SCENARIOS, "all"])
    p.add_argument("--quiet", action="store_true")
    return parser


def _horizons(args):
    return [args.N] if args.N is not None else args.N_grid


def _betas(args):
    return [args.beta] if args.beta is not None else args.beta_grid


def _plan(args):
    """Validate cross-flag constraints and return a zero-argument job producing (header, rows)."""
    cmd = args.subcommand
    if cmd == "survival-mc":
        hs = _horizons(args)
        spec = WalkSpec(parse_weight(args.sigma), IncrementDistribution(args.dist), args.barrier, hs[-1])
        rng = RngStreamConfig(args.seed, args.streams)

        def job():
            est = survival_curve(spec, hs, args.paths, rng, args.workers)
            return ("N", "p_hat", "std_err", "paths", "survivors", "seed"), [
                (e.horizon, e.p_hat, e.std_err, e.paths, e.survivors, e.seed) for e in est]
        return job

    if cmd == "survival-exact":
        hs = _horizons(args)
        t = parse_time_change(args.kappa)
        rule = default_rule(L=args.trunc_L, nodes=args.nodes)

        def job():
            curve = gaussian_survival_curve(t, hs[-1], args.barrier, rule)
            return ("N", "p_exact", "nodes", "trunc_L"), [(n, float(curve[n - 1]), rule.size, args.trunc_L) for n in hs]
        return job

    if cmd == "lambda":
        betas = _betas(args)

        def job():
            rows = []
            for b in betas:
                res = lambda_beta(b, tol=args.tol, max_iter=args.max_iter, L=args.trunc_L, nodes=args.nodes)
                rep = lambda_bounds(b)
                rows.append((b, res.lambda_hat, rep.lower, rep.upper, res.iterations, res.residual_l1))
            return ("beta", "lambda_hat", "lower_bound", "upper_bound", "iterations", "residual_l1"), rows
        return job

    if cmd == "bounds":
        betas = _betas(args)
        header = tuple(f.name for f in dataclasses.fields(lambda_bounds(1.0)))
        return lambda: (header, [dataclasses.astuple(lambda_bounds(b)) for b in betas])

    if cmd == "fit":
        if args.kind == "subexp" and args.alpha is None:
            raise ValueError("--kind subexp needs --alpha")
        curve = _read_curve(args.input)

        def job():
            if args.kind == "poly":
                res = fit_polynomial_exponent(curve, args.min_n)
            elif args.kind == "exp":
                res = fit_exponential_rate(curve, args.min_n)
            else:
                res = fit_subexp_rate(curve, args.alpha, args.min_n)
            return tuple(f.name for f in dataclasses.fields(res)), [dataclasses.astuple(res)]
        return job

    if cmd == "universality":
        w = parse_weight(args.sigma)
        if w.kind != "polynomial":
            raise ValueError("universality expects a polynomial weight poly:p=<f>")
        hs = args.N_grid
        if len(hs) < 3:
            raise ValueError("need at least 3 horizons to fit")
        rng = RngStreamConfig(args.seed, args.streams)

        def job():
            rows = []
            for name in args.dist:
                spec = WalkSpec(w, IncrementDistribution(name), 0.0, hs[-1])
                est = survival_curve(spec, hs, args.paths, rng, args.workers)
                f = fit_polynomial_exponent(curve_points(est), min_n=hs[0])
                rows.append((name, f.value, f.std_err, f.r_squared, f.points_used))
            return ("dist", "theta", "std_err", "r_squared", "points_used"), rows
        return job

    raise AssertionError(cmd)


def _read_curve(path: Path):
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        pcol = next((c for c in ("p_hat", "p_exact") if c in cols), None)
        if "N" not in cols or pcol is None:
            raise ValueError(f"{path}: need columns N and p_hat or p_exact")
        out = []
        for row in reader:
            se = float(row["std_err"]) if "std_err" in cols else 0.0
            if "survivors" in cols and int(row["survivors"]) < 25:
                continue
            out.append((int(row["N"]), float(row[pcol]), se))
    return out


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _render_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _emit(args, manifest: RunManifest, header, rows):
    man = dataclasses.asdict(manifest)
    if args.out == "json":
        results = [{k: _jsonable(v) for k, v in zip(header, row)} for row in rows]
        text = json.dumps({"manifest": man, "results": results}, indent=2) + "\n"
    else:
        text = _render_csv(header, rows)
    if args.out_file is None:
        sys.stdout.write(text)
        return
    args.out_file.write_text(text)
    if args.out == "csv":
        sidecar = args.out_file.with_name(args.out_file.name + ".manifest.json")
        sidecar.write_text(json.dumps(man, indent=2) + "\n")


def _reproduce(args) -> int:
    names = list(SCENARIOS) if args.name == "all" else [args.name]
    ok = True
    for name in names:
        ok &= run_scenario(name)
    if not args.quiet:
        print("ALL PASS" if ok else "SOME CHECKS FAILED", file=sys.stderr)
    return EXIT_OK if ok else 1


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.subcommand == "reproduce":
        return _reproduce(args)
    try:
        job = _plan(args)
    except (ValueError, OSError) as exc:
        print(f"survwalk {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    params = {k: _param_str(v) for k, v in sorted(vars(args).items()) if k not in ("subcommand", "quiet")}
    t0 = time.perf_counter()
    try:
        header, rows = job()
    except NonConvergenceError as exc:
        print(f"survwalk {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ValueError as exc:
        print(f"survwalk {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = RunManifest(args.subcommand, params, args.seed, __version__, time.perf_counter() - t0)
    _emit(args, manifest, header, rows)
    if not args.quiet:
        print(f"{args.subcommand}: {len(rows)} row(s) in {manifest.wall_time_seconds:.2f}s", file=sys.stderr)
    return EXIT_OK


def _param_str(v) -> str:
    if isinstance(v, list):
        return ",".join(_param_str(x) for x in v)
    if isinstance(v, float):
        return "%.17g" % v
    return "" if v is None else str(v)


def main() -> None:
    sys.exit(run())
