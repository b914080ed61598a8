"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 hard assumption failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings

from .assumptions import check_all
from .experiments import AssumptionFailure, ExperimentSpec, run_experiment
from .hedging import xi_fft, xi_quad_direct
from .mc import MCConfig, mc_call_price
from .model import HalfVariance, MarketState, Martingale, ModelSpec, OptionSpec, VGSSDParams
from .pricing import (
    TransformGrid,
    interpolate_curve,
    price_call_inversion,
    price_call_quad,
    price_curve_fft,
)

EXIT_USAGE = 1
EXIT_ASSUMPTION = 2

DRIFTS = {"martingale": Martingale, "half-variance": HalfVariance}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected 'key = value', got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def _add_model_args(p):
    p.add_argument("--model", choices=sorted(DRIFTS), default="martingale")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--G", type=float, default=None, help="defaults to M")
    p.add_argument("--M", type=float, default=16.0)
    p.add_argument("--H", type=float, default=0.5)
    p.add_argument("--T", type=float, default=1.0)


def _add_grid_args(p):
    p.add_argument("--N", type=int, default=2**14)
    p.add_argument("--eta", type=float, default=0.25)
    p.add_argument("--R", type=float, default=1.75)
    p.add_argument("--weights", choices=("trapezoid", "rectangle", "simpson"), default="trapezoid")


def _add_option_args(p):
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--S", type=float, default=1.0)
    p.add_argument("--K", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrmhedge", description="LRM hedge ratios and call prices for VGSSD models")
    parser.add_argument("--config", help="file of 'key = value' lines overriding flags")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="assumption report")
    _add_model_args(p)
    p.add_argument("--R", type=float, default=1.75)
    p.add_argument("--grid-size", type=int, default=999)

    p = sub.add_parser("price", help="European call price")
    _add_model_args(p)
    _add_option_args(p)
    _add_grid_args(p)
    p.add_argument("--method", choices=("fft", "quad", "inversion", "mc"), default="fft")
    p.add_argument("--seed", type=int, default=MCConfig.seed)
    p.add_argument("--paths", type=int, default=10**6)

    p = sub.add_parser("hedge", help="LRM hedge ratio")
    _add_model_args(p)
    _add_option_args(p)
    _add_grid_args(p)
    p.add_argument("--method", choices=("fft", "quad"), default="fft")

    p = sub.add_parser("experiment", help="reproduce experiment (A) or (B)")
    p.add_argument("--kind", choices=("A", "B"), required=True)
    p.add_argument("--model-id", type=int, choices=(1, 2), required=True)
    p.add_argument("--M", type=float, nargs="+", default=[4.0, 16.0])
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--H", type=float, default=0.5)
    p.add_argument("--S", type=float, default=1.0)
    _add_grid_args(p)
    p.add_argument("--out-dir", default="results")
    p.add_argument("--no-svg", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--grid-size", type=int, default=999)
    return parser


def _apply_config(parser, args, argv):
    if not args.config:
        return args
    try:
        values = read_config(args.config)
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from exc
    # re-parse with config entries appended so they override flags and get type-checked
    extra = []
    known = vars(args)
    for key, value in values.items():
        if key in ("config", "command", "verbose") or key not in known:
            raise UsageError(f"--config: unknown key {key!r}")
        flag = "--" + key.replace("_", "-") if len(key) > 1 and key.islower() else "--" + key
        if isinstance(known[key], bool):
            if value.lower() in ("1", "true", "yes", "on"):
                extra.append(flag)
            continue
        extra.append(flag)
        extra.extend(value.split() if isinstance(known[key], list) else [value])
    return parser.parse_args(list(argv) + extra)


def _model(args) -> ModelSpec:
    G = args.M if args.G is None else args.G
    return ModelSpec(VGSSDParams(args.C, G, args.M, args.H), DRIFTS[args.model](), args.T)


def _grid(args) -> TransformGrid:
    return TransformGrid(N=args.N, eta=args.eta, R=args.R, weights=args.weights)


def _guard(model, R, out, grid_size=999):
    report = check_all(model, R, grid_size)
    for w in report.warnings():
        print(f"warning: {w}", file=sys.stderr)
    hard = report.hard_failures()
    if hard:
        print(report.to_text(), file=out)
        print(f"error: hard assumption failure: {', '.join(hard)}", file=sys.stderr)
        return None
    return report


def _emit(out, **fields):
    for k, v in fields.items():
        if isinstance(v, float):
            v = f"{v:.12g}"
        print(f"{k}: {v}", file=out)


def cmd_check(args, out) -> int:
    model = _model(args)
    report = check_all(model, args.R, args.grid_size)
    print(report.to_text(), file=out)
    for w in report.warnings():
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_ASSUMPTION if report.hard_failures() else 0


def cmd_price(args, out) -> int:
    model = _model(args)
    grid = _grid(args)
    if _guard(model, grid.R, out) is None:
        return EXIT_ASSUMPTION
    state, option = MarketState(args.t, args.S), OptionSpec(args.K, args.T)
    if args.method == "quad":
        res = price_call_quad(model, state, option, grid)
        _emit(out, method="quad", price=res.price, imag_residue=res.imag_residue,
              tail_ratio=res.tail_ratio, coverage_ok=res.coverage_ok)
    elif args.method == "fft":
        curve = price_curve_fft(model, state, args.T, grid, (0.9 * args.K, 1.1 * args.K))
        _emit(out, method="fft", price=max(interpolate_curve(curve, args.K), 0.0),
              lattice_nodes=len(curve))
    elif args.method == "inversion":
        _emit(out, method="inversion", price=price_call_inversion(model, state, option))
    else:
        price, se = mc_call_price(model, state, option, MCConfig(paths=args.paths, seed=args.seed))
        _emit(out, method="mc", price=price, standard_error=se, paths=args.paths, seed=args.seed)
    return 0


def cmd_hedge(args, out) -> int:
    model = _model(args)
    grid = _grid(args)
    if _guard(model, grid.R, out) is None:
        return EXIT_ASSUMPTION
    state, option = MarketState(args.t, args.S), OptionSpec(args.K, args.T)
    fn = xi_fft if args.method == "fft" else xi_quad_direct
    res = fn(model, state, option, grid)
    _emit(out, method=res.method, xi=res.xi, price=res.price, sigma_t=res.sigma_t,
          mu_s_t=res.mu_s_t, t_eval=res.t_eval, imag_residue=res.imag_residue,
          tail_ratio=res.tail_ratio, coverage_ok=res.coverage_ok)
    return 0


def cmd_experiment(args, out) -> int:
    spec = ExperimentSpec(args.kind, args.model_id, tuple(args.M), C=args.C, H=args.H, spot=args.S)
    try:
        result = run_experiment(spec, _grid(args), args.out_dir, svg=not args.no_svg,
                                workers=args.workers, t_grid_size=args.grid_size)
    except AssumptionFailure as exc:
        print(exc.report.to_text(), file=out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for path in result.files:
        print(f"wrote {path}", file=out)
    return 0


COMMANDS = {"check": cmd_check, "price": cmd_price, "hedge": cmd_hedge, "experiment": cmd_experiment}


def main(argv=None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(parser, args, argv)
    except UsageError as exc:
        print(f"lrmhedge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code = COMMANDS[args.command](args, out)
        except ValueError as exc:
            print(f"lrmhedge: error: {exc}", file=sys.stderr)
            code = EXIT_USAGE
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
