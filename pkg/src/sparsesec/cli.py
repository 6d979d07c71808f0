"""Command-line front end: ``sparsesec {rate,bounds,metrics,sweep,validate,figure}``.

Config resolution order: built-in default, ``--config`` file, ``--set key=value``
overrides, per-field flags (``--n-t 512``), then ``--snr``. Exit codes: 0 success,
1 usage error, 2 invalid configuration, 3 unsupported regime.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
import warnings

from . import rates
from .config import DEFAULT_CONFIG, INT_FIELDS, REAL_FIELDS, SystemConfig, load_config, parse_value, validate
from .errors import ConfigError, UnsupportedRegimeError
from .experiments import AXES, DEFAULT_SEED, DEFAULT_TRIALS, INT_AXES, SWEEP_METHODS, SweepSpec, run_sweep
from .figures import FIGURES, figure_spec

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3
RATE_METHODS = ("monte-carlo", "theorem1", "asymptotic-low", "asymptotic-high")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_snr(text: str) -> float:
    """Linear SNR from ``"10db"`` (dB) or ``"10"`` (linear)."""
    text = text.strip().lower()
    try:
        if text.endswith("db"):
            return 10.0 ** (float(text[:-2]) / 10.0)
        value = float(text)
    except ValueError:
        raise UsageError(f"invalid SNR {text!r}") from None
    if not value > 0:
        raise UsageError("linear SNR must be positive")
    return value


def _config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("system configuration")
    group.add_argument("--config", help="key = value config file")
    group.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one field (repeatable)")
    for name in INT_FIELDS + REAL_FIELDS:
        group.add_argument("--" + name.replace("_", "-"), dest=name, metavar="VALUE",
                           help=f"override {name}")
    group.add_argument("--snr", help="system SNR P/noise_var, linear or with a 'db' suffix; sets power")


def _run_flags(parser: argparse.ArgumentParser, trials: int | None = DEFAULT_TRIALS) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    parser.add_argument("--trials", type=int, default=trials, help="Monte Carlo trials")
    parser.add_argument("--workers", type=int, default=None, help="worker processes (default $SPARSESEC_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsesec", description="Secrecy rates over sparse mm-Wave virtual channels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rate", help="Bob's rate, Eve's capacity and the secrecy rate")
    _config_flags(p)
    _run_flags(p)
    p.add_argument("--method", choices=RATE_METHODS, default="theorem1")

    p = sub.add_parser("bounds", help="low- and high-SNR secrecy-rate upper bounds")
    _config_flags(p)

    p = sub.add_parser("metrics", help="sparsity metrics and the optimal dominant-beam count")
    _config_flags(p)
    p.add_argument("--rho", type=float, default=None, help="angle-domain sparsity (default l_t/n_t)")

    p = sub.add_parser("sweep", help="parameter sweep written as CSV")
    _config_flags(p)
    _run_flags(p)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--grid", required=True, help="comma list or start:stop:step (inclusive)")
    p.add_argument("--methods", default="theorem1", help="comma-separated: " + ",".join(SWEEP_METHODS))
    p.add_argument("--curve", action="append", default=[], metavar="K=V[,K=V]", help="one curve's overrides (repeatable)")
    p.add_argument("--out", help="CSV path (default standard output)")

    p = sub.add_parser("validate", help="check a configuration")
    _config_flags(p)

    p = sub.add_parser("figure", help="run a figure preset")
    p.add_argument("name", choices=sorted(FIGURES, key=lambda n: int(n[3:])))
    _run_flags(p, trials=None)
    p.add_argument("--out", help="CSV path (default standard output)")
    return parser


def _split_pair(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise UsageError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def resolve_config(args) -> SystemConfig:
    cfg = load_config(args.config, base=DEFAULT_CONFIG) if args.config else DEFAULT_CONFIG
    known = {f.name for f in dataclasses.fields(SystemConfig)}
    changes = {}
    for item in args.set:
        key, value = _split_pair(item)
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        changes[key] = parse_value(key, value)
    for name in INT_FIELDS + REAL_FIELDS:
        value = getattr(args, name)
        if value is not None:
            changes[name] = parse_value(name, value)
    cfg = dataclasses.replace(cfg, **changes)
    if args.snr is not None:
        cfg = dataclasses.replace(cfg, power=cfg.noise_var * parse_snr(args.snr))
    return cfg


def _check(cfg: SystemConfig, **kwargs) -> None:
    report = validate(cfg, **kwargs)
    if not report:
        raise ConfigError(str(report))


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return "nan" if math.isnan(value) else f"{value:.6f}"


def _print(pairs, out) -> None:
    for key, value in pairs:
        print(f"{key} = {_fmt(value)}", file=out)


def parse_grid(text: str, axis: str) -> tuple:
    kind = int if axis in INT_AXES else float
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = [round(start + i * step, 10) for i in range(count)]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
        if kind is int and any(v != int(v) for v in values):
            raise ValueError
        return tuple(kind(v) for v in values)
    except ValueError:
        raise UsageError(f"invalid grid {text!r} for axis {axis}") from None


def parse_curve(text: str) -> dict:
    curve = {}
    for item in text.split(","):
        key, value = _split_pair(item)
        curve[key] = parse_value(key, value) if key in INT_FIELDS else float(value)
    return curve


def _emit(result, path, out) -> None:
    if path:
        result.write_csv(path)
    else:
        out.write(result.to_csv())


def dispatch(argv, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.command == "figure":
            spec = figure_spec(args.name, trials=args.trials, seed=args.seed)
            _emit(run_sweep(spec, args.workers), args.out, out)
            return EXIT_OK
        cfg = resolve_config(args)
        if args.command == "validate":
            report = validate(cfg)
            print(str(report), file=out)
            return EXIT_OK if report else EXIT_INVALID
        if args.command == "rate":
            _check(cfg)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                if args.method == "monte-carlo":
                    report = rates.rate_monte_carlo(cfg, args.trials, args.seed, args.workers)
                elif args.method == "theorem1":
                    report = rates.rate_theorem1(cfg)
                elif args.method == "asymptotic-low":
                    report = rates.rate_low_snr(cfg)
                else:
                    report = rates.rate_high_snr(cfg)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            pairs = [("method", report.method), ("r_u", report.r_u), ("c_e", report.c_e), ("r_s", report.r_s)]
            if report.trials:
                pairs += [("trials", report.trials), ("std_err", report.std_err), ("retries", report.retries)]
            for key, value in pairs:
                print(f"{key} = {value if isinstance(value, str) else _fmt(value)}", file=out)
        elif args.command == "bounds":
            _check(cfg, eve=False)
            low, high = rates.bounds(cfg)
            _print([("bound_low", low), ("bound_high", high)], out)
        elif args.command == "metrics":
            _check(cfg, eve=False)
            rho = cfg.rho if args.rho is None else args.rho
            metrics = rates.chi_metrics(rho, cfg.eta, cfg)
            _print([("rho", rho), ("eta", cfg.eta), ("chi_l", metrics.chi_l), ("chi_h", metrics.chi_h),
                    ("rho_star", metrics.rho_star), ("l_t_star", metrics.l_t_star)], out)
        elif args.command == "sweep":
            spec = SweepSpec(
                base=cfg, axis=args.axis, grid=parse_grid(args.grid, args.axis),
                methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
                trials=args.trials, seed=args.seed,
                curves=tuple(parse_curve(c) for c in args.curve) or ({},),
            )
            _emit(run_sweep(spec, args.workers), args.out, out)
        return EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedRegimeError as exc:
        print(f"unsupported regime: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
