"""Parameter sweeps over rate, bound, metric, leakage and beam-selection methods, with CSV I/O.

A sweep evaluates every method at every grid point of one axis, optionally for
several curves (sets of config overrides). Every Monte Carlo evaluation uses
the sweep seed, so curves and grid points are matched trial by trial.

CSV layout: line 1 is ``# key=value;...`` echoing the full sweep, line 2 the
column headers, then one row per grid point. Floats are written with 12
significant digits, LF line endings, UTF-8.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import rates
from .config import INT_FIELDS, SystemConfig, ensure_valid, parse_value
from .errors import AsymptoticRegimeWarning, ConfigError, UnsupportedRegimeError
from .scheme import leakage, leakage_monte_carlo
from .selection import selection_secrecy_rate
from .trials import default_workers

AXES = ("snr_db", "m_t", "m_e", "l_t", "phi", "rho", "eta")
INT_AXES = ("m_t", "m_e", "l_t")
# Keys a curve may override: every config field plus the two derived ones.
CURVE_KEYS = tuple(f.name for f in fields(SystemConfig)) + ("snr_db", "rho")

SWEEP_METHODS = (
    "monte-carlo", "theorem1", "asymptotic-low", "asymptotic-high", "bound-low", "bound-high",
    "chi-l", "chi-h",
    "leakage-an-bob", "leakage-info-eve", "leakage-an-bob-mc", "leakage-info-eve-mc",
    "selection-random", "selection-greedy", "selection-exhaustive",
)
# Methods whose value comes with a standard-error column.
STOCHASTIC_METHODS = (
    "monte-carlo", "leakage-an-bob-mc", "leakage-info-eve-mc",
    "selection-random", "selection-greedy", "selection-exhaustive",
)
STD_ERR_SUFFIX = "_std_err"
DEFAULT_SEED = 20240607
DEFAULT_TRIALS = 2000


@dataclass(frozen=True)
class SweepSpec:
    """One axis of a parameter sweep.

    ``curves`` holds config overrides, one dict per curve; the single empty
    dict means a plain sweep of ``base``.
    """

    base: SystemConfig
    axis: str
    grid: tuple
    methods: tuple[str, ...]
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    curves: tuple[dict, ...] = field(default_factory=lambda: ({},))

    def __post_init__(self):
        to_axis = int if self.axis in INT_AXES else float
        try:
            grid = tuple(_typed(self.axis, v, to_axis) for v in self.grid)
            curves = tuple({k: _typed(k, v, int if k in INT_FIELDS else float) for k, v in c.items()}
                           for c in self.curves) or ({},)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad sweep value: {exc}") from None
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "curves", curves)
        check_spec(self)

    def config_at(self, curve: dict, value) -> SystemConfig:
        return self.base.replace(**curve).replace(**{self.axis: value})


def _typed(key: str, value, kind):
    if kind is int:
        if isinstance(value, bool) or float(value) != int(value):
            raise ValueError(f"{key} needs an integer, got {value!r}")
        return int(value)
    return float(value)


def check_spec(spec: SweepSpec) -> None:
    if spec.axis not in AXES:
        raise ConfigError(f"unknown sweep axis {spec.axis!r}; expected one of {', '.join(AXES)}")
    if not spec.grid:
        raise ConfigError("sweep grid is empty")
    if any(b <= a for a, b in zip(spec.grid, spec.grid[1:])):
        raise ConfigError("sweep grid must be strictly increasing")
    if not spec.methods:
        raise ConfigError("no methods requested")
    unknown = [m for m in spec.methods if m not in SWEEP_METHODS]
    if unknown:
        raise ConfigError(f"unknown method(s): {', '.join(unknown)}")
    if len(set(spec.methods)) != len(spec.methods):
        raise ConfigError("duplicate methods")
    if spec.trials < 1:
        raise ConfigError("trials must be >= 1")
    if spec.seed < 0:
        raise ConfigError("seed must be non-negative")
    for curve in spec.curves:
        bad = set(curve) - set(CURVE_KEYS)
        if bad:
            raise ConfigError(f"unknown curve key(s): {', '.join(sorted(bad))}")
        if spec.axis in curve:
            raise ConfigError(f"curve overrides the sweep axis {spec.axis!r}")


def method_columns(method: str) -> tuple[str, ...]:
    if method in STOCHASTIC_METHODS:
        return (method, method + STD_ERR_SUFFIX)
    return (method,)


def curve_label(curve: dict) -> str:
    return ";".join(f"{k}={_format_number(v)}" for k, v in curve.items())


def _column_names(spec: SweepSpec) -> tuple[str, ...]:
    names = [spec.axis]
    for curve in spec.curves:
        label = curve_label(curve)
        for method in spec.methods:
            names.extend(f"{c}@{label}" if label else c for c in method_columns(method))
    return tuple(names)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows], dtype=float)

    def to_csv(self) -> str:
        lines = ["# " + spec_to_header(self.spec), ",".join(self.columns)]
        lines.extend(",".join(_format_cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


# --------------------------------------------------------------------------
# Evaluation


def _guard(fn, *args) -> float:
    """Value of ``fn(*args)``, NaN where the expression has no finite value."""
    try:
        return float(fn(*args))
    except UnsupportedRegimeError:
        return math.nan


def evaluate_point(cfg: SystemConfig, methods, trials: int, seed: int, workers: int = 1) -> dict:
    """All columns of ``methods`` at one config (no curve label)."""
    out: dict = {}
    leak_mc = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticRegimeWarning)
        for method in methods:
            if method == "monte-carlo":
                report = rates.rate_monte_carlo(cfg, trials, seed, workers)
                out[method], out[method + STD_ERR_SUFFIX] = report.r_s, report.std_err
            elif method == "theorem1":
                out[method] = _guard(lambda: rates.rate_theorem1(cfg).r_s)
            elif method == "asymptotic-low":
                out[method] = _guard(lambda: rates.rate_low_snr(cfg).r_s)
            elif method == "asymptotic-high":
                out[method] = _guard(lambda: rates.rate_high_snr(cfg).r_s)
            elif method == "bound-low":
                out[method] = _guard(rates.bound_low, cfg)
            elif method == "bound-high":
                out[method] = _guard(rates.bound_high, cfg)
            elif method == "chi-l":
                out[method] = _guard(rates.chi_l, cfg.rho, cfg.eta)
            elif method == "chi-h":
                out[method] = _guard(rates.chi_h, cfg.rho, cfg.eta, cfg.m_r / cfg.n_t)
            elif method == "leakage-an-bob":
                out[method] = leakage(cfg).an_to_bob
            elif method == "leakage-info-eve":
                out[method] = leakage(cfg).info_to_eve
            elif method in ("leakage-an-bob-mc", "leakage-info-eve-mc"):
                if leak_mc is None:
                    leak_mc = leakage_monte_carlo(cfg, trials, seed, workers)
                report, (se_an, se_info) = leak_mc
                if method == "leakage-an-bob-mc":
                    out[method], out[method + STD_ERR_SUFFIX] = report.an_to_bob, se_an
                else:
                    out[method], out[method + STD_ERR_SUFFIX] = report.info_to_eve, se_info
            elif method.startswith("selection-"):
                strategy = method[len("selection-"):]
                out[method], out[method + STD_ERR_SUFFIX] = selection_secrecy_rate(cfg, trials, seed, strategy, workers)
            else:
                raise ConfigError(f"unknown method {method!r}")
    return out


def _needs_eve(methods) -> bool:
    return any(m in ("monte-carlo", "theorem1", "asymptotic-low", "asymptotic-high") or m.startswith("selection-")
               for m in methods)


def _point_task(spec: SweepSpec, curve: dict, value, inner_workers: int) -> dict:
    return evaluate_point(spec.config_at(curve, value), spec.methods, spec.trials, spec.seed, inner_workers)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate every method at every grid point of every curve.

    Grid points run in parallel when ``workers > 1``; the result does not
    depend on the worker count. Any grid point yielding an invalid config
    aborts the sweep before evaluation starts, naming the point.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    eve = _needs_eve(spec.methods)
    phi_closed = all(m.startswith("leakage-") for m in spec.methods)
    tasks = []
    for curve in spec.curves:
        for value in spec.grid:
            try:
                ensure_valid(spec.config_at(curve, value), eve=eve, phi_closed=phi_closed)
            except ConfigError as exc:
                label = curve_label(curve)
                where = f"{spec.axis}={_format_number(value)}" + (f" ({label})" if label else "")
                raise ConfigError(f"invalid config at grid point {where}: {exc}") from None
            tasks.append((curve, value))

    if workers == 1 or len(tasks) == 1:
        # A single point still benefits from parallel trials.
        inner = workers if len(tasks) == 1 else 1
        values = [_point_task(spec, c, v, inner) for c, v in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            futures = [pool.submit(_point_task, spec, c, v, 1) for c, v in tasks]
            values = [f.result() for f in futures]

    columns = _column_names(spec)
    rows = []
    n = len(spec.grid)
    for i, value in enumerate(spec.grid):
        row = [value]
        for k, curve in enumerate(spec.curves):
            point = values[k * n + i]
            for method in spec.methods:
                row.extend(point[c] for c in method_columns(method))
        rows.append(tuple(row))
    return SweepResult(spec=spec, columns=columns, rows=tuple(rows))


def beam_selection_compare(cfg: SystemConfig, trials: int, seed: int, strategy: str,
                           workers: int | None = None) -> SweepResult:
    """Mean secrecy rate of one selection strategy as a single-row sweep over SNR."""
    spec = SweepSpec(base=cfg, axis="snr_db", grid=(cfg.snr_db,), methods=(f"selection-{strategy}",),
                     trials=trials, seed=seed)
    return run_sweep(spec, workers)


# --------------------------------------------------------------------------
# CSV


def _format_number(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    return "%.11e" % value


def spec_to_header(spec: SweepSpec) -> str:
    parts = [f"{f.name}={_format_number(getattr(spec.base, f.name))}" for f in fields(SystemConfig)]
    parts.append(f"axis={spec.axis}")
    parts.append("grid=" + ",".join(_format_number(v) for v in spec.grid))
    parts.append("methods=" + ",".join(spec.methods))
    parts.append(f"trials={spec.trials}")
    parts.append(f"seed={spec.seed}")
    parts.append("curves=" + "|".join(
        ",".join(f"{k}:{_format_number(v)}" for k, v in c.items()) for c in spec.curves
    ))
    return ";".join(parts)


def _parse_curve_value(key: str, text: str):
    if key in INT_FIELDS:
        return parse_value(key, text)
    return float(text)


def spec_from_header(line: str) -> SweepSpec:
    """Rebuild the :class:`SweepSpec` echoed on the first CSV line."""
    line = line.strip()
    if line.startswith("#"):
        line = line[1:].strip()
    items = dict(part.split("=", 1) for part in line.split(";"))
    base = SystemConfig(**{f.name: parse_value(f.name, items.pop(f.name)) for f in fields(SystemConfig)})
    axis = items["axis"]
    to_axis = int if axis in INT_AXES else float
    curves = []
    for chunk in items["curves"].split("|"):
        curve = {}
        for pair in filter(None, chunk.split(",")):
            key, text = pair.split(":", 1)
            curve[key] = _parse_curve_value(key, text)
        curves.append(curve)
    return SweepSpec(
        base=base,
        axis=axis,
        grid=tuple(to_axis(v) for v in items["grid"].split(",")),
        methods=tuple(items["methods"].split(",")),
        trials=int(items["trials"]),
        seed=int(items["seed"]),
        curves=tuple(curves),
    )


def read_sweep_csv(path: str | Path) -> SweepResult:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    spec = spec_from_header(lines[0])
    columns = tuple(lines[1].split(","))
    rows = []
    for line in lines[2:]:
        cells = line.split(",")
        axis_value = int(cells[0]) if spec.axis in INT_AXES else float(cells[0])
        rows.append((axis_value, *(float(c) for c in cells[1:])))
    return SweepResult(spec=spec, columns=columns, rows=tuple(rows))
