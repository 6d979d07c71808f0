"""System parameterization: antenna, RF-chain and dominant-beam counts plus power split.

Config files are flat ``key = value`` text, one field per line, ``#`` starts a
comment. Keys are exactly the :class:`SystemConfig` field names.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError

INT_FIELDS = ("n_t", "n_r", "n_e", "m_t", "m_r", "m_e", "l_t", "l_r", "l_e")
REAL_FIELDS = ("power", "noise_var", "phi", "eta")


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions and power parameters of the Alice/Bob/Eve link.

    ``power`` and ``noise_var`` are linear (watts). ``phi`` is the fraction of
    power spent on the confidential signal, ``eta`` the variance of the
    nondominant virtual-channel entries relative to the dominant ones.
    """

    n_t: int
    n_r: int
    n_e: int
    m_t: int
    m_r: int
    m_e: int
    l_t: int
    l_r: int
    l_e: int
    power: float
    noise_var: float
    phi: float
    eta: float

    @classmethod
    def symmetric(
        cls,
        n_t: int,
        m_t: int,
        m_r: int,
        m_e: int,
        l_t: int,
        power: float,
        noise_var: float = 1.0,
        phi: float = 0.6,
        eta: float = 0.1,
    ) -> "SystemConfig":
        """Build a config with ``n_r = n_e = n_t`` and ``l_r = l_e = l_t``."""
        return cls(
            n_t=n_t, n_r=n_t, n_e=n_t,
            m_t=m_t, m_r=m_r, m_e=m_e,
            l_t=l_t, l_r=l_t, l_e=l_t,
            power=power, noise_var=noise_var, phi=phi, eta=eta,
        )

    @property
    def rho(self) -> float:
        return rho(self)

    @property
    def snr(self) -> float:
        return snr(self)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(snr(self))

    def replace(self, **changes) -> "SystemConfig":
        """Return a copy with fields changed.

        Besides the field names this accepts ``snr_db`` (sets ``power`` from
        ``noise_var``) and ``rho`` (sets ``l_t`` to the nearest integer of
        ``rho * n_t``, ties upward).
        """
        changes = dict(changes)
        snr_db = changes.pop("snr_db", None)
        rho_value = changes.pop("rho", None)
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        cfg = dataclasses.replace(self, **changes)
        if rho_value is not None:
            cfg = dataclasses.replace(cfg, l_t=int(math.floor(rho_value * cfg.n_t + 0.5)))
        if snr_db is not None:
            cfg = dataclasses.replace(cfg, power=cfg.noise_var * 10.0 ** (snr_db / 10.0))
        return cfg

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "pass" if self.ok else "; ".join(self.violations)


def validate(cfg: SystemConfig, *, eve: bool = True, phi_closed: bool = False) -> ValidationReport:
    """Check every ordering and range constraint of ``cfg``.

    With ``eve=False`` the ``n_t - l_t >= m_e`` requirement, which only matters
    when Eve's capacity is evaluated, is skipped. ``phi_closed`` admits the
    endpoints ``phi = 0`` and ``phi = 1``, which the transmit chain tolerates.
    """
    bad: list[str] = []
    for name in INT_FIELDS:
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            bad.append(f"{name} must be a positive integer (got {value!r})")
    for name in ("power", "noise_var"):
        value = getattr(cfg, name)
        if not _is_real(value) or not value > 0 or not math.isfinite(value):
            bad.append(f"{name} must be a positive finite real (got {value!r})")
    if not _is_real(cfg.eta) or not 0.0 < cfg.eta < 1.0:
        bad.append(f"eta must lie strictly inside (0, 1) (got {cfg.eta!r})")
    if phi_closed:
        if not _is_real(cfg.phi) or not 0.0 <= cfg.phi <= 1.0:
            bad.append(f"phi must lie in [0, 1] (got {cfg.phi!r})")
    elif not _is_real(cfg.phi) or not 0.0 < cfg.phi < 1.0:
        bad.append(f"phi must lie strictly inside (0, 1) (got {cfg.phi!r})")
    if bad:
        # Ordering checks are meaningless on malformed counts.
        return ValidationReport(tuple(bad))

    for side in ("t", "r", "e"):
        m, l, n = (getattr(cfg, f"{k}_{side}") for k in ("m", "l", "n"))
        if not m <= l:
            bad.append(f"m_{side} <= l_{side} violated ({m} > {l})")
        if not l <= n:
            bad.append(f"l_{side} <= n_{side} violated ({l} > {n})")
    if eve and cfg.n_t - cfg.l_t < cfg.m_e:
        bad.append(f"n_t - l_t >= m_e violated ({cfg.n_t - cfg.l_t} < {cfg.m_e})")
    return ValidationReport(tuple(bad))


def ensure_valid(cfg: SystemConfig, *, eve: bool = True, phi_closed: bool = False) -> SystemConfig:
    report = validate(cfg, eve=eve, phi_closed=phi_closed)
    if not report:
        raise ConfigError(str(report))
    return cfg


def rho(cfg: SystemConfig) -> float:
    """Proportion of dominant transmit beams, ``l_t / n_t``."""
    return cfg.l_t / cfg.n_t


def snr(cfg: SystemConfig) -> float:
    """Linear system SNR ``power / noise_var``."""
    return cfg.power / cfg.noise_var


def _is_real(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_value(key: str, text: str):
    """Convert a textual value for ``key`` to its field type.

    ``power`` additionally accepts a ``db`` suffix, interpreted as dBW.
    """
    text = text.strip()
    try:
        if key in INT_FIELDS:
            as_float = float(text)
            if not as_float.is_integer():
                raise ValueError
            return int(as_float)
        if key == "power" and text.lower().endswith("db"):
            return 10.0 ** (float(text[:-2]) / 10.0)
        return float(text)
    except ValueError:
        raise ConfigError(f"invalid value for {key}: {text!r}") from None


def parse_config_text(text: str, base: SystemConfig | None = None) -> SystemConfig:
    """Parse ``key = value`` lines; missing keys come from ``base``."""
    known = {f.name for f in fields(SystemConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = parse_value(key, value)
    if base is not None:
        return dataclasses.replace(base, **values)
    missing = known - set(values)
    if missing:
        raise ConfigError(f"missing key(s): {', '.join(sorted(missing))}")
    return SystemConfig(**values)


def load_config(path: str | Path, base: SystemConfig | None = None) -> SystemConfig:
    return parse_config_text(Path(path).read_text(encoding="utf-8"), base)


def format_config(cfg: SystemConfig) -> str:
    lines = [f"{f.name} = {getattr(cfg, f.name)!r}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"


def save_config(cfg: SystemConfig, path: str | Path) -> None:
    Path(path).write_text(format_config(cfg), encoding="utf-8", newline="\n")


# Parameters of the SNR sweep with L_t = 28 (N_t = 128, M_t = 4, M_r = M_e = 16).
DEFAULT_CONFIG = SystemConfig.symmetric(
    n_t=128, m_t=4, m_r=16, m_e=16, l_t=28, power=10.0, noise_var=1.0, phi=0.6, eta=0.1
)
