"""Sparse virtual channels: sparsity patterns, Gaussian realizations, DFT steering grids.

Indices are 0-based throughout. A realization ``G`` (Bob, ``n_r x n_t``) has
unit-variance entries on the dominant block ``u_r x u_t`` and variance ``eta``
elsewhere; ``H`` (Eve, ``n_e x n_t``) has unit variance on ``e_r x e_t``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SystemConfig, ensure_valid
from .errors import ConfigError


def make_rng(seed) -> np.random.Generator:
    """Generator from an integer seed, a seed sequence, or an existing Generator."""
    return np.random.default_rng(seed)


def complex_normal(rng: np.random.Generator, shape, var=1.0) -> np.ndarray:
    """Circularly symmetric CN(0, var) samples; ``var`` broadcasts against ``shape``."""
    shape = (int(shape),) if np.isscalar(shape) else tuple(shape)
    parts = rng.standard_normal((2,) + shape)
    return np.sqrt(np.asarray(var, dtype=float) / 2.0) * (parts[0] + 1j * parts[1])


@dataclass(frozen=True, eq=False)
class SparsityPattern:
    """Dominant-beam index sets for Bob (``u_*``) and Eve (``e_*``) plus RF-chain selectors."""

    n_t: int
    n_r: int
    n_e: int
    u_t: np.ndarray
    u_r: np.ndarray
    e_t: np.ndarray
    e_r: np.ndarray
    u_t_sel: np.ndarray
    u_r_sel: np.ndarray
    e_r_sel: np.ndarray

    @property
    def u_t_complement(self) -> np.ndarray:
        """Bob's nondominant transmit beams, the ones carrying artificial noise."""
        return np.setdiff1d(np.arange(self.n_t), self.u_t, assume_unique=True)

    def with_selectors(self, u_t_sel=None, u_r_sel=None, e_r_sel=None) -> "SparsityPattern":
        return SparsityPattern(
            self.n_t, self.n_r, self.n_e, self.u_t, self.u_r, self.e_t, self.e_r,
            np.sort(np.asarray(u_t_sel if u_t_sel is not None else self.u_t_sel)),
            np.sort(np.asarray(u_r_sel if u_r_sel is not None else self.u_r_sel)),
            np.sort(np.asarray(e_r_sel if e_r_sel is not None else self.e_r_sel)),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsityPattern):
            return NotImplemented
        return (self.n_t, self.n_r, self.n_e) == (other.n_t, other.n_r, other.n_e) and all(
            np.array_equal(getattr(self, k), getattr(other, k)) for k in _INDEX_FIELDS
        )


_INDEX_FIELDS = ("u_t", "u_r", "e_t", "e_r", "u_t_sel", "u_r_sel", "e_r_sel")


def check_pattern(cfg: SystemConfig, pattern: SparsityPattern) -> None:
    """Raise :class:`ConfigError` unless ``pattern`` is consistent with ``cfg``."""
    if (pattern.n_t, pattern.n_r, pattern.n_e) != (cfg.n_t, cfg.n_r, cfg.n_e):
        raise ConfigError("pattern dimensions do not match config")
    spec = {
        "u_t": (cfg.l_t, cfg.n_t, None),
        "u_r": (cfg.l_r, cfg.n_r, None),
        "e_t": (cfg.l_t, cfg.n_t, None),
        "e_r": (cfg.l_e, cfg.n_e, None),
        "u_t_sel": (cfg.m_t, cfg.n_t, "u_t"),
        "u_r_sel": (cfg.m_r, cfg.n_r, "u_r"),
        "e_r_sel": (cfg.m_e, cfg.n_e, "e_r"),
    }
    for name, (size, bound, parent) in spec.items():
        idx = np.asarray(getattr(pattern, name))
        if idx.shape != (size,):
            raise ConfigError(f"{name} must hold {size} indices, got shape {idx.shape}")
        if size and (idx.min() < 0 or idx.max() >= bound):
            raise ConfigError(f"{name} has indices outside [0, {bound})")
        if np.any(np.diff(idx) <= 0):
            raise ConfigError(f"{name} must be sorted and duplicate-free")
        if parent is not None and not np.all(np.isin(idx, getattr(pattern, parent))):
            raise ConfigError(f"{name} must be a subset of {parent}")


def _subset(rng: np.random.Generator, pool: np.ndarray, k: int) -> np.ndarray:
    return np.sort(pool[rng.permutation(pool.size)[:k]])


def sample_pattern(cfg: SystemConfig, rng_seed) -> SparsityPattern:
    """Draw dominant sets and RF-chain selectors uniformly at random.

    Bob's and Eve's patterns are independent. Selectors are uniform subsets of
    their dominant sets.
    """
    ensure_valid(cfg, eve=False, phi_closed=True)
    rng = make_rng(rng_seed)
    u_t = _subset(rng, np.arange(cfg.n_t), cfg.l_t)
    u_r = _subset(rng, np.arange(cfg.n_r), cfg.l_r)
    e_t = _subset(rng, np.arange(cfg.n_t), cfg.l_t)
    e_r = _subset(rng, np.arange(cfg.n_e), cfg.l_e)
    return SparsityPattern(
        cfg.n_t, cfg.n_r, cfg.n_e, u_t, u_r, e_t, e_r,
        u_t_sel=_subset(rng, u_t, cfg.m_t),
        u_r_sel=_subset(rng, u_r, cfg.m_r),
        e_r_sel=_subset(rng, e_r, cfg.m_e),
    )


@dataclass(frozen=True, eq=False)
class VirtualChannelPair:
    g: np.ndarray
    h: np.ndarray
    pattern: SparsityPattern
    eta: float


@dataclass(frozen=True, eq=False)
class ChannelSlices:
    """The four submatrices that enter the rate expressions.

    ``g_bar``/``h_bar`` are the selected receive rows on Alice's selected
    transmit beams; ``g_hat``/``h_hat`` the same rows on the AN beams.
    """

    g_bar: np.ndarray
    g_hat: np.ndarray
    h_bar: np.ndarray
    h_hat: np.ndarray


def variance_mask(n_rows: int, n_cols: int, rows, cols, eta: float) -> np.ndarray:
    """Entry variances: 1 on ``rows x cols``, ``eta`` elsewhere."""
    row_hit = np.zeros(n_rows, dtype=bool)
    col_hit = np.zeros(n_cols, dtype=bool)
    row_hit[np.asarray(rows)] = True
    col_hit[np.asarray(cols)] = True
    return np.where(np.outer(row_hit, col_hit), 1.0, eta)


def sample_channels(cfg: SystemConfig, pattern: SparsityPattern, rng_seed) -> VirtualChannelPair:
    """Full ``G`` and ``H`` realizations with the dominant/nondominant variance split."""
    ensure_valid(cfg, eve=False, phi_closed=True)
    check_pattern(cfg, pattern)
    rng = make_rng(rng_seed)
    g = complex_normal(rng, (cfg.n_r, cfg.n_t),
                       variance_mask(cfg.n_r, cfg.n_t, pattern.u_r, pattern.u_t, cfg.eta))
    h = complex_normal(rng, (cfg.n_e, cfg.n_t),
                       variance_mask(cfg.n_e, cfg.n_t, pattern.e_r, pattern.e_t, cfg.eta))
    return VirtualChannelPair(g=g, h=h, pattern=pattern, eta=cfg.eta)


def slice_channels(pair: VirtualChannelPair) -> ChannelSlices:
    p = pair.pattern
    if pair.g.shape != (p.n_r, p.n_t) or pair.h.shape != (p.n_e, p.n_t):
        raise ConfigError(
            f"channel shapes {pair.g.shape}, {pair.h.shape} do not match pattern "
            f"({p.n_r}x{p.n_t}, {p.n_e}x{p.n_t})"
        )
    an_cols = p.u_t_complement
    return ChannelSlices(
        g_bar=pair.g[np.ix_(p.u_r_sel, p.u_t_sel)],
        g_hat=pair.g[np.ix_(p.u_r_sel, an_cols)],
        h_bar=pair.h[np.ix_(p.e_r_sel, p.u_t_sel)],
        h_hat=pair.h[np.ix_(p.e_r_sel, an_cols)],
    )


def sample_slices(cfg: SystemConfig, pattern: SparsityPattern, rng) -> ChannelSlices:
    """Draw only the entries :func:`slice_channels` would keep.

    Same distribution as slicing a full :func:`sample_channels` realization,
    without generating the unused rows.
    """
    rng = make_rng(rng)
    an_cols = pattern.u_t_complement
    eve_sel_var = np.where(np.isin(pattern.u_t_sel, pattern.e_t), 1.0, cfg.eta)
    eve_an_var = np.where(np.isin(an_cols, pattern.e_t), 1.0, cfg.eta)
    return ChannelSlices(
        g_bar=complex_normal(rng, (cfg.m_r, cfg.m_t), 1.0),
        g_hat=complex_normal(rng, (cfg.m_r, an_cols.size), cfg.eta),
        h_bar=complex_normal(rng, (cfg.m_e, cfg.m_t), eve_sel_var),
        h_hat=complex_normal(rng, (cfg.m_e, an_cols.size), eve_an_var),
    )


def spatial_frequencies(n: int) -> np.ndarray:
    """Uniform grid ``(j - (n - 1) / 2) / n`` for ``j = 0..n-1``."""
    return (np.arange(n) - (n - 1) / 2.0) / n


def beam_angles(n: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """Physical AOD/AOA (radians) of the grid beams; NaN outside the visible region."""
    s = spatial_frequencies(n) / spacing_ratio
    out = np.full(n, np.nan)
    visible = np.abs(s) <= 1.0
    out[visible] = np.arcsin(s[visible])
    return out


def steering_matrix(n: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """Normalized array-response matrix on the uniform spatial-frequency grid.

    Column ``j`` is ``exp(-2j*pi*k*f_j) / sqrt(n)`` for ``k = 0..n-1``. The
    matrix is unitary for every ``n``; ``spacing_ratio`` (d / lambda) only
    affects :func:`beam_angles`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if spacing_ratio <= 0:
        raise ValueError("spacing_ratio must be positive")
    k = np.arange(n)[:, None]
    return np.exp(-2j * np.pi * k * spatial_frequencies(n)[None, :]) / np.sqrt(n)


def to_physical(virtual: np.ndarray, a_rx: np.ndarray, a_tx: np.ndarray) -> np.ndarray:
    return a_rx @ virtual @ a_tx.conj().T


def to_virtual(physical: np.ndarray, a_rx: np.ndarray, a_tx: np.ndarray) -> np.ndarray:
    return a_rx.conj().T @ physical @ a_tx


def write_channel_csv(path: str | Path, matrix: np.ndarray) -> None:
    """Dump a complex matrix as ``i,j,re,im`` rows (0-based, row-major)."""
    matrix = np.asarray(matrix)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "re", "im"])
        for (i, j), value in np.ndenumerate(matrix):
            writer.writerow([i, j, repr(float(value.real)), repr(float(value.imag))])


def read_channel_csv(path: str | Path) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    n_rows = 1 + max(int(r["i"]) for r in rows)
    n_cols = 1 + max(int(r["j"]) for r in rows)
    out = np.zeros((n_rows, n_cols), dtype=complex)
    for r in rows:
        out[int(r["i"]), int(r["j"])] = complex(float(r["re"]), float(r["im"]))
    return out
