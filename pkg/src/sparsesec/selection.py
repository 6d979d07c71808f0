"""Beam selection with instantaneous CSI versus random selection within the dominant sets.

Random selection keeps the uniformly drawn selectors of the pattern. Greedy
ranks Alice's dominant columns by the ratio of Bob's to Eve's column energy and
then adds Bob's rows one at a time, each maximizing his rate. Exhaustive
searches all column and row subsets jointly.

Every strategy picks Alice's ``m_t`` transmit columns from ``u_t`` and Bob's
``m_r`` receive rows from ``u_r``. Eve always answers with her best ``m_e``
rows from ``e_r`` for the columns Alice chose, so the comparison never credits
Alice with a careless eavesdropper.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .channel import complex_normal, sample_pattern
from .config import SystemConfig, ensure_valid
from .errors import UnsupportedRegimeError
from .rates import SingularCovarianceError, bob_rate, eve_capacity, MAX_RETRIES
from .scheme import an_power_per_beam, signal_power_per_stream
from .trials import mean_and_stderr, run_trials

STRATEGIES = ("random", "greedy", "exhaustive")
EXHAUSTIVE_CAP = 10**6
# Eve searches exhaustively below this many row subsets, greedily above.
EVE_EXHAUSTIVE_CAP = 5000


def exhaustive_count(cfg: SystemConfig) -> int:
    """Rate evaluations of a joint exhaustive search: ``C(l_t,m_t) (C(l_r,m_r) + C(l_e,m_e))``."""
    return math.comb(cfg.l_t, cfg.m_t) * (math.comb(cfg.l_r, cfg.m_r) + math.comb(cfg.l_e, cfg.m_e))


def _dominant_rows(cfg: SystemConfig, pattern, rng: np.random.Generator):
    """Bob's rows ``u_r`` and Eve's rows ``e_r`` of ``G`` and ``H`` over all transmit beams."""
    g_var = np.full(cfg.n_t, cfg.eta)
    g_var[pattern.u_t] = 1.0
    h_var = np.full(cfg.n_t, cfg.eta)
    h_var[pattern.e_t] = 1.0
    g_rows = complex_normal(rng, (cfg.l_r, cfg.n_t), g_var)
    h_rows = complex_normal(rng, (cfg.l_e, cfg.n_t), h_var)
    return g_rows, h_rows


class _Trial:
    """Rates of one channel draw as functions of the chosen local indices."""

    def __init__(self, cfg: SystemConfig, pattern, g_rows: np.ndarray, h_rows: np.ndarray):
        self.cfg = cfg
        self.c_x = signal_power_per_stream(cfg)
        self.c_an = an_power_per_beam(cfg)
        an_cols = pattern.u_t_complement
        self.g_dom = g_rows[:, pattern.u_t]
        self.g_an = g_rows[:, an_cols]
        self.h_dom = h_rows[:, pattern.u_t]
        self.h_an = h_rows[:, an_cols]

    def bob(self, cols, rows) -> float:
        rows = list(rows)
        return bob_rate(self.g_dom[np.ix_(rows, cols)], self.g_an[rows], self.c_x, self.c_an, self.cfg.noise_var)

    def eve(self, cols, rows) -> float:
        rows = list(rows)
        return eve_capacity(self.h_dom[np.ix_(rows, cols)], self.h_an[rows], self.c_x, self.c_an)

    def bob_greedy_rows(self, cols) -> list[int]:
        chosen: list[int] = []
        for _ in range(self.cfg.m_r):
            best, pick = -math.inf, -1
            for r in range(self.cfg.l_r):
                if r in chosen:
                    continue
                value = self.bob(cols, sorted(chosen + [r]))
                if value > best:
                    best, pick = value, r
            chosen.append(pick)
        return sorted(chosen)

    def eve_best(self, cols, exhaustive: bool) -> float:
        """Eve's capacity with her best row subset (forward greedy when the search is too large)."""
        cfg = self.cfg
        if exhaustive or math.comb(cfg.l_e, cfg.m_e) <= EVE_EXHAUSTIVE_CAP:
            return max(self.eve(cols, rows) for rows in itertools.combinations(range(cfg.l_e), cfg.m_e))
        chosen: list[int] = []
        best = -math.inf
        for _ in range(cfg.m_e):
            best, pick = -math.inf, -1
            for r in range(cfg.l_e):
                if r in chosen:
                    continue
                value = self.eve(cols, sorted(chosen + [r]))
                if value > best:
                    best, pick = value, r
            chosen.append(pick)
        return best


def _top(energy: np.ndarray, k: int) -> list[int]:
    # Stable sort keeps ties deterministic.
    return sorted(np.argsort(-energy, kind="stable")[:k].tolist())


def _secrecy(trial: _Trial, strategy: str, pattern) -> float:
    cfg = trial.cfg
    if strategy == "random":
        cols = np.searchsorted(pattern.u_t, pattern.u_t_sel).tolist()
        rows = np.searchsorted(pattern.u_r, pattern.u_r_sel).tolist()
        return max(0.0, trial.bob(cols, rows) - trial.eve_best(cols, False))
    if strategy == "greedy":
        # Columns Bob sees strongly relative to Eve, then Bob's rows one at a time.
        bob_energy = np.sum(np.abs(trial.g_dom) ** 2, axis=0)
        eve_energy = np.sum(np.abs(trial.h_dom) ** 2, axis=0)
        cols = _top(bob_energy / eve_energy, cfg.m_t)
        rows = trial.bob_greedy_rows(cols)
        return max(0.0, trial.bob(cols, rows) - trial.eve_best(cols, False))
    best = -math.inf
    for cols in itertools.combinations(range(cfg.l_t), cfg.m_t):
        cols = list(cols)
        r_u = max(trial.bob(cols, rows) for rows in itertools.combinations(range(cfg.l_r), cfg.m_r))
        best = max(best, r_u - trial.eve_best(cols, True))
    return max(0.0, best)


def _selection_trial(cfg: SystemConfig, strategy: str, rng: np.random.Generator):
    pattern = sample_pattern(cfg, rng)
    for _ in range(MAX_RETRIES + 1):
        g_rows, h_rows = _dominant_rows(cfg, pattern, rng)
        try:
            return (_secrecy(_Trial(cfg, pattern, g_rows, h_rows), strategy, pattern),)
        except SingularCovarianceError:
            continue
    raise SingularCovarianceError(f"Eve's AN covariance stayed singular after {MAX_RETRIES} redraws")


def selection_secrecy_rate(
    cfg: SystemConfig, trials: int, seed: int, strategy: str, workers: int | None = None
) -> tuple[float, float]:
    """Mean instantaneous secrecy rate under ``strategy`` and its standard error.

    Trials are seeded per index, so different strategies run with the same
    seed see the same patterns and channel draws.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    ensure_valid(cfg)
    if strategy == "exhaustive" and exhaustive_count(cfg) > EXHAUSTIVE_CAP:
        raise UnsupportedRegimeError(
            f"exhaustive selection needs {exhaustive_count(cfg)} evaluations per trial "
            f"(cap {EXHAUSTIVE_CAP})"
        )
    samples = run_trials(_selection_trial, (cfg, strategy), trials, seed, workers)
    return mean_and_stderr(samples[:, 0])
