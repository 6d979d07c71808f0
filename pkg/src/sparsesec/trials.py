"""Seeded, worker-count-independent Monte Carlo trial execution.

Trial ``t`` of a run seeded with ``seed`` always draws from the generator
``SeedSequence([seed, t])``, so results depend only on ``(seed, trials)``.
Per-trial outputs are gathered in trial order and reduced with ``math.fsum``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

WORKERS_ENV = "SPARSESEC_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _run_chunk(fn, args, seed, start, stop) -> np.ndarray:
    return np.array([fn(*args, trial_rng(seed, t)) for t in range(start, stop)], dtype=float)


def run_trials(fn, args: tuple, trials: int, seed: int, workers: int | None = None) -> np.ndarray:
    """Evaluate ``fn(*args, rng)`` for every trial; returns a ``(trials, k)`` array.

    ``fn`` must be a module-level function returning a fixed-length sequence
    of floats so it can be shipped to worker processes.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    workers = default_workers() if workers is None else max(1, int(workers))
    workers = min(workers, trials)
    if workers == 1:
        out = _run_chunk(fn, args, seed, 0, trials)
    else:
        edges = np.linspace(0, trials, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_chunk, fn, args, seed, int(lo), int(hi))
                for lo, hi in zip(edges[:-1], edges[1:])
                if hi > lo
            ]
            out = np.concatenate([f.result() for f in futures], axis=0)
    return out.reshape(trials, -1)


def mean_and_stderr(values) -> tuple[float, float]:
    """Correctly rounded mean and standard error of the mean (NaN for one sample)."""
    values = [float(v) for v in values]
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, math.nan
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)
