"""Sweep presets reproducing the secrecy-rate, leakage, selection and sparsity figures.

``FIGURE_PARAMETERS`` lists the parameters each figure states; anything a
figure leaves open (SNR grids, curve values, unstated dimensions) is filled in
by the preset and documented next to it. Whenever ``m_r`` or ``m_e`` exceeds a
swept ``l_t``, the receive-side dominant counts are pinned to ``n_t`` so the
config stays valid; they do not enter any rate expression.
"""

from __future__ import annotations

import numpy as np

from .config import SystemConfig
from .experiments import DEFAULT_SEED, DEFAULT_TRIALS, SweepSpec

# Stated parameters per figure. Values not listed here are preset choices.
FIGURE_PARAMETERS = {
    "fig2": {"n_t": 128, "m_t": 4, "m_r": 16, "m_e": 16, "phi": 0.6, "eta": 0.1, "curves": {"l_t": (28, 48, 88)}},
    "fig3": {"n_t": 256, "l_t": 28, "m_r": 20, "m_e": 20, "phi": 0.6, "eta": 0.1, "curves": {"snr_db": (6, 7, 8)}},
    "fig4": {"n_t": 256, "l_t": 28, "m_t": 4, "m_r": 16, "phi": 0.6, "eta": 0.1, "curves": {"snr_db": (6, 7, 8)}},
    "fig5": {"n_t": 128, "l_t": 88, "l_r": 88, "l_e": 88, "m_t": 4, "m_r": 16, "m_e": 16},
    "fig6": {"m_t": 32, "m_r": 32, "m_e": 32, "l_t": 40, "phi": 0.6, "eta": 0.1},
    "fig7": {"n_t": 512, "m_t": 4, "m_r": 96, "m_e": 16, "phi": 0.9, "eta": 0.1},
    "fig8": {"n_t": 512, "m_t": 4, "m_e": 8, "phi": 0.9, "eta": 0.1, "snr_db": 30},
    "fig9": {"n_t": 512, "m_t": 4, "m_r": 192, "m_e": 16, "phi": 0.9},
    "fig10": {"n_t": 512, "m_t": 4, "m_r": 32, "m_e": 12, "snr_db": 25},
    "fig12": {"n_t": 512, "m_t": 4, "m_r": 192, "m_e": 16, "phi": 0.9, "curves": {"snr_db": (2, 5)}},
}

# Three sparsity levels, from sparse to rich, for the gap figures.
GAP_POINTS = ((0.1, 0.05), (0.3, 0.1), (0.5, 0.2))
LOW_SNR_DB = (2.0, 5.0)


def _cfg(n_t, m_t, m_r, m_e, l_t, snr_db, phi=0.6, eta=0.1, wide_receive=False) -> SystemConfig:
    cfg = SystemConfig.symmetric(n_t=n_t, m_t=m_t, m_r=m_r, m_e=m_e, l_t=l_t,
                                 power=10.0 ** (snr_db / 10.0), noise_var=1.0, phi=phi, eta=eta)
    return cfg.replace(l_r=n_t, l_e=n_t) if wide_receive else cfg


def _frange(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) for i in range(count))


def fig2(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate versus SNR for three dominant-beam counts."""
    return SweepSpec(
        base=_cfg(128, 4, 16, 16, 28, 0.0), axis="snr_db", grid=_frange(-10, 30, 5),
        methods=("monte-carlo", "theorem1"), trials=trials, seed=seed,
        curves=tuple({"l_t": l, "l_r": l, "l_e": l} for l in (28, 48, 88)),
    )


def fig3(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate versus Alice's RF-chain count at three SNRs."""
    return SweepSpec(
        base=_cfg(256, 2, 20, 20, 28, 6.0), axis="m_t", grid=tuple(range(2, 17, 2)),
        methods=("monte-carlo", "theorem1"), trials=trials, seed=seed,
        curves=tuple({"snr_db": s} for s in (6, 7, 8)),
    )


def fig4(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate versus Eve's RF-chain count at three SNRs."""
    return SweepSpec(
        base=_cfg(256, 4, 16, 4, 28, 6.0), axis="m_e", grid=(4, 8, 12, 16, 20),
        methods=("monte-carlo", "theorem1"), trials=trials, seed=seed,
        curves=tuple({"snr_db": s} for s in (6, 7, 8)),
    )


def fig5(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Leaked powers versus the signal power fraction for three nondominant gains (10 dB)."""
    return SweepSpec(
        base=_cfg(128, 4, 16, 16, 88, 10.0), axis="phi", grid=_frange(0.05, 0.95, 0.05),
        methods=("leakage-an-bob", "leakage-info-eve", "leakage-an-bob-mc", "leakage-info-eve-mc"),
        trials=trials, seed=seed, curves=tuple({"eta": e} for e in (0.05, 0.1, 0.2)),
    )


def fig6(trials: int = 200, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Random versus instantaneous-CSI beam selection versus SNR (``n_t = 128`` assumed)."""
    return SweepSpec(
        base=_cfg(128, 32, 32, 32, 40, 0.0), axis="snr_db", grid=_frange(-10, 30, 5),
        methods=("selection-random", "selection-greedy"), trials=trials, seed=seed,
    )


def fig7(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate, its low-SNR form and upper bound versus ``l_t`` at two low SNRs."""
    return SweepSpec(
        base=_cfg(512, 4, 96, 16, 165, LOW_SNR_DB[0], phi=0.9, wide_receive=True),
        axis="l_t", grid=tuple(range(20, 481, 10)),
        methods=("theorem1", "asymptotic-low", "bound-low", "monte-carlo"), trials=trials, seed=seed,
        curves=tuple({"snr_db": s} for s in LOW_SNR_DB),
    )


def fig8(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate, its high-SNR form and upper bound versus ``l_t`` (``m_r = 16`` assumed)."""
    return SweepSpec(
        base=_cfg(512, 4, 16, 8, 165, 30.0, phi=0.9, wide_receive=True),
        axis="l_t", grid=tuple(range(20, 481, 10)),
        methods=("theorem1", "asymptotic-high", "bound-high", "monte-carlo"), trials=trials, seed=seed,
    )


def fig9(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate versus low SNR at three sparsity levels (``eta`` per curve)."""
    return SweepSpec(
        base=_cfg(512, 4, 192, 16, 165, 0.0, phi=0.9, wide_receive=True),
        axis="snr_db", grid=_frange(-10, 10, 1),
        methods=("theorem1", "monte-carlo"), trials=trials, seed=seed,
        curves=tuple({"rho": r, "eta": e} for r, e in GAP_POINTS),
    )


def fig10(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Secrecy rate versus the power split at high SNR for three sparsity levels."""
    return SweepSpec(
        base=_cfg(512, 4, 32, 12, 165, 25.0, phi=0.6, wide_receive=True),
        axis="phi", grid=_frange(0.1, 0.9, 0.05),
        methods=("theorem1", "asymptotic-high", "monte-carlo"), trials=trials, seed=seed,
        curves=tuple({"rho": r, "eta": e} for r, e in GAP_POINTS),
    )


def fig11(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Both sparsity metrics versus ``rho`` for several ``eta`` (``m_r/n_t = 1/32``)."""
    return SweepSpec(
        base=_cfg(512, 4, 16, 8, 165, 30.0, phi=0.9, wide_receive=True),
        axis="rho", grid=_frange(0.05, 0.95, 0.05),
        methods=("chi-l", "chi-h"), trials=trials, seed=seed,
        curves=tuple({"eta": e} for e in (0.05, 0.1, 0.2, 0.4)),
    )


def fig12(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SweepSpec:
    """Exact secrecy rate versus ``rho`` for several ``eta`` at two low SNRs."""
    return SweepSpec(
        base=_cfg(512, 4, 192, 16, 165, LOW_SNR_DB[0], phi=0.9, wide_receive=True),
        axis="rho", grid=_frange(0.05, 0.9, 0.05),
        methods=("theorem1",), trials=trials, seed=seed,
        curves=tuple({"eta": e, "snr_db": s} for s in LOW_SNR_DB for e in (0.05, 0.1, 0.2, 0.4)),
    )


FIGURES = {
    "fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5, "fig6": fig6, "fig7": fig7,
    "fig8": fig8, "fig9": fig9, "fig10": fig10, "fig11": fig11, "fig12": fig12,
}


def figure_spec(name: str, trials: int | None = None, seed: int | None = None) -> SweepSpec:
    if name not in FIGURES:
        raise KeyError(f"unknown figure {name!r}; expected one of {', '.join(FIGURES)}")
    kwargs = {}
    if trials is not None:
        kwargs["trials"] = trials
    if seed is not None:
        kwargs["seed"] = seed
    return FIGURES[name](**kwargs)


def stated_parameters_hold(name: str) -> list[str]:
    """Mismatches between a preset and the parameters its figure states (empty when faithful)."""
    spec = figure_spec(name, trials=1)
    stated = dict(FIGURE_PARAMETERS.get(name, {}))
    curves = stated.pop("curves", {})
    problems = []
    for key, want in stated.items():
        if key == spec.axis:
            continue
        for curve in spec.curves:
            got = getattr(spec.config_at(curve, spec.grid[0]), key)
            if not np.isclose(got, want):
                problems.append(f"{key}: preset {got} != stated {want}")
    for key, want in curves.items():
        got = sorted({c.get(key) for c in spec.curves})
        if got != sorted(want):
            problems.append(f"curves {key}: preset {got} != stated {want}")
    return problems
