"""Transmit chain: identity digital precoder, beam mapping, artificial-noise injection.

Confidential symbols ride Alice's selected dominant beams with per-stream power
``phi * P / m_t``; AN of total power ``(1 - phi) * P`` is spread evenly over
Bob's nondominant transmit beams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSlices, SparsityPattern, check_pattern, complex_normal, make_rng, sample_pattern, sample_slices
from .config import SystemConfig, ensure_valid
from .trials import mean_and_stderr, run_trials


def signal_power_per_stream(cfg: SystemConfig) -> float:
    return cfg.phi * cfg.power / cfg.m_t


def an_power_per_beam(cfg: SystemConfig) -> float:
    """Per-beam AN variance; zero when there are no nondominant beams."""
    n_an = cfg.n_t - cfg.l_t
    return (1.0 - cfg.phi) * cfg.power / n_an if n_an else 0.0


@dataclass(frozen=True, eq=False)
class TransmitFrame:
    """One (or a batch of) virtual-domain transmit vectors.

    With a batch, every array carries a leading frame axis.
    """

    s: np.ndarray
    x_tilde: np.ndarray
    an: np.ndarray
    x_v: np.ndarray


@dataclass(frozen=True)
class LeakageReport:
    """Expected leaked powers as fractions of the total transmit power."""

    an_to_bob: float
    info_to_eve: float


def _check_power_split(cfg: SystemConfig) -> None:
    ensure_valid(cfg, eve=False, phi_closed=True)


def build_frame(cfg: SystemConfig, pattern: SparsityPattern, rng_seed, count: int | None = None) -> TransmitFrame:
    """Draw symbols and AN and place them on the virtual transmit beams.

    Beams in ``u_t_sel`` carry the precoded symbols, beams outside ``u_t``
    carry AN, and the unselected dominant beams stay silent.
    """
    _check_power_split(cfg)
    check_pattern(cfg, pattern)
    rng = make_rng(rng_seed)
    lead = () if count is None else (int(count),)
    an_cols = pattern.u_t_complement

    s = complex_normal(rng, lead + (cfg.m_t,))
    x_tilde = np.sqrt(signal_power_per_stream(cfg)) * s
    an = complex_normal(rng, lead + (an_cols.size,), an_power_per_beam(cfg))

    x_v = np.zeros(lead + (cfg.n_t,), dtype=complex)
    x_v[..., pattern.u_t_sel] = x_tilde
    x_v[..., an_cols] = an
    return TransmitFrame(s=s, x_tilde=x_tilde, an=an, x_v=x_v)


def _check_dims(frame: TransmitFrame, bar: np.ndarray, hat: np.ndarray) -> None:
    if bar.shape[1] != frame.x_tilde.shape[-1] or hat.shape[1] != frame.an.shape[-1]:
        raise ValueError(
            f"channel slices {bar.shape}/{hat.shape} do not match frame "
            f"({frame.x_tilde.shape[-1]} streams, {frame.an.shape[-1]} AN beams)"
        )
    if bar.shape[0] != hat.shape[0]:
        raise ValueError("bar/hat slices must have the same number of rows")


def receive_bob(frame: TransmitFrame, slices: ChannelSlices, cfg: SystemConfig, rng_seed) -> np.ndarray:
    """Bob's detection vector ``g_bar x_tilde + g_hat an + noise`` on his selected beams."""
    _check_dims(frame, slices.g_bar, slices.g_hat)
    rng = make_rng(rng_seed)
    lead = frame.x_tilde.shape[:-1]
    noise = complex_normal(rng, lead + (slices.g_bar.shape[0],), cfg.noise_var)
    return frame.x_tilde @ slices.g_bar.T + frame.an @ slices.g_hat.T + noise


def receive_eve(frame: TransmitFrame, slices: ChannelSlices) -> np.ndarray:
    """Eve's noiseless observation ``h_bar x_tilde + h_hat an`` (worst case for Alice)."""
    _check_dims(frame, slices.h_bar, slices.h_hat)
    return frame.x_tilde @ slices.h_bar.T + frame.an @ slices.h_hat.T


def leakage(cfg: SystemConfig) -> LeakageReport:
    """Closed-form leakage: AN power reaching Bob, signal power reaching Eve.

    ``an_to_bob = E||g_hat an||^2 / P = (1 - phi) eta m_r``.
    ``info_to_eve = E||h_bar x_tilde||^2 / P``, where each of Alice's selected
    beams is dominant for Eve with probability ``l_t / n_t``.
    """
    _check_power_split(cfg)
    an_to_bob = (1.0 - cfg.phi) * cfg.eta * cfg.m_r if cfg.n_t > cfg.l_t else 0.0
    mixed_gain = (cfg.l_t + cfg.eta * (cfg.n_t - cfg.l_t)) / cfg.n_t
    info_to_eve = cfg.phi * cfg.m_e * mixed_gain
    return LeakageReport(an_to_bob=an_to_bob, info_to_eve=info_to_eve)


def _leakage_trial(cfg: SystemConfig, rng: np.random.Generator):
    pattern = sample_pattern(cfg, rng)
    slices = sample_slices(cfg, pattern, rng)
    frame = build_frame(cfg, pattern, rng)
    an_bob = np.sum(np.abs(slices.g_hat @ frame.an) ** 2) / cfg.power
    info_eve = np.sum(np.abs(slices.h_bar @ frame.x_tilde) ** 2) / cfg.power
    return an_bob, info_eve


def leakage_monte_carlo(cfg: SystemConfig, trials: int, rng_seed: int, workers: int | None = None):
    """Monte Carlo estimate of :func:`leakage`; returns ``(report, (se_an_bob, se_info_eve))``."""
    _check_power_split(cfg)
    samples = run_trials(_leakage_trial, (cfg,), trials, rng_seed, workers)
    an_mean, an_se = mean_and_stderr(samples[:, 0])
    info_mean, info_se = mean_and_stderr(samples[:, 1])
    return LeakageReport(an_to_bob=an_mean, info_to_eve=info_mean), (an_se, info_se)
