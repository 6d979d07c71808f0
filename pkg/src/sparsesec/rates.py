"""Ergodic rates of Bob and Eve, sparsity metrics, secrecy-rate bounds and gaps.

Three routes to the same quantities:

* :func:`rate_monte_carlo` averages instantaneous log-det rates over fresh
  patterns and channels (the reference oracle);
* :func:`rate_theorem1` is the large-array closed form, built on the
  Marchenko-Pastur trace of Bob's AN-plus-noise inverse and a two-moment
  Wishart surrogate for Eve's AN covariance;
* :func:`rate_low_snr` / :func:`rate_high_snr` are its SNR asymptotes.

All rates are in bits/s/Hz.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import lambertw

from .channel import sample_pattern, sample_slices
from .config import SystemConfig, ensure_valid
from .errors import AsymptoticRegimeWarning, UnsupportedRegimeError
from .scheme import an_power_per_beam, signal_power_per_stream
from .trials import mean_and_stderr, run_trials

METHODS = ("monte-carlo", "theorem1", "asymptotic-low", "asymptotic-high", "bound-low", "bound-high")

COND_LIMIT = 1e12
MAX_RETRIES = 100

# Reported secrecy-rate gaps whose (rho, eta) inputs are not recoverable;
# kept for reference only.
REFERENCE_GAPS_LOW = (1.6103, 0.5881)
REFERENCE_GAPS_HIGH = (1.7513, 1.3684)


class SingularCovarianceError(UnsupportedRegimeError):
    """An interference covariance is singular or too ill-conditioned to invert."""


@dataclass(frozen=True)
class RateReport:
    r_u: float
    c_e: float
    r_s: float
    method: str
    trials: int = 0
    std_err: float = math.nan
    r_u_std_err: float = math.nan
    c_e_std_err: float = math.nan
    retries: int = 0


def _report(r_u: float, c_e: float, method: str, **extra) -> RateReport:
    return RateReport(r_u=r_u, c_e=c_e, r_s=max(0.0, r_u - c_e), method=method, **extra)


@dataclass(frozen=True)
class SparsityMetrics:
    chi_l: float
    chi_h: float
    rho_star: float
    l_t_star: int


# --------------------------------------------------------------------------
# Instantaneous rates


def _log2det_pd(mat: np.ndarray) -> float:
    herm = 0.5 * (mat + mat.conj().T)
    chol = np.linalg.cholesky(herm)
    return 2.0 * float(np.sum(np.log(np.real(np.diag(chol))))) / math.log(2.0)


def bob_rate(g_bar, g_hat, c_x: float, c_an: float, noise_var: float) -> float:
    """``log2 |I + c_x g_bar g_bar^H (c_an g_hat g_hat^H + noise_var I)^-1|``."""
    m_r = g_bar.shape[0]
    interference = c_an * (g_hat @ g_hat.conj().T) + noise_var * np.eye(m_r)
    signal = c_x * (g_bar @ g_bar.conj().T)
    try:
        return _log2det_pd(interference + signal) - _log2det_pd(interference)
    except np.linalg.LinAlgError:
        raise SingularCovarianceError("Bob's interference-plus-noise covariance is singular") from None


def eve_capacity(h_bar, h_hat, c_x: float, c_an: float, cond_limit: float = COND_LIMIT) -> float:
    """``log2 |I + c_x h_bar h_bar^H (c_an h_hat h_hat^H)^-1|`` for noiseless Eve.

    Raises :class:`SingularCovarianceError` when the AN covariance is singular
    or its condition number exceeds ``cond_limit``.
    """
    m_e = h_bar.shape[0]
    if c_an <= 0.0 or h_hat.shape[1] < m_e:
        raise SingularCovarianceError("Eve's AN covariance is singular (no AN reaches her)")
    interference = c_an * (h_hat @ h_hat.conj().T)
    if not np.linalg.cond(interference) <= cond_limit:
        raise SingularCovarianceError("Eve's AN covariance is ill-conditioned")
    signal = c_x * (h_bar @ h_bar.conj().T)
    return _log2det_pd(interference + signal) - _log2det_pd(interference)


def _mc_trial(cfg: SystemConfig, rng: np.random.Generator):
    c_x = signal_power_per_stream(cfg)
    c_an = an_power_per_beam(cfg)
    pattern = sample_pattern(cfg, rng)
    for retries in range(MAX_RETRIES + 1):
        slices = sample_slices(cfg, pattern, rng)
        try:
            c_e = eve_capacity(slices.h_bar, slices.h_hat, c_x, c_an)
        except SingularCovarianceError:
            continue
        r_u = bob_rate(slices.g_bar, slices.g_hat, c_x, c_an, cfg.noise_var)
        return r_u, c_e, retries
    raise SingularCovarianceError(f"Eve's AN covariance stayed singular after {MAX_RETRIES} redraws")


def rate_monte_carlo(cfg: SystemConfig, trials: int, rng_seed: int, workers: int | None = None) -> RateReport:
    """Ergodic rates by averaging instantaneous log-det rates.

    Each trial draws a fresh sparsity pattern and channel. ``std_err`` is the
    standard error of the per-trial difference ``R_U - C_E``.
    """
    ensure_valid(cfg)
    samples = run_trials(_mc_trial, (cfg,), trials, rng_seed, workers)
    r_u, r_u_se = mean_and_stderr(samples[:, 0])
    c_e, c_e_se = mean_and_stderr(samples[:, 1])
    _, diff_se = mean_and_stderr(samples[:, 0] - samples[:, 1])
    return _report(
        r_u, c_e, "monte-carlo", trials=trials, std_err=diff_se,
        r_u_std_err=r_u_se, c_e_std_err=c_e_se, retries=int(samples[:, 2].sum()),
    )


# --------------------------------------------------------------------------
# Closed form


def f_functional(x: float, y: float) -> float:
    """``(sqrt(x (1 + sqrt y)^2 + 1) - sqrt(x (1 - sqrt y)^2 + 1))^2``.

    Evaluated through the difference-of-squares identity to avoid
    cancellation when ``x`` is small.
    """
    if x < 0 or y < 0:
        raise ValueError("f_functional requires non-negative arguments")
    sy = math.sqrt(y)
    total = math.sqrt(x * (1 + sy) ** 2 + 1) + math.sqrt(x * (1 - sy) ** 2 + 1)
    return (4.0 * x * sy / total) ** 2


def interference_factor(alpha: float, beta: float) -> float:
    """``1 - F(alpha, beta) / (4 alpha beta)``, written without cancellation.

    This is the large-array limit of Bob's normalized trace
    ``(1/m_r) tr[(c_an/noise_var g_hat g_hat^H + I)^-1]``; it equals 1 at
    ``alpha = 0``.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be non-negative")
    sb = math.sqrt(beta)
    total = math.sqrt(alpha * (1 + sb) ** 2 + 1) + math.sqrt(alpha * (1 - sb) ** 2 + 1)
    return 1.0 - 4.0 * alpha / total**2


def alpha_beta(cfg: SystemConfig) -> tuple[float, float]:
    alpha = (1.0 - cfg.phi) * cfg.eta * cfg.power / cfg.noise_var
    beta = cfg.m_r / (cfg.n_t - cfg.l_t)
    return alpha, beta


def wishart_moments(cfg: SystemConfig) -> tuple[float, float]:
    """Degrees of freedom ``a`` and scale ``b`` of the single Wishart matching
    the first two moments of Eve's mixed-variance AN Gram matrix."""
    ensure_valid(cfg, eve=False)
    n_an = cfg.n_t - cfg.l_t
    first = cfg.l_t + cfg.eta * n_an
    second = cfg.l_t + cfg.eta**2 * n_an
    a = first**2 * n_an / (cfg.n_t * second)
    b = second / first
    if not a > cfg.m_e:
        raise UnsupportedRegimeError(
            f"Wishart degrees of freedom a = {a:.6g} must exceed m_e = {cfg.m_e}"
        )
    return a, b


def _eve_sinr_scale(cfg: SystemConfig) -> float:
    a, b = wishart_moments(cfg)
    if cfg.phi >= 1.0 or 1.0 - cfg.phi < 1e-15:
        raise UnsupportedRegimeError("Eve's capacity diverges as phi -> 1 (no artificial noise)")
    scale = cfg.phi * (cfg.n_t - cfg.l_t) * cfg.m_e / ((1.0 - cfg.phi) * cfg.m_t * (a - cfg.m_e) * b)
    if not math.isfinite(scale):
        raise UnsupportedRegimeError("Eve's capacity diverges for these parameters")
    return scale


def bob_rate_closed_form(cfg: SystemConfig) -> float:
    alpha, beta = alpha_beta(cfg)
    gain = cfg.m_r * cfg.phi * cfg.power / (cfg.m_t * cfg.noise_var)
    return cfg.m_t * math.log2(1.0 + gain * interference_factor(alpha, beta))


def eve_capacity_closed_form(cfg: SystemConfig) -> float:
    k = _eve_sinr_scale(cfg)
    dominant = cfg.l_t * cfg.m_t / cfg.n_t
    nondominant = (cfg.n_t - cfg.l_t) * cfg.m_t / cfg.n_t
    return dominant * math.log2(1.0 + k) + nondominant * math.log2(1.0 + k * cfg.eta)


def rate_theorem1(cfg: SystemConfig) -> RateReport:
    ensure_valid(cfg)
    return _report(bob_rate_closed_form(cfg), eve_capacity_closed_form(cfg), "theorem1")


# --------------------------------------------------------------------------
# Asymptotes


def bob_rate_low_snr(cfg: SystemConfig) -> float:
    return cfg.m_t * math.log2(1.0 + cfg.m_r * cfg.phi * cfg.power / (cfg.m_t * cfg.noise_var))


def _high_snr_denominator(rho: float, mr_over_nt: float) -> float:
    if rho >= 1.0:
        raise UnsupportedRegimeError("rho must be < 1 for the high-SNR expressions")
    denom = 1.0 - mr_over_nt / (1.0 - rho)
    if not denom > 0.0:
        raise UnsupportedRegimeError(
            f"1 - m_r/(n_t (1 - rho)) = {denom:.6g} <= 0; need rho < 1 - m_r/n_t"
        )
    return denom


def bob_rate_high_snr(cfg: SystemConfig) -> float:
    denom = _high_snr_denominator(cfg.rho, cfg.m_r / cfg.n_t)
    sinr = cfg.m_r * cfg.phi / (cfg.m_t * (1.0 - cfg.phi) * cfg.eta * denom)
    return cfg.m_t * math.log2(1.0 + sinr)


def eve_asymptotic_terms(cfg: SystemConfig) -> tuple[float, float]:
    """Eve's large-array capacity split into the dominant-beam term and the
    nondominant-beam term. Unlike the exact form it needs no AN beams, so
    ``l_t = n_t`` is allowed."""
    ensure_valid(cfg, eve=False)
    rho = cfg.rho
    mixed = rho + cfg.eta * (1.0 - rho)
    k = cfg.phi * cfg.m_e / ((1.0 - cfg.phi) * cfg.m_t * mixed)
    t1 = cfg.m_t * rho * math.log2(1.0 + k)
    t2 = cfg.m_t * (1.0 - rho) * math.log2(1.0 + k * cfg.eta)
    return t1, t2


def eve_asymptotic(cfg: SystemConfig) -> float:
    t1, t2 = eve_asymptotic_terms(cfg)
    return t1 + t2


def rate_low_snr(cfg: SystemConfig) -> RateReport:
    ensure_valid(cfg)
    if cfg.snr > 1.0:
        warnings.warn(f"low-SNR rate used at {cfg.snr_db:.1f} dB (> 0 dB)", AsymptoticRegimeWarning, stacklevel=2)
    return _report(bob_rate_low_snr(cfg), eve_asymptotic(cfg), "asymptotic-low")


def rate_high_snr(cfg: SystemConfig) -> RateReport:
    ensure_valid(cfg)
    if cfg.snr < 100.0:
        warnings.warn(f"high-SNR rate used at {cfg.snr_db:.1f} dB (< 20 dB)", AsymptoticRegimeWarning, stacklevel=2)
    return _report(bob_rate_high_snr(cfg), eve_asymptotic(cfg), "asymptotic-high")


# --------------------------------------------------------------------------
# Sparsity metrics


def _check_eta(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise UnsupportedRegimeError(f"eta must lie in (0, 1), got {eta}")


def _check_rho(rho: float) -> None:
    if not 0.0 < rho <= 1.0:
        raise UnsupportedRegimeError(f"rho must lie in (0, 1], got {rho}")


def chi_l(rho: float, eta: float) -> float:
    """Low-SNR sparsity metric ``eta^(rho-1) (eta + (1-eta) rho)``."""
    _check_rho(rho)
    _check_eta(eta)
    return eta ** (rho - 1.0) * (eta + (1.0 - eta) * rho)


def chi_h(rho: float, eta: float, mr_over_nt: float) -> float:
    """High-SNR sparsity metric; needs ``rho < 1 - m_r/n_t``."""
    _check_rho(rho)
    _check_eta(eta)
    denom = _high_snr_denominator(rho, mr_over_nt)
    return eta ** (rho - 2.0) * (eta + (1.0 - eta) * rho) / denom


def rho_star(eta: float) -> float:
    """Angle-domain sparsity maximizing both metrics: ``-1/ln(eta) - eta/(1-eta)``."""
    _check_eta(eta)
    return -1.0 / math.log(eta) - eta / (1.0 - eta)


def optimal_l_t(cfg: SystemConfig, eta: float | None = None) -> int:
    """Nearest integer to ``n_t rho*`` (ties up), clamped to ``[m_t, n_t - m_r - 1]``."""
    eta = cfg.eta if eta is None else eta
    raw = int(math.floor(cfg.n_t * rho_star(eta) + 0.5))
    return max(cfg.m_t, min(raw, cfg.n_t - cfg.m_r - 1))


def chi_metrics(rho: float, eta: float, cfg: SystemConfig) -> SparsityMetrics:
    return SparsityMetrics(
        chi_l=chi_l(rho, eta),
        chi_h=chi_h(rho, eta, cfg.m_r / cfg.n_t),
        rho_star=rho_star(eta),
        l_t_star=optimal_l_t(cfg, eta),
    )


def bound_low(cfg: SystemConfig) -> float:
    ensure_valid(cfg, eve=False)
    bracket = (
        math.log2(1.0 + cfg.m_r * cfg.phi * cfg.power / (cfg.m_t * cfg.noise_var))
        - math.log2(cfg.phi * cfg.m_e / ((1.0 - cfg.phi) * cfg.m_t))
        + math.log2(chi_l(cfg.rho, cfg.eta))
    )
    return cfg.m_t * max(0.0, bracket)


def bound_high(cfg: SystemConfig) -> float:
    ensure_valid(cfg, eve=False)
    bracket = math.log2(cfg.m_r / cfg.m_e) + math.log2(chi_h(cfg.rho, cfg.eta, cfg.m_r / cfg.n_t))
    return cfg.m_t * max(0.0, bracket)


def bounds(cfg: SystemConfig) -> tuple[float, float]:
    """Low- and high-SNR upper bounds on the secrecy rate (powerful-Eve regime)."""
    return bound_low(cfg), bound_high(cfg)


def rate_gap(p1: tuple[float, float], p2: tuple[float, float], cfg: SystemConfig, regime: str) -> float:
    """Secrecy-rate gap ``m_t log2(chi(p1) / chi(p2))`` between two (rho, eta) points."""
    if regime == "low":
        ratio = chi_l(*p1) / chi_l(*p2)
    elif regime == "high":
        c = cfg.m_r / cfg.n_t
        ratio = chi_h(*p1, c) / chi_h(*p2, c)
    else:
        raise ValueError(f"regime must be 'low' or 'high', got {regime!r}")
    return cfg.m_t * math.log2(ratio)


class ChiDerivatives(NamedTuple):
    d_chi_l_d_rho: float
    d_chi_l_d_eta: float
    d_chi_h_d_eta: float
    d_rho_star_d_eta: float


def _check_interior(rho: float, eta: float) -> None:
    if not (0.0 < rho < 1.0 and 0.0 < eta < 1.0):
        raise UnsupportedRegimeError("derivatives need rho and eta strictly inside (0, 1)")


def chi_derivatives(rho: float, eta: float, mr_over_nt: float = 0.0) -> ChiDerivatives:
    """Closed-form partial derivatives of the sparsity metrics and of ``rho*``."""
    _check_interior(rho, eta)
    denom = _high_snr_denominator(rho, mr_over_nt)
    mixed = eta + (1.0 - eta) * rho
    log_eta = math.log(eta)
    return ChiDerivatives(
        d_chi_l_d_rho=eta ** (rho - 1.0) * (1.0 - eta + log_eta * mixed),
        d_chi_l_d_eta=-(1.0 - rho) * rho * (1.0 - eta) * eta ** (rho - 2.0),
        d_chi_h_d_eta=(rho * (rho - 2.0) - eta * (rho - 1.0) ** 2) * eta ** (rho - 3.0) / denom,
        d_rho_star_d_eta=1.0 / (eta * log_eta**2) - 1.0 / (1.0 - eta) ** 2,
    )


def d2_chi_l_d_rho2(rho: float, eta: float) -> float:
    _check_eta(eta)
    log_eta = math.log(eta)
    return eta ** (rho - 1.0) * log_eta * (2.0 - 2.0 * eta + log_eta * (eta + (1.0 - eta) * rho))


def d_chi_h_d_rho(rho: float, eta: float, mr_over_nt: float) -> float:
    _check_interior(rho, eta)
    c = mr_over_nt
    gap = 1.0 - rho - c
    _high_snr_denominator(rho, c)
    mixed = eta + (1.0 - eta) * rho
    bracket = (
        math.log(eta) * mixed * (1.0 - rho) * gap
        + (1.0 - eta) * (1.0 - rho) ** 2
        + c * (2.0 * rho + 2.0 * eta - 2.0 * rho * eta - 1.0)
    )
    return eta ** (rho - 2.0) * bracket / gap**2


def concavity_threshold() -> float:
    """The ``eta`` at which ``d2 chi_L / d rho2`` at ``rho = 1`` changes sign,
    i.e. the root of ``2 - 2 eta + ln eta`` below 1."""
    return float(-lambertw(-2.0 * math.exp(-2.0), 0).real / 2.0)


# --------------------------------------------------------------------------
# Empirical counterparts of the large-array limits


def normalized_trace_inverse(g_hat: np.ndarray, cfg: SystemConfig) -> float:
    """``(1/m_r) tr[((1-phi) P / ((n_t - l_t) sigma^2) g_hat g_hat^H + I)^-1]``."""
    m_r = g_hat.shape[0]
    scale = an_power_per_beam(cfg) / cfg.noise_var
    mat = scale * (g_hat @ g_hat.conj().T) + np.eye(m_r)
    return float(np.trace(np.linalg.inv(mat)).real) / m_r


def mean_inverse_diagonal(h_hat: np.ndarray) -> float:
    """Mean diagonal entry of ``(h_hat h_hat^H)^-1``."""
    gram = h_hat @ h_hat.conj().T
    return float(np.mean(np.real(np.diag(np.linalg.inv(gram)))))
