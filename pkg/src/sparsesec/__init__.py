"""Secure transmission over sparse mm-Wave virtual channels with artificial noise.

Monte Carlo and closed-form ergodic secrecy rates, sparsity metrics, bounds,
leakage accounting, beam selection and reproducible parameter sweeps.
"""

from .channel import (
    ChannelSlices,
    SparsityPattern,
    VirtualChannelPair,
    sample_channels,
    sample_pattern,
    slice_channels,
    steering_matrix,
)
from .config import DEFAULT_CONFIG, SystemConfig, ValidationReport, load_config, rho, snr, validate
from .errors import AsymptoticRegimeWarning, ConfigError, UnsupportedRegimeError
from .experiments import SweepResult, SweepSpec, beam_selection_compare, run_sweep
from .rates import (
    RateReport,
    SparsityMetrics,
    bounds,
    chi_derivatives,
    chi_metrics,
    eve_asymptotic,
    f_functional,
    rate_gap,
    rate_high_snr,
    rate_low_snr,
    rate_monte_carlo,
    rate_theorem1,
    wishart_moments,
)
from .scheme import LeakageReport, TransmitFrame, build_frame, leakage, receive_bob, receive_eve

slice = slice_channels  # noqa: A001 - mirrors the operation name used in the docs

__version__ = "0.1.0"
