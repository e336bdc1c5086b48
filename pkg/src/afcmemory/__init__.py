"""Spectral efficiency and bandwidth optimisation for backward-retrieval
atomic-frequency-comb echo memories burned into a Gaussian absorption line."""

__version__ = "0.1.0"

from .medium import CombDesign, coarse_depth, envelope, fine_depth, period_average  # noqa: E402
from .response import (  # noqa: E402
    SpectralResponse,
    SusceptibilityProfile,
    analytic_backward,
    analytic_forward,
    efficiency,
    phase_profile,
    spectral_response,
    srf_gamma,
)
from .bandwidth import BandwidthResult, delta_qm, optimize_delta0  # noqa: E402
from .estimators import AFCSpectralResponse, Delta0Optimizer  # noqa: E402

__all__ = [
    "__version__",
    "CombDesign",
    "envelope",
    "coarse_depth",
    "fine_depth",
    "period_average",
    "SusceptibilityProfile",
    "SpectralResponse",
    "phase_profile",
    "srf_gamma",
    "efficiency",
    "spectral_response",
    "analytic_backward",
    "analytic_forward",
    "BandwidthResult",
    "delta_qm",
    "optimize_delta0",
    "AFCSpectralResponse",
    "Delta0Optimizer",
]
